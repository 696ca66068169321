#include "mecsim/metrics_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace mecsim::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

double ue_mean(const engine::MetricsRecord& r, double engine::UeMetrics::* field) {
  double sum = 0.0;
  for (const auto& u : r.ue) sum += u.*field;
  return r.ue.empty() ? 0.0 : sum / static_cast<double>(r.ue.size());
}

double sustainable_rate_bps(double cycles_per_bit) {
  // CPU budget equivalent of Table II: cbrt(P_max/kappa) = 1e9 cycle/s.
  return 1e9 / cycles_per_bit;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* const kMetricsHeader =
    "policy,seed,num_ues,num_servers,lambda_bps,cycles_per_bit,tradeoff_v,horizon,"
    "ue,zeta,delay_s,delay_local_s,delay_offload_s,q99_local_bits,q99_offload_bits,"
    "exc_mean_local,exc_std_local,exc_mean_offload,exc_std_offload,"
    "avg_power_comp_w,avg_power_tx_w,viol_freq_local,viol_freq_offload,"
    "viol_freq_server_max,snr_db,final_server";

void write_metrics_csv(const std::string& path,
                       std::span<const engine::MetricsRecord> records) {
  auto f = open_out(path);
  f << kMetricsHeader << "\n";
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.ue.size(); ++i) {
      const auto& u = r.ue[i];
      f << r.policy << ',' << r.seed << ',' << r.num_ues << ',' << r.num_servers << ','
        << format_double(r.lambda_bps) << ',' << format_double(r.cycles_per_bit) << ','
        << format_double(r.tradeoff_v) << ',' << r.horizon << ',' << i << ','
        << format_double(u.zeta) << ',' << format_double(u.delay_s) << ','
        << format_double(u.delay_local_s) << ',' << format_double(u.delay_offload_s)
        << ',' << format_double(u.q99_local_bits) << ','
        << format_double(u.q99_offload_bits) << ',' << format_double(u.exc_mean_local)
        << ',' << format_double(u.exc_std_local) << ','
        << format_double(u.exc_mean_offload) << ',' << format_double(u.exc_std_offload)
        << ',' << format_double(u.avg_power_comp_w) << ','
        << format_double(u.avg_power_tx_w) << ',' << format_double(u.viol_freq_local)
        << ',' << format_double(u.viol_freq_offload) << ','
        << format_double(u.viol_freq_server_max) << ',' << format_double(u.snr_db)
        << ',' << u.final_server << "\n";
    }
  }
}

void write_summary_json(const std::string& path,
                        std::span<const engine::MetricsRecord> records) {
  nlohmann::json out;
  out["schema_version"] = 1;
  auto& arr = out["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["policy"] = r.policy;
    j["seed"] = r.seed;
    j["num_ues"] = r.num_ues;
    j["num_servers"] = r.num_servers;
    j["lambda_bps"] = r.lambda_bps;
    j["cycles_per_bit"] = r.cycles_per_bit;
    j["tradeoff_v"] = r.tradeoff_v;
    j["horizon"] = r.horizon;
    j["zeta_pooled"] = r.zeta_pooled;
    j["avg_power_total_w"] = r.avg_power_total_w;
    j["matching_frames"] = r.matching_frames;
    j["matching_converged"] = r.matching_converged;
    j["viol_freq_local_pooled"] = r.viol_freq_local_pooled;
    j["viol_freq_offload_pooled"] = r.viol_freq_offload_pooled;
    j["viol_freq_server_pooled"] = r.viol_freq_server_pooled;
    double delay_mean = 0.0;
    for (const auto& u : r.ue) delay_mean += u.delay_s;
    j["delay_mean_s"] = r.ue.empty() ? 0.0 : delay_mean / static_cast<double>(r.ue.size());
    auto& snaps = j["vq_max_by_slot"] = nlohmann::json::array();
    for (const auto& s : r.vq_snapshots) {
      double vmax = 0.0;
      for (double v : s.values) vmax = std::max(vmax, v);
      snaps.push_back({{"slot", s.slot}, {"max", vmax}});
    }
    arr.push_back(std::move(j));
  }
  auto f = open_out(path);
  f << out.dump(2) << "\n";
}

void write_plot_tables(const std::string& dir,
                       std::span<const engine::MetricsRecord> records) {
  {
    auto f = open_out(dir + "/table_split_ratio.csv");
    f << "lambda_bps,cycles_per_bit,policy,num_ues,seed,tradeoff_v,zeta_pooled,"
         "lambda_sus_bps\n";
    for (const auto& r : records)
      f << format_double(r.lambda_bps) << ',' << format_double(r.cycles_per_bit) << ','
        << r.policy << ',' << r.num_ues << ',' << r.seed << ','
        << format_double(r.tradeoff_v) << ',' << format_double(r.zeta_pooled) << ','
        << format_double(sustainable_rate_bps(r.cycles_per_bit)) << "\n";
  }
  {
    auto f = open_out(dir + "/table_power_v.csv");
    f << "tradeoff_v,policy,lambda_bps,cycles_per_bit,num_ues,seed,"
         "avg_power_total_w,avg_power_comp_w,avg_power_tx_w\n";
    std::vector<const engine::MetricsRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](auto* a, auto* b) { return a->tradeoff_v < b->tradeoff_v; });
    for (const auto* r : sorted)
      f << format_double(r->tradeoff_v) << ',' << r->policy << ','
        << format_double(r->lambda_bps) << ',' << format_double(r->cycles_per_bit) << ','
        << r->num_ues << ',' << r->seed << ',' << format_double(r->avg_power_total_w)
        << ',' << format_double(ue_mean(*r, &engine::UeMetrics::avg_power_comp_w)) << ','
        << format_double(ue_mean(*r, &engine::UeMetrics::avg_power_tx_w)) << "\n";
  }
  {
    auto f = open_out(dir + "/table_delay.csv");
    f << "lambda_bps,cycles_per_bit,policy,num_ues,seed,tradeoff_v,delay_mean_s,"
         "q99_local_mean_bits,q99_offload_mean_bits,exc_mean_local,exc_std_local,"
         "exc_mean_offload,exc_std_offload\n";
    for (const auto& r : records)
      f << format_double(r.lambda_bps) << ',' << format_double(r.cycles_per_bit) << ','
        << r.policy << ',' << r.num_ues << ',' << r.seed << ','
        << format_double(r.tradeoff_v) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::delay_s)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::q99_local_bits)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::q99_offload_bits)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::exc_mean_local)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::exc_std_local)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::exc_mean_offload)) << ','
        << format_double(ue_mean(r, &engine::UeMetrics::exc_std_offload)) << "\n";
  }
  {
    auto f = open_out(dir + "/table_snr_cdf.csv");
    f << "policy,num_ues,seed,snr_db,cdf\n";
    for (const auto& r : records) {
      std::vector<double> snr;
      for (const auto& u : r.ue)
        if (!std::isnan(u.snr_db)) snr.push_back(u.snr_db);
      std::sort(snr.begin(), snr.end());
      for (std::size_t k = 0; k < snr.size(); ++k)
        f << r.policy << ',' << r.num_ues << ',' << r.seed << ','
          << format_double(snr[k]) << ','
          << format_double(static_cast<double>(k + 1) / static_cast<double>(snr.size()))
          << "\n";
    }
  }
}

void write_trace(const std::string& path, std::span<const double> samples) {
  auto f = open_out(path);
  for (double s : samples) f << format_double(s) << "\n";
}

std::vector<double> read_trace(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<double> out;
  double v;
  while (f >> v) out.push_back(v);
  return out;
}

}  // namespace mecsim::io
