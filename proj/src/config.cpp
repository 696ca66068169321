#include "mecsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mecsim/common.hpp"

namespace mecsim {

double NetworkConfig::noise_w() const {
  return dbm_to_watt(noise_psd_dbm_hz) * bandwidth_hz;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: value of '" + key + "' is not a number: '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x))
    throw ConfigError("config: value of '" + key + "' must be an integer: '" + v + "'");
  return static_cast<std::int64_t>(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ','))
    if (!item.empty()) out.push_back(parse_double(key, item));
  return out;
}

// "x1 y1; x2 y2; ..."
std::vector<Point> parse_points(const std::string& key, const std::string& v) {
  std::vector<Point> pts;
  for (const auto& pair : split(v, ';')) {
    if (pair.empty()) continue;
    std::stringstream ss(pair);
    Point p;
    if (!(ss >> p.x >> p.y))
      throw ConfigError("config: value of '" + key + "' is not an 'x y' pair: '" + pair + "'");
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

SimConfig parse_config_text(const std::string& text, const std::string& origin) {
  SimConfig cfg;
  cfg.ues.resize(1);
  cfg.servers.resize(1);
  UeProfile& ue = cfg.ues[0];
  ServerProfile& srv = cfg.servers[0];
  NetworkConfig& net = cfg.net;
  std::vector<int> core_counts;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"num_ues", [&](auto& k, auto& v) { net.num_ues = static_cast<int>(parse_int(k, v)); }},
      {"num_servers", [&](auto& k, auto& v) { net.num_servers = static_cast<int>(parse_int(k, v)); }},
      {"area_side_m", [&](auto& k, auto& v) { net.area_side_m = parse_double(k, v); }},
      {"server_positions", [&](auto& k, auto& v) { net.server_positions = parse_points(k, v); }},
      {"ue_positions", [&](auto& k, auto& v) { net.ue_positions = parse_points(k, v); }},
      {"tau_s", [&](auto& k, auto& v) { net.slot_s = parse_double(k, v); }},
      {"frame_slots", [&](auto& k, auto& v) { net.frame_slots = static_cast<int>(parse_int(k, v)); }},
      {"bandwidth_hz", [&](auto& k, auto& v) { net.bandwidth_hz = parse_double(k, v); }},
      {"noise_psd_dbm_hz", [&](auto& k, auto& v) { net.noise_psd_dbm_hz = parse_double(k, v); }},
      {"tradeoff_v", [&](auto& k, auto& v) { net.tradeoff_v = parse_double(k, v); }},
      {"carrier_ghz", [&](auto& k, auto& v) { net.carrier_ghz = parse_double(k, v); }},
      {"horizon_slots", [&](auto& k, auto& v) { net.horizon_slots = parse_int(k, v); }},
      {"rng_seed", [&](auto& k, auto& v) { net.rng_seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"mobility",
       [&](auto& k, auto& v) {
         if (v == "static") net.mobility = Mobility::kStatic;
         else if (v == "refresh_per_frame") net.mobility = Mobility::kRefreshPerFrame;
         else throw ConfigError("config: '" + k + "' must be static|refresh_per_frame");
       }},
      {"p_max_dbm", [&](auto& k, auto& v) { ue.p_max_w = dbm_to_watt(parse_double(k, v)); }},
      {"p_max_w", [&](auto& k, auto& v) { ue.p_max_w = parse_double(k, v); }},
      {"cycles_per_bit", [&](auto& k, auto& v) { ue.cycles_per_bit = parse_double(k, v); }},
      {"arrival_rate_bps", [&](auto& k, auto& v) { ue.arrival_rate_bps = parse_double(k, v); }},
      {"kappa", [&](auto& k, auto& v) { ue.kappa = parse_double(k, v); }},
      {"unit_task_bytes", [&](auto& k, auto& v) { ue.unit_task_bits = 8.0 * parse_double(k, v); }},
      {"unit_task_bits", [&](auto& k, auto& v) { ue.unit_task_bits = parse_double(k, v); }},
      {"d_local_multiplier", [&](auto& k, auto& v) { ue.d_local_multiplier = parse_double(k, v); }},
      {"d_offload_multiplier", [&](auto& k, auto& v) { ue.d_offload_multiplier = parse_double(k, v); }},
      {"eps_local", [&](auto& k, auto& v) { ue.eps_local = parse_double(k, v); }},
      {"eps_offload", [&](auto& k, auto& v) { ue.eps_offload = parse_double(k, v); }},
      {"sigma_local_th_bits", [&](auto& k, auto& v) { ue.sigma_local_th = parse_double(k, v); }},
      {"xi_local_th", [&](auto& k, auto& v) { ue.xi_local_th = parse_double(k, v); }},
      {"sigma_offload_th_bits", [&](auto& k, auto& v) { ue.sigma_offload_th = parse_double(k, v); }},
      {"xi_offload_th", [&](auto& k, auto& v) { ue.xi_offload_th = parse_double(k, v); }},
      {"core_counts",
       [&](auto& k, auto& v) {
         for (double c : parse_list(k, v)) core_counts.push_back(static_cast<int>(c));
       }},
      {"core_speed_hz", [&](auto& k, auto& v) { srv.core_speed_hz = parse_double(k, v); }},
      {"d_server_s", [&](auto& k, auto& v) { srv.d_server_s = parse_double(k, v); }},
      {"eps_server", [&](auto& k, auto& v) { srv.eps_server = parse_double(k, v); }},
      {"sigma_server_th_bits", [&](auto& k, auto& v) { srv.sigma_server_th = parse_double(k, v); }},
      {"xi_server_th", [&](auto& k, auto& v) { srv.xi_server_th = parse_double(k, v); }},
      {"sweep_lambda_bps", [&](auto& k, auto& v) { cfg.sweep_lambda_bps = parse_list(k, v); }},
      {"sweep_cycles_per_bit", [&](auto& k, auto& v) { cfg.sweep_cycles_per_bit = parse_list(k, v); }},
      {"sweep_tradeoff_v", [&](auto& k, auto& v) { cfg.sweep_tradeoff_v = parse_list(k, v); }},
      {"sweep_num_ues",
       [&](auto& k, auto& v) {
         for (double u : parse_list(k, v)) cfg.sweep_num_ues.push_back(static_cast<int>(u));
       }},
      {"sweep_policies", [&](auto&, auto& v) { cfg.sweep_policies = split(v, ','); }},
      {"sweep_seeds",
       [&](auto& k, auto& v) {
         for (double s : parse_list(k, v))
           cfg.sweep_seeds.push_back(static_cast<std::uint64_t>(s));
       }},
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(key, value);
  }

  // Expand the shared profiles to one entry per entity.
  cfg.ues.assign(static_cast<std::size_t>(std::max(net.num_ues, 0)), ue);
  ServerProfile base_srv = srv;
  cfg.servers.assign(static_cast<std::size_t>(std::max(net.num_servers, 0)), base_srv);
  if (!core_counts.empty()) {
    if (core_counts.size() != cfg.servers.size())
      throw ConfigError("config: 'core_counts' has " + std::to_string(core_counts.size()) +
                        " entries but num_servers = " + std::to_string(net.num_servers));
    for (std::size_t j = 0; j < cfg.servers.size(); ++j)
      cfg.servers[j].core_count = core_counts[j];
  }
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

namespace {

void check(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ConfigError("config: field '" + field + "' violates: " + rule);
}

}  // namespace

void validate(const SimConfig& cfg) {
  const NetworkConfig& n = cfg.net;
  check(n.num_ues >= 1, "num_ues", ">= 1");
  check(n.num_servers >= 1, "num_servers", ">= 1");
  check(n.slot_s > 0.0, "tau_s", "> 0");
  check(n.frame_slots >= 1, "frame_slots", ">= 1 (T_0)");
  check(n.bandwidth_hz > 0.0, "bandwidth_hz", "> 0");
  check(n.tradeoff_v >= 0.0, "tradeoff_v", ">= 0");
  check(n.area_side_m > 0.0, "area_side_m", "> 0");
  check(n.horizon_slots >= 1, "horizon_slots", ">= 1");
  check(cfg.ues.size() == static_cast<std::size_t>(n.num_ues), "ue_profiles",
        "length matches num_ues");
  check(cfg.servers.size() == static_cast<std::size_t>(n.num_servers), "server_profiles",
        "length matches num_servers");
  if (!n.server_positions.empty())
    check(n.server_positions.size() == static_cast<std::size_t>(n.num_servers),
          "server_positions", "length matches num_servers");
  if (!n.ue_positions.empty())
    check(n.ue_positions.size() == static_cast<std::size_t>(n.num_ues), "ue_positions",
          "length matches num_ues");
  for (const auto& p : n.server_positions)
    check(p.x >= 0.0 && p.x <= n.area_side_m && p.y >= 0.0 && p.y <= n.area_side_m,
          "server_positions", "inside [0, area_side]^2");
  for (const auto& p : n.ue_positions)
    check(p.x >= 0.0 && p.x <= n.area_side_m && p.y >= 0.0 && p.y <= n.area_side_m,
          "ue_positions", "inside [0, area_side]^2");

  for (std::size_t i = 0; i < cfg.ues.size(); ++i) {
    const UeProfile& u = cfg.ues[i];
    const std::string who = "ue[" + std::to_string(i) + "].";
    check(u.p_max_w > 0.0, who + "p_max", "> 0");
    check(u.cycles_per_bit > 0.0, who + "cycles_per_bit", "> 0");
    check(u.arrival_rate_bps >= 0.0, who + "arrival_rate_bps", ">= 0");
    check(u.kappa > 0.0, who + "kappa", "> 0");
    check(u.unit_task_bits > 0.0, who + "unit_task_bits", "> 0");
    check(u.eps_local > 0.0 && u.eps_local < 1.0, who + "eps_local", "in (0, 1)");
    check(u.eps_offload > 0.0 && u.eps_offload < 1.0, who + "eps_offload", "in (0, 1)");
    check(u.sigma_local_th > 0.0, who + "sigma_local_th_bits", "> 0");
    check(u.sigma_offload_th > 0.0, who + "sigma_offload_th_bits", "> 0");
    check(u.xi_local_th < 0.5, who + "xi_local_th", "< 1/2 (finite second-moment bound)");
    check(u.xi_offload_th < 0.5, who + "xi_offload_th", "< 1/2 (finite second-moment bound)");
    check(u.d_local_multiplier > 0.0, who + "d_local_multiplier", "> 0");
    check(u.d_offload_multiplier > 0.0, who + "d_offload_multiplier", "> 0");
  }
  for (std::size_t j = 0; j < cfg.servers.size(); ++j) {
    const ServerProfile& s = cfg.servers[j];
    const std::string who = "server[" + std::to_string(j) + "].";
    check(s.core_count >= 1, who + "core_count", ">= 1");
    check(s.core_speed_hz > 0.0, who + "core_speed_hz", "> 0");
    check(s.d_server_s > 0.0, who + "d_server_s", "> 0");
    check(s.eps_server > 0.0 && s.eps_server < 1.0, who + "eps_server", "in (0, 1)");
    check(s.sigma_server_th > 0.0, who + "sigma_server_th_bits", "> 0");
    check(s.xi_server_th < 0.5, who + "xi_server_th", "< 1/2 (finite second-moment bound)");
  }
}

}  // namespace mecsim
