#include "rdmusic/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace rdmusic {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* section) {
  if (!j.is_object()) throw std::invalid_argument(std::string("config: section '") + section + "' must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw std::invalid_argument(std::string("config: unknown key '") + key + "' in '" + section + "'");
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const SystemParams& p) {
  return json{{"carrier_freq_hz", p.carrier_freq},
              {"n_subcarriers", p.n_subcarriers},
              {"subcarrier_spacing_hz", p.subcarrier_spacing},
              {"cp_length", p.cp_length},
              {"n_symbols", p.n_symbols},
              {"n_tx", p.n_tx},
              {"n_rx", p.n_rx},
              {"noise_power_dbm", watt_to_dbm(p.noise_power)},
              {"tx_power_dbm", watt_to_dbm(p.tx_power)}};
}

SystemParams system_from_json(const json& j, SystemParams base) {
  reject_unknown(j,
                 {"carrier_freq_hz", "n_subcarriers", "subcarrier_spacing_hz", "cp_length", "n_symbols", "n_tx", "n_rx",
                  "noise_power_dbm", "tx_power_dbm"},
                 "system");
  read_if(j, "carrier_freq_hz", base.carrier_freq);
  read_if(j, "n_subcarriers", base.n_subcarriers);
  read_if(j, "subcarrier_spacing_hz", base.subcarrier_spacing);
  read_if(j, "cp_length", base.cp_length);
  read_if(j, "n_symbols", base.n_symbols);
  read_if(j, "n_tx", base.n_tx);
  read_if(j, "n_rx", base.n_rx);
  if (j.contains("noise_power_dbm")) base.noise_power = dbm_to_watt(j.at("noise_power_dbm").get<double>());
  if (j.contains("tx_power_dbm")) base.tx_power = dbm_to_watt(j.at("tx_power_dbm").get<double>());
  base.validate();
  return base;
}

json to_json(const ScenarioOptions& s) {
  return json{{"region_radius_m", s.region_radius},
              {"min_range_m", s.min_range},
              {"max_velocity_mps", s.max_velocity},
              {"max_abs_doa_deg", rad_to_deg(s.max_abs_doa)},
              {"rcs_variance", s.rcs_variance}};
}

ScenarioOptions scenario_options_from_json(const json& j, ScenarioOptions base) {
  reject_unknown(j, {"region_radius_m", "min_range_m", "max_velocity_mps", "max_abs_doa_deg", "rcs_variance", "targets", "seed"},
                 "scenario");
  read_if(j, "region_radius_m", base.region_radius);
  read_if(j, "min_range_m", base.min_range);
  read_if(j, "max_velocity_mps", base.max_velocity);
  if (j.contains("max_abs_doa_deg")) base.max_abs_doa = deg_to_rad(j.at("max_abs_doa_deg").get<double>());
  read_if(j, "rcs_variance", base.rcs_variance);
  return base;
}

json to_json(const Scenario& s) {
  json targets = json::array();
  for (const Target& t : s.targets)
    targets.push_back({{"range_m", t.range},
                       {"radial_velocity_mps", t.radial_velocity},
                       {"doa_deg", rad_to_deg(t.doa)},
                       {"reflection", {t.reflection.real(), t.reflection.imag()}}});
  return json{{"seed", s.seed}, {"targets", targets}};
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  read_if(j, "seed", s.seed);
  if (!j.contains("targets")) return s;
  for (const json& t : j.at("targets")) {
    reject_unknown(t, {"range_m", "radial_velocity_mps", "doa_deg", "reflection"}, "target");
    Target target;
    target.range = t.at("range_m").get<double>();
    target.radial_velocity = t.value("radial_velocity_mps", 0.0);
    target.doa = deg_to_rad(t.value("doa_deg", 0.0));
    const auto refl = t.at("reflection");
    if (!refl.is_array() || refl.size() != 2)
      throw std::invalid_argument("config: target reflection must be [re, im]");
    target.reflection = cplx(refl[0].get<double>(), refl[1].get<double>());
    s.targets.push_back(target);
  }
  return s;
}

json to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  json experiment{{"preset", c.preset},
                  {"n_targets", c.n_targets},
                  {"tx_power_dbm", c.tx_power_dbm},
                  {"n_trials", c.n_trials},
                  {"seed", c.seed},
                  {"methods", methods},
                  {"noise_on", c.noise_on},
                  {"miss_penalty_deg", c.miss_penalty_deg},
                  {"threads", c.threads},
                  {"music",
                   {{"signal_dim", c.proposed.music.signal_dim},
                    {"peak_count", c.proposed.music.peak_count},
                    {"grid_step_deg", rad_to_deg(c.proposed.music.grid_step)},
                    {"eigen_gap", c.proposed.music.eigen_gap}}},
                  {"detector",
                   {{"use_cfar", c.proposed.use_cfar},
                    {"cfar_guard", c.proposed.cfar.guard},
                    {"cfar_training", c.proposed.cfar.training},
                    {"cfar_pfa", c.proposed.cfar.pfa},
                    {"zero_pad_doppler", c.proposed.pad.doppler},
                    {"zero_pad_range", c.proposed.pad.range}}}};
  json scenario = to_json(c.scenario);
  if (c.fixed_scenario) scenario["targets"] = to_json(*c.fixed_scenario).at("targets");
  return json{{"system", to_json(c.params)}, {"scenario", scenario}, {"experiment", experiment}};
}

ExperimentConfig experiment_from_json(const json& j) {
  reject_unknown(j, {"system", "scenario", "experiment"}, "root");
  ExperimentConfig c;
  const json ex = j.value("experiment", json::object());
  reject_unknown(ex,
                 {"preset", "n_targets", "tx_power_dbm", "n_trials", "seed", "methods", "noise_on", "miss_penalty_deg",
                  "threads", "music", "detector"},
                 "experiment");
  // The preset seeds the system section; explicit system keys override it.
  if (ex.contains("preset")) apply_preset(c, ex.at("preset").get<std::string>());
  if (j.contains("system")) c.params = system_from_json(j.at("system"), c.params);
  if (j.contains("scenario")) {
    c.scenario = scenario_options_from_json(j.at("scenario"), c.scenario);
    if (j.at("scenario").contains("targets")) c.fixed_scenario = scenario_from_json(j.at("scenario"));
  }

  read_if(ex, "n_targets", c.n_targets);
  read_if(ex, "tx_power_dbm", c.tx_power_dbm);
  read_if(ex, "n_trials", c.n_trials);
  read_if(ex, "seed", c.seed);
  read_if(ex, "noise_on", c.noise_on);
  read_if(ex, "miss_penalty_deg", c.miss_penalty_deg);
  read_if(ex, "threads", c.threads);
  if (ex.contains("methods")) {
    c.methods.clear();
    for (const auto& m : ex.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (ex.contains("music")) {
    const json& mu = ex.at("music");
    reject_unknown(mu, {"signal_dim", "peak_count", "grid_step_deg", "eigen_gap"}, "music");
    read_if(mu, "signal_dim", c.proposed.music.signal_dim);
    read_if(mu, "peak_count", c.proposed.music.peak_count);
    if (mu.contains("grid_step_deg")) c.proposed.music.grid_step = deg_to_rad(mu.at("grid_step_deg").get<double>());
    read_if(mu, "eigen_gap", c.proposed.music.eigen_gap);
  }
  if (ex.contains("detector")) {
    const json& d = ex.at("detector");
    reject_unknown(d, {"use_cfar", "cfar_guard", "cfar_training", "cfar_pfa", "zero_pad_doppler", "zero_pad_range"},
                   "detector");
    read_if(d, "use_cfar", c.proposed.use_cfar);
    read_if(d, "cfar_guard", c.proposed.cfar.guard);
    read_if(d, "cfar_training", c.proposed.cfar.training);
    read_if(d, "cfar_pfa", c.proposed.cfar.pfa);
    read_if(d, "zero_pad_doppler", c.proposed.pad.doppler);
    read_if(d, "zero_pad_range", c.proposed.pad.range);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return experiment_from_json(json::parse(in));
}

void save_experiment(const std::filesystem::path& path, const ExperimentConfig& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
  out << to_json(c).dump(2) << '\n';
}

}  // namespace rdmusic
