#include "rdmusic/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rdmusic {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

void SystemParams::validate() const {
  if (!(carrier_freq > 0.0)) throw std::invalid_argument("carrier_freq must be positive");
  if (n_subcarriers == 0) throw std::invalid_argument("n_subcarriers must be positive");
  if (!(subcarrier_spacing > 0.0)) throw std::invalid_argument("subcarrier_spacing must be positive");
  if (n_symbols == 0) throw std::invalid_argument("n_symbols must be positive");
  if (n_tx < 1) throw std::invalid_argument("n_tx must be at least 1");
  if (n_rx < 2) throw std::invalid_argument("n_rx must be at least 2");
  if (!(noise_power >= 0.0)) throw std::invalid_argument("noise_power must be non-negative");
  if (!(tx_power >= 0.0)) throw std::invalid_argument("tx_power must be non-negative");
}

SystemParams paper_preset() {
  SystemParams p;
  p.carrier_freq = 28e9;
  p.n_subcarriers = 2048;
  p.subcarrier_spacing = 30e3;
  p.cp_length = 144;
  p.n_symbols = 256;
  p.n_tx = 4;
  p.n_rx = 4;
  p.noise_power = dbm_to_watt(-90.0);
  return p;
}

SystemParams desk_preset() {
  SystemParams p;
  p.carrier_freq = 28e9;
  p.n_subcarriers = 256;
  p.subcarrier_spacing = 240e3;
  p.cp_length = 18;
  p.n_symbols = 64;
  p.n_tx = 4;
  p.n_rx = 4;
  p.noise_power = dbm_to_watt(-90.0);
  return p;
}

Target target_from_delay_doppler(double delay, double doppler, double doa, cplx reflection,
                                 const SystemParams& p) {
  Target t;
  t.range = delay * kSpeedOfLight / 2.0;
  t.radial_velocity = doppler * kSpeedOfLight / (2.0 * p.carrier_freq);
  t.doa = doa;
  t.reflection = reflection;
  return t;
}

void validate_scenario(const Scenario& scenario, const SystemParams& p) {
  for (std::size_t i = 0; i < scenario.targets.size(); ++i) {
    const Target& t = scenario.targets[i];
    const std::string tag = "target " + std::to_string(i) + ": ";
    if (!(t.range >= 0.0) || !(t.delay() < p.max_delay()))
      throw std::invalid_argument(tag + "delay outside the unambiguous interval [0, 1/df)");
    if (!(std::abs(t.doppler(p)) < p.max_abs_doppler()))
      throw std::invalid_argument(tag + "Doppler outside the unambiguous interval");
    if (!(std::abs(t.doa) <= kPi / 2.0)) throw std::invalid_argument(tag + "|doa| exceeds pi/2");
    if (!std::isfinite(t.reflection.real()) || !std::isfinite(t.reflection.imag()))
      throw std::invalid_argument(tag + "non-finite reflection");
  }
}

Eigen::VectorXcd steering_vector(double doa, std::size_t n_elems) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(n_elems));
  const double phase = kPi * std::sin(doa);
  for (std::size_t k = 0; k < n_elems; ++k)
    a[static_cast<Eigen::Index>(k)] = std::polar(1.0, phase * static_cast<double>(k));
  return a;
}

double path_loss_power(double range, const SystemParams& p) {
  if (!(range > 0.0)) throw std::invalid_argument("path_loss_power: range must be positive");
  const double four_pi_cubed = std::pow(4.0 * kPi, 3);
  const double d2 = range * range;
  return kSpeedOfLight * kSpeedOfLight /
         (four_pi_cubed * p.carrier_freq * p.carrier_freq * d2 * d2);
}

Scenario generate_scenario(std::mt19937_64& rng, std::size_t n_targets, const ScenarioOptions& opts,
                           const SystemParams& p) {
  if (!(opts.min_range > 0.0) || !(opts.region_radius >= opts.min_range))
    throw std::invalid_argument("generate_scenario: need 0 < min_range <= region_radius");

  std::uniform_real_distribution<double> range_dist(opts.min_range, opts.region_radius);
  std::uniform_real_distribution<double> vel_dist(0.0, opts.max_velocity);
  std::uniform_real_distribution<double> doa_dist(-opts.max_abs_doa, opts.max_abs_doa);
  std::normal_distribution<double> rcs_dist(0.0, std::sqrt(opts.rcs_variance / 2.0));

  Scenario s;
  s.targets.reserve(n_targets);
  for (std::size_t i = 0; i < n_targets; ++i) {
    Target t;
    t.range = range_dist(rng);
    t.radial_velocity = vel_dist(rng);
    t.doa = doa_dist(rng);
    const double re = rcs_dist(rng);
    const double im = rcs_dist(rng);
    t.reflection = cplx(re, im) * std::sqrt(path_loss_power(t.range, p));
    s.targets.push_back(t);
  }
  return s;
}

}  // namespace rdmusic
