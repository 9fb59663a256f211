#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rdmusic/tensor.hpp"

namespace rdmusic {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/**
 * @brief OFDM/MIMO system parameterization.
 *
 * noise_power is the total per-antenna sample noise power B*N_o (W).
 * tx_power is the total transmit power (W); it is split evenly over
 * subcarriers and transmit antennas, see entry_power().
 */
struct SystemParams {
  double carrier_freq = 28e9;
  std::size_t n_subcarriers = 256;
  double subcarrier_spacing = 240e3;
  std::size_t cp_length = 18;
  std::size_t n_symbols = 64;
  std::size_t n_tx = 4;
  std::size_t n_rx = 4;
  double noise_power = 1e-12;
  double tx_power = 1.0;

  double bandwidth() const { return subcarrier_spacing * static_cast<double>(n_subcarriers); }
  /// 1/Δf plus the cyclic-prefix duration.
  double symbol_duration() const {
    return 1.0 / subcarrier_spacing +
           static_cast<double>(cp_length) / (subcarrier_spacing * static_cast<double>(n_subcarriers));
  }
  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  /// Delay spacing of one range bin on the native grid.
  double delay_bin() const { return 1.0 / bandwidth(); }
  /// Doppler spacing of one bin on the native grid.
  double doppler_bin() const { return 1.0 / (static_cast<double>(n_symbols) * symbol_duration()); }
  double max_delay() const { return 1.0 / subcarrier_spacing; }
  double max_abs_doppler() const { return 0.5 / symbol_duration(); }
  /// Expected |x_mn[p]|^2 so that E||x_mn||^2 = tx_power / N_c.
  double entry_power() const {
    return tx_power / (static_cast<double>(n_subcarriers) * static_cast<double>(n_tx));
  }

  /// Throws std::invalid_argument when a structural invariant is violated.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// Carrier 28 GHz, 2048 subcarriers at 30 kHz, CP 144, 256 symbols, 4x4.
SystemParams paper_preset();
/// Same bandwidth at 1/32 of the resource grid: 256 subcarriers at 240 kHz, 64 symbols.
SystemParams desk_preset();

struct Target {
  double range = 0.0;            // m
  double radial_velocity = 0.0;  // m/s, positive = approaching
  double doa = 0.0;              // rad
  cplx reflection{0.0, 0.0};

  double delay() const { return 2.0 * range / kSpeedOfLight; }
  double doppler(const SystemParams& p) const {
    return p.carrier_freq * 2.0 * radial_velocity / kSpeedOfLight;
  }

  bool operator==(const Target&) const = default;
};

/// Builds a target from delay and Doppler directly (test and tooling helper).
Target target_from_delay_doppler(double delay, double doppler, double doa, cplx reflection,
                                 const SystemParams& p);

struct Scenario {
  std::vector<Target> targets;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

/// Unambiguous range/Doppler and DoA support checks; throws std::invalid_argument.
void validate_scenario(const Scenario& scenario, const SystemParams& p);

/// ULA with half-wavelength spacing; element k has phase pi*k*sin(doa).
Eigen::VectorXcd steering_vector(double doa, std::size_t n_elems);

/// Two-way radar-equation power gain c^2 / ((4 pi)^3 f_c^2 d^4).
double path_loss_power(double range, const SystemParams& p);

struct ScenarioOptions {
  double region_radius = 150.0;
  double min_range = 10.0;
  double max_velocity = 50.0;
  double max_abs_doa = kPi / 3.0;
  double rcs_variance = 1.0;

  bool operator==(const ScenarioOptions&) const = default;
};

/**
 * Draws I random targets. Per target, in this order: range ~ U[min_range,
 * region_radius], velocity ~ U[0, max_velocity], DoA ~ U[-max_abs_doa,
 * max_abs_doa], then a circular complex Gaussian RCS scaled by the path loss.
 */
Scenario generate_scenario(std::mt19937_64& rng, std::size_t n_targets, const ScenarioOptions& opts,
                           const SystemParams& p);

}  // namespace rdmusic
