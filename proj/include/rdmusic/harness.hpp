#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdmusic/baselines.hpp"
#include "rdmusic/params.hpp"
#include "rdmusic/proposed.hpp"

namespace rdmusic {

struct ExperimentConfig {
  std::string preset = "desk";
  SystemParams params = desk_preset();
  ScenarioOptions scenario;
  std::optional<Scenario> fixed_scenario;  // replaces random generation when set
  std::vector<std::size_t> n_targets{3};
  std::vector<double> tx_power_dbm{50.0, 60.0, 70.0, 80.0};
  std::size_t n_trials = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::proposed, Method::sequential_music, Method::dft_data_aided};
  ProposedOptions proposed;
  bool noise_on = true;
  double miss_penalty_deg = 30.0;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Applies a named preset ("paper" or "desk") to the system parameters.
void apply_preset(ExperimentConfig& config, const std::string& preset);

struct SweepPoint {
  std::size_t n_targets = 1;
  double tx_power_dbm = 30.0;
};

/// Cartesian product, target count outer and power inner.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

/// A point estimate in (delay, Doppler, DoA).
struct Estimate {
  double delay = 0.0;
  double doppler = 0.0;
  double doa = 0.0;
};

struct Pairing {
  std::vector<std::optional<std::size_t>> truth_to_estimate;
  double total_cost = 0.0;
};

/// Cost |dtau|/tau_bin + |dfd|/fd_bin + |dtheta|/1 deg.
double association_cost(const Target& truth, const Estimate& est, const SystemParams& p);

/// Minimum-total-cost matching (Hungarian). Every truth is matched when estimates suffice.
Pairing associate(const std::vector<Target>& truths, const std::vector<Estimate>& estimates, const SystemParams& p);

/// Per-truth absolute DoA error in degrees; misses and larger errors are capped at the penalty.
std::vector<double> doa_errors_deg(const std::vector<Target>& truths, const std::vector<Estimate>& estimates,
                                   const Pairing& pairing, double miss_penalty_deg);

struct MethodOutcome {
  Method method = Method::proposed;
  std::vector<Estimate> estimates;
  std::vector<double> errors_deg;
  bool underfull = false;
  bool failed = false;
  std::string error;

  double rmse_deg() const;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  SweepPoint point;
  Scenario truth;
  std::vector<MethodOutcome> outcomes;
  std::vector<FusedEstimate> fused;  // proposed-method detail
  std::vector<CandidateSet> candidates;

  const MethodOutcome& outcome(Method m) const;
};

/// Runs every configured method on one frame with a given scenario.
TrialRecord evaluate_scenario(const ExperimentConfig& config, const SystemParams& params, const Scenario& scenario,
                              std::uint64_t frame_seed, std::uint64_t noise_seed);

/// Deterministic in (config.seed, trial_index); the scenario does not depend on the power.
TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point, std::size_t trial_index);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// All trials of one sweep point, in trial order.
std::vector<TrialRecord> run_point(const ExperimentConfig& config, const SweepPoint& point,
                                   const ProgressFn& progress = {});

struct SweepRow {
  Method method = Method::proposed;
  SweepPoint point;
  std::size_t trials = 0;
  double rmse_deg = 0.0;               // over all trials and targets
  double mean_trial_rmse_deg = 0.0;
  double median_trial_rmse_deg = 0.0;
  std::size_t failures = 0;            // failed or underfull trials
};

SweepRow summarize(const std::vector<TrialRecord>& records, Method method);

std::vector<SweepRow> rmse_sweep(const ExperimentConfig& config, const ProgressFn& progress = {});

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Two-column formatting shared by every CSV writer: shortest round-trip decimal.
std::string format_number(double v);

}  // namespace rdmusic
