#include "rdmusic/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "rdmusic/echo.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/rng.hpp"

namespace rdmusic {

void ExperimentConfig::validate() const {
  params.validate();
  if (n_targets.empty()) throw std::invalid_argument("config: n_targets sweep is empty");
  if (tx_power_dbm.empty()) throw std::invalid_argument("config: tx_power_dbm sweep is empty");
  if (n_trials < 1) throw std::invalid_argument("config: n_trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("config: no methods selected");
  for (std::size_t n : n_targets)
    if (n < 1) throw std::invalid_argument("config: target counts must be >= 1");
  if (!(miss_penalty_deg > 0.0)) throw std::invalid_argument("config: miss penalty must be positive");
}

void apply_preset(ExperimentConfig& config, const std::string& preset) {
  const double noise = config.params.noise_power;
  if (preset == "paper") {
    config.params = paper_preset();
  } else if (preset == "desk") {
    config.params = desk_preset();
  } else {
    throw std::invalid_argument("unknown preset '" + preset + "'");
  }
  config.params.noise_power = noise;
  config.preset = preset;
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
  std::vector<SweepPoint> pts;
  for (std::size_t n : config.n_targets)
    for (double pw : config.tx_power_dbm) pts.push_back({n, pw});
  return pts;
}

double association_cost(const Target& truth, const Estimate& est, const SystemParams& p) {
  return std::abs(truth.delay() - est.delay) / p.delay_bin() +
         std::abs(truth.doppler(p) - est.doppler) / p.doppler_bin() + std::abs(rad_to_deg(truth.doa - est.doa));
}

namespace {

// Square Hungarian algorithm (potentials + augmenting paths); returns row -> column.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    col_owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = col_owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    if (col_owner[j] != 0) row_to_col[col_owner[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

Pairing associate(const std::vector<Target>& truths, const std::vector<Estimate>& estimates, const SystemParams& p) {
  Pairing out;
  out.truth_to_estimate.assign(truths.size(), std::nullopt);
  if (truths.empty() || estimates.empty()) return out;

  // Pad to square with zero-cost dummies; dummies never contribute to the cost.
  const std::size_t n = std::max(truths.size(), estimates.size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < truths.size(); ++i)
    for (std::size_t j = 0; j < estimates.size(); ++j) cost[i][j] = association_cost(truths[i], estimates[j], p);

  const auto assignment = hungarian(cost);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const std::size_t j = assignment[i];
    if (j < estimates.size()) {
      out.truth_to_estimate[i] = j;
      out.total_cost += cost[i][j];
    }
  }
  return out;
}

std::vector<double> doa_errors_deg(const std::vector<Target>& truths, const std::vector<Estimate>& estimates,
                                   const Pairing& pairing, double miss_penalty_deg) {
  std::vector<double> errors(truths.size(), miss_penalty_deg);
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (i < pairing.truth_to_estimate.size() && pairing.truth_to_estimate[i]) {
      const double err = std::abs(rad_to_deg(truths[i].doa - estimates[*pairing.truth_to_estimate[i]].doa));
      errors[i] = std::min(err, miss_penalty_deg);
    }
  }
  return errors;
}

double MethodOutcome::rmse_deg() const {
  if (errors_deg.empty()) return 0.0;
  double s = 0.0;
  for (double e : errors_deg) s += e * e;
  return std::sqrt(s / static_cast<double>(errors_deg.size()));
}

const MethodOutcome& TrialRecord::outcome(Method m) const {
  for (const auto& o : outcomes)
    if (o.method == m) return o;
  throw std::out_of_range(std::string("trial has no outcome for ") + to_string(m));
}

TrialRecord evaluate_scenario(const ExperimentConfig& config, const SystemParams& params, const Scenario& scenario,
                              std::uint64_t frame_seed, std::uint64_t noise_seed) {
  TrialRecord rec;
  rec.truth = scenario;
  const FrameTx tx = generate_frame(frame_seed, params);
  std::mt19937_64 noise_rng(noise_seed);
  const FrameRx rx = synthesize_echo(tx, scenario, params, noise_rng, config.noise_on);
  const std::size_t count = std::max<std::size_t>(scenario.targets.size(), 1);

  for (Method method : config.methods) {
    MethodOutcome out;
    out.method = method;
    try {
      if (method == Method::proposed) {
        ProposedResult res = estimate_proposed(rx, tx, params, count, config.proposed);
        for (const FusedEstimate& f : res.estimates)
          out.estimates.push_back({f.detection.delay_est, f.detection.doppler_est, f.doa_est});
        out.underfull = res.detections.underfull;
        rec.fused = std::move(res.estimates);
        rec.candidates = std::move(res.candidates);
      } else {
        const BaselineResult res = method == Method::sequential_music
                                       ? sequential_music(rx, tx, params, count, config.proposed.music)
                                       : dft_data_aided(rx, tx, params, count);
        for (std::size_t i = 0; i < res.angles.size(); ++i)
          out.estimates.push_back({res.delays[i], res.dopplers[i], res.angles[i]});
        out.underfull = res.underfull;
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.error = e.what();
      out.estimates.clear();
    }
    const Pairing pairing = associate(scenario.targets, out.estimates, params);
    out.errors_deg = doa_errors_deg(scenario.targets, out.estimates, pairing, config.miss_penalty_deg);
    rec.outcomes.push_back(std::move(out));
  }
  return rec;
}

TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point, std::size_t trial_index) {
  SystemParams params = config.params;
  params.tx_power = dbm_to_watt(point.tx_power_dbm);

  const std::uint64_t seed = trial_seed(config.seed, trial_index);
  std::mt19937_64 scenario_rng(stream_seed(seed, Stream::scenario));
  Scenario scenario = config.fixed_scenario
                          ? *config.fixed_scenario
                          : generate_scenario(scenario_rng, point.n_targets, config.scenario, params);
  scenario.seed = seed;

  TrialRecord rec = evaluate_scenario(config, params, scenario, stream_seed(seed, Stream::frame),
                                      stream_seed(seed, Stream::noise));
  rec.trial_index = trial_index;
  rec.seed = seed;
  rec.point = point;
  return rec;
}

std::vector<TrialRecord> run_point(const ExperimentConfig& config, const SweepPoint& point, const ProgressFn& progress) {
  config.validate();
  std::vector<TrialRecord> records(config.n_trials);
  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.n_trials);

  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < config.n_trials; t = next++) {
      records[t] = run_trial(config, point, t);
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, config.n_trials);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return records;
}

SweepRow summarize(const std::vector<TrialRecord>& records, Method method) {
  SweepRow row;
  row.method = method;
  row.trials = records.size();
  if (records.empty()) return row;
  row.point = records.front().point;

  double sq = 0.0, mean = 0.0;
  std::size_t count = 0;
  std::vector<double> per_trial;
  for (const TrialRecord& rec : records) {
    const MethodOutcome& o = rec.outcome(method);
    for (double e : o.errors_deg) sq += e * e;
    count += o.errors_deg.size();
    per_trial.push_back(o.rmse_deg());
    mean += per_trial.back();
    if (o.failed || o.underfull) ++row.failures;
  }
  row.rmse_deg = count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
  row.mean_trial_rmse_deg = mean / static_cast<double>(records.size());
  std::sort(per_trial.begin(), per_trial.end());
  const std::size_t n = per_trial.size();
  row.median_trial_rmse_deg = n % 2 ? per_trial[n / 2] : 0.5 * (per_trial[n / 2 - 1] + per_trial[n / 2]);
  return row;
}

std::vector<SweepRow> rmse_sweep(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  std::vector<SweepRow> rows;
  for (const SweepPoint& pt : sweep_points(config)) {
    const auto records = run_point(config, pt, progress);
    for (Method m : config.methods) rows.push_back(summarize(records, m));
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "method,n_targets,tx_power_dbm,n_trials,rmse_deg,mean_trial_rmse_deg,median_trial_rmse_deg,failures\n";
  for (const SweepRow& r : rows) {
    os << to_string(r.method) << ',' << r.point.n_targets << ',' << format_number(r.point.tx_power_dbm) << ','
       << r.trials << ',' << format_number(r.rmse_deg) << ',' << format_number(r.mean_trial_rmse_deg) << ','
       << format_number(r.median_trial_rmse_deg) << ',' << r.failures << '\n';
  }
}

}  // namespace rdmusic
