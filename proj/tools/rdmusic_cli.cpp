// Command-line driver: single trials, Monte-Carlo sweeps, MUSIC spectra and
// range-Doppler map dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rdmusic/config.hpp"
#include "rdmusic/echo.hpp"
#include "rdmusic/harness.hpp"
#include "rdmusic/io.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/proposed.hpp"
#include "rdmusic/rng.hpp"

namespace fs = std::filesystem;
using namespace rdmusic;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string preset;
  std::vector<std::string> methods;
  std::vector<std::size_t> targets;
  std::vector<double> powers;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t trials = 0;
  std::size_t threads = 0;
  bool noiseless = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.out_dir, "Output directory");
  cmd->add_option("--preset", o.preset, "Scale preset")->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--methods", o.methods, "Methods to run")
      ->check(CLI::IsMember({"proposed", "sequential_music", "dft_data_aided"}));
  cmd->add_option("--targets", o.targets, "Target count(s)");
  cmd->add_option("--power", o.powers, "Transmit power(s) in dBm");
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  cmd->add_option("--trials", o.trials, "Trials per sweep point");
  cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  cmd->add_flag("--noiseless", o.noiseless, "Disable receiver noise");
}

ExperimentConfig build_config(const CommonOptions& o, CLI::App* cmd) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_experiment(o.config_path);
  if (!o.preset.empty()) apply_preset(c, o.preset);
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& m : o.methods) c.methods.push_back(method_from_string(m));
  }
  if (!o.targets.empty()) c.n_targets = o.targets;
  if (!o.powers.empty()) c.tx_power_dbm = o.powers;
  if (cmd->count("--seed")) c.seed = o.seed;
  if (o.trials) c.n_trials = o.trials;
  if (cmd->count("--threads")) c.threads = o.threads;
  if (o.noiseless) c.noise_on = false;
  c.validate();
  return c;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

struct TrialFrames {
  SystemParams params;
  Scenario scenario;
  FrameTx tx;
  FrameRx rx;
};

// Rebuilds the frames of trial `index` exactly as run_trial does.
TrialFrames trial_frames(const ExperimentConfig& c, const SweepPoint& pt, std::size_t index) {
  TrialFrames f;
  f.params = c.params;
  f.params.tx_power = dbm_to_watt(pt.tx_power_dbm);
  const std::uint64_t seed = trial_seed(c.seed, index);
  std::mt19937_64 srng(stream_seed(seed, Stream::scenario));
  f.scenario = c.fixed_scenario ? *c.fixed_scenario : generate_scenario(srng, pt.n_targets, c.scenario, f.params);
  f.scenario.seed = seed;
  f.tx = generate_frame(stream_seed(seed, Stream::frame), f.params);
  std::mt19937_64 nrng(stream_seed(seed, Stream::noise));
  f.rx = synthesize_echo(f.tx, f.scenario, f.params, nrng, c.noise_on);
  return f;
}

void print_trial(const TrialRecord& rec) {
  std::printf("trial %zu  seed %llu  targets %zu  power %.2f dBm\n", rec.trial_index,
              static_cast<unsigned long long>(rec.seed), rec.point.n_targets, rec.point.tx_power_dbm);
  std::printf("truth:\n");
  for (const Target& t : rec.truth.targets)
    std::printf("  range %8.3f m  v %7.3f m/s  doa %8.3f deg  |alpha|^2 %.3e\n", t.range, t.radial_velocity,
                rad_to_deg(t.doa), std::norm(t.reflection));
  for (const MethodOutcome& o : rec.outcomes) {
    std::printf("%s: rmse %.4f deg%s%s\n", to_string(o.method), o.rmse_deg(), o.underfull ? " (underfull)" : "",
                o.failed ? (" (failed: " + o.error + ")").c_str() : "");
    for (const Estimate& e : o.estimates)
      std::printf("  range %8.3f m  fd %10.2f Hz  doa %8.3f deg\n", e.delay * kSpeedOfLight / 2.0, e.doppler,
                  rad_to_deg(e.doa));
  }
  for (const FusedEstimate& f : rec.fused)
    std::printf("  fused bin (%zu,%zu) -> %s[%zu] power %.4e\n", f.detection.doppler_bin, f.detection.range_bin,
                to_string(f.winning_domain), f.winning_index, f.winning_power);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO-OFDM radar DoA estimation with range/Doppler multiplexed MUSIC"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, spec_opts, map_opts;
  std::size_t run_trial_index = 0, spec_trial_index = 0, map_trial_index = 0;
  bool dump_frames = false, dump_binary = false;

  auto* run = app.add_subcommand("run", "Run one trial and print every estimate");
  add_common(run, run_opts);
  run->add_option("--trial", run_trial_index, "Trial index");
  run->add_flag("--dump-frames", dump_frames, "Write tx.bin / rx.bin tensors to the output directory");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo RMSE sweep, writes sweep.csv");
  add_common(sweep, sweep_opts);

  auto* spectrum = app.add_subcommand("spectrum", "Write the delay/Doppler MUSIC spectra of one trial as CSV");
  add_common(spectrum, spec_opts);
  spectrum->add_option("--trial", spec_trial_index, "Trial index");

  auto* rdmap = app.add_subcommand("rdmap", "Write the integrated range-Doppler map of one trial as CSV");
  add_common(rdmap, map_opts);
  rdmap->add_option("--trial", map_trial_index, "Trial index");
  rdmap->add_flag("--binary", dump_binary, "Also write the per-channel maps as rdmap.bin");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ExperimentConfig c = build_config(run_opts, run);
      const SweepPoint pt{c.n_targets.front(), c.tx_power_dbm.front()};
      const TrialRecord rec = run_trial(c, pt, run_trial_index);
      print_trial(rec);
      SystemParams params = c.params;
      params.tx_power = dbm_to_watt(pt.tx_power_dbm);
      auto csv = open_out(run_opts.out_dir, "detections.csv");
      write_detections_header(csv);
      write_detections(csv, rec, params);
      if (dump_frames) {
        const TrialFrames f = trial_frames(c, pt, run_trial_index);
        write_tensor(fs::path(run_opts.out_dir) / "tx.bin", f.tx.symbols, f.tx.seed);
        write_tensor(fs::path(run_opts.out_dir) / "rx.bin", f.rx.echoes, rec.seed);
      }
    } else if (*sweep) {
      const ExperimentConfig c = build_config(sweep_opts, sweep);
      const auto rows = rmse_sweep(c);
      auto csv = open_out(sweep_opts.out_dir, "sweep.csv");
      write_sweep_csv(csv, rows);
      write_sweep_csv(std::cout, rows);
    } else if (*spectrum) {
      const ExperimentConfig c = build_config(spec_opts, spectrum);
      const SweepPoint pt{c.n_targets.front(), c.tx_power_dbm.front()};
      const TrialFrames f = trial_frames(c, pt, spec_trial_index);
      const ProposedResult res = estimate_proposed(f.rx, f.tx, f.params, f.scenario.targets.size(), c.proposed);
      for (std::size_t i = 0; i < res.estimates.size(); ++i) {
        auto d = open_out(spec_opts.out_dir, "spectrum_det" + std::to_string(i) + "_delay.csv");
        write_spectrum_csv(d, res.delay_spectra[i]);
        auto g = open_out(spec_opts.out_dir, "spectrum_det" + std::to_string(i) + "_doppler.csv");
        write_spectrum_csv(g, res.doppler_spectra[i]);
        std::printf("detection %zu: bin (%zu,%zu) doa %.3f deg\n", i, res.estimates[i].detection.doppler_bin,
                    res.estimates[i].detection.range_bin, rad_to_deg(res.estimates[i].doa_est));
      }
    } else if (*rdmap) {
      const ExperimentConfig c = build_config(map_opts, rdmap);
      const SweepPoint pt{c.n_targets.front(), c.tx_power_dbm.front()};
      const TrialFrames f = trial_frames(c, pt, map_trial_index);
      const RDMap map = range_doppler_map(matched_filter_frame(f.rx, f.tx), c.proposed.pad);
      auto csv = open_out(map_opts.out_dir, "rdmap.csv");
      write_rdmap_csv(csv, map.integrated);
      if (dump_binary) write_tensor(fs::path(map_opts.out_dir) / "rdmap.bin", map.per_channel, f.scenario.seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
