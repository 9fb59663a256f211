#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reference/naive.hpp"
#include "rdmusic/fusion.hpp"
#include "rdmusic/proposed.hpp"

using namespace rdmusic;

namespace {

FrameRx echo_of(const FrameTx& tx, const Scenario& s, const SystemParams& p, bool noise = false,
                std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  return synthesize_echo(tx, s, p, rng, noise);
}

Detection at_bin(std::size_t r, std::size_t c, const SystemParams& p) {
  Detection d;
  d.doppler_bin = r;
  d.range_bin = c;
  d.doppler_grid = p.n_symbols;
  d.range_grid = p.n_subcarriers;
  d.delay_est = range_bin_to_delay(c, p.n_subcarriers, p);
  d.doppler_est = doppler_bin_to_frequency(r, p.n_symbols, p);
  return d;
}

}  // namespace

TEST_CASE("candidate power matches the loop oracle") {
  SystemParams p = desk_preset();
  p.n_symbols = 8;
  p.n_subcarriers = 16;
  p.n_tx = 2;
  p.n_rx = 3;
  const FrameTx tx = generate_frame(1, p);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(5.2 * p.delay_bin(), 1.1 * p.doppler_bin(), 0.5, {0.8, 0.1}, p));
  const FrameRx rx = echo_of(tx, s, p, true, 2);
  for (double th : {-1.0, 0.0, 0.5, 1.2})
    for (std::size_t r : {0u, 3u, 7u})
      for (std::size_t c : {0u, 5u, 15u}) {
        const double got = candidate_power(rx, tx, th, at_bin(r, c, p), p);
        const double ref = naive::candidate_power(rx, tx, th, r, c, p);
        CHECK(std::abs(got - ref) <= 1e-10 * ref);
      }
}

TEST_CASE("candidate power: zero echo, phase invariance, off-target angles") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(3, p);
  const Detection d = at_bin(p.n_symbols - 2, 25, p);
  CHECK(candidate_power(echo_of(tx, {}, p), tx, 0.3, d, p) == 0.0);

  Scenario s;
  const double doa = deg_to_rad(10.0);
  s.targets.push_back(target_from_delay_doppler(25.0 * p.delay_bin(), 2.0 * p.doppler_bin(), doa, {1.0, 0.0}, p));
  const double on = candidate_power(echo_of(tx, s, p), tx, doa, d, p);
  const double off = candidate_power(echo_of(tx, s, p), tx, doa + deg_to_rad(30.0), d, p);
  CHECK(on >= static_cast<double>(p.n_rx) * off);

  s.targets[0].reflection = std::polar(1.0, -1.9);
  CHECK(candidate_power(echo_of(tx, s, p), tx, doa, d, p) == doctest::Approx(on).epsilon(1e-10));

  Detection bad = d;
  bad.range_bin = p.n_subcarriers;
  CHECK_THROWS(candidate_power(echo_of(tx, s, p), tx, doa, bad, p));
}

TEST_CASE("fusion keeps the single candidate and rejects decoys") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(4, p);
  Scenario s;
  const double doa = deg_to_rad(-37.0);
  s.targets.push_back(target_from_delay_doppler(60.0 * p.delay_bin(), -1.0 * p.doppler_bin(), doa, {0.0, 1.0}, p));
  const FrameRx rx = echo_of(tx, s, p, true, 5);
  CandidateSet c;
  c.detection = at_bin(1, 60, p);
  c.doppler_candidates = {0.7};
  const FusedEstimate one = fuse(rx, tx, c, p);
  CHECK(one.doa_est == 0.7);
  CHECK(one.winning_domain == Domain::doppler);

  for (double decoy : {10.0, 15.0, 40.0, 80.0}) {
    c.delay_candidates = {doa + deg_to_rad(decoy)};
    c.doppler_candidates = {doa - deg_to_rad(decoy), doa};
    const FusedEstimate f = fuse(rx, tx, c, p);
    CHECK(f.doa_est == doa);
    CHECK(f.winning_domain == Domain::doppler);
    CHECK(f.winning_index == 1);
    for (double pw : f.delay_powers) CHECK(pw <= f.winning_power);
    for (double pw : f.doppler_powers) CHECK(pw <= f.winning_power);
  }
  CHECK_THROWS(fuse(rx, tx, CandidateSet{}, p));
}

TEST_CASE("fusion ties prefer the delay domain") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(5, p);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(12.0 * p.delay_bin(), 0.0, 0.2, {1.0, 0.0}, p));
  const FrameRx rx = echo_of(tx, s, p);
  CandidateSet c;
  c.detection = at_bin(0, 12, p);
  c.delay_candidates = {0.2};
  c.doppler_candidates = {0.2};
  const FusedEstimate f = fuse(rx, tx, c, p);
  CHECK(f.winning_domain == Domain::delay);
}

TEST_CASE("targets sharing a delay bin are resolved through the Doppler branch") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(6, p);
  Scenario s;
  const double th1 = deg_to_rad(-24.0), th2 = deg_to_rad(31.0);
  s.targets.push_back(target_from_delay_doppler(45.0 * p.delay_bin(), 1.0 * p.doppler_bin(), th1, {1.0, 0.0}, p));
  s.targets.push_back(target_from_delay_doppler(45.0 * p.delay_bin(), -5.0 * p.doppler_bin(), th2, {0.0, 0.9}, p));
  const FrameRx rx = echo_of(tx, s, p);
  const ProposedResult res = estimate_proposed(rx, tx, p, 2);
  REQUIRE(res.estimates.size() == 2);
  int hits = 0;
  for (const FusedEstimate& f : res.estimates) {
    CHECK(f.detection.range_bin == 45);
    const double truth = f.detection.doppler_bin == p.n_symbols - 1 ? th1 : th2;
    CHECK(std::abs(rad_to_deg(f.doa_est - truth)) <= 1.0);
    hits += std::abs(rad_to_deg(f.doa_est - truth)) <= 1.0;
  }
  CHECK(hits == 2);
}
