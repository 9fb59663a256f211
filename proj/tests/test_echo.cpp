#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reference/naive.hpp"
#include "rdmusic/echo.hpp"

using namespace rdmusic;

namespace {

SystemParams small_params() {
  SystemParams p = desk_preset();
  p.n_symbols = 8;
  p.n_subcarriers = 32;
  p.n_tx = 3;
  p.n_rx = 4;
  p.tx_power = 1.0;
  return p;
}

Scenario two_targets(const SystemParams& p) {
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(3.3 * p.delay_bin(), 1.7 * p.doppler_bin(), deg_to_rad(20.0),
                                                {0.7, -0.2}, p));
  s.targets.push_back(target_from_delay_doppler(11.0 * p.delay_bin(), -2.4 * p.doppler_bin(), deg_to_rad(-41.0),
                                                {-0.1, 0.4}, p));
  return s;
}

}  // namespace

TEST_CASE("no targets and no noise gives zeros") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(1, p);
  std::mt19937_64 rng(0);
  const FrameRx rx = synthesize_echo(tx, {}, p, rng, false);
  for (const cplx& y : rx.echoes.data()) CHECK(y == cplx(0.0, 0.0));
}

TEST_CASE("zero delay, zero Doppler, broadside gives alpha * sum(x)") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(2, p);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(0.0, 0.0, 0.0, {0.5, 0.25}, p));
  std::mt19937_64 rng(0);
  const FrameRx rx = synthesize_echo(tx, s, p, rng, false);
  for (std::size_t m = 0; m < p.n_symbols; ++m)
    for (std::size_t n = 0; n < p.n_subcarriers; ++n) {
      cplx sx{0.0, 0.0};
      for (const cplx& x : tx.vec(m, n)) sx += x;
      for (const cplx& y : rx.vec(m, n)) CHECK(std::abs(y - cplx(0.5, 0.25) * sx) < 1e-14);
    }
}

TEST_CASE("matches the loop oracle") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(3, p);
  const Scenario s = two_targets(p);
  std::mt19937_64 rng(0);
  const FrameRx rx = synthesize_echo(tx, s, p, rng, false);
  const auto ref = naive::echo(tx, s, p);
  CHECK(naive::rel_err(rx.echoes.data(), ref) < 1e-12);
}

TEST_CASE("superposition") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(4, p);
  const Scenario both = two_targets(p);
  Scenario a, b;
  a.targets = {both.targets[0]};
  b.targets = {both.targets[1]};
  std::mt19937_64 rng(0);
  const FrameRx ra = synthesize_echo(tx, a, p, rng, false);
  const FrameRx rb = synthesize_echo(tx, b, p, rng, false);
  const FrameRx rab = synthesize_echo(tx, both, p, rng, false);
  double err = 0.0;
  for (std::size_t i = 0; i < rab.echoes.size(); ++i)
    err = std::max(err, std::abs(rab.echoes.data()[i] - ra.echoes.data()[i] - rb.echoes.data()[i]));
  CHECK(err < 1e-14);
}

TEST_CASE("phase progression across subcarriers and symbols") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(5, p);
  const double tau = 2.5 * p.delay_bin(), fd = 0.8 * p.doppler_bin();
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(tau, fd, 0.0, {1.0, 0.0}, p));
  std::mt19937_64 rng(0);
  const FrameRx rx = synthesize_echo(tx, s, p, rng, false);
  // Divide out the data; what remains is exp(-j2pi df tau n) exp(j2pi fd m T).
  auto response = [&](std::size_t m, std::size_t n) {
    cplx sx{0.0, 0.0};
    for (const cplx& x : tx.vec(m, n)) sx += x;
    return rx.vec(m, n)[0] / sx;
  };
  const double dn = std::arg(response(0, 1) / response(0, 0));
  const double dm = std::arg(response(1, 0) / response(0, 0));
  CHECK(dn == doctest::Approx(std::remainder(-2.0 * kPi * p.subcarrier_spacing * tau, 2.0 * kPi)).epsilon(1e-9));
  CHECK(dm == doctest::Approx(std::remainder(2.0 * kPi * fd * p.symbol_duration(), 2.0 * kPi)).epsilon(1e-9));
}

TEST_CASE("noise variance per antenna") {
  SystemParams p = desk_preset();
  p.noise_power = 3e-12;
  const FrameTx tx = generate_frame(6, p);
  std::mt19937_64 rng(99);
  const FrameRx rx = synthesize_echo(tx, {}, p, rng, true);
  for (std::size_t k = 0; k < p.n_rx; ++k) {
    double v = 0.0;
    cplx mean{0.0, 0.0};
    for (std::size_t m = 0; m < p.n_symbols; ++m)
      for (std::size_t n = 0; n < p.n_subcarriers; ++n) {
        v += std::norm(rx.vec(m, n)[k]);
        mean += rx.vec(m, n)[k];
      }
    const double count = static_cast<double>(p.n_symbols * p.n_subcarriers);
    CHECK(v / count == doctest::Approx(p.noise_power).epsilon(0.02));
    CHECK(std::abs(mean / count) < 5.0 * std::sqrt(p.noise_power / count));
  }
}

TEST_CASE("frame/params mismatch and ambiguous targets are rejected") {
  const SystemParams p = small_params();
  const FrameTx tx = generate_frame(7, p);
  SystemParams q = p;
  q.n_subcarriers = 16;
  std::mt19937_64 rng(0);
  CHECK_THROWS_AS(synthesize_echo(tx, {}, q, rng, false), std::invalid_argument);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(1.2 / p.subcarrier_spacing, 0.0, 0.0, {1.0, 0.0}, p));
  CHECK_THROWS_AS(synthesize_echo(tx, s, p, rng, false), std::invalid_argument);
}
