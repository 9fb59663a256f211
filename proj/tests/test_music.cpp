#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "reference/naive.hpp"
#include "rdmusic/music.hpp"

using namespace rdmusic;

namespace {

FrameRx echo_of(const FrameTx& tx, const Scenario& s, const SystemParams& p, bool noise = false,
                std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  return synthesize_echo(tx, s, p, rng, noise);
}

Eigen::MatrixXcd random_hermitian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
  return a * a.adjoint();
}

naive::CMat to_naive(const Eigen::MatrixXcd& m) {
  naive::CMat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

double nearest_peak_error(const MusicSpectrum& s, double theta) {
  double best = 1e9;
  for (double a : s.peak_angles) best = std::min(best, std::abs(a - theta));
  return best;
}

}  // namespace

TEST_CASE("single target: filtered snapshots are collinear with the steering vector") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(1, p);
  Scenario s;
  const double doa = deg_to_rad(-33.0);
  s.targets.push_back(target_from_delay_doppler(17.3 * p.delay_bin(), 2.2 * p.doppler_bin(), doa, {0.4, 0.3}, p));
  const FrameRx rx = echo_of(tx, s, p);
  const Eigen::VectorXcd a = steering_vector(doa, p.n_rx);
  for (const FilteredSnapshots& f : {delay_filter(rx, tx, 17.0 * p.delay_bin(), p),
                                     doppler_filter(rx, tx, 2.0 * p.doppler_bin(), p)}) {
    double worst = 0.0;
    for (Eigen::Index c = 0; c < f.snapshots.cols(); ++c) {
      const Eigen::VectorXcd y = f.snapshots.col(c);
      const Eigen::VectorXcd resid = y - a * (a.dot(y) / a.squaredNorm());
      worst = std::max(worst, resid.norm() / std::max(y.norm(), 1e-300));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("filters match the loop oracle") {
  SystemParams p = desk_preset();
  p.n_symbols = 8;
  p.n_subcarriers = 32;
  p.n_tx = 3;
  const FrameTx tx = generate_frame(2, p);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(4.6 * p.delay_bin(), -1.2 * p.doppler_bin(), 0.4, {1.0, 0.5}, p));
  s.targets.push_back(target_from_delay_doppler(9.1 * p.delay_bin(), 2.7 * p.doppler_bin(), -0.7, {0.3, 0.0}, p));
  const FrameRx rx = echo_of(tx, s, p, true, 5);
  const double tau = 4.6 * p.delay_bin(), fd = -1.2 * p.doppler_bin();

  const FilteredSnapshots d = delay_filter(rx, tx, tau, p);
  const naive::CMat dn = naive::delay_snapshots(rx, tx, tau, p);
  CHECK(naive::rel_err(to_naive(d.snapshots).v, dn.v) < 1e-12);

  const FilteredSnapshots g = doppler_filter(rx, tx, fd, p);
  CHECK(naive::rel_err(to_naive(g.snapshots).v, naive::doppler_snapshots(rx, tx, fd, p).v) < 1e-12);

  const SampleCovariance r = sample_covariance(d);
  CHECK(r.snapshot_count == p.n_tx * p.n_symbols);
  CHECK(naive::rel_err(to_naive(r.matrix).v, naive::covariance(dn).v) < 1e-12);
}

TEST_CASE("filters of an empty echo are zero; bad estimates throw") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(3, p);
  const FrameRx rx = echo_of(tx, {}, p);
  CHECK(delay_filter(rx, tx, 0.0, p).snapshots.norm() == 0.0);
  CHECK(doppler_filter(rx, tx, 0.0, p).snapshots.norm() == 0.0);
  CHECK_THROWS(delay_filter(rx, tx, -1e-9, p));
  CHECK_THROWS(delay_filter(rx, tx, p.max_delay(), p));
  CHECK_THROWS(doppler_filter(rx, tx, 1.1 * p.max_abs_doppler(), p));
}

TEST_CASE("mismatched filters reject the target") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(4, p);
  Scenario s;
  s.targets.push_back(target_from_delay_doppler(40.0 * p.delay_bin(), 3.0 * p.doppler_bin(), 0.2, {1.0, 0.0}, p));
  const FrameRx rx = echo_of(tx, s, p);
  const double on_d = delay_filter(rx, tx, 40.0 * p.delay_bin(), p).snapshots.squaredNorm();
  const double off_d = delay_filter(rx, tx, 48.0 * p.delay_bin(), p).snapshots.squaredNorm();
  CHECK(on_d >= 10.0 * off_d);
  const double on_f = doppler_filter(rx, tx, 3.0 * p.doppler_bin(), p).snapshots.squaredNorm();
  const double off_f = doppler_filter(rx, tx, 11.0 * p.doppler_bin(), p).snapshots.squaredNorm();
  CHECK(on_f >= 10.0 * off_f);
}

TEST_CASE("sample covariance") {
  Eigen::MatrixXcd one(3, 1);
  one << cplx(1, 2), cplx(0, -1), cplx(3, 0);
  const SampleCovariance r1 = sample_covariance(one);
  CHECK((r1.matrix - one * one.adjoint()).norm() < 1e-15);
  CHECK(r1.snapshot_count == 1);
  CHECK_THROWS(sample_covariance(Eigen::MatrixXcd(3, 0)));

  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd s(4, 32);
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = {g(rng), g(rng)};
  const naive::CMat ref = naive::covariance(to_naive(s));
  CHECK(naive::rel_err(to_naive(sample_covariance(s).matrix).v, ref.v) < 1e-12);

  const double sigma2 = 2.5;
  std::normal_distribution<double> h(0.0, std::sqrt(sigma2 / 2.0));
  Eigen::MatrixXcd noise(4, 20000);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = {h(rng), h(rng)};
  const Eigen::MatrixXcd avg = sample_covariance(noise).matrix / 20000.0;
  CHECK((avg - sigma2 * Eigen::MatrixXcd::Identity(4, 4)).norm() / (sigma2 * 2.0) < 0.1);
}

TEST_CASE("Hermitian eigendecomposition") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const Eigen::MatrixXcd r = random_hermitian(n, seed);
    const HermitianEigen e = hermitian_eigen(r);
    const Eigen::MatrixXcd back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - r).norm() / r.norm() < 1e-9);
    CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values[i - 1] <= e.values[i]);
    const auto ref = naive::hermitian_eigenvalues(to_naive(r));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(e.values[static_cast<Eigen::Index>(i)] - ref[i]) < 1e-9 * e.values.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("angle grid and spectrum peaks") {
  const auto grid = angle_grid(deg_to_rad(0.1));
  CHECK(grid.size() == 1801);
  CHECK(grid.front() == doctest::Approx(-kPi / 2.0));
  CHECK(grid.back() == doctest::Approx(kPi / 2.0));
  CHECK(grid[900] == 0.0);

  const std::vector<double> v{0, 3, 1, 5, 2, 2, 4, 0, 9};
  const auto pk = spectrum_peaks(v, 5);
  REQUIRE(pk.size() == 3);
  CHECK(pk[0] == 3);
  CHECK(pk[1] == 6);
  CHECK(pk[2] == 1);
  CHECK(spectrum_peaks(v, 1).size() == 1);
}

TEST_CASE("MUSIC: single source peaks within one grid step") {
  const double eps = 1e-6;
  for (double deg : {-71.3, -20.0, 0.0, 8.85, 44.44, 60.0}) {
    const Eigen::VectorXcd a = steering_vector(deg_to_rad(deg), 4);
    SampleCovariance r{a * a.adjoint() + eps * Eigen::MatrixXcd::Identity(4, 4), 1};
    MusicOptions o;
    o.signal_dim = 1;
    o.peak_count = 1;
    const MusicSpectrum s = music_spectrum(r, o);
    REQUIRE(s.peak_angles.size() == 1);
    CHECK(std::abs(s.peak_angles[0] - deg_to_rad(deg)) <= deg_to_rad(0.1) + 1e-12);
  }
}

TEST_CASE("MUSIC: two sources at +-20 degrees") {
  const Eigen::VectorXcd a1 = steering_vector(deg_to_rad(-20.0), 4);
  const Eigen::VectorXcd a2 = steering_vector(deg_to_rad(20.0), 4);
  SampleCovariance r{a1 * a1.adjoint() + 0.5 * a2 * a2.adjoint() + 1e-3 * Eigen::MatrixXcd::Identity(4, 4), 1};
  const MusicSpectrum s = music_spectrum(r);
  REQUIRE(s.peak_angles.size() == 2);
  CHECK(nearest_peak_error(s, deg_to_rad(-20.0)) < deg_to_rad(0.05));
  CHECK(nearest_peak_error(s, deg_to_rad(20.0)) < deg_to_rad(0.05));
}

TEST_CASE("MUSIC: identity covariance has a flat spectrum") {
  SampleCovariance r{Eigen::MatrixXcd::Identity(4, 4), 1};
  const MusicSpectrum s = music_spectrum(r);
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  CHECK(sorted.back() <= 1.01 * median);
}

TEST_CASE("MUSIC: positive scaling leaves peaks unchanged") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXcd r = random_hermitian(4, 100 + seed);
    const MusicSpectrum base = music_spectrum({r, 1});
    for (double c : {1e-9, 0.37, 1e7}) {
      const MusicSpectrum scaled = music_spectrum({c * r, 1});
      CHECK(scaled.peak_angles == base.peak_angles);
    }
  }
}

TEST_CASE("MUSIC values match the Jacobi-projector oracle") {
  const auto grid = angle_grid(deg_to_rad(1.0));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXcd r = random_hermitian(4, 200 + seed);
    MusicOptions o;
    o.grid_step = deg_to_rad(1.0);
    const MusicSpectrum s = music_spectrum({r, 1}, o);
    CHECK(naive::rel_err(s.values, naive::music(to_naive(r), 2, grid)) < 1e-8);
  }
  CHECK_THROWS(music_spectrum({Eigen::MatrixXcd::Identity(4, 4), 1}, MusicOptions{4, 2}));
  CHECK_THROWS(music_spectrum({Eigen::MatrixXcd::Identity(4, 4), 1}, MusicOptions{0, 2}));
}

TEST_CASE("noiseless single target: the noise subspace is orthogonal to the steering vector") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(9, p);
  for (double deg : {-55.0, -3.0, 27.5}) {
    Scenario s;
    s.targets.push_back(
        target_from_delay_doppler(22.4 * p.delay_bin(), 1.6 * p.doppler_bin(), deg_to_rad(deg), {1e-6, 0.0}, p));
    const FrameRx rx = echo_of(tx, s, p);
    const SampleCovariance r = sample_covariance(delay_filter(rx, tx, 22.0 * p.delay_bin(), p));
    const HermitianEigen e = hermitian_eigen(r.matrix);
    const Eigen::VectorXcd a = steering_vector(deg_to_rad(deg), p.n_rx);
    CHECK((e.vectors.leftCols(3).adjoint() * a).norm() / a.norm() < 1e-6);
  }
}

TEST_CASE("delay-domain cross-terms average out for Doppler-separated targets") {
  const SystemParams p = desk_preset();
  const FrameTx tx = generate_frame(10, p);
  const double tau = 31.0 * p.delay_bin();
  Scenario a, b, both;
  a.targets.push_back(target_from_delay_doppler(tau, -2.0 * p.doppler_bin(), deg_to_rad(-25.0), {1.0, 0.0}, p));
  b.targets.push_back(target_from_delay_doppler(tau, 4.5 * p.doppler_bin(), deg_to_rad(30.0), {0.0, 0.8}, p));
  both.targets = {a.targets[0], b.targets[0]};
  const auto cov = [&](const Scenario& s) {
    return sample_covariance(delay_filter(echo_of(tx, s, p), tx, tau, p)).matrix;
  };
  const Eigen::MatrixXcd diag = cov(a) + cov(b);
  CHECK((cov(both) - diag).norm() / diag.norm() < 0.05);
}

TEST_CASE("eigen-gap model order") {
  Eigen::VectorXd v(4);
  v << 1.0, 1.1, 90.0, 100.0;
  CHECK(eigen_gap_order(v) == 2);
  v << 1e-20, 1e-20, 1e-20, 5.0;
  CHECK(eigen_gap_order(v) == 1);
  v << 1.0, 1.0, 1.0, 1.0;
  const std::size_t k = eigen_gap_order(v);
  CHECK(k >= 1);
  CHECK(k <= 3);
}
