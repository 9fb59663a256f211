#include "rdmusic/music.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rdmusic {

const char* to_string(Domain d) { return d == Domain::delay ? "delay" : "doppler"; }

namespace {

void check_frames(const FrameRx& rx, const FrameTx& tx, const SystemParams& p) {
  if (rx.n_symbols() != p.n_symbols || rx.n_subcarriers() != p.n_subcarriers || rx.n_rx() != p.n_rx ||
      tx.n_symbols() != p.n_symbols || tx.n_subcarriers() != p.n_subcarriers || tx.n_tx() != p.n_tx)
    throw std::invalid_argument("filter: frame dimensions do not match params");
}

}  // namespace

FilteredSnapshots delay_filter(const FrameRx& rx, const FrameTx& tx, double delay_est, const SystemParams& p) {
  check_frames(rx, tx, p);
  if (!(delay_est >= 0.0 && delay_est < p.max_delay()))
    throw std::invalid_argument("delay_filter: delay estimate outside [0, 1/df)");
  const std::size_t M = p.n_symbols, Nc = p.n_subcarriers, Nt = p.n_tx, Nr = p.n_rx;

  std::vector<cplx> phase(Nc);
  const double norm = 1.0 / std::sqrt(static_cast<double>(Nc));
  for (std::size_t n = 0; n < Nc; ++n)
    phase[n] = norm * std::polar(1.0, 2.0 * kPi * p.subcarrier_spacing * delay_est * static_cast<double>(n));

  FilteredSnapshots out;
  out.domain = Domain::delay;
  out.filter_value = delay_est;
  out.snapshots = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(Nr), static_cast<Eigen::Index>(Nt * M));
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < Nc; ++n) {
      const auto y = rx.vec(m, n);
      const auto x = tx.vec(m, n);
      for (std::size_t l = 0; l < Nt; ++l) {
        const cplx w = std::conj(x[l]) * phase[n];
        const auto col = static_cast<Eigen::Index>(l * M + m);
        for (std::size_t k = 0; k < Nr; ++k) out.snapshots(static_cast<Eigen::Index>(k), col) += y[k] * w;
      }
    }
  }
  return out;
}

FilteredSnapshots doppler_filter(const FrameRx& rx, const FrameTx& tx, double doppler_est,
                                 const SystemParams& p) {
  check_frames(rx, tx, p);
  if (!(std::abs(doppler_est) <= p.max_abs_doppler()))
    throw std::invalid_argument("doppler_filter: Doppler estimate outside the unambiguous interval");
  const std::size_t M = p.n_symbols, Nc = p.n_subcarriers, Nt = p.n_tx, Nr = p.n_rx;
  const double tsym = p.symbol_duration();

  std::vector<cplx> phase(M);
  const double norm = 1.0 / std::sqrt(static_cast<double>(Nc));
  for (std::size_t m = 0; m < M; ++m)
    phase[m] = norm * std::polar(1.0, -2.0 * kPi * doppler_est * static_cast<double>(m) * tsym);

  FilteredSnapshots out;
  out.domain = Domain::doppler;
  out.filter_value = doppler_est;
  out.snapshots = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(Nr), static_cast<Eigen::Index>(Nt * Nc));
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < Nc; ++n) {
      const auto y = rx.vec(m, n);
      const auto x = tx.vec(m, n);
      for (std::size_t l = 0; l < Nt; ++l) {
        const cplx w = std::conj(x[l]) * phase[m];
        const auto col = static_cast<Eigen::Index>(l * Nc + n);
        for (std::size_t k = 0; k < Nr; ++k) out.snapshots(static_cast<Eigen::Index>(k), col) += y[k] * w;
      }
    }
  }
  return out;
}

SampleCovariance sample_covariance(const Eigen::MatrixXcd& snapshots) {
  if (snapshots.cols() < 1) throw std::invalid_argument("sample_covariance: need at least one snapshot");
  SampleCovariance cov;
  cov.snapshot_count = static_cast<std::size_t>(snapshots.cols());
  const Eigen::MatrixXcd r = snapshots * snapshots.adjoint();
  cov.matrix = 0.5 * (r + r.adjoint());
  return cov;
}

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: decomposition failed");
  // Eigen already sorts ascending; the stable sort pins index order for exact ties.
  const Eigen::Index n = matrix.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return solver.eigenvalues()[a] < solver.eigenvalues()[b]; });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()[order[static_cast<std::size_t>(i)]];
    out.vectors.col(i) = solver.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::size_t eigen_gap_order(const Eigen::VectorXd& ascending_values) {
  const auto n = static_cast<std::size_t>(ascending_values.size());
  if (n < 2) return 1;
  const double floor = std::max(ascending_values.cwiseAbs().maxCoeff(), 1e-300) * 1e-15;
  std::size_t best = n - 1;
  double best_ratio = -1.0;
  // Split between i-1 and i: noise = [0, i), signal = [i, n).
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = std::max(ascending_values[static_cast<Eigen::Index>(i - 1)], floor);
    const double hi = std::max(ascending_values[static_cast<Eigen::Index>(i)], floor);
    const double ratio = hi / lo;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return std::clamp<std::size_t>(n - best, 1, n - 1);
}

std::vector<double> angle_grid(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("angle_grid: step must be positive");
  const auto half = static_cast<std::size_t>(std::floor((kPi / 2.0) / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(2 * half + 1);
  for (std::size_t i = 0; i <= 2 * half; ++i)
    grid.push_back((static_cast<double>(i) - static_cast<double>(half)) * step);
  return grid;
}

std::vector<std::size_t> spectrum_peaks(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) peaks.push_back(i);
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

std::vector<double> music_values(const Eigen::MatrixXcd& noise_basis, const std::vector<double>& grid) {
  const auto n = static_cast<std::size_t>(noise_basis.rows());
  std::vector<double> values(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const Eigen::VectorXcd a = steering_vector(grid[g], n);
    const double den = (noise_basis.adjoint() * a).squaredNorm();
    values[g] = 1.0 / std::max(den, std::numeric_limits<double>::min());
  }
  return values;
}

MusicSpectrum music_spectrum(const SampleCovariance& cov, const MusicOptions& opts) {
  const auto n = static_cast<std::size_t>(cov.matrix.rows());
  const HermitianEigen eig = hermitian_eigen(cov.matrix);
  const std::size_t p_sig = opts.eigen_gap ? eigen_gap_order(eig.values) : opts.signal_dim;
  if (p_sig < 1 || p_sig >= n)
    throw std::invalid_argument("music_spectrum: signal dimension must satisfy 1 <= P_sig < N_r");

  MusicSpectrum out;
  out.signal_dim = p_sig;
  out.grid = angle_grid(opts.grid_step);
  out.values = music_values(eig.vectors.leftCols(static_cast<Eigen::Index>(n - p_sig)), out.grid);
  for (std::size_t idx : spectrum_peaks(out.values, opts.peak_count)) out.peak_angles.push_back(out.grid[idx]);
  return out;
}

}  // namespace rdmusic
