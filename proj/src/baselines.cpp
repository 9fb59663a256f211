#include "rdmusic/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft2d.hpp"
#include "rdmusic/fusion.hpp"
#include "rdmusic/range_doppler.hpp"

namespace rdmusic {

const char* to_string(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::sequential_music: return "sequential_music";
    case Method::dft_data_aided: return "dft_data_aided";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "proposed") return Method::proposed;
  if (name == "sequential_music") return Method::sequential_music;
  if (name == "dft_data_aided") return Method::dft_data_aided;
  throw std::invalid_argument("unknown method '" + name + "'");
}

BaselineResult sequential_music(const FrameRx& rx, const FrameTx& tx, const SystemParams& p, std::size_t n_targets,
                                const MusicOptions& opts) {
  if (n_targets < 1) throw std::invalid_argument("sequential_music: n_targets must be >= 1");
  const std::size_t M = p.n_symbols, Nc = p.n_subcarriers, Nt = p.n_tx, Nr = p.n_rx;
  const auto nr = static_cast<Eigen::Index>(Nr);

  // sum over (m, n, l) of ytilde ytilde^H = sum_mn (sum_l |x_mn[l]|^2) ybar ybar^H
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(nr, nr);
  Eigen::VectorXcd y(nr);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < Nc; ++n) {
      const auto yv = rx.vec(m, n);
      const auto xv = tx.vec(m, n);
      double weight = 0.0;
      for (std::size_t l = 0; l < Nt; ++l) weight += std::norm(xv[l]);
      for (Eigen::Index k = 0; k < nr; ++k) y[k] = yv[static_cast<std::size_t>(k)];
      r.noalias() += weight * (y * y.adjoint());
    }
  }
  SampleCovariance cov;
  cov.matrix = 0.5 * (r + r.adjoint());
  cov.snapshot_count = M * Nc * Nt;

  BaselineResult out;
  out.method_tag = Method::sequential_music;
  out.degraded = n_targets >= Nr;
  MusicOptions music = opts;
  music.eigen_gap = false;
  music.signal_dim = std::min(n_targets, Nr - 1);
  music.peak_count = n_targets;
  const MusicSpectrum spec = music_spectrum(cov, music);

  CTensor3 beam({1, M, Nc});
  for (double angle : spec.peak_angles) {
    const Eigen::VectorXcd a_r = steering_vector(angle, Nr);
    const Eigen::VectorXcd a_t = steering_vector(angle, Nt);
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t n = 0; n < Nc; ++n) {
        const auto yv = rx.vec(m, n);
        const auto xv = tx.vec(m, n);
        cplx rb{0.0, 0.0}, tb{0.0, 0.0};
        for (std::size_t k = 0; k < Nr; ++k) rb += std::conj(a_r[static_cast<Eigen::Index>(k)]) * yv[k];
        for (std::size_t q = 0; q < Nt; ++q) tb += a_t[static_cast<Eigen::Index>(q)] * xv[q];
        beam(0, m, n) = rb * std::conj(tb);
      }
    }
    detail::fft2d_positive_inplace(beam.data(), M, Nc, 1);
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t i = 0; i < M * Nc; ++i) {
      const double pw = std::norm(beam.data()[i]);
      if (pw > best_power) {
        best_power = pw;
        best = i;
      }
    }
    out.angles.push_back(angle);
    out.delays.push_back(range_bin_to_delay(best % Nc, Nc, p));
    out.dopplers.push_back(doppler_bin_to_frequency(best / Nc, M, p));
  }
  out.underfull = out.angles.size() < n_targets;
  return out;
}

std::vector<double> dft_angle_grid(std::size_t n_elems) {
  if (n_elems == 0) throw std::invalid_argument("dft_angle_grid: empty array");
  const auto n = static_cast<long long>(n_elems);
  std::vector<double> grid;
  for (long long q = -(n / 2); q < n - n / 2; ++q)
    grid.push_back(std::asin(2.0 * static_cast<double>(q) / static_cast<double>(n)));
  return grid;
}

BaselineResult dft_data_aided(const FrameRx& rx, const FrameTx& tx, const SystemParams& p, std::size_t n_targets) {
  if (n_targets < 1) throw std::invalid_argument("dft_data_aided: n_targets must be >= 1");
  const RDMap map = range_doppler_map(matched_filter_frame(rx, tx));
  const DetectionList dets = detect_peaks(map, n_targets, p);
  const std::vector<double> grid = dft_angle_grid(p.n_rx);

  BaselineResult out;
  out.method_tag = Method::dft_data_aided;
  for (const Detection& d : dets.detections) {
    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double pw = candidate_power(rx, tx, grid[q], d, p);
      if (pw > best_power) {
        best_power = pw;
        best = q;
      }
    }
    out.angles.push_back(grid[best]);
    out.delays.push_back(d.delay_est);
    out.dopplers.push_back(d.doppler_est);
  }
  out.underfull = dets.underfull;
  return out;
}

}  // namespace rdmusic
