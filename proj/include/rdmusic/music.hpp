#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rdmusic/echo.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/params.hpp"

namespace rdmusic {

enum class Domain { delay, doppler };

const char* to_string(Domain d);

/// Receive-array snapshots after delay or Doppler filtering, N_r x S.
struct FilteredSnapshots {
  Eigen::MatrixXcd snapshots;
  Domain domain = Domain::delay;
  double filter_value = 0.0;  // tau_hat (s) or f_hat (Hz)
};

/**
 * Temporal matched filter at delay_est over the subcarriers of every symbol
 * and transmit channel: column l*M + m holds
 * (1/sqrt(N_c)) sum_n ybar_mn conj(x_mn[l]) e^{+j2pi df tau_hat n}.
 * Throws when delay_est is outside [0, 1/df).
 */
FilteredSnapshots delay_filter(const FrameRx& rx, const FrameTx& tx, double delay_est, const SystemParams& p);

/**
 * Filter along the OFDM symbols at doppler_est for every subcarrier and
 * transmit channel: column l*N_c + n holds
 * (1/sqrt(N_c)) sum_m ybar_mn conj(x_mn[l]) e^{-j2pi f_hat m Tsym}.
 * The 1/sqrt(N_c) normalization is kept for both domains; MUSIC is scale-invariant.
 */
FilteredSnapshots doppler_filter(const FrameRx& rx, const FrameTx& tx, double doppler_est,
                                 const SystemParams& p);

struct SampleCovariance {
  Eigen::MatrixXcd matrix;  // unnormalized sum of outer products, Hermitian
  std::size_t snapshot_count = 0;
};

SampleCovariance sample_covariance(const Eigen::MatrixXcd& snapshots);
inline SampleCovariance sample_covariance(const FilteredSnapshots& s) { return sample_covariance(s.snapshots); }

/// Eigenvalues ascending with matching eigenvector columns.
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& matrix);

/// Model order from the largest ratio of consecutive ascending eigenvalues, clamped to [1, N-1].
std::size_t eigen_gap_order(const Eigen::VectorXd& ascending_values);

struct MusicOptions {
  std::size_t signal_dim = 2;  // P_sig
  std::size_t peak_count = 2;  // P
  double grid_step = deg_to_rad(0.1);
  bool eigen_gap = false;      // estimate P_sig from the spectrum of the covariance instead
};

struct MusicSpectrum {
  std::vector<double> grid;    // rad, [-pi/2, pi/2]
  std::vector<double> values;
  std::vector<double> peak_angles;
  std::size_t signal_dim = 0;
};

/// Uniform angle grid covering [-pi/2, pi/2] inclusive.
std::vector<double> angle_grid(double step);

/// Indices of strict interior local maxima, descending by value, at most `count`.
std::vector<std::size_t> spectrum_peaks(const std::vector<double>& values, std::size_t count);

/**
 * MUSIC pseudo-spectrum 1 / (a^H E_n E_n^H a) with E_n spanning the
 * N_r - P_sig smallest eigenvalues. Throws when P_sig is not in [1, N_r).
 */
MusicSpectrum music_spectrum(const SampleCovariance& cov, const MusicOptions& opts = {});

/// Same, evaluated from a precomputed noise-subspace basis.
std::vector<double> music_values(const Eigen::MatrixXcd& noise_basis, const std::vector<double>& grid);

}  // namespace rdmusic
