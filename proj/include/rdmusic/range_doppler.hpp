#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rdmusic/echo.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/params.hpp"
#include "rdmusic/tensor.hpp"

namespace rdmusic {

using RealGrid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Matched-filtered virtual channels Ybar[k,l], dims N_r x N_t x M x N_c.
struct VirtualChannelData {
  CTensor4 matrices;

  std::size_t n_rx() const { return matrices.dim(0); }
  std::size_t n_tx() const { return matrices.dim(1); }
  std::size_t n_symbols() const { return matrices.dim(2); }
  std::size_t n_subcarriers() const { return matrices.dim(3); }
};

/// Integer zero-padding factors along the Doppler (symbol) and range (subcarrier) axes.
struct ZeroPad {
  std::size_t doppler = 1;
  std::size_t range = 1;
};

/// Per-channel complex maps chi[k,l] and their non-coherent sum.
struct RDMap {
  CTensor4 per_channel;  // N_r x N_t x M' x N_c'
  RealGrid integrated;   // M' x N_c'
  ZeroPad pad;

  std::size_t doppler_grid() const { return static_cast<std::size_t>(integrated.rows()); }
  std::size_t range_grid() const { return static_cast<std::size_t>(integrated.cols()); }
};

struct Detection {
  std::size_t doppler_bin = 0;
  std::size_t range_bin = 0;
  std::size_t doppler_grid = 0;  // size of the Doppler axis the bin refers to
  std::size_t range_grid = 0;
  double delay_est = 0.0;    // s
  double doppler_est = 0.0;  // Hz
  double peak_power = 0.0;
};

struct DetectionList {
  std::vector<Detection> detections;
  bool underfull = false;  // fewer peaks than requested
};

/// Ybar[k,l]_mn = ybar_mn[k] * conj(x_mn[l]).
VirtualChannelData matched_filter_frame(const FrameRx& rx, const FrameTx& tx);

/// chi[k,l] = F_M^T Ybar[k,l] F_Nc with positive-exponent DFT matrices, then sum_k,l |chi|^2.
RDMap range_doppler_map(const VirtualChannelData& data, ZeroPad pad = {});

/// sum_k,l |chi[k,l]|^2.
RealGrid integrate_noncoherent(const CTensor4& per_channel);

/**
 * Bin conventions for the positive-exponent 2D-DFT applied to
 * e^{-j2pi df tau n} e^{+j2pi fd m Tsym}: a delay tau peaks at range bin
 * tau*df*grid, a Doppler fd peaks at bin (-fd*Tsym*grid) mod grid.
 */
double range_bin_to_delay(std::size_t bin, std::size_t grid, const SystemParams& p);
double doppler_bin_to_frequency(std::size_t bin, std::size_t grid, const SystemParams& p);
std::size_t delay_to_range_bin(double delay, std::size_t grid, const SystemParams& p);
std::size_t frequency_to_doppler_bin(double doppler, std::size_t grid, const SystemParams& p);

/// Strict 3x3 local maxima with cyclic boundaries, descending by value (ties: lower index first).
std::vector<std::pair<std::size_t, std::size_t>> local_maxima(const RealGrid& grid);

/// The expected_count largest strict local maxima of the integrated map.
DetectionList detect_peaks(const RDMap& map, std::size_t expected_count, const SystemParams& p);

/// 2D cell-averaging CFAR on the integrated map.
struct CfarOptions {
  std::size_t guard = 2;
  std::size_t training = 8;
  double pfa = 1e-4;
  /// Number of exponential cells summed per map cell; 0 selects N_r*N_t.
  std::size_t integration_count = 0;
};

struct CfarResult {
  RealGrid threshold;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> exceed;
  double scale = 0.0;            // threshold / mean training level
  std::size_t training_cells = 0;
};

CfarResult cfar_threshold(const RDMap& map, const CfarOptions& opts = {});

/// CFAR crossings that are also strict local maxima, descending by power.
DetectionList cfar_detect(const RDMap& map, const SystemParams& p, const CfarOptions& opts = {});

}  // namespace rdmusic
