#include "rdmusic/range_doppler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <boost/math/distributions/fisher_f.hpp>

#include "fft2d.hpp"

namespace rdmusic {

VirtualChannelData matched_filter_frame(const FrameRx& rx, const FrameTx& tx) {
  if (rx.n_symbols() != tx.n_symbols() || rx.n_subcarriers() != tx.n_subcarriers())
    throw std::invalid_argument("matched_filter_frame: rx/tx grid mismatch");
  const std::size_t M = rx.n_symbols(), Nc = rx.n_subcarriers(), Nr = rx.n_rx(), Nt = tx.n_tx();

  VirtualChannelData out;
  out.matrices = CTensor4({Nr, Nt, M, Nc});
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < Nc; ++n) {
      const auto y = rx.vec(m, n);
      const auto x = tx.vec(m, n);
      for (std::size_t k = 0; k < Nr; ++k)
        for (std::size_t l = 0; l < Nt; ++l) out.matrices(k, l, m, n) = y[k] * std::conj(x[l]);
    }
  }
  return out;
}

RealGrid integrate_noncoherent(const CTensor4& per_channel) {
  const std::size_t Nr = per_channel.dim(0), Nt = per_channel.dim(1);
  const std::size_t rows = per_channel.dim(2), cols = per_channel.dim(3);
  RealGrid sum = RealGrid::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t k = 0; k < Nr; ++k) {
    for (std::size_t l = 0; l < Nt; ++l) {
      const auto chi = per_channel.matrix(k, l);
      for (std::size_t i = 0; i < rows * cols; ++i) sum.data()[i] += std::norm(chi[i]);
    }
  }
  return sum;
}

RDMap range_doppler_map(const VirtualChannelData& data, ZeroPad pad) {
  if (pad.doppler == 0 || pad.range == 0) throw std::invalid_argument("range_doppler_map: zero pad factor");
  const std::size_t Nr = data.n_rx(), Nt = data.n_tx(), M = data.n_symbols(), Nc = data.n_subcarriers();
  const std::size_t Mp = M * pad.doppler, Ncp = Nc * pad.range;

  RDMap map;
  map.pad = pad;
  map.per_channel = CTensor4({Nr, Nt, Mp, Ncp});
  for (std::size_t k = 0; k < Nr; ++k)
    for (std::size_t l = 0; l < Nt; ++l)
      for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < Nc; ++n) map.per_channel(k, l, m, n) = data.matrices(k, l, m, n);

  detail::fft2d_positive_inplace(map.per_channel.data(), Mp, Ncp, Nr * Nt);
  map.integrated = integrate_noncoherent(map.per_channel);
  return map;
}

double range_bin_to_delay(std::size_t bin, std::size_t grid, const SystemParams& p) {
  return static_cast<double>(bin % grid) / (p.subcarrier_spacing * static_cast<double>(grid));
}

double doppler_bin_to_frequency(std::size_t bin, std::size_t grid, const SystemParams& p) {
  const auto g = static_cast<long long>(grid);
  auto s = static_cast<long long>(bin % grid);
  if (2 * s >= g) s -= g;
  return -static_cast<double>(s) / (static_cast<double>(grid) * p.symbol_duration());
}

std::size_t delay_to_range_bin(double delay, std::size_t grid, const SystemParams& p) {
  const double pos = delay * p.subcarrier_spacing * static_cast<double>(grid);
  const auto g = static_cast<long long>(grid);
  const long long b = static_cast<long long>(std::llround(pos));
  return static_cast<std::size_t>(((b % g) + g) % g);
}

std::size_t frequency_to_doppler_bin(double doppler, std::size_t grid, const SystemParams& p) {
  const double pos = -doppler * p.symbol_duration() * static_cast<double>(grid);
  const auto g = static_cast<long long>(grid);
  const long long b = static_cast<long long>(std::llround(pos));
  return static_cast<std::size_t>(((b % g) + g) % g);
}

std::vector<std::pair<std::size_t, std::size_t>> local_maxima(const RealGrid& grid) {
  const auto rows = static_cast<std::size_t>(grid.rows());
  const auto cols = static_cast<std::size_t>(grid.cols());
  std::vector<std::pair<std::size_t, std::size_t>> peaks;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      bool is_max = true;
      for (int dr = -1; dr <= 1 && is_max; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const std::size_t rr = (r + rows + static_cast<std::size_t>(dr + 1) - 1) % rows;
          const std::size_t cc = (c + cols + static_cast<std::size_t>(dc + 1) - 1) % cols;
          if (rr == r && cc == c) continue;
          if (!(v > grid(static_cast<Eigen::Index>(rr), static_cast<Eigen::Index>(cc)))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.emplace_back(r, c);
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](const auto& a, const auto& b) {
    return grid(static_cast<Eigen::Index>(a.first), static_cast<Eigen::Index>(a.second)) >
           grid(static_cast<Eigen::Index>(b.first), static_cast<Eigen::Index>(b.second));
  });
  return peaks;
}

namespace {

Detection make_detection(const RDMap& map, std::size_t r, std::size_t c, const SystemParams& p) {
  Detection d;
  d.doppler_bin = r;
  d.range_bin = c;
  d.doppler_grid = map.doppler_grid();
  d.range_grid = map.range_grid();
  d.delay_est = range_bin_to_delay(c, d.range_grid, p);
  d.doppler_est = doppler_bin_to_frequency(r, d.doppler_grid, p);
  d.peak_power = map.integrated(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return d;
}

}  // namespace

DetectionList detect_peaks(const RDMap& map, std::size_t expected_count, const SystemParams& p) {
  if (expected_count < 1) throw std::invalid_argument("detect_peaks: expected_count must be >= 1");
  const auto peaks = local_maxima(map.integrated);
  DetectionList out;
  const std::size_t take = std::min(expected_count, peaks.size());
  for (std::size_t i = 0; i < take; ++i) out.detections.push_back(make_detection(map, peaks[i].first, peaks[i].second, p));
  out.underfull = take < expected_count;
  return out;
}

namespace {

// Cyclic moving sum of width 2*half+1 along rows then columns.
RealGrid cyclic_box_sum(const RealGrid& in, std::size_t half) {
  const auto rows = static_cast<std::size_t>(in.rows());
  const auto cols = static_cast<std::size_t>(in.cols());
  RealGrid tmp(in.rows(), in.cols()), out(in.rows(), in.cols());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::size_t d = 0; d <= 2 * half; ++d)
        s += in(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>((c + cols * (half + 1) + d - half) % cols));
      tmp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0.0;
      for (std::size_t d = 0; d <= 2 * half; ++d)
        s += tmp(static_cast<Eigen::Index>((r + rows * (half + 1) + d - half) % rows), static_cast<Eigen::Index>(c));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
    }
  }
  return out;
}

}  // namespace

CfarResult cfar_threshold(const RDMap& map, const CfarOptions& opts) {
  if (!(opts.pfa > 0.0 && opts.pfa < 1.0)) throw std::invalid_argument("cfar: pfa must be in (0, 1)");
  if (opts.training == 0) throw std::invalid_argument("cfar: training must be positive");
  const std::size_t outer = opts.guard + opts.training;
  const std::size_t width = 2 * outer + 1;
  if (width > map.doppler_grid() || width > map.range_grid())
    throw std::invalid_argument("cfar: window larger than the map");

  std::size_t L = opts.integration_count;
  if (L == 0) L = map.per_channel.dim(0) * map.per_channel.dim(1);
  if (L == 0) throw std::invalid_argument("cfar: integration count unknown");

  const std::size_t inner_width = 2 * opts.guard + 1;
  CfarResult res;
  res.training_cells = width * width - inner_width * inner_width;

  // Under noise each map cell is Gamma(L); the cell over the training mean is F(2L, 2L*N).
  const double d1 = 2.0 * static_cast<double>(L);
  const double d2 = d1 * static_cast<double>(res.training_cells);
  const boost::math::fisher_f_distribution<double> fdist(d1, d2);
  res.scale = boost::math::quantile(boost::math::complement(fdist, opts.pfa));

  const RealGrid outer_sum = cyclic_box_sum(map.integrated, outer);
  const RealGrid inner_sum = cyclic_box_sum(map.integrated, opts.guard);
  res.threshold = (outer_sum - inner_sum) * (res.scale / static_cast<double>(res.training_cells));
  res.exceed = (map.integrated.array() > res.threshold.array()).matrix();
  return res;
}

DetectionList cfar_detect(const RDMap& map, const SystemParams& p, const CfarOptions& opts) {
  const CfarResult cfar = cfar_threshold(map, opts);
  DetectionList out;
  for (const auto& [r, c] : local_maxima(map.integrated)) {
    if (cfar.exceed(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)))
      out.detections.push_back(make_detection(map, r, c, p));
  }
  out.underfull = out.detections.empty();
  return out;
}

}  // namespace rdmusic
