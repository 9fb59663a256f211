#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rdmusic/fusion.hpp"
#include "rdmusic/harness.hpp"
#include "rdmusic/music.hpp"
#include "rdmusic/range_doppler.hpp"
#include "rdmusic/tensor.hpp"

namespace rdmusic {

/*
 * Binary tensor file, all fields little-endian:
 *   char[4]  magic "RDMT"
 *   u32      version (1)
 *   u32      rank
 *   u64      seed
 *   u64[rank] dims (row-major, last axis fastest)
 *   f64[2*N] interleaved real/imag samples
 */
struct TensorFile {
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  std::vector<cplx> data;
};

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> dims, std::span<const cplx> data,
                  std::uint64_t seed);

template <std::size_t Rank>
void write_tensor(const std::filesystem::path& path, const CTensor<Rank>& t, std::uint64_t seed = 0) {
  write_tensor(path, std::span<const std::size_t>(t.dims()), t.data(), seed);
}

TensorFile read_tensor(const std::filesystem::path& path);

/// Converts a loaded file back to a fixed-rank tensor; throws on rank mismatch.
template <std::size_t Rank>
CTensor<Rank> to_tensor(const TensorFile& f) {
  if (f.dims.size() != Rank) throw std::invalid_argument("tensor file rank mismatch");
  typename CTensor<Rank>::Dims dims;
  for (std::size_t i = 0; i < Rank; ++i) dims[i] = f.dims[i];
  CTensor<Rank> t(dims);
  std::copy(f.data.begin(), f.data.end(), t.data().begin());
  return t;
}

/// angle_deg,value
void write_spectrum_csv(std::ostream& os, const MusicSpectrum& spectrum);

/// doppler_bin,range_bin,power over the integrated map.
void write_rdmap_csv(std::ostream& os, const RealGrid& integrated);

/// trial,method,doppler_bin,range_bin,tau_s,fd_hz,power,theta_deg,winning_domain,winning_power
void write_detections_header(std::ostream& os);
void write_detections(std::ostream& os, const TrialRecord& rec, const SystemParams& p);

}  // namespace rdmusic
