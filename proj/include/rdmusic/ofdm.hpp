#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "rdmusic/params.hpp"
#include "rdmusic/tensor.hpp"

namespace rdmusic {

/// Square Gray-coded 64-QAM with unit average energy. Throws on index outside [0, 63].
cplx qam64_map(int index);

/// Transmit symbols x_mn[p], dims M x N_c x N_t.
struct FrameTx {
  CTensor3 symbols;
  std::uint64_t seed = 0;

  std::size_t n_symbols() const { return symbols.dim(0); }
  std::size_t n_subcarriers() const { return symbols.dim(1); }
  std::size_t n_tx() const { return symbols.dim(2); }
  /// Data vector x_mn over the transmit antennas.
  std::span<const cplx> vec(std::size_t m, std::size_t n) const { return symbols.row(m, n); }
};

/// I.i.d. uniform 64-QAM draws scaled to params.entry_power().
FrameTx generate_frame(std::mt19937_64& rng, const SystemParams& p);
/// Convenience overload that seeds its own engine and records the seed.
FrameTx generate_frame(std::uint64_t seed, const SystemParams& p);

}  // namespace rdmusic
