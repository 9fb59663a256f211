#include "rdmusic/ofdm.hpp"

#include <cmath>
#include <stdexcept>

namespace rdmusic {

namespace {

// 3 Gray bits -> amplitude level in {-7, -5, ..., 7}.
int gray_level(int bits) {
  const int binary = bits ^ (bits >> 1) ^ (bits >> 2);
  return 2 * binary - 7;
}

}  // namespace

cplx qam64_map(int index) {
  if (index < 0 || index > 63) throw std::invalid_argument("qam64_map: index must be in [0, 63]");
  static const double scale = 1.0 / std::sqrt(42.0);
  return cplx(gray_level(index >> 3), gray_level(index & 7)) * scale;
}

FrameTx generate_frame(std::mt19937_64& rng, const SystemParams& p) {
  p.validate();
  FrameTx frame;
  frame.symbols = CTensor3({p.n_symbols, p.n_subcarriers, p.n_tx});
  const double amp = std::sqrt(p.entry_power());
  std::uniform_int_distribution<int> pick(0, 63);
  for (cplx& x : frame.symbols.data()) x = amp * qam64_map(pick(rng));
  return frame;
}

FrameTx generate_frame(std::uint64_t seed, const SystemParams& p) {
  std::mt19937_64 rng(seed);
  FrameTx frame = generate_frame(rng, p);
  frame.seed = seed;
  return frame;
}

}  // namespace rdmusic
