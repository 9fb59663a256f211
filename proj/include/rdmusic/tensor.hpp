#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace rdmusic {

using cplx = std::complex<double>;

/**
 * @brief Dense row-major complex tensor of fixed rank.
 *
 * The last index is contiguous, so for a frame stored as (symbol, subcarrier,
 * antenna) the per-resource-element antenna vector is a contiguous span.
 */
template <std::size_t Rank>
class CTensor {
 public:
  using Dims = std::array<std::size_t, Rank>;

  CTensor() { dims_.fill(0); }
  explicit CTensor(const Dims& dims)
      : dims_(dims), data_(element_count(dims), cplx{0.0, 0.0}) {}

  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  template <typename... Idx>
  cplx& operator()(Idx... idx) {
    return data_[offset(idx...)];
  }
  template <typename... Idx>
  const cplx& operator()(Idx... idx) const {
    return data_[offset(idx...)];
  }

  /// Contiguous slice over the trailing axis with all leading indices fixed.
  template <typename... Idx>
  std::span<cplx> row(Idx... idx) {
    static_assert(sizeof...(Idx) == Rank - 1);
    return std::span<cplx>(data_).subspan(offset(idx..., std::size_t{0}), dims_[Rank - 1]);
  }
  template <typename... Idx>
  std::span<const cplx> row(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank - 1);
    return std::span<const cplx>(data_).subspan(offset(idx..., std::size_t{0}), dims_[Rank - 1]);
  }

  /// Contiguous block spanning the last two axes (e.g. one M x N_c matrix).
  template <typename... Idx>
  std::span<cplx> matrix(Idx... idx) {
    static_assert(Rank >= 2 && sizeof...(Idx) == Rank - 2);
    return std::span<cplx>(data_).subspan(offset(idx..., std::size_t{0}, std::size_t{0}),
                                          dims_[Rank - 2] * dims_[Rank - 1]);
  }
  template <typename... Idx>
  std::span<const cplx> matrix(Idx... idx) const {
    static_assert(Rank >= 2 && sizeof...(Idx) == Rank - 2);
    return std::span<const cplx>(data_).subspan(offset(idx..., std::size_t{0}, std::size_t{0}),
                                                dims_[Rank - 2] * dims_[Rank - 1]);
  }

  bool operator==(const CTensor&) const = default;

 private:
  static std::size_t element_count(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  }

  template <typename... Idx>
  std::size_t offset(Idx... idx) const {
    static_assert(sizeof...(Idx) == Rank, "index count must match tensor rank");
    const std::array<std::size_t, Rank> index{static_cast<std::size_t>(idx)...};
    std::size_t off = 0;
    for (std::size_t a = 0; a < Rank; ++a) off = off * dims_[a] + index[a];
    return off;
  }

  Dims dims_;
  std::vector<cplx> data_;
};

using CTensor3 = CTensor<3>;
using CTensor4 = CTensor<4>;

}  // namespace rdmusic
