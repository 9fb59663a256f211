#pragma once

#include <random>

#include "rdmusic/ofdm.hpp"
#include "rdmusic/params.hpp"
#include "rdmusic/tensor.hpp"

namespace rdmusic {

/// Received DFT-domain echoes ybar_mn[k], dims M x N_c x N_r.
struct FrameRx {
  CTensor3 echoes;

  std::size_t n_symbols() const { return echoes.dim(0); }
  std::size_t n_subcarriers() const { return echoes.dim(1); }
  std::size_t n_rx() const { return echoes.dim(2); }
  std::span<const cplx> vec(std::size_t m, std::size_t n) const { return echoes.row(m, n); }
};

/**
 * @brief Synthesizes the per-subcarrier received echo of every target.
 *
 * ybar_mn = sum_i alpha_i a_R(theta_i) a_T(theta_i)^T x_mn e^{-j2pi df tau_i n}
 *           e^{+j2pi fd_i m T_sym} + noise,
 * with noise i.i.d. CN(0, params.noise_power) per antenna when noise_on.
 * Throws std::invalid_argument on frame/params mismatch or an ambiguous target.
 */
FrameRx synthesize_echo(const FrameTx& tx, const Scenario& scenario, const SystemParams& p,
                        std::mt19937_64& rng, bool noise_on);

}  // namespace rdmusic
