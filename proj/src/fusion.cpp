#include "rdmusic/fusion.hpp"

#include <cmath>
#include <stdexcept>

namespace rdmusic {

double candidate_power(const FrameRx& rx, const FrameTx& tx, double angle, const Detection& detection,
                       const SystemParams& p) {
  const std::size_t M = p.n_symbols, Nc = p.n_subcarriers, Nt = p.n_tx, Nr = p.n_rx;
  if (rx.n_symbols() != M || rx.n_subcarriers() != Nc || rx.n_rx() != Nr || tx.n_symbols() != M ||
      tx.n_subcarriers() != Nc || tx.n_tx() != Nt)
    throw std::invalid_argument("candidate_power: frame dimensions do not match params");
  const std::size_t doppler_grid = detection.doppler_grid ? detection.doppler_grid : M;
  const std::size_t range_grid = detection.range_grid ? detection.range_grid : Nc;
  if (detection.doppler_bin >= doppler_grid || detection.range_bin >= range_grid)
    throw std::invalid_argument("candidate_power: detection bin out of range");

  const Eigen::VectorXcd a_r = steering_vector(angle, Nr);
  const Eigen::VectorXcd a_t = steering_vector(angle, Nt);

  std::vector<cplx> col_phase(Nc);
  for (std::size_t n = 0; n < Nc; ++n)
    col_phase[n] = std::polar(1.0, 2.0 * kPi * static_cast<double>((n * detection.range_bin) % range_grid) /
                                       static_cast<double>(range_grid));

  cplx total{0.0, 0.0};
  for (std::size_t m = 0; m < M; ++m) {
    cplx row{0.0, 0.0};
    for (std::size_t n = 0; n < Nc; ++n) {
      const auto y = rx.vec(m, n);
      const auto x = tx.vec(m, n);
      cplx rx_beam{0.0, 0.0}, tx_beam{0.0, 0.0};
      for (std::size_t k = 0; k < Nr; ++k) rx_beam += std::conj(a_r[static_cast<Eigen::Index>(k)]) * y[k];
      for (std::size_t q = 0; q < Nt; ++q) tx_beam += a_t[static_cast<Eigen::Index>(q)] * x[q];
      row += rx_beam * std::conj(tx_beam) * col_phase[n];
    }
    const cplx row_phase = std::polar(1.0, 2.0 * kPi * static_cast<double>((m * detection.doppler_bin) % doppler_grid) /
                                               static_cast<double>(doppler_grid));
    total += row_phase * row;
  }
  return std::norm(total);
}

FusedEstimate fuse(const FrameRx& rx, const FrameTx& tx, const CandidateSet& candidates, const SystemParams& p) {
  if (candidates.delay_candidates.empty() && candidates.doppler_candidates.empty())
    throw std::invalid_argument("fuse: empty candidate set");

  FusedEstimate best;
  best.detection = candidates.detection;
  bool have = false;
  auto consider = [&](Domain domain, const std::vector<double>& angles, std::vector<double>& powers) {
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double power = candidate_power(rx, tx, angles[i], candidates.detection, p);
      powers.push_back(power);
      if (!have || power > best.winning_power) {
        have = true;
        best.doa_est = angles[i];
        best.winning_domain = domain;
        best.winning_index = i;
        best.winning_power = power;
      }
    }
  };
  consider(Domain::delay, candidates.delay_candidates, best.delay_powers);
  consider(Domain::doppler, candidates.doppler_candidates, best.doppler_powers);
  return best;
}

}  // namespace rdmusic
