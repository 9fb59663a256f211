#include "rdmusic/echo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rdmusic {

FrameRx synthesize_echo(const FrameTx& tx, const Scenario& scenario, const SystemParams& p,
                        std::mt19937_64& rng, bool noise_on) {
  p.validate();
  if (tx.n_symbols() != p.n_symbols || tx.n_subcarriers() != p.n_subcarriers || tx.n_tx() != p.n_tx)
    throw std::invalid_argument("synthesize_echo: transmit frame does not match params");
  validate_scenario(scenario, p);

  const std::size_t M = p.n_symbols, Nc = p.n_subcarriers, Nt = p.n_tx, Nr = p.n_rx;
  const double tsym = p.symbol_duration();

  FrameRx rx;
  rx.echoes = CTensor3({M, Nc, Nr});

  std::vector<cplx> range_phase(Nc), doppler_phase(M);
  for (const Target& t : scenario.targets) {
    const Eigen::VectorXcd a_r = steering_vector(t.doa, Nr);
    const Eigen::VectorXcd a_t = steering_vector(t.doa, Nt);
    const double tau = t.delay();
    const double fd = t.doppler(p);
    for (std::size_t n = 0; n < Nc; ++n)
      range_phase[n] = std::polar(1.0, -2.0 * kPi * p.subcarrier_spacing * tau * static_cast<double>(n));
    for (std::size_t m = 0; m < M; ++m)
      doppler_phase[m] = std::polar(1.0, 2.0 * kPi * fd * static_cast<double>(m) * tsym);

    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t n = 0; n < Nc; ++n) {
        const auto x = tx.vec(m, n);
        cplx tx_gain{0.0, 0.0};
        for (std::size_t q = 0; q < Nt; ++q) tx_gain += a_t[static_cast<Eigen::Index>(q)] * x[q];
        const cplx s = t.reflection * tx_gain * range_phase[n] * doppler_phase[m];
        auto y = rx.echoes.row(m, n);
        for (std::size_t k = 0; k < Nr; ++k) y[k] += a_r[static_cast<Eigen::Index>(k)] * s;
      }
    }
  }

  if (noise_on && p.noise_power > 0.0) {
    std::normal_distribution<double> g(0.0, std::sqrt(p.noise_power / 2.0));
    for (cplx& y : rx.echoes.data()) {
      const double re = g(rng);
      const double im = g(rng);
      y += cplx(re, im);
    }
  }
  return rx;
}

}  // namespace rdmusic
