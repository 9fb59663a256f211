#pragma once

#include <vector>

#include "rdmusic/echo.hpp"
#include "rdmusic/music.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/range_doppler.hpp"

namespace rdmusic {

struct CandidateSet {
  Detection detection;
  std::vector<double> delay_candidates;    // rad, ordered by MUSIC peak height
  std::vector<double> doppler_candidates;
};

struct FusedEstimate {
  Detection detection;
  double doa_est = 0.0;
  Domain winning_domain = Domain::delay;
  std::size_t winning_index = 0;
  double winning_power = 0.0;
  std::vector<double> delay_powers;    // candidate power map, same order as the candidate set
  std::vector<double> doppler_powers;
};

/**
 * Receive/transmit beamforming toward `angle`, data matched filtering, and the
 * positive-exponent 2D-DFT evaluated at the detection's bin. Returns |.|^2.
 */
double candidate_power(const FrameRx& rx, const FrameTx& tx, double angle, const Detection& detection,
                       const SystemParams& p);

/// Picks the candidate with the largest candidate_power; ties prefer delay, then lower index.
FusedEstimate fuse(const FrameRx& rx, const FrameTx& tx, const CandidateSet& candidates, const SystemParams& p);

}  // namespace rdmusic
