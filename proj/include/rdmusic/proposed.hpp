#pragma once

#include <vector>

#include "rdmusic/fusion.hpp"
#include "rdmusic/music.hpp"
#include "rdmusic/range_doppler.hpp"

namespace rdmusic {

struct ProposedOptions {
  MusicOptions music;
  ZeroPad pad;
  bool use_cfar = false;  // otherwise the known-count top-K detector
  CfarOptions cfar;
};

/// Everything the two-stage estimator produced for one frame.
struct ProposedResult {
  RDMap map;
  DetectionList detections;
  std::vector<CandidateSet> candidates;
  std::vector<MusicSpectrum> delay_spectra;
  std::vector<MusicSpectrum> doppler_spectra;
  std::vector<FusedEstimate> estimates;
};

/// MUSIC spectra and candidates for one detection in both filter domains.
struct DetectionCandidates {
  CandidateSet candidates;
  MusicSpectrum delay_spectrum;
  MusicSpectrum doppler_spectrum;
};

DetectionCandidates doa_candidates(const FrameRx& rx, const FrameTx& tx, const Detection& detection,
                                   const SystemParams& p, const MusicOptions& opts);

/**
 * Matched filtering, range-Doppler maps, non-coherent detection, then per
 * detection delay- and Doppler-domain MUSIC and power-based fusion.
 * expected_count is the known target count for the top-K detector (ignored with CFAR).
 */
ProposedResult estimate_proposed(const FrameRx& rx, const FrameTx& tx, const SystemParams& p,
                                 std::size_t expected_count, const ProposedOptions& opts = {});

}  // namespace rdmusic
