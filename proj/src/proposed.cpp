#include "rdmusic/proposed.hpp"

#include <algorithm>

namespace rdmusic {

DetectionCandidates doa_candidates(const FrameRx& rx, const FrameTx& tx, const Detection& detection,
                                   const SystemParams& p, const MusicOptions& opts) {
  MusicOptions music = opts;
  music.signal_dim = std::min(music.signal_dim, p.n_rx - 1);

  DetectionCandidates out;
  out.candidates.detection = detection;
  out.delay_spectrum = music_spectrum(sample_covariance(delay_filter(rx, tx, detection.delay_est, p)), music);
  out.doppler_spectrum = music_spectrum(sample_covariance(doppler_filter(rx, tx, detection.doppler_est, p)), music);
  out.candidates.delay_candidates = out.delay_spectrum.peak_angles;
  out.candidates.doppler_candidates = out.doppler_spectrum.peak_angles;
  return out;
}

ProposedResult estimate_proposed(const FrameRx& rx, const FrameTx& tx, const SystemParams& p,
                                 std::size_t expected_count, const ProposedOptions& opts) {
  ProposedResult res;
  res.map = range_doppler_map(matched_filter_frame(rx, tx), opts.pad);
  res.detections = opts.use_cfar ? cfar_detect(res.map, p, opts.cfar) : detect_peaks(res.map, expected_count, p);

  for (const Detection& det : res.detections.detections) {
    DetectionCandidates dc = doa_candidates(rx, tx, det, p, opts.music);
    if (dc.candidates.delay_candidates.empty() && dc.candidates.doppler_candidates.empty())
      dc.candidates.delay_candidates.push_back(0.0);  // flat spectra: broadside fallback
    res.estimates.push_back(fuse(rx, tx, dc.candidates, p));
    res.candidates.push_back(std::move(dc.candidates));
    res.delay_spectra.push_back(std::move(dc.delay_spectrum));
    res.doppler_spectra.push_back(std::move(dc.doppler_spectrum));
  }
  return res;
}

}  // namespace rdmusic
