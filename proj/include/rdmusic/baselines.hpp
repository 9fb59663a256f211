#pragma once

#include <cstddef>
#include <vector>

#include "rdmusic/echo.hpp"
#include "rdmusic/music.hpp"
#include "rdmusic/ofdm.hpp"
#include "rdmusic/params.hpp"

namespace rdmusic {

enum class Method { proposed, sequential_music, dft_data_aided };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

/*
 * Simplified stand-ins for the two comparison methods. They reproduce the
 * structural limitation each one is known for (a single spatial covariance
 * for all targets; a DFT angle codebook), not any particular published
 * implementation.
 */
struct BaselineResult {
  std::vector<double> angles;    // rad
  std::vector<double> delays;    // s
  std::vector<double> dopplers;  // Hz
  Method method_tag = Method::sequential_music;
  bool underfull = false;  // fewer estimates than requested
  bool degraded = false;   // requested count exhausts the array (sequential MUSIC only)
};

/**
 * Global spatial covariance from every matched-filtered snapshot, MUSIC with
 * P_sig = min(n_targets, N_r - 1), then per angle a beamformed 2D-DFT whose
 * argmax gives delay and Doppler.
 */
BaselineResult sequential_music(const FrameRx& rx, const FrameTx& tx, const SystemParams& p, std::size_t n_targets,
                                const MusicOptions& opts = {});

/// Sine-space DFT beam directions asin(2q/N) for q = -floor(N/2) .. ceil(N/2) - 1.
std::vector<double> dft_angle_grid(std::size_t n_elems);

/**
 * Range-Doppler detection as in the proposed path, then per detection the
 * DFT beam (joint transmit/receive steering on the N_r-point grid) with the
 * largest power at the detected bin.
 */
BaselineResult dft_data_aided(const FrameRx& rx, const FrameTx& tx, const SystemParams& p, std::size_t n_targets);

}  // namespace rdmusic
