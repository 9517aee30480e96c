// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace volcap::sync {

/// Per-sensor frame timestamps (ms), strictly increasing within a sensor.
struct Timeline {
  std::vector<std::vector<double>> times;

  int sensor_count() const { return static_cast<int>(times.size()); }
  void validate() const;
};

/// One synchronized group of frames: a frame index per sensor. Quality is
/// the maximum pairwise timestamp difference.
struct GoF {
  std::vector<int> indices;
  double inconsistency_ms = 0;
};

double inconsistency_ms(const Timeline& timeline, const std::vector<int>& indices);

/// Lag (ms) of signal `a` relative to `ref`, from the argmax of their
/// zero-mean cross-correlation computed in the frequency domain. Positive
/// when events in `a` occur later. Throws on flat input.
double audio_offset_ms(std::span<const std::int16_t> a, std::span<const std::int16_t> ref,
                       int sample_rate);

/// Places local timelines on the reference one: T_k(n) - offset_k.
Timeline align_timelines(const Timeline& timeline, const std::vector<double>& offsets_ms);

/// First group: exhaustive minimum-inconsistency combination over the
/// first `window` frames of each sensor.
GoF initial_gof(const Timeline& timeline, int window = 5);

/// Greedy step: among all advance patterns s in {0,1}^K minus zero (with
/// exhausted sensors forced to 0), the minimum-inconsistency candidate.
/// Ties prefer advancing more sensors, then the lexicographically smallest
/// pattern. Returns nothing when every sensor is exhausted.
std::optional<GoF> next_gof(const Timeline& timeline, const GoF& current);

/// initial_gof plus next_gof iterated to the end of all sequences.
std::vector<GoF> gof_sequence(const Timeline& timeline, int init_window = 5);

void write_gof_csv(const std::filesystem::path& path, const std::vector<GoF>& gofs);
std::vector<GoF> read_gof_csv(const std::filesystem::path& path);

}  // namespace volcap::sync
