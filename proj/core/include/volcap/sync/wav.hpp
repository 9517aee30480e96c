// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace volcap::sync {

struct AudioClip {
  int sample_rate = 16000;
  std::vector<std::int16_t> samples;  // mono PCM
};

void write_wav(const std::filesystem::path& path, const AudioClip& clip);
AudioClip read_wav(const std::filesystem::path& path);

}  // namespace volcap::sync
