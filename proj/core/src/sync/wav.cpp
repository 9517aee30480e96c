// SPDX-License-Identifier: Apache-2.0
#include "volcap/sync/wav.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace volcap::sync {
namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}
void put_u16(std::ofstream& out, std::uint16_t v) {
  out.write(reinterpret_cast<const char*>(&v), 2);
}

}  // namespace

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write wav: " + path.string());
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, clip.sample_rate);
  put_u32(out, clip.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.write("data", 4);
  put_u32(out, data_bytes);
  out.write(reinterpret_cast<const char*>(clip.samples.data()), data_bytes);
  if (!out) throw std::runtime_error("wav write failed: " + path.string());
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read wav: " + path.string());
  char riff[4], wave[4];
  std::uint32_t riff_size = 0;
  in.read(riff, 4);
  in.read(reinterpret_cast<char*>(&riff_size), 4);
  in.read(wave, 4);
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    throw std::runtime_error("not a wav file: " + path.string());

  AudioClip clip;
  std::uint16_t channels = 0, bits = 0;
  while (in) {
    char id[4];
    std::uint32_t size = 0;
    if (!in.read(id, 4) || !in.read(reinterpret_cast<char*>(&size), 4)) break;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      std::uint16_t format = 0, block = 0;
      std::uint32_t rate = 0, byte_rate = 0;
      in.read(reinterpret_cast<char*>(&format), 2);
      in.read(reinterpret_cast<char*>(&channels), 2);
      in.read(reinterpret_cast<char*>(&rate), 4);
      in.read(reinterpret_cast<char*>(&byte_rate), 4);
      in.read(reinterpret_cast<char*>(&block), 2);
      in.read(reinterpret_cast<char*>(&bits), 2);
      in.seekg(size - 16, std::ios::cur);
      if (format != 1 || channels != 1 || bits != 16)
        throw std::runtime_error("wav must be 16-bit PCM mono: " + path.string());
      clip.sample_rate = static_cast<int>(rate);
    } else if (std::memcmp(id, "data", 4) == 0) {
      clip.samples.resize(size / 2);
      in.read(reinterpret_cast<char*>(clip.samples.data()), size);
      return clip;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("wav has no data chunk: " + path.string());
}

}  // namespace volcap::sync
