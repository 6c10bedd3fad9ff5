// Mono WAV reader/writer. Reads PCM 16/24/32 and IEEE float 32/64
// (multi-channel input is averaged down to mono); writes 32-bit float or
// 16-bit PCM.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rirforge::audio {

enum class SampleFormat { float32, pcm16 };

struct Wave {
  std::vector<double> samples;
  double sample_rate = 0.0;
};

Wave read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               double sample_rate, SampleFormat format = SampleFormat::float32);

}  // namespace rirforge::audio
