// Impulse response container plus its on-disk convention: 32-bit float mono
// WAV with a JSON metadata sidecar (<name>.wav -> <name>.wav.json).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rirforge {

enum class RirMethod { fdtd, geometric, hybrid };

std::string to_string(RirMethod m);
RirMethod rir_method_from_string(const std::string& s);

struct ImpulseResponse {
  std::vector<double> samples;
  double sample_rate = 48000.0;
  RirMethod method = RirMethod::geometric;
  std::string scene_digest;
  nlohmann::json metadata = nlohmann::json::object();

  void validate() const;  // finite, non-empty, positive rate
  double energy() const;
};

void save_rir(const ImpulseResponse& rir, const std::filesystem::path& wav_path);
ImpulseResponse load_rir(const std::filesystem::path& wav_path);

}  // namespace rirforge
