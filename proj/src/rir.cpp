#include "rirforge/rir.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rirforge/audio.hpp"

namespace rirforge {

std::string to_string(RirMethod m) {
  switch (m) {
    case RirMethod::fdtd: return "fdtd";
    case RirMethod::geometric: return "geometric";
    case RirMethod::hybrid: return "hybrid";
  }
  return "unknown";
}

RirMethod rir_method_from_string(const std::string& s) {
  if (s == "fdtd") return RirMethod::fdtd;
  if (s == "geometric") return RirMethod::geometric;
  if (s == "hybrid") return RirMethod::hybrid;
  throw std::invalid_argument("unknown RIR method '" + s + "'");
}

void ImpulseResponse::validate() const {
  if (samples.empty()) throw std::invalid_argument("impulse response is empty");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("impulse response contains non-finite samples");
}

double ImpulseResponse::energy() const {
  double e = 0.0;
  for (double v : samples) e += v * v;
  return e;
}

void save_rir(const ImpulseResponse& rir, const std::filesystem::path& wav_path) {
  rir.validate();
  audio::write_wav(wav_path, rir.samples, rir.sample_rate, audio::SampleFormat::float32);
  nlohmann::json sidecar;
  sidecar["method"] = to_string(rir.method);
  sidecar["scene_digest"] = rir.scene_digest;
  sidecar["sample_rate"] = rir.sample_rate;
  sidecar["metadata"] = rir.metadata;
  std::ofstream os(wav_path.string() + ".json");
  if (!os) throw std::runtime_error("cannot write sidecar for " + wav_path.string());
  os << sidecar.dump(2) << "\n";
}

ImpulseResponse load_rir(const std::filesystem::path& wav_path) {
  ImpulseResponse rir;
  auto wave = audio::read_wav(wav_path);
  rir.samples = std::move(wave.samples);
  rir.sample_rate = wave.sample_rate;

  const std::filesystem::path sidecar_path = wav_path.string() + ".json";
  if (std::filesystem::exists(sidecar_path)) {
    std::ifstream is(sidecar_path);
    nlohmann::json sidecar = nlohmann::json::parse(is);
    rir.method = rir_method_from_string(sidecar.value("method", "geometric"));
    rir.scene_digest = sidecar.value("scene_digest", "");
    if (sidecar.contains("metadata")) rir.metadata = sidecar["metadata"];
  }
  rir.validate();
  return rir;
}

}  // namespace rirforge
