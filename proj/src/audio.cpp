#include "rirforge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rirforge::audio {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& msg) {
  throw std::runtime_error(path.string() + ": " + msg);
}

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Wave read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    fail(path, "not a RIFF/WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const uint32_t chunk_len = read_u32(data.data() + pos + 4);
    const unsigned char* body = data.data() + pos + 8;
    if (pos + 8 + chunk_len > data.size()) break;
    if (std::memcmp(data.data() + pos, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = read_u16(body);
      channels = read_u16(body + 2);
      rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      if (format == 0xFFFE && chunk_len >= 40)  // WAVE_FORMAT_EXTENSIBLE
        format = read_u16(body + 24);
    } else if (std::memcmp(data.data() + pos, "data", 4) == 0) {
      data_off = pos + 8;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }
  if (rate == 0 || channels == 0) fail(path, "missing fmt chunk");
  if (data_off == 0) fail(path, "missing data chunk");

  const size_t bytes_per_sample = bits / 8;
  if (bytes_per_sample == 0) fail(path, "bad bits per sample");
  const size_t frames = data_len / (bytes_per_sample * channels);
  const unsigned char* p = data.data() + data_off;

  auto decode = [&](size_t idx) -> double {
    const unsigned char* s = p + idx * bytes_per_sample;
    if (format == 1) {  // PCM
      switch (bits) {
        case 16: {
          int16_t v;
          std::memcpy(&v, s, 2);
          return v / 32768.0;
        }
        case 24: {
          int32_t v = (s[0] << 8) | (s[1] << 16) | (static_cast<int32_t>(static_cast<int8_t>(s[2])) << 24);
          return (v >> 8) / 8388608.0;
        }
        case 32: {
          int32_t v;
          std::memcpy(&v, s, 4);
          return v / 2147483648.0;
        }
        default:
          fail(path, "unsupported PCM bit depth " + std::to_string(bits));
      }
    } else if (format == 3) {  // IEEE float
      if (bits == 32) {
        float v;
        std::memcpy(&v, s, 4);
        return v;
      }
      if (bits == 64) {
        double v;
        std::memcpy(&v, s, 8);
        return v;
      }
      fail(path, "unsupported float bit depth " + std::to_string(bits));
    }
    fail(path, "unsupported WAV format tag " + std::to_string(format));
  };

  Wave w;
  w.sample_rate = static_cast<double>(rate);
  w.samples.resize(frames);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) acc += decode(f * channels + c);
    w.samples[f] = acc / channels;
  }
  return w;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               double sample_rate, SampleFormat format) {
  const uint32_t rate = static_cast<uint32_t>(std::lround(sample_rate));
  const uint16_t bits = format == SampleFormat::float32 ? 32 : 16;
  const uint16_t fmt_tag = format == SampleFormat::float32 ? 3 : 1;
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * bits / 8);

  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, fmt_tag);
  put_u16(out, 1);  // mono
  put_u32(out, rate);
  put_u32(out, rate * bits / 8);
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_len);

  if (format == SampleFormat::float32) {
    for (double v : samples) {
      const float f = static_cast<float>(v);
      char buf[4];
      std::memcpy(buf, &f, 4);
      out.append(buf, 4);
    }
  } else {
    for (double v : samples) {
      const double clamped = std::clamp(v, -1.0, 1.0);
      const int16_t q = static_cast<int16_t>(std::lround(clamped * 32767.0));
      put_u16(out, static_cast<uint16_t>(q));
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) fail(path, "cannot open for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) fail(path, "write failed");
}

}  // namespace rirforge::audio
