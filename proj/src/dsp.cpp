#include "rirforge/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "rirforge/scene.hpp"

namespace rirforge::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plan creation is not thread-safe; execution of a fresh plan is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct PlanGuard {
  fftw_plan plan;
  explicit PlanGuard(fftw_plan p) : plan(p) {}
  ~PlanGuard() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
};

}  // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  if (n == 0) return out;
  std::vector<std::complex<double>> in(x.begin(), x.end());
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  PlanGuard guard(p);
  fftw_execute(p);
  return out;
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  if (n == 0) return out;
  std::vector<std::complex<double>> in(x.begin(), x.end());
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanGuard guard(p);
  fftw_execute(p);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n / 2 + 1);
  if (n == 0) return {};
  std::vector<double> in(x.begin(), x.end());
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                             reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  PlanGuard guard(p);
  fftw_execute(p);
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, size_t n) {
  if (spectrum.size() != n / 2 + 1) throw std::invalid_argument("irfft: spectrum/length mismatch");
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  std::vector<double> out(n);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    p = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                             out.data(), FFTW_ESTIMATE);
  }
  PlanGuard guard(p);
  fftw_execute(p);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> hann(size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1)));
  return w;
}

std::vector<double> lowpass_sinc(double cutoff_hz, double sample_rate, int taps) {
  if (taps < 3 || taps % 2 == 0) throw std::invalid_argument("lowpass_sinc: taps must be odd >= 3");
  if (!(cutoff_hz > 0.0 && cutoff_hz < sample_rate / 2.0))
    throw std::invalid_argument("lowpass_sinc: cutoff must lie in (0, Nyquist)");
  const int mid = (taps - 1) / 2;
  const double fc = cutoff_hz / sample_rate;  // cycles per sample
  std::vector<double> h(taps);
  const auto w = hann(taps);
  for (int i = 0; i < taps; ++i) {
    const int m = i - mid;
    const double s = m == 0 ? 2.0 * fc : std::sin(2.0 * kPi * fc * m) / (kPi * m);
    h[i] = s * w[i];
  }
  // Normalize DC gain to exactly 1.
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  // Overlap-add: partition the longer input into blocks against the shorter.
  std::span<const double> sig = a.size() >= b.size() ? a : b;
  std::span<const double> ker = a.size() >= b.size() ? b : a;
  size_t fft_len = 1;
  while (fft_len < 4 * ker.size() || fft_len < 4096) fft_len <<= 1;
  const size_t block = fft_len - ker.size() + 1;

  std::vector<double> padded_ker(fft_len, 0.0);
  std::copy(ker.begin(), ker.end(), padded_ker.begin());
  const auto ker_spec = rfft(padded_ker);

  std::vector<double> out(out_len, 0.0);
  std::vector<double> buf(fft_len, 0.0);
  for (size_t start = 0; start < sig.size(); start += block) {
    const size_t len = std::min(block, sig.size() - start);
    std::fill(buf.begin(), buf.end(), 0.0);
    std::copy(sig.begin() + start, sig.begin() + start + len, buf.begin());
    auto spec = rfft(buf);
    for (size_t k = 0; k < spec.size(); ++k) spec[k] *= ker_spec[k];
    const auto seg = irfft(spec, fft_len);
    const size_t copy_len = std::min(fft_len, out_len - start);
    for (size_t i = 0; i < copy_len; ++i) out[start + i] += seg[i];
  }
  return out;
}

std::vector<double> resample(std::span<const double> x, double rate_in, double rate_out) {
  if (!(rate_in > 0.0 && rate_out > 0.0)) throw std::invalid_argument("resample: rates must be positive");
  if (x.empty()) return {};
  if (rate_in == rate_out) return {x.begin(), x.end()};

  const double ratio = rate_out / rate_in;
  // Anti-alias at the lower of the two Nyquist rates, with a little rolloff.
  const double cutoff = 0.45 * std::min(rate_in, rate_out) / rate_in;  // cycles per input sample
  const int half_width = 32;
  const size_t out_len = static_cast<size_t>(std::ceil(x.size() * ratio));
  std::vector<double> out(out_len, 0.0);

  for (size_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) / ratio;  // position in input samples
    const long center = static_cast<long>(std::floor(t));
    double acc = 0.0;
    double ksum = 0.0;
    for (long k = center - half_width + 1; k <= center + half_width; ++k) {
      const double u = t - static_cast<double>(k);
      const double tap = (u == 0.0 ? 2.0 * cutoff : std::sin(2.0 * kPi * cutoff * u) / (kPi * u)) *
                         0.5 * (1.0 + std::cos(kPi * u / half_width));
      ksum += tap;
      if (k >= 0 && k < static_cast<long>(x.size())) acc += x[static_cast<size_t>(k)] * tap;
    }
    // ksum normalization keeps the passband gain at exactly 1 for every
    // fractional phase of the windowed kernel.
    out[n] = acc / ksum;
  }
  return out;
}

std::vector<double> analytic_envelope(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) return {};
  std::vector<std::complex<double>> spec(n);
  {
    std::vector<std::complex<double>> cx(n);
    for (size_t i = 0; i < n; ++i) cx[i] = x[i];
    spec = fft(cx);
  }
  // Zero the negative frequencies, double the positive ones.
  for (size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
  for (size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
  const auto analytic = ifft(spec);
  std::vector<double> env(n);
  for (size_t i = 0; i < n; ++i) env[i] = std::abs(analytic[i]);
  return env;
}

std::vector<double> Biquad::process(std::span<const double> x) const {
  std::vector<double> y(x.size());
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double v = b0 * x[i] + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[i];
    y2 = y1;
    y1 = v;
    y[i] = v;
  }
  return y;
}

Biquad bandpass_biquad(double sample_rate, double center_hz, double q) {
  const double w0 = 2.0 * kPi * center_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad f;
  f.b0 = alpha / a0;
  f.b1 = 0.0;
  f.b2 = -alpha / a0;
  f.a1 = -2.0 * std::cos(w0) / a0;
  f.a2 = (1.0 - alpha) / a0;
  return f;
}

OctaveBank::OctaveBank(double sample_rate, int taps) : taps_(taps) {
  if (taps < 63 || taps % 2 == 0) throw std::invalid_argument("OctaveBank: taps must be odd >= 63");

  // Band edges at geometric means of adjacent centers; cos^2 crossfade over
  // a +/- 1/6 octave zone so adjacent bands sum to exactly one.
  std::array<double, 5> edges;
  for (int k = 0; k < 5; ++k)
    edges[k] = std::sqrt(kOctaveBandCenters[k] * kOctaveBandCenters[k + 1]);

  auto band_gain = [&](int b, double f) {
    auto xfade_up = [](double f, double lo, double hi) {
      if (f <= lo) return 0.0;
      if (f >= hi) return 1.0;
      const double u = (f - lo) / (hi - lo);
      return std::sin(0.5 * kPi * u) * std::sin(0.5 * kPi * u);
    };
    const double zone = std::pow(2.0, 1.0 / 6.0);
    double g = 1.0;
    if (b > 0) g *= xfade_up(f, edges[b - 1] / zone, edges[b - 1] * zone);
    if (b < 5) g *= 1.0 - xfade_up(f, edges[b] / zone, edges[b] * zone);
    return g;
  };

  // Frequency sampling on a dense grid, inverse transform, center, window.
  size_t fft_len = 1;
  while (fft_len < static_cast<size_t>(4 * taps)) fft_len <<= 1;
  const int mid = (taps - 1) / 2;
  const auto w = hann(taps);
  for (int b = 0; b < 6; ++b) {
    std::vector<std::complex<double>> spec(fft_len / 2 + 1);
    for (size_t k = 0; k < spec.size(); ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_len);
      spec[k] = band_gain(b, f);
    }
    const auto h_full = irfft(spec, fft_len);
    auto& h = filters_[b];
    h.assign(taps, 0.0);
    for (int i = 0; i < taps; ++i) {
      const long src = static_cast<long>(i) - mid;
      const size_t idx = static_cast<size_t>((src + static_cast<long>(fft_len)) % static_cast<long>(fft_len));
      h[i] = h_full[idx] * w[i];
    }
  }
  // The band responses sum to a flat spectrum, so the windowed sum of taps
  // is already a unit impulse at mid up to rounding; pin the residual onto
  // band 0 so the partition-of-unity is exact.
  for (int i = 0; i < taps; ++i) {
    double s = 0.0;
    for (int b = 0; b < 6; ++b) s += filters_[b][i];
    filters_[0][i] += (i == mid ? 1.0 : 0.0) - s;
  }
}

std::vector<double> OctaveBank::apply(std::span<const double> x, int b) const {
  const auto y = convolve(x, filters_[b]);
  const int m = group_delay();
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = y[i + m];
  return out;
}

}  // namespace rirforge::dsp
