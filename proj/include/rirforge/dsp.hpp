// Shared signal-processing primitives: FFT (FFTW-backed), linear-phase FIR
// design, arbitrary-ratio sinc resampling, octave filterbank, block
// convolution, analytic envelopes, biquads.
#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace rirforge::dsp {

// --- FFT (arbitrary length; plan creation serialized internally) ---

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x);

// Real-input transform, returns n/2+1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);
// Inverse of rfft for an original length n.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, size_t n);

// --- Windows and FIR design ---

std::vector<double> hann(size_t n);

// Hann-windowed sinc low-pass, odd tap count, unit DC passband.
std::vector<double> lowpass_sinc(double cutoff_hz, double sample_rate, int taps);

// --- Convolution ---

// Full linear convolution, output length a.size()+b.size()-1.
// Uses overlap-add block transforms; block size chosen internally.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// --- Resampling ---

// Windowed-sinc fractional resampler (anti-aliased when downsampling).
std::vector<double> resample(std::span<const double> x, double rate_in, double rate_out);

// --- Analytic signal ---

// Magnitude of the analytic signal (Hilbert envelope).
std::vector<double> analytic_envelope(std::span<const double> x);

// --- Biquad ---

struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
  std::vector<double> process(std::span<const double> x) const;
};

// RBJ constant-peak-gain bandpass.
Biquad bandpass_biquad(double sample_rate, double center_hz, double q);

// --- Octave filterbank ---
//
// Six linear-phase FIR bands centered on kOctaveBandCenters with cos^2
// crossfades at the geometric band edges. The six impulse responses sum
// exactly to a unit impulse at the common group delay, so uniform band
// weights reconstruct a pure delay.
class OctaveBank {
 public:
  OctaveBank(double sample_rate, int taps = 2047);

  int group_delay() const { return (taps_ - 1) / 2; }
  int taps() const { return taps_; }
  const std::vector<double>& band(int b) const { return filters_[b]; }

  // Filters x with band b and compensates the group delay; output length
  // equals x.size() (leading delay removed, trailing ring truncated).
  std::vector<double> apply(std::span<const double> x, int b) const;

 private:
  int taps_;
  std::array<std::vector<double>, 6> filters_;
};

}  // namespace rirforge::dsp
