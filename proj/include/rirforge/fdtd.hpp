// Wave solver: explicit second-order leapfrog FDTD of the acoustic wave
// equation on a regular cubic grid. Walls and voxelized obstacles are
// locally reacting impedance boundaries derived from the 125 Hz absorption
// band; rigid surfaces fall out as the zero-admittance case.
//
// The per-step cell update is embarrassingly parallel: step_parallel is the
// OpenMP production kernel and step_serial the plain reference kept for
// testing and benchmarking. Both produce bit-identical fields.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rirforge/rir.hpp"
#include "rirforge/scene.hpp"

namespace rirforge::fdtd {

struct SourceExcitation {
  // Gaussian-modulated cosine pulse. Zero center_frequency / bandwidth mean
  // "derive from the simulation's max frequency" (center at fmax/2, rolloff
  // hitting -60 dB at fmax).
  double center_frequency = 0.0;  // Hz
  double bandwidth = 0.0;         // sigma_f / center_frequency
  double amplitude = 1.0;

  // Concrete pulse parameters for a given band limit.
  double resolved_center(double max_frequency) const;
  double resolved_sigma_f(double max_frequency) const;
  double value(double t, double max_frequency) const;
  double start_offset(double max_frequency) const;  // pulse center time t0
};

struct FdtdConfig {
  double max_frequency = 1400.0;       // simulated bandwidth, Hz
  int points_per_wavelength = 10;      // at max_frequency
  double cfl_fraction = 0.9;           // of the 3D limit 1/sqrt(3)
  double duration = 0.5;               // seconds of simulated time
  SourceExcitation source_pulse;
  double output_rate = 48000.0;        // RIR sample rate after resampling
  std::size_t cell_cap = 50'000'000;   // reject larger grids
  bool parallel = true;                // OpenMP kernel vs serial reference

  void validate() const;
};

enum class CellFlag : uint8_t { air = 0, rigid = 1, absorbing = 2 };

struct PressureGrid {
  int nx = 0, ny = 0, nz = 0;  // air extent; arrays padded by a 1-cell shell
  double dx = 0.0, dt = 0.0;
  double speed_of_sound = 343.0;
  double lambda2 = 0.0;  // (c*dt/dx)^2

  // Flat arrays of (nx+2)*(ny+2)*(nz+2); solid cells stay exactly zero.
  std::vector<double> p_curr, p_prev;
  std::vector<CellFlag> flags;
  // Precomputed update coefficients; all zero for solid cells.
  std::vector<double> coef_self, coef_prev, coef_div;

  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * (ny + 2) + y) * (nx + 2) + x;
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(nx + 2) * (ny + 2) * (nz + 2);
  }

  // Advances one dt; throws on detected divergence (NaN/overflow).
  void step(bool parallel = true);

  // Grid coordinates of the nearest air cell to a point (meters, room frame).
  std::array<int, 3> snap_to_air(const Point3& p) const;
  Point3 cell_center(const std::array<int, 3>& c) const;
};

PressureGrid build_grid(const Scene& scene, const FdtdConfig& cfg);

void step_serial(PressureGrid& grid);
void step_parallel(PressureGrid& grid);

// Full simulation: soft-source injection, receiver capture, regularized
// spectral deconvolution of the pulse inside the valid band, resampling to
// cfg.output_rate. Snapped positions and parameters land in metadata.
ImpulseResponse simulate_wave(const Scene& scene, const FdtdConfig& cfg);

}  // namespace rirforge::fdtd
