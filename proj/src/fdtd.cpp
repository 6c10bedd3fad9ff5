#include "rirforge/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "rirforge/dsp.hpp"

namespace rirforge::fdtd {

namespace {

constexpr double kPi = std::numbers::pi;

// alpha -> normalized specific admittance of a locally reacting surface.
// R = sqrt(1 - alpha) at normal incidence, gamma = (1 - R) / (1 + R).
double admittance_from_absorption(double alpha) {
  const double r = std::sqrt(std::max(0.0, 1.0 - alpha));
  return (1.0 - r) / (1.0 + r);
}

}  // namespace

double SourceExcitation::resolved_center(double max_frequency) const {
  return center_frequency > 0.0 ? center_frequency : 0.5 * max_frequency;
}

double SourceExcitation::resolved_sigma_f(double max_frequency) const {
  const double fc = resolved_center(max_frequency);
  if (bandwidth > 0.0) return bandwidth * fc;
  // -60 dB amplitude at max_frequency: exp(-df^2 / (2 sigma^2)) = 1e-3.
  const double df = std::max(1.0, max_frequency - fc);
  return df / std::sqrt(2.0 * std::log(1e3));
}

double SourceExcitation::start_offset(double max_frequency) const {
  const double sigma_t = 1.0 / (2.0 * kPi * resolved_sigma_f(max_frequency));
  return 6.0 * sigma_t;
}

double SourceExcitation::value(double t, double max_frequency) const {
  const double fc = resolved_center(max_frequency);
  const double sigma_t = 1.0 / (2.0 * kPi * resolved_sigma_f(max_frequency));
  const double u = t - start_offset(max_frequency);
  return amplitude * std::cos(2.0 * kPi * fc * u) * std::exp(-u * u / (2.0 * sigma_t * sigma_t));
}

void FdtdConfig::validate() const {
  if (!(max_frequency > 0.0)) throw std::invalid_argument("max_frequency must be positive");
  if (points_per_wavelength < 4) throw std::invalid_argument("points_per_wavelength must be >= 4");
  if (!(cfl_fraction > 0.0 && cfl_fraction <= 1.0))
    throw std::invalid_argument("cfl_fraction must be in (0,1]");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(output_rate > 0.0)) throw std::invalid_argument("output_rate must be positive");
}

PressureGrid build_grid(const Scene& scene, const FdtdConfig& cfg) {
  cfg.validate();
  scene.validate();
  const double c = scene.speed_of_sound;

  PressureGrid g;
  g.speed_of_sound = c;
  g.dx = c / (cfg.max_frequency * cfg.points_per_wavelength);
  g.dt = cfg.cfl_fraction * g.dx / (c * std::sqrt(3.0));
  g.lambda2 = (c * g.dt / g.dx) * (c * g.dt / g.dx);
  g.nx = std::max(1, static_cast<int>(std::lround(scene.room_dims[0] / g.dx)));
  g.ny = std::max(1, static_cast<int>(std::lround(scene.room_dims[1] / g.dx)));
  g.nz = std::max(1, static_cast<int>(std::lround(scene.room_dims[2] / g.dx)));

  if (g.cell_count() > cfg.cell_cap)
    throw std::runtime_error("grid of " + std::to_string(g.cell_count()) +
                             " cells exceeds cell cap " + std::to_string(cfg.cell_cap));

  const std::size_t n = g.cell_count();
  g.p_curr.assign(n, 0.0);
  g.p_prev.assign(n, 0.0);
  g.flags.assign(n, CellFlag::air);
  g.coef_self.assign(n, 0.0);
  g.coef_prev.assign(n, 0.0);
  g.coef_div.assign(n, 0.0);

  // Per-solid-cell admittance, used when accumulating face losses below.
  std::vector<double> solid_admittance(n, 0.0);

  auto mark_solid = [&](std::size_t i, double alpha) {
    solid_admittance[i] = admittance_from_absorption(alpha);
    g.flags[i] = solid_admittance[i] > 0.0 ? CellFlag::absorbing : CellFlag::rigid;
  };

  // Shell cells take the wall materials (125 Hz band; the wave solver only
  // covers the low band). Corners/edges just take whichever wall marks last.
  for (int z = 0; z < g.nz + 2; ++z)
    for (int y = 0; y < g.ny + 2; ++y)
      for (int x = 0; x < g.nx + 2; ++x) {
        const bool shell = x == 0 || x == g.nx + 1 || y == 0 || y == g.ny + 1 || z == 0 || z == g.nz + 1;
        if (!shell) continue;
        const std::size_t i = g.index(x, y, z);
        double alpha = 0.0;
        if (x == 0) alpha = scene.surfaces[0].absorption[0];
        else if (x == g.nx + 1) alpha = scene.surfaces[1].absorption[0];
        else if (y == 0) alpha = scene.surfaces[2].absorption[0];
        else if (y == g.ny + 1) alpha = scene.surfaces[3].absorption[0];
        else if (z == 0) alpha = scene.surfaces[4].absorption[0];
        else alpha = scene.surfaces[5].absorption[0];
        mark_solid(i, alpha);
      }

  // Conservative obstacle voxelization: cell centers inside a box go solid.
  for (size_t ob = 0; ob < scene.obstacles.size(); ++ob) {
    const auto& box = scene.obstacles[ob];
    const double alpha = scene.obstacle_materials[ob].absorption[0];
    for (int z = 1; z <= g.nz; ++z)
      for (int y = 1; y <= g.ny; ++y)
        for (int x = 1; x <= g.nx; ++x) {
          const Point3 center = g.cell_center({x, y, z});
          if (box.contains(center)) mark_solid(g.index(x, y, z), alpha);
        }
  }

  // Update coefficients. For an air cell with K air neighbors and summed
  // face admittance G = sum(gamma_face)/2:
  //   p+ = [ (2 - K*lambda^2) p + lambda^2 * S_air + (lambda*G - 1) p- ] / (1 + lambda*G)
  const double lambda = std::sqrt(g.lambda2);
  const std::size_t sx = 1;
  const std::size_t sy = g.nx + 2;
  const std::size_t sz = static_cast<std::size_t>(g.nx + 2) * (g.ny + 2);
  for (int z = 1; z <= g.nz; ++z)
    for (int y = 1; y <= g.ny; ++y)
      for (int x = 1; x <= g.nx; ++x) {
        const std::size_t i = g.index(x, y, z);
        if (g.flags[i] != CellFlag::air) continue;
        int air_neighbors = 0;
        double gamma_sum = 0.0;
        for (const std::size_t nb : {i - sx, i + sx, i - sy, i + sy, i - sz, i + sz}) {
          if (g.flags[nb] == CellFlag::air)
            ++air_neighbors;
          else
            gamma_sum += solid_admittance[nb];
        }
        const double loss = lambda * gamma_sum / 2.0;
        g.coef_self[i] = 2.0 - air_neighbors * g.lambda2;
        g.coef_prev[i] = loss - 1.0;
        g.coef_div[i] = 1.0 / (1.0 + loss);
      }

  return g;
}

void step_serial(PressureGrid& g) {
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  const std::size_t sy = nx + 2;
  const std::size_t sz = static_cast<std::size_t>(nx + 2) * (ny + 2);
  const double lam2 = g.lambda2;
  const double* p = g.p_curr.data();
  double* pn = g.p_prev.data();  // overwritten in place, then swapped
  const double* cs = g.coef_self.data();
  const double* cp = g.coef_prev.data();
  const double* cd = g.coef_div.data();

  for (int z = 1; z <= nz; ++z)
    for (int y = 1; y <= ny; ++y) {
      const std::size_t row = (static_cast<std::size_t>(z) * (ny + 2) + y) * (nx + 2) + 1;
      for (int x = 0; x < nx; ++x) {
        const std::size_t i = row + x;
        const double s = p[i - 1] + p[i + 1] + p[i - sy] + p[i + sy] + p[i - sz] + p[i + sz];
        pn[i] = cd[i] * (cs[i] * p[i] + lam2 * s + cp[i] * pn[i]);
      }
    }
  std::swap(g.p_curr, g.p_prev);
}

void step_parallel(PressureGrid& g) {
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  const std::size_t sy = nx + 2;
  const std::size_t sz = static_cast<std::size_t>(nx + 2) * (ny + 2);
  const double lam2 = g.lambda2;
  const double* p = g.p_curr.data();
  double* pn = g.p_prev.data();
  const double* cs = g.coef_self.data();
  const double* cp = g.coef_prev.data();
  const double* cd = g.coef_div.data();

#pragma omp parallel for schedule(static)
  for (int z = 1; z <= nz; ++z)
    for (int y = 1; y <= ny; ++y) {
      const std::size_t row = (static_cast<std::size_t>(z) * (ny + 2) + y) * (nx + 2) + 1;
      for (int x = 0; x < nx; ++x) {
        const std::size_t i = row + x;
        const double s = p[i - 1] + p[i + 1] + p[i - sy] + p[i + sy] + p[i - sz] + p[i + sz];
        pn[i] = cd[i] * (cs[i] * p[i] + lam2 * s + cp[i] * pn[i]);
      }
    }
  std::swap(g.p_curr, g.p_prev);
}

void PressureGrid::step(bool parallel) {
  if (parallel)
    step_parallel(*this);
  else
    step_serial(*this);
}

std::array<int, 3> PressureGrid::snap_to_air(const Point3& pt) const {
  auto clamp_axis = [](double v, int n) { return std::clamp(static_cast<int>(std::lround(v)), 1, n); };
  // Cell (x,y,z) is centered at ((x-0.5) dx, ...) in the room frame.
  std::array<int, 3> c = {clamp_axis(pt.x / dx + 0.5, nx), clamp_axis(pt.y / dx + 0.5, ny),
                          clamp_axis(pt.z / dx + 0.5, nz)};
  if (flags[index(c[0], c[1], c[2])] == CellFlag::air) return c;

  // Breadth-first ring search for the nearest air cell.
  std::queue<std::array<int, 3>> frontier;
  std::vector<uint8_t> seen(cell_count(), 0);
  frontier.push(c);
  seen[index(c[0], c[1], c[2])] = 1;
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop();
    if (flags[index(cur[0], cur[1], cur[2])] == CellFlag::air) return cur;
    for (const auto& d : {std::array<int, 3>{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}) {
      std::array<int, 3> nb = {cur[0] + d[0], cur[1] + d[1], cur[2] + d[2]};
      if (nb[0] < 1 || nb[0] > nx || nb[1] < 1 || nb[1] > ny || nb[2] < 1 || nb[2] > nz) continue;
      auto& mark = seen[index(nb[0], nb[1], nb[2])];
      if (!mark) {
        mark = 1;
        frontier.push(nb);
      }
    }
  }
  throw std::runtime_error("no air cell available for source/receiver placement");
}

Point3 PressureGrid::cell_center(const std::array<int, 3>& c) const {
  return {(c[0] - 0.5) * dx, (c[1] - 0.5) * dx, (c[2] - 0.5) * dx};
}

ImpulseResponse simulate_wave(const Scene& scene, const FdtdConfig& cfg) {
  PressureGrid grid = build_grid(scene, cfg);

  const auto src_cell = grid.snap_to_air(scene.source);
  const auto rcv_cell = grid.snap_to_air(scene.receiver);
  const Point3 src_snapped = grid.cell_center(src_cell);
  const Point3 rcv_snapped = grid.cell_center(rcv_cell);
  const std::size_t src_idx = grid.index(src_cell[0], src_cell[1], src_cell[2]);
  const std::size_t rcv_idx = grid.index(rcv_cell[0], rcv_cell[1], rcv_cell[2]);

  const double native_rate = 1.0 / grid.dt;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(cfg.duration * native_rate));
  std::vector<double> captured(steps, 0.0);
  std::vector<double> pulse(steps, 0.0);
  double pulse_peak = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    pulse[n] = cfg.source_pulse.value(n * grid.dt, cfg.max_frequency);
    pulse_peak = std::max(pulse_peak, std::abs(pulse[n]));
  }

  const double divergence_limit = 1e6 * std::max(pulse_peak, 1e-30);
  for (std::size_t n = 0; n < steps; ++n) {
    grid.step(cfg.parallel);
    grid.p_curr[src_idx] += pulse[n];  // soft source; scale cancels in deconvolution
    captured[n] = grid.p_curr[rcv_idx];
    if (!std::isfinite(captured[n]) || std::abs(captured[n]) > divergence_limit)
      throw std::runtime_error("FDTD instability detected at step " + std::to_string(n));
  }

  // Regularized deconvolution of the source pulse inside the valid band,
  // with a cosine rolloff above max_frequency.
  std::vector<double> rir_native(steps, 0.0);
  if (pulse_peak > 0.0) {
    const auto cap_spec = dsp::rfft(captured);
    const auto pulse_spec = dsp::rfft(pulse);
    double spec_peak = 0.0;
    for (const auto& v : pulse_spec) spec_peak = std::max(spec_peak, std::abs(v));
    const double eps = 1e-6 * spec_peak;
    std::vector<std::complex<double>> h(cap_spec.size());
    const double f_stop = std::min(1.15 * cfg.max_frequency, 0.5 * native_rate);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double f = static_cast<double>(k) * native_rate / static_cast<double>(steps);
      double taper = 0.0;
      if (f <= cfg.max_frequency)
        taper = 1.0;
      else if (f < f_stop) {
        const double u = (f - cfg.max_frequency) / (f_stop - cfg.max_frequency);
        taper = 0.5 * (1.0 + std::cos(kPi * u));
      }
      const auto g = pulse_spec[k];
      h[k] = taper * cap_spec[k] * std::conj(g) / (std::norm(g) + eps * eps);
    }
    rir_native = dsp::irfft(h, steps);
  }

  ImpulseResponse rir;
  rir.samples = dsp::resample(rir_native, native_rate, cfg.output_rate);
  rir.sample_rate = cfg.output_rate;
  rir.method = RirMethod::fdtd;
  rir.scene_digest = scene.digest();
  rir.metadata = {
      {"max_frequency", cfg.max_frequency},
      {"points_per_wavelength", cfg.points_per_wavelength},
      {"cfl_fraction", cfg.cfl_fraction},
      {"duration", cfg.duration},
      {"dx", grid.dx},
      {"dt", grid.dt},
      {"grid_dims", {grid.nx, grid.ny, grid.nz}},
      {"native_rate", native_rate},
      {"source_snapped", {src_snapped.x, src_snapped.y, src_snapped.z}},
      {"receiver_snapped", {rcv_snapped.x, rcv_snapped.y, rcv_snapped.z}},
      {"source_snap_distance", distance(scene.source, src_snapped)},
      {"receiver_snap_distance", distance(scene.receiver, rcv_snapped)},
      {"source_receiver_distance", distance(src_snapped, rcv_snapped)},
      {"pulse_center_frequency", cfg.source_pulse.resolved_center(cfg.max_frequency)},
      {"pulse_sigma_f", cfg.source_pulse.resolved_sigma_f(cfg.max_frequency)},
  };
  return rir;
}

}  // namespace rirforge::fdtd
