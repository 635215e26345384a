#include "kreach/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kreach {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void put_number(std::ofstream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

void put_hull_header(std::ofstream& out, Index dim) {
  for (Index i = 0; i < dim; ++i) {
    out << ",x" << i << "_lo,x" << i << "_hi";
  }
  out << "\n";
}

void put_hull_row(std::ofstream& out, const Zonotope& z) {
  IntervalVector hull = interval_hull(z);
  for (Index i = 0; i < z.dim(); ++i) {
    out << ',';
    put_number(out, hull.inf[i]);
    out << ',';
    put_number(out, hull.sup[i]);
  }
  out << "\n";
}

} // namespace

void write_interval_hulls_csv(const std::string& path, const ReachResult& result) {
  std::ofstream out = open_out(path);
  out << "step,t_lo,t_hi";
  const Index dim = result.time_interval_sets.empty()
                        ? 0
                        : result.time_interval_sets.front().dim();
  put_hull_header(out, dim);
  for (size_t k = 0; k < result.time_interval_sets.size(); ++k) {
    const StepDiagnostics& d = result.steps[k];
    out << d.step << ',';
    put_number(out, d.t_lo);
    out << ',';
    put_number(out, d.t_hi);
    put_hull_row(out, result.time_interval_sets[k]);
  }
}

void write_point_hulls_csv(const std::string& path, const ReachResult& result) {
  std::ofstream out = open_out(path);
  out << "step,t";
  const Index dim =
      result.time_point_sets.empty() ? 0 : result.time_point_sets.front().dim();
  put_hull_header(out, dim);
  for (size_t k = 0; k < result.time_point_sets.size(); ++k) {
    const StepDiagnostics& d = result.steps[k];
    out << d.step << ',';
    put_number(out, d.t_hi);
    put_hull_row(out, result.time_point_sets[k]);
  }
}

std::vector<std::array<double, 2>> projected_polygon(const Zonotope& z, Index xi,
                                                     Index yi) {
  if (xi < 0 || xi >= z.dim() || yi < 0 || yi >= z.dim()) {
    throw std::invalid_argument("projected_polygon: coordinate out of range");
  }
  const double cx = z.center()[xi];
  const double cy = z.center()[yi];

  // Canonical half-turn representatives: flip each generator into the upper
  // half plane so sorting by angle walks the boundary counter-clockwise.
  std::vector<std::array<double, 2>> gens;
  for (Index j = 0; j < z.num_generators(); ++j) {
    double gx = z.generators()(xi, j);
    double gy = z.generators()(yi, j);
    if (gx == 0.0 && gy == 0.0) continue;
    if (gy < 0.0 || (gy == 0.0 && gx < 0.0)) {
      gx = -gx;
      gy = -gy;
    }
    gens.push_back({gx, gy});
  }
  if (gens.empty()) return {{cx, cy}};

  std::sort(gens.begin(), gens.end(),
            [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
              return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
            });

  // Start at the vertex minimizing y (then x): center minus the sum of all
  // canonical generators, then add 2g in angle order for one side of the
  // boundary and subtract in the same order for the mirrored side.
  std::vector<std::array<double, 2>> poly;
  poly.reserve(2 * gens.size());
  double vx = cx;
  double vy = cy;
  for (const auto& g : gens) {
    vx -= g[0];
    vy -= g[1];
  }
  poly.push_back({vx, vy});
  for (size_t j = 0; j < gens.size(); ++j) {
    vx += 2.0 * gens[j][0];
    vy += 2.0 * gens[j][1];
    poly.push_back({vx, vy});  // ends at center + sum(gens), the antipode
  }
  for (size_t j = 0; j + 1 < gens.size(); ++j) {
    vx -= 2.0 * gens[j][0];
    vy -= 2.0 * gens[j][1];
    poly.push_back({vx, vy});  // final edge back to the start is implicit
  }
  return poly;
}

void write_projection_csv(const std::string& path,
                          const std::vector<Zonotope>& sets, Index xi, Index yi) {
  std::ofstream out = open_out(path);
  out << "step,x,y\n";
  for (size_t k = 0; k < sets.size(); ++k) {
    std::vector<std::array<double, 2>> poly = projected_polygon(sets[k], xi, yi);
    poly.push_back(poly.front());  // close the ring
    for (const auto& v : poly) {
      out << (k + 1) << ',';
      put_number(out, v[0]);
      out << ',';
      put_number(out, v[1]);
      out << "\n";
    }
  }
}

namespace {

void put_state_header(std::ofstream& out, Index dim) {
  for (Index i = 0; i < dim; ++i) out << ",x" << i;
  out << "\n";
}

void put_trajectory_rows(std::ofstream& out, const Trajectory& trajectory,
                         size_t number, bool with_number) {
  for (size_t i = 0; i < trajectory.times.size(); ++i) {
    if (with_number) out << number << ',';
    put_number(out, trajectory.times[i]);
    for (Index j = 0; j < trajectory.states[i].size(); ++j) {
      out << ',';
      put_number(out, trajectory.states[i][j]);
    }
    out << "\n";
  }
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out = open_out(path);
  out << "t";
  put_state_header(out, trajectory.states.empty() ? 0 : trajectory.states[0].size());
  put_trajectory_rows(out, trajectory, 0, false);
}

void write_trajectories_csv(const std::string& path,
                            const std::vector<Trajectory>& trajectories) {
  std::ofstream out = open_out(path);
  out << "traj,t";
  const Index dim = trajectories.empty() || trajectories[0].states.empty()
                        ? 0
                        : trajectories[0].states[0].size();
  put_state_header(out, dim);
  for (size_t k = 0; k < trajectories.size(); ++k) {
    put_trajectory_rows(out, trajectories[k], k + 1, true);
  }
}

} // namespace kreach
