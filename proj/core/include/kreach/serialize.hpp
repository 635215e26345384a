#pragma once

#include <array>
#include <string>
#include <vector>

#include "kreach/oracle.hpp"
#include "kreach/reach.hpp"

namespace kreach {

// All writers emit plain CSV with a header row, values formatted with %.17g
// (round-trip exact for doubles), and are byte-for-byte deterministic for
// identical inputs. They throw std::runtime_error when the file cannot be
// opened.

// Header: step,t_lo,t_hi,x0_lo,x0_hi,...  — one row per time-interval set,
// columns are the axis-aligned hull of each coordinate.
void write_interval_hulls_csv(const std::string& path, const ReachResult& result);

// Header: step,t,x0_lo,x0_hi,...  — one row per time-point set at t = t_hi.
void write_point_hulls_csv(const std::string& path, const ReachResult& result);

// Exact boundary polygon of the zonotope projected onto coordinates (xi, yi),
// counter-clockwise. A projection without extent collapses to one vertex.
std::vector<std::array<double, 2>> projected_polygon(const Zonotope& z, Index xi,
                                                     Index yi);

// Header: step,x,y — each set's boundary polygon, with the first vertex
// repeated at the end to close the ring.
void write_projection_csv(const std::string& path,
                          const std::vector<Zonotope>& sets, Index xi, Index yi);

// Header: t,x0,x1,...  — one row per accepted integrator time.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// Header: traj,t,x0,...  — trajectories are numbered from 1 in input order.
void write_trajectories_csv(const std::string& path,
                            const std::vector<Trajectory>& trajectories);

} // namespace kreach
