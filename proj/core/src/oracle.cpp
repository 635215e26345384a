#include "kreach/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "kreach/errors.hpp"
#include "kreach/parallel.hpp"

namespace kreach {
namespace {

constexpr Index kDenseCap = 1000;

void check_cap(Index n, const char* what) {
  if (n > kDenseCap)
    throw std::invalid_argument(std::string(what) + ": size cap is 1000");
}

// Chord-gap coefficient, series order rule, and Lagrange remainder, written
// out against the full matrix so the oracle does not reuse the reduced-space
// implementations it cross-checks.
double chord_gap(Index i, double delta) {
  const double di = static_cast<double>(i);
  return (std::pow(di, -di / (di - 1.0)) - std::pow(di, -1.0 / (di - 1.0))) *
         std::pow(delta, di);
}

Index series_order(double norm_delta, const EtaPolicy& pol) {
  for (Index eta = 2; eta <= pol.cap; ++eta)
    if (norm_delta / (static_cast<double>(eta) + 2.0) < pol.eps_max) return eta;
  throw CertificateFailure(
      "dense oracle: no admissible series order; reduce the time increment");
}

double series_remainder(double norm_delta, Index eta) {
  if (norm_delta == 0.0) return 0.0;
  const double contraction = norm_delta / (static_cast<double>(eta) + 2.0);
  return std::exp((static_cast<double>(eta) + 1.0) * std::log(norm_delta) -
                  std::lgamma(static_cast<double>(eta) + 2.0)) /
         (1.0 - contraction);
}

// Interval chord-correction matrix in dense form: center and elementwise
// radius of sum_i [chord_gap(i), 0] A^i / i! plus the full remainder box.
struct DenseCorrection {
  Mat center;
  Mat radius;
};

DenseCorrection dense_correction(const Mat& ad, double delta, const EtaPolicy& pol) {
  const Index n = ad.rows();
  const double norm_delta = n > 0 ? ad.cwiseAbs().rowwise().sum().maxCoeff() * delta
                                  : 0.0;
  const Index eta = series_order(norm_delta, pol);
  const double phi = series_remainder(norm_delta, eta);
  DenseCorrection f{Mat::Zero(n, n), Mat::Zero(n, n)};
  Mat power = ad;  // A^i / i!
  for (Index i = 2; i <= eta; ++i) {
    power = (power * ad) / static_cast<double>(i);
    const double lo = chord_gap(i, delta);  // negative
    f.center += (0.5 * lo) * power;
    f.radius += (-0.5 * lo) * power.cwiseAbs();
  }
  f.radius.array() += phi;
  return f;
}

// Correction applied to a zonotope, collapsed to one box: signed shift from
// the center, symmetric contribution from every generator.
IntervalVector correction_box(const DenseCorrection& f, const Zonotope& z) {
  Vec c = f.center * z.center();
  Vec r = f.radius * z.center().cwiseAbs();
  for (Index i = 0; i < z.num_generators(); ++i) {
    const Vec g = z.generators().col(i);
    r += (f.center * g).cwiseAbs() + f.radius * g.cwiseAbs();
  }
  return IntervalVector(c - r, c + r);
}

double augmented_inf_norm(const SparseMatrix& a, const Vec& u_hat) {
  double best = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double s = std::abs(u_hat[i]);
    for (Index k = a.row_offsets()[static_cast<size_t>(i)];
         k < a.row_offsets()[static_cast<size_t>(i) + 1]; ++k)
      s += std::abs(a.values()[static_cast<size_t>(k)]);
    best = std::max(best, s);
  }
  return best;
}

InputSetParts dense_const_input(const Mat& ad, const Zonotope& u_set, double delta) {
  const Index n = ad.rows();
  Mat aug = Mat::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = ad;
  aug.topRightCorner(n, n) = Mat::Identity(n, n);
  const Mat big = (aug * delta).exp();
  InputSetParts parts;
  parts.carrier = linear_map(Mat(big.topRightCorner(n, n)), u_set);
  parts.err = IntervalVector::zero(n);
  return parts;
}

InputSetParts dense_varying_input(const SparseMatrix& a, const Zonotope& u_set,
                                  double delta, const EtaPolicy& pol) {
  const Index n = a.rows();
  const Index q = u_set.num_generators();

  std::vector<Vec> columns(static_cast<size_t>(q) + 1);
  std::vector<double> scales(static_cast<size_t>(q) + 1, 0.0);
  std::vector<double> norms(static_cast<size_t>(q) + 1, 0.0);
  double max_norm_delta = 0.0;
  for (Index i = 0; i <= q; ++i) {
    Vec u = i == 0 ? u_set.center() : Vec(u_set.generators().col(i - 1));
    const double scale = u.norm();
    columns[static_cast<size_t>(i)] = std::move(u);
    scales[static_cast<size_t>(i)] = scale;
    if (scale == 0.0) continue;
    const double nd =
        augmented_inf_norm(a, columns[static_cast<size_t>(i)] / scale) * delta;
    norms[static_cast<size_t>(i)] = nd;
    max_norm_delta = std::max(max_norm_delta, nd);
  }
  const Index eta = series_order(max_norm_delta, pol);

  Vec center = Vec::Zero(n);
  Mat gens = Mat::Zero(n, q * eta);
  double err_radius = 0.0;
  for (Index i = 0; i <= q; ++i) {
    if (scales[static_cast<size_t>(i)] == 0.0) continue;
    // term_j = A^(j-1) u delta^j / j!
    Vec term = delta * columns[static_cast<size_t>(i)];
    for (Index j = 1; j <= eta; ++j) {
      if (j > 1) term = (delta / static_cast<double>(j)) * a.multiply(term);
      if (i == 0)
        center += term;
      else
        gens.col((j - 1) * q + (i - 1)) = term;
    }
    err_radius += scales[static_cast<size_t>(i)] *
                  series_remainder(norms[static_cast<size_t>(i)], eta);
  }

  InputSetParts parts;
  parts.carrier = Zonotope(std::move(center), std::move(gens));
  parts.err = IntervalVector::symmetric(Vec::Constant(n, err_radius));
  return parts;
}

} // namespace

Mat dense_expm(const Mat& a, double t) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("dense_expm: matrix must be square");
  check_cap(a.rows(), "dense_expm");
  return (a * t).exp();
}

ReachResult dense_reach(const SparseMatrix& a, const Zonotope& x0,
                        const Zonotope& u_set, const ReachConfig& cfg) {
  const auto start_time = std::chrono::steady_clock::now();
  const Index n = a.rows();
  check_cap(n, "dense_reach");
  if (a.cols() != n)
    throw std::invalid_argument("dense_reach: system matrix must be square");
  if (x0.dim() != n)
    throw std::invalid_argument("dense_reach: initial set dimension mismatch");
  if (u_set.dim() != n)
    throw std::invalid_argument("dense_reach: input set dimension mismatch");
  if (!(cfg.delta > 0.0))
    throw std::invalid_argument("dense_reach: delta must be positive");
  if (cfg.t_f < cfg.delta * (1.0 - 1e-12))
    throw std::invalid_argument("dense_reach: horizon shorter than one step");

  const Index num_steps = std::max<Index>(
      1, static_cast<Index>(std::ceil(cfg.t_f / cfg.delta - 1e-9)));
  const bool interval_mode = cfg.error_channel == ErrorChannel::interval;

  const Mat ad = a.to_dense();
  const Mat emap = dense_expm(ad, cfg.delta);
  const Mat emap_abs = emap.cwiseAbs();
  const DenseCorrection corr = dense_correction(ad, cfg.delta, cfg.eta);

  InputSetParts input = cfg.input_mode == InputMode::varying
                            ? dense_varying_input(a, u_set, cfg.delta, cfg.eta)
                            : dense_const_input(ad, u_set, cfg.delta);

  ReachResult result;
  result.horizon_padded =
      static_cast<double>(num_steps) * cfg.delta > cfg.t_f * (1.0 + 1e-12);
  result.time_point_sets.reserve(static_cast<size_t>(num_steps));
  result.time_interval_sets.reserve(static_cast<size_t>(num_steps));
  result.steps.reserve(static_cast<size_t>(num_steps));

  Zonotope carrier_h = x0;
  Zonotope carrier_b = std::move(input.carrier);
  IntervalVector e_b = std::move(input.err);
  if (!interval_mode) {
    carrier_b = minkowski_sum(carrier_b, interval_to_zonotope(e_b));
    e_b = IntervalVector::zero(n);
  }
  IntervalVector p_box = IntervalVector::zero(n);
  IntervalVector p_cert = IntervalVector::zero(n);

  auto step_mark = start_time;
  for (Index k = 1; k <= num_steps; ++k) {
    const Zonotope mapped_h = linear_map(emap, carrier_h);
    const IntervalVector curvature = correction_box(corr, carrier_h);
    Zonotope tube = minkowski_sum(convex_hull_enclosure(carrier_h, mapped_h),
                                  interval_to_zonotope(curvature));
    carrier_h = mapped_h;

    if (k > 1) {
      if (interval_mode)
        e_b = IntervalVector::symmetric(emap_abs * e_b.radius());
      carrier_b = linear_map(emap, carrier_b);
    }
    p_box = p_box + interval_hull(carrier_b);
    p_cert = p_cert + e_b;
    const IntervalVector r_p = p_box + p_cert;

    Zonotope point_set = minkowski_sum(carrier_h, interval_to_zonotope(r_p));
    const Zonotope interval_set = minkowski_sum(tube, interval_to_zonotope(r_p));

    StepDiagnostics diag;
    diag.step = k;
    diag.t_lo = static_cast<double>(k - 1) * cfg.delta;
    diag.t_hi = static_cast<double>(k) * cfg.delta;
    diag.xi_carrier = n;
    diag.xi_box = interval_mode ? n : 0;
    diag.eps_rate = 0.0;
    diag.point_generators = point_set.num_generators();
    diag.interval_generators = interval_set.num_generators();
    diag.cert_radius = p_cert.radius();
    diag.input_cert_radius = p_cert.radius();
    diag.curvature_radius = curvature.radius();
    const auto now = std::chrono::steady_clock::now();
    diag.wall_seconds = std::chrono::duration<double>(now - step_mark).count();
    step_mark = now;

    result.time_point_sets.push_back(std::move(point_set));
    result.time_interval_sets.push_back(std::move(interval_set));
    result.steps.push_back(std::move(diag));
  }
  return result;
}

Vec PiecewiseConstantSignal::at(double t) const {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw std::invalid_argument("signal: breakpoints and values must pair up");
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.begin()) return values.front();
  return values[static_cast<size_t>(it - breakpoints.begin()) - 1];
}

const Vec& Trajectory::state_at(double t) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it == times.end() || std::abs(*it - t) > tol)
    throw std::invalid_argument("trajectory: no sample recorded at requested time");
  return states[static_cast<size_t>(it - times.begin())];
}

namespace {

// One constant-input segment of Dormand-Prince 4(5) with a PI step-size
// controller; appends every accepted point and lands exactly on t1.
void rk45_segment(const SparseMatrix& a, const Vec& force, Vec& x, double t0,
                  double t1, double tol, Trajectory& out) {
  const double span = t1 - t0;
  if (span <= 0.0) return;
  const auto f = [&](const Vec& y) { return Vec(a.multiply(y) + force); };

  double t = t0;
  double h = span * 0.01;
  double err_prev = 1.0;
  Vec k1 = f(x);
  while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
    h = std::min(h, t1 - t);
    const Vec k2 = f(Vec(x + h * (k1 / 5.0)));
    const Vec k3 = f(Vec(x + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)));
    const Vec k4 =
        f(Vec(x + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)));
    const Vec k5 = f(Vec(x + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                  64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4)));
    const Vec k6 = f(Vec(x + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                  46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                  5103.0 / 18656.0 * k5)));
    const Vec x5 = x + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                            125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                            11.0 / 84.0 * k6);
    const Vec k7 = f(x5);
    const Vec err_vec =
        h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 -
             17253.0 / 339200.0 * k5 + 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7);

    double acc = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      const double sc = tol * (1.0 + std::max(std::abs(x[i]), std::abs(x5[i])));
      const double ratio = err_vec[i] / sc;
      acc += ratio * ratio;
    }
    const double err = std::sqrt(acc / static_cast<double>(x.size()));

    if (err <= 1.0) {
      t += h;
      x = x5;
      k1 = k7;  // first-same-as-last
      out.times.push_back(t);
      out.states.push_back(x);
      const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.14) *
                          std::pow(err_prev, 0.08);
      h *= std::clamp(grow, 0.2, 5.0);
      err_prev = std::max(err, 1e-4);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("simulate: step size underflow");
  }
  // snap the recorded endpoint to the exact segment boundary
  out.times.back() = t1;
}

} // namespace

Trajectory simulate(const SparseMatrix& a, const SparseMatrix& b, const Vec& x0,
                    const PiecewiseConstantSignal& u, double t_f, double tol) {
  const Index n = a.rows();
  if (a.cols() != n)
    throw std::invalid_argument("simulate: system matrix must be square");
  if (b.rows() != n) throw std::invalid_argument("simulate: input matrix row mismatch");
  if (x0.size() != n)
    throw std::invalid_argument("simulate: initial state dimension mismatch");
  if (!(t_f > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("simulate: tolerance must be positive");
  for (const Vec& v : u.values)
    if (v.size() != b.cols())
      throw std::invalid_argument("simulate: input value dimension mismatch");

  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (double bp : u.breakpoints)
    if (bp > 0.0 && bp < t_f) cuts.push_back(bp);
  cuts.push_back(t_f);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Trajectory traj;
  traj.input_signal = u;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  Vec x = x0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Vec force = b.multiply(u.at(cuts[i]));
    rk45_segment(a, force, x, cuts[i], cuts[i + 1], tol, traj);
  }
  return traj;
}

Trajectory simulate(const SparseMatrix& a, const Vec& x0,
                    const PiecewiseConstantSignal& u, double t_f, double tol) {
  return simulate(a, SparseMatrix::identity(a.rows()), x0, u, t_f, tol);
}

std::vector<Trajectory> simulate_batch(
    const SparseMatrix& a, const SparseMatrix& b, const std::vector<Vec>& starts,
    const std::vector<PiecewiseConstantSignal>& inputs, double t_f, double tol) {
  if (starts.size() != inputs.size())
    throw std::invalid_argument("simulate_batch: one input signal per start");
  std::vector<Trajectory> out(starts.size());
  parallel_for(static_cast<Index>(starts.size()), [&](Index i) {
    out[static_cast<size_t>(i)] = simulate(a, b, starts[static_cast<size_t>(i)],
                                           inputs[static_cast<size_t>(i)], t_f, tol);
  });
  return out;
}

Vec sample_point(const Zonotope& z, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec x = z.center();
  for (Index i = 0; i < z.num_generators(); ++i) x += unit(rng) * z.generators().col(i);
  return x;
}

PiecewiseConstantSignal sample_signal(const Zonotope& u_set, double t_f,
                                      double resolution, std::mt19937_64& rng) {
  if (!(resolution > 0.0))
    throw std::invalid_argument("sample_signal: resolution must be positive");
  const Index pieces = std::max<Index>(
      1, static_cast<Index>(std::ceil(t_f / resolution - 1e-9)));
  PiecewiseConstantSignal sig;
  sig.breakpoints.reserve(static_cast<size_t>(pieces));
  sig.values.reserve(static_cast<size_t>(pieces));
  for (Index i = 0; i < pieces; ++i) {
    sig.breakpoints.push_back(static_cast<double>(i) * resolution);
    sig.values.push_back(sample_point(u_set, rng));
  }
  return sig;
}

} // namespace kreach
