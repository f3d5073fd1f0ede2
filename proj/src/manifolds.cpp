#include "ggwpd/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ggwpd/error.hpp"

namespace ggwpd {

RealPoint fixed_point_orbit(RealPoint fp, int n, double K) {
  RealPoint x = fp;
  for (int i = 0; i < std::abs(n); ++i) {
    RealPoint y = n > 0 ? map_step(x, K) : inverse_map_step(x, K);
    x.p += std::round(y.p - x.p);
    x.q += std::round(y.q - x.q);
  }
  return x;
}

bool is_torus_fixed_point(RealPoint fp, double K, double tol) {
  RealPoint y = map_step(fp, K);
  double dp = y.p - fp.p;
  double dq = y.q - fp.q;
  return std::abs(dp - std::round(dp)) < tol && std::abs(dq - std::round(dq)) < tol;
}

namespace {

double dist(RealPoint a, RealPoint b) { return std::hypot(a.p - b.p, a.q - b.q); }

ManifoldGeometry hyperbolic_geometry(RealPoint fp, double K, bool forward, double start_offset) {
  if (!is_torus_fixed_point(fp, K)) throw std::invalid_argument("manifold: anchor is not a fixed point of the torus map");
  Eigen::Matrix2d M = step_stability(fp.q, K);
  double tr = M.trace();
  if (std::abs(tr) <= 2.0) {
    throw NumericalError(NumericalErrorKind::not_hyperbolic, "manifold: fixed point is not hyperbolic");
  }
  // eigenvalues of a unit-determinant 2x2 matrix
  double disc = std::sqrt(tr * tr - 4.0);
  double l1 = 0.5 * (tr + disc);
  double l2 = 0.5 * (tr - disc);
  double lu = std::abs(l1) > std::abs(l2) ? l1 : l2;
  double lam = forward ? lu : 1.0 / lu;
  // eigenvector of M for lam, written as (dp, dq)
  Eigen::Vector2d e(lam - M(1, 1), M(1, 0));
  if (e.norm() < 1e-300) e = Eigen::Vector2d(M(0, 1), lam - M(0, 0));
  e.normalize();
  if (e(0) < 0.0 || (e(0) == 0.0 && e(1) < 0.0)) e = -e;
  ManifoldGeometry g;
  g.eigenvector = e;
  g.eigenvalue = lu;  // expanding eigenvalue for g = f or g = f^{-1}
  g.period = lu > 0.0 ? 1 : 2;
  g.multiplier = std::pow(std::abs(lu), g.period);
  g.start_offset = start_offset;
  g.K = K;
  return g;
}

RealPoint iterate(RealPoint x, int n, double K, bool forward) {
  for (int i = 0; i < n; ++i) x = forward ? map_step(x, K) : inverse_map_step(x, K);
  return x;
}

RealPoint evaluate(const ManifoldCurve& c, double tau) {
  const ManifoldGeometry& g = c.geometry;
  const bool forward = c.kind == ManifoldKind::unstable;
  double sign = std::signbit(tau) ? -1.0 : 1.0;
  double a = std::abs(tau);
  int k = static_cast<int>(std::floor(a));
  double phi = a - k;
  int depth = g.period * k;
  RealPoint base = fixed_point_orbit(c.anchor, forward ? -depth : depth, g.K);
  double s = sign * g.start_offset * std::pow(g.multiplier, phi);
  RealPoint y{base.p + s * g.eigenvector(0), base.q + s * g.eigenvector(1)};
  return iterate(y, depth, g.K, forward);
}

struct Pending {
  double ta;
  RealPoint xa;
  double tb;
  RealPoint xb;
  int depth;
};

// samples one branch in order of increasing |tau| until the arc budget is spent
void sample_branch(const ManifoldCurve& c, double sign, double arc_budget, const ManifoldOptions& opts,
                   std::vector<double>& taus, std::vector<RealPoint>& pts, std::size_t& total) {
  auto tau_of = [sign](double a) { return sign < 0 ? -a : a; };
  double arc = 0.0;
  RealPoint start = evaluate(c, tau_of(0.0));
  taus.push_back(tau_of(0.0));
  pts.push_back(start);
  for (int level = 0; level < opts.max_levels; ++level) {
    double ta = level;
    double tb = level + 1.0;
    std::vector<Pending> stack;
    stack.push_back({ta, pts.back(), tb, evaluate(c, tau_of(tb)), 0});
    while (!stack.empty()) {
      Pending seg = stack.back();
      stack.pop_back();
      if (dist(seg.xa, seg.xb) > opts.spacing && seg.depth < 60) {
        double tm = 0.5 * (seg.ta + seg.tb);
        RealPoint xm = evaluate(c, tau_of(tm));
        stack.push_back({tm, xm, seg.tb, seg.xb, seg.depth + 1});
        stack.push_back({seg.ta, seg.xa, tm, xm, seg.depth + 1});
        continue;
      }
      arc += dist(seg.xa, seg.xb);
      taus.push_back(tau_of(seg.tb));
      pts.push_back(seg.xb);
      if (++total > opts.max_points) {
        throw NumericalError(NumericalErrorKind::refinement_cap, "manifold refinement exceeded the point cap");
      }
      if (arc >= arc_budget) return;
    }
  }
}

ManifoldCurve build_invariant(RealPoint fp, const RotorParams& params, double arc_budget,
                              const ManifoldOptions& opts, ManifoldKind kind) {
  params.validate();
  if (!(arc_budget > 0.0)) throw std::invalid_argument("manifold: arc budget must be positive");
  ManifoldCurve c;
  c.kind = kind;
  c.anchor = fp;
  c.geometry = hyperbolic_geometry(fp, params.K, kind == ManifoldKind::unstable, opts.start_offset);
  std::vector<double> tm, tp;
  std::vector<RealPoint> xm, xp;
  std::size_t total = 0;
  sample_branch(c, -1.0, arc_budget, opts, tm, xm, total);
  sample_branch(c, +1.0, arc_budget, opts, tp, xp, total);
  std::reverse(tm.begin(), tm.end());
  std::reverse(xm.begin(), xm.end());
  c.parameter = std::move(tm);
  c.points = std::move(xm);
  c.parameter.insert(c.parameter.end(), tp.begin(), tp.end());
  c.points.insert(c.points.end(), xp.begin(), xp.end());
  return c;
}

}  // namespace

ManifoldCurve unstable_manifold(RealPoint fp, const RotorParams& params, double arc_budget,
                                const ManifoldOptions& opts) {
  return build_invariant(fp, params, arc_budget, opts, ManifoldKind::unstable);
}

ManifoldCurve stable_manifold(RealPoint fp, const RotorParams& params, double arc_budget,
                              const ManifoldOptions& opts) {
  return build_invariant(fp, params, arc_budget, opts, ManifoldKind::stable);
}

ManifoldCurve shearing_manifold(const GaussianPacket& packet, double width_sigmas, double spacing) {
  if (packet.dim() != 1) throw std::invalid_argument("shearing_manifold: one-dimensional packets only");
  if (!(spacing > 0.0) || !(width_sigmas > 0.0)) throw std::invalid_argument("shearing_manifold: bad width or spacing");
  const double pc = packet.center_p()(0);
  const double qc = packet.center_q()(0);
  const double sigma_p = packet.hbar() * std::sqrt(packet.b()(0, 0));
  const double w = width_sigmas * sigma_p;
  const int n = static_cast<int>(std::ceil(2.0 * w / spacing));
  ManifoldCurve c;
  c.kind = ManifoldKind::shearing;
  c.anchor = {pc, qc};
  c.points.reserve(n + 1);
  c.parameter.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    double p = pc - w + 2.0 * w * i / n;
    c.points.push_back({p, qc});
    c.parameter.push_back(p);
  }
  return c;
}

RealPoint manifold_point_at(const ManifoldCurve& curve, double tau) {
  if (curve.kind == ManifoldKind::shearing) return {tau, curve.anchor.q};
  return evaluate(curve, tau);
}

double distance_to_curve(const ManifoldCurve& curve, RealPoint x) {
  if (curve.points.empty()) return std::numeric_limits<double>::infinity();
  if (curve.kind == ManifoldKind::shearing) {
    double p = std::clamp(x.p, curve.points.front().p, curve.points.back().p);
    return dist({p, curve.anchor.q}, x);
  }
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    double d = dist(curve.points[i], x);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  auto golden = [&](double a, double b) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double sign = std::signbit(a) && std::signbit(b) ? -1.0 : 1.0;
    auto f = [&](double u) { return dist(manifold_point_at(curve, sign < 0 ? -u : u), x); };
    double lo = std::abs(a), hi = std::abs(b);
    if (lo > hi) std::swap(lo, hi);
    double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      if (fc < fd) {
        hi = d; d = c; fd = fc; c = hi - r * (hi - lo); fc = f(c);
      } else {
        lo = c; c = d; fc = fd; d = lo + r * (hi - lo); fd = f(d);
      }
    }
    return std::min({fc, fd, f(lo), f(hi)});
  };
  double result = bd;
  std::size_t lo = best > 0 ? best - 1 : best;
  std::size_t hi = std::min(best + 1, curve.points.size() - 1);
  for (std::size_t i = lo; i < hi; ++i) {
    double a = curve.parameter[i], b = curve.parameter[i + 1];
    if (std::signbit(a) != std::signbit(b)) continue;
    result = std::min(result, golden(a, b));
  }
  return result;
}

std::string manifold_csv(const ManifoldCurve& curve) {
  std::string out = "index,p,q\n";
  char buf[96];
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, curve.points[i].p, curve.points[i].q);
    out += buf;
  }
  return out;
}

}  // namespace ggwpd
