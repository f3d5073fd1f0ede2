#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "ggwpd/error.hpp"
#include "ggwpd/manifolds.hpp"

namespace ggwpd {

namespace {

double dist(RealPoint a, RealPoint b) { return std::hypot(a.p - b.p, a.q - b.q); }

// phase-space distance in units of the packet widths
double sigma_distance(const GaussianPacket& g, RealPoint center, RealPoint x) {
  const double b = g.b()(0, 0);
  const double sq = std::sqrt(0.25 / b);
  const double sp = g.hbar() * std::sqrt(b);
  return std::hypot((x.q - center.q) / sq, (x.p - center.p) / sp);
}

double sigma_radius(const GaussianPacket& g) {
  const double b = g.b()(0, 0);
  return std::max(std::sqrt(0.25 / b), g.hbar() * std::sqrt(b));
}

RealPoint forward(RealPoint x, int n, double K) {
  for (int i = 0; i < n; ++i) x = map_step(x, K);
  return x;
}

// x and a tangent vector (dp, dq) carried n steps forward or backward
void carry(RealPoint& x, Eigen::Vector2d& v, int n, double K, bool fwd) {
  for (int i = 0; i < n; ++i) {
    if (fwd) {
      v = step_stability(x.q, K) * v;
      x = map_step(x, K);
    } else {
      x = inverse_map_step(x, K);
      double c = K * std::cos(2.0 * kPi * x.q);
      Eigen::Matrix2d Minv;
      Minv << 1.0 - c, c, -1.0, 1.0;
      v = Minv * v;
    }
  }
}

struct Branch {
  int depth;
  RealPoint base;
  double coord;
};

// splits a curve parameter into integer depth, lattice base point and the
// linear coordinate along the eigenvector
Branch split(const ManifoldCurve& c, double tau) {
  const ManifoldGeometry& g = c.geometry;
  double sign = std::signbit(tau) ? -1.0 : 1.0;
  double a = std::abs(tau);
  int k = static_cast<int>(std::floor(a));
  int depth = g.period * k;
  bool fwd = c.kind == ManifoldKind::unstable;
  RealPoint base = fixed_point_orbit(c.anchor, fwd ? -depth : depth, g.K);
  return {depth, base, sign * g.start_offset * std::pow(g.multiplier, a - k)};
}

struct Hit {
  double tu;
  double ts;
};

std::optional<Hit> segment_hit(RealPoint a0, RealPoint a1, RealPoint b0, RealPoint b1) {
  double rx = a1.p - a0.p, ry = a1.q - a0.q;
  double sx = b1.p - b0.p, sy = b1.q - b0.q;
  double den = rx * sy - ry * sx;
  if (den == 0.0) return std::nullopt;
  double qx = b0.p - a0.p, qy = b0.q - a0.q;
  double u = (qx * sy - qy * sx) / den;
  double v = (qx * ry - qy * rx) / den;
  if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) return std::nullopt;
  return Hit{u, v};
}

bool same_seed(const SeedTrajectory& a, const SeedTrajectory& b) {
  return a.winding == b.winding && dist(a.ic, b.ic) < 1e-9;
}

void sort_seeds(std::vector<SeedTrajectory>& seeds) {
  std::sort(seeds.begin(), seeds.end(), [](const SeedTrajectory& a, const SeedTrajectory& b) {
    return std::tie(a.winding[0], a.winding[1], a.ic.q, a.ic.p) < std::tie(b.winding[0], b.winding[1], b.ic.q, b.ic.p);
  });
}

std::vector<SeedTrajectory> integrable_seeds(const GaussianPacket& alpha, const GaussianPacket& beta, int t,
                                             double K, int range, const SeedSearchOptions& opts) {
  ManifoldCurve line = shearing_manifold(alpha, opts.width_sigmas, opts.spacing);
  const double q0 = alpha.center_q()(0);
  const double pb = beta.center_p()(0);
  const double qb = beta.center_q()(0);
  auto image = [&](double p) { return forward({p, q0}, t, K); };

  // adaptive sampling of the propagated line
  std::vector<double> ps;
  std::vector<RealPoint> xs;
  const double plo = line.points.front().p;
  const double phi = line.points.back().p;
  ps.push_back(plo);
  xs.push_back(image(plo));
  const int coarse = 64;
  for (int i = 1; i <= coarse; ++i) {
    double pa = ps.back();
    RealPoint xa = xs.back();
    double pe = plo + (phi - plo) * i / coarse;
    std::vector<std::tuple<double, RealPoint, int>> stack{{pe, image(pe), 0}};
    while (!stack.empty()) {
      auto [pm, xm, depth] = stack.back();
      if (dist(xa, xm) > opts.spacing && depth < 50) {
        double pmid = 0.5 * (pa + pm);
        stack.emplace_back(pmid, image(pmid), depth + 1);
        continue;
      }
      stack.pop_back();
      ps.push_back(pm);
      xs.push_back(xm);
      pa = pm;
      xa = xm;
    }
  }

  std::vector<SeedTrajectory> seeds;
  for (int nq = -range; nq <= range; ++nq) {
    const double target = qb + nq;
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      double ga = xs[i].q - target;
      double gb = xs[i + 1].q - target;
      bool bracket = ga == 0.0 || (gb != 0.0 && (ga < 0.0) != (gb < 0.0));
      if (!bracket) continue;
      double lo = ps[i], hi = ps[i + 1];
      double glo = ga;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = image(mid).q - target;
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      double p0 = 0.5 * (lo + hi);
      RealPoint end = image(p0);
      int np = static_cast<int>(std::lround(end.p - pb));
      if (std::abs(np) > range) continue;
      RealPoint img{pb + np, qb + nq};
      if (sigma_distance(beta, img, end) > opts.prune_sigmas) continue;
      SeedTrajectory s;
      s.ic = {p0, q0};
      s.t = t;
      s.winding = {np, nq};
      s.kind = SeedKind::integrable;
      bool dup = std::any_of(seeds.begin(), seeds.end(), [&](const SeedTrajectory& o) { return same_seed(o, s); });
      if (!dup) seeds.push_back(s);
    }
  }
  sort_seeds(seeds);
  return seeds;
}

// Newton refinement of a crossing of the propagated unstable curve with a
// stable curve, in the linear eigenvector coordinates of both
std::optional<RealPoint> refine_crossing(const ManifoldCurve& wu, double tu, const ManifoldCurve& ws, double ts,
                                         int t, double K) {
  Branch bu = split(wu, tu);
  Branch bs = split(ws, ts);
  const Eigen::Vector2d& eu = wu.geometry.eigenvector;
  const Eigen::Vector2d& es = ws.geometry.eigenvector;
  double s = bu.coord;
  double r = bs.coord;
  double best = std::numeric_limits<double>::infinity();
  RealPoint seed{};
  for (int it = 0; it < 60; ++it) {
    RealPoint u{bu.base.p + s * eu(0), bu.base.q + s * eu(1)};
    Eigen::Vector2d du = eu;
    carry(u, du, bu.depth, K, true);
    RealPoint z = u;
    carry(z, du, t, K, true);
    RealPoint w{bs.base.p + r * es(0), bs.base.q + r * es(1)};
    Eigen::Vector2d dw = es;
    carry(w, dw, bs.depth, K, false);
    Eigen::Vector2d F(z.p - w.p, z.q - w.q);
    double fn = F.norm();
    if (fn < best) {
      best = fn;
      seed = u;
    }
    if (fn < 1e-15) break;
    Eigen::Matrix2d J;
    J.col(0) = du;
    J.col(1) = -dw;
    if (std::abs(J.determinant()) == 0.0) return std::nullopt;
    Eigen::Vector2d d = J.partialPivLu().solve(-F);
    s += d(0);
    r += d(1);
  }
  if (!(best < 1e-11)) return std::nullopt;
  return seed;
}

std::vector<SeedTrajectory> chaotic_seeds(const GaussianPacket& alpha, const GaussianPacket& beta, int t,
                                          const RotorParams& params, int range, const SeedSearchOptions& opts) {
  const double K = params.K;
  RealPoint ca{alpha.center_p()(0), alpha.center_q()(0)};
  RealPoint cb{beta.center_p()(0), beta.center_q()(0)};
  if (!is_torus_fixed_point(ca, K) || !is_torus_fixed_point(cb, K)) {
    throw std::invalid_argument("find_seeds: the chaotic search needs packet centers at fixed points");
  }
  const double ra = opts.prune_sigmas * sigma_radius(alpha) + 2.0 * opts.spacing;
  const double rb = opts.prune_sigmas * sigma_radius(beta) + 2.0 * opts.spacing;

  ManifoldCurve wu = unstable_manifold(ca, params, opts.arc_budget, opts.manifold);

  // propagated unstable curve, restricted to the part inside the initial density
  std::vector<double> taus;
  std::vector<RealPoint> img;
  std::vector<bool> cut;  // true if img[i] does not connect to img[i-1]
  auto push = [&](double tau, RealPoint x, bool fresh) {
    taus.push_back(tau);
    img.push_back(x);
    cut.push_back(fresh);
  };
  bool open = false;
  for (std::size_t i = 0; i + 1 < wu.points.size(); ++i) {
    bool inside = dist(wu.points[i], ca) <= ra || dist(wu.points[i + 1], ca) <= ra;
    if (!inside) {
      open = false;
      continue;
    }
    double ta = wu.parameter[i], tb = wu.parameter[i + 1];
    RealPoint xa = forward(wu.points[i], t, K);
    RealPoint xb = forward(wu.points[i + 1], t, K);
    if (!open) push(ta, xa, true);
    open = true;
    if (std::signbit(ta) != std::signbit(tb)) {
      push(tb, xb, false);
      continue;
    }
    std::vector<std::tuple<double, RealPoint, int>> stack{{tb, xb, 0}};
    while (!stack.empty()) {
      auto [tm, xm, depth] = stack.back();
      if (dist(img.back(), xm) > opts.spacing && depth < 50) {
        double tmid = 0.5 * (taus.back() + tm);
        stack.emplace_back(tmid, forward(manifold_point_at(wu, tmid), t, K), depth + 1);
        continue;
      }
      stack.pop_back();
      push(tm, xm, false);
    }
  }

  std::vector<SeedTrajectory> seeds;
  for (int np = -range; np <= range; ++np) {
    for (int nq = -range; nq <= range; ++nq) {
      RealPoint target{cb.p + np, cb.q + nq};
      bool near = std::any_of(img.begin(), img.end(), [&](RealPoint x) { return dist(x, target) <= rb; });
      if (!near) continue;
      ManifoldCurve ws = stable_manifold(target, params, opts.arc_budget, opts.manifold);
      for (std::size_t j = 0; j + 1 < ws.points.size(); ++j) {
        if (dist(ws.points[j], target) > rb && dist(ws.points[j + 1], target) > rb) continue;
        for (std::size_t i = 1; i < img.size(); ++i) {
          if (cut[i]) continue;
          if (dist(img[i], target) > rb + opts.spacing && dist(img[i - 1], target) > rb + opts.spacing) continue;
          auto hit = segment_hit(img[i - 1], img[i], ws.points[j], ws.points[j + 1]);
          if (!hit) continue;
          double tu0 = taus[i - 1], tu1 = taus[i];
          double ts0 = ws.parameter[j], ts1 = ws.parameter[j + 1];
          double tu = std::signbit(tu0) == std::signbit(tu1) ? tu0 + hit->tu * (tu1 - tu0) : tu0;
          double ts = std::signbit(ts0) == std::signbit(ts1) ? ts0 + hit->ts * (ts1 - ts0) : ts0;
          RealPoint seed;
          if (auto refined = refine_crossing(wu, tu, ws, ts, t, K)) {
            seed = *refined;
          } else {
            seed = manifold_point_at(wu, tu);
          }
          RealPoint end = forward(seed, t, K);
          if (sigma_distance(alpha, ca, seed) > opts.prune_sigmas) continue;
          if (sigma_distance(beta, target, end) > opts.prune_sigmas) continue;
          SeedTrajectory s;
          s.ic = seed;
          s.t = t;
          s.winding = {np, nq};
          s.kind = SeedKind::heteroclinic;
          bool dup = std::any_of(seeds.begin(), seeds.end(), [&](const SeedTrajectory& o) { return same_seed(o, s); });
          if (!dup) seeds.push_back(s);
        }
      }
    }
  }
  sort_seeds(seeds);
  return seeds;
}

}  // namespace

std::vector<SeedTrajectory> find_seeds(const GaussianPacket& alpha, const GaussianPacket& beta, int t,
                                       const RotorParams& params, Regime regime, int image_range,
                                       const SeedSearchOptions& opts) {
  params.validate();
  if (alpha.dim() != 1 || beta.dim() != 1) throw std::invalid_argument("find_seeds: one-dimensional packets only");
  if (t < 0) throw std::invalid_argument("find_seeds: t must be non-negative");
  if (image_range < 0) throw std::invalid_argument("find_seeds: image_range must be non-negative");
  if (regime == Regime::integrable) return integrable_seeds(alpha, beta, t, params.K, image_range, opts);
  return chaotic_seeds(alpha, beta, t, params, image_range, opts);
}

}  // namespace ggwpd
