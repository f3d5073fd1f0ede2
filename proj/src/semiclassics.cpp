#include "ggwpd/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ggwpd/error.hpp"

namespace ggwpd {

namespace {

double packet_prefactor(const GaussianPacket& a, const GaussianPacket& b) {
  const double d = static_cast<double>(a.dim());
  return std::pow(std::pow(4.0, d) * a.det_b() * b.det_b(), 0.25);
}

void require_equal_widths(const GaussianPacket& a, const GaussianPacket& b, const char* who) {
  if (a.dim() != 1 || b.dim() != 1) throw std::invalid_argument(std::string(who) + ": one-dimensional packets only");
  if (std::abs(a.b()(0, 0) - b.b()(0, 0)) > 1e-12 * a.b()(0, 0) ||
      std::abs(a.hbar() - b.hbar()) > 1e-14 * a.hbar()) {
    throw std::invalid_argument(std::string(who) + ": packets must share width and hbar");
  }
}

Complex a0_of(const CMat& M, double s2, double h) {
  return M(0, 0) + M(1, 1) + I * (h * M(1, 0) / (2.0 * s2) - 2.0 * s2 * M(0, 1) / h);
}

std::array<int, 2> nearest_image(const GaussianPacket& beta, RealPoint end) {
  return {static_cast<int>(std::lround(end.p - beta.center_p()(0))),
          static_cast<int>(std::lround(end.q - beta.center_q()(0)))};
}

}  // namespace

SaddleContribution ggwpd_term(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexTrajectory& saddle,
                              const BranchTracking& tracking) {
  if (alpha.dim() != beta.dim()) throw std::invalid_argument("ggwpd_term: dimension mismatch");
  if (std::abs(alpha.hbar() - beta.hbar()) > 1e-14 * alpha.hbar()) throw std::invalid_argument("ggwpd_term: hbar mismatch");
  const double h = alpha.hbar();
  BranchAccumulator acc = track_branch(
      saddle.stability_path, [&](const CMat& M) { return correlation_determinant(alpha, beta, M); }, tracking);
  SaddleContribution c;
  c.action = saddle.action;
  c.f_minus = f_minus(alpha, saddle.initial());
  c.f_plus = f_plus(beta, saddle.final());
  c.branch_phase = acc.phase();
  c.prefactor = 1.0 / acc.sqrt();
  c.value = packet_prefactor(alpha, beta) * std::exp(I * c.action / h + c.f_minus + c.f_plus) * c.prefactor;
  return c;
}

CorrelationResult ggwpd_correlation(const GaussianPacket& alpha, const GaussianPacket& beta,
                                    const std::vector<SaddleTrajectory>& saddles, const EvaluationOptions& opts) {
  CorrelationResult out;
  out.value = 0.0;
  double largest = 0.0;
  std::vector<double> weight;
  for (const SaddleTrajectory& s : saddles) {
    GaussianPacket target = beta.shifted(s.seed.winding[0], s.seed.winding[1]);
    BranchContribution b;
    b.seed = s.seed;
    try {
      b.saddle = ggwpd_term(alpha, target, s.trajectory, opts.tracking);
    } catch (const NumericalError& e) {
      throw NumericalError(e.kind(), std::string(e.what()) + " on branch with winding (" +
                                         std::to_string(s.seed.winding[0]) + ", " + std::to_string(s.seed.winding[1]) + ")");
    }
    b.value = b.saddle->value * image_phase(beta, s.seed.winding);
    double w = std::abs(b.value);
    largest = std::max(largest, w);
    weight.push_back(w);
    out.branches.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < out.branches.size(); ++i) {
    BranchContribution& b = out.branches[i];
    b.pruned = weight[i] < opts.prune_ratio * largest;
    if (!b.pruned) out.value += b.value;
  }
  return out;
}

OffCenterContribution offcenter_term(const GaussianPacket& alpha, const GaussianPacket& beta,
                                     const ComplexTrajectory& real_trajectory, const BranchTracking& tracking) {
  require_equal_widths(alpha, beta, "offcenter_term");
  const double h = alpha.hbar();
  const double s2 = 0.25 / alpha.b()(0, 0);
  const double rs = std::sqrt(2.0 * s2);
  const CMat M = real_trajectory.stability();
  const double M11 = M(0, 0).real(), M12 = M(0, 1).real(), M21 = M(1, 0).real(), M22 = M(1, 1).real();
  const double p0 = real_trajectory.initial().P(0).real();
  const double x0 = real_trajectory.initial().Q(0).real();
  const double pt = real_trajectory.final().P(0).real();
  const double xt = real_trajectory.final().Q(0).real();
  const double xa = alpha.center_q()(0), pa = alpha.center_p()(0);
  const double xb = beta.center_q()(0), pb = beta.center_p()(0);

  OffCenterContribution c;
  c.A0 = Complex(M11 + M22, h * M21 / (2.0 * s2) - 2.0 * s2 * M12 / h);
  c.A1 = Complex(M22, -2.0 * s2 * M12 / h);
  c.A2 = Complex(M11, -2.0 * s2 * M12 / h);
  c.A3 = Complex(M11, h * M21 / (2.0 * s2));
  c.A4 = Complex(M22, h * M21 / (2.0 * s2));
  c.dx_a = (xa - x0) / rs;
  c.dp_a = (pa - p0) * rs / h;
  c.dx_b = (xb - xt) / rs;
  c.dp_b = (pb - pt) * rs / h;
  BranchAccumulator acc = track_branch(
      real_trajectory.stability_path, [&](const CMat& m) { return a0_of(m, s2, h); }, tracking);
  c.branch_phase = acc.phase();
  const double S = real_trajectory.action.real();
  Complex quad = c.A1 * c.dx_a * c.dx_a + c.A2 * c.dx_b * c.dx_b + c.A3 * c.dp_a * c.dp_a + c.A4 * c.dp_b * c.dp_b -
                 2.0 * Complex(c.dx_a, c.dp_a) * Complex(c.dx_b, -c.dp_b) + 2.0 * I * c.A1 * c.dx_a * c.dp_a -
                 2.0 * I * c.A2 * c.dx_b * c.dp_b;
  Complex expo = (I / h) * (S + pt * (xb - xt) - p0 * (xa - x0)) - quad / (2.0 * c.A0);
  c.value = std::sqrt(2.0) / acc.sqrt() * std::exp(expo);
  return c;
}

CorrelationResult offcenter_correlation(const GaussianPacket& alpha, const GaussianPacket& beta,
                                        const std::vector<SeedTrajectory>& seeds, const RotorParams& params, int t,
                                        const EvaluationOptions& opts) {
  CorrelationResult out;
  out.value = 0.0;
  for (const SeedTrajectory& s : seeds) {
    if (s.t != t) throw std::invalid_argument("offcenter_correlation: seed step count differs from t");
    ComplexTrajectory tr = propagate(complexify(s.ic), t, params);
    GaussianPacket target = beta.shifted(s.winding[0], s.winding[1]);
    BranchContribution b;
    b.seed = s;
    b.offcenter = offcenter_term(alpha, target, tr, opts.tracking);
    b.value = b.offcenter->value * image_phase(beta, s.winding);
    out.value += b.value;
    out.branches.push_back(std::move(b));
  }
  return out;
}

Complex linearized_correlation(const GaussianPacket& alpha, const GaussianPacket& beta, const RotorParams& params,
                               int t, const EvaluationOptions& opts) {
  require_equal_widths(alpha, beta, "linearized_correlation");
  RealPoint c{alpha.center_p()(0), alpha.center_q()(0)};
  ComplexTrajectory tr = propagate(complexify(c), t, params);
  RealPoint end{tr.final().P(0).real(), tr.final().Q(0).real()};
  std::array<int, 2> w = nearest_image(beta, end);
  GaussianPacket target = beta.shifted(w[0], w[1]);
  return offcenter_term(alpha, target, tr, opts.tracking).value * image_phase(beta, w);
}

Complex ggwpd_wavefunction_term(const GaussianPacket& alpha, const ComplexTrajectory& saddle,
                                const BranchTracking& tracking) {
  BranchAccumulator acc = track_branch(
      saddle.stability_path, [&](const CMat& M) { return wavefunction_determinant(alpha, M); }, tracking);
  Complex expo = I * saddle.action / alpha.hbar() + f_minus(alpha, saddle.initial());
  return alpha.norm_constant() * std::exp(expo) / acc.sqrt();
}

Complex ggwpd_wavefunction(const GaussianPacket& alpha, const RVec& x, const WavefunctionSaddleSolver& solver,
                           const BranchTracking& tracking) {
  Complex sum{0.0, 0.0};
  for (const ComplexTrajectory& tr : solver(x)) sum += ggwpd_wavefunction_term(alpha, tr, tracking);
  return sum;
}

Complex linearized_wavefunction(const GaussianPacket& alpha, const ComplexTrajectory& center, const RVec& x,
                                const BranchTracking& tracking) {
  const double h = alpha.hbar();
  CMat ba = alpha.b().cast<Complex>();
  CMat Y = center.M12 + (2.0 * I * h) * center.M11 * ba;
  CMat Z = center.M22 + (2.0 * I * h) * center.M21 * ba;
  BranchAccumulator acc = track_branch(
      center.stability_path, [&](const CMat& M) { return wavefunction_determinant(alpha, M); }, tracking);
  CVec dx = x.cast<Complex>() - center.final().Q;
  Complex quad = (dx.transpose() * Y * Z.partialPivLu().solve(dx))(0, 0);
  Complex expo = (I / h) * (center.action + (center.final().P.transpose() * dx)(0, 0) + 0.5 * quad);
  return alpha.norm_constant() * std::exp(expo) / acc.sqrt();
}

Complex offcenter_wavefunction(const GaussianPacket& alpha, const ComplexTrajectory& real_trajectory, double x,
                               const BranchTracking& tracking) {
  if (alpha.dim() != 1) throw std::invalid_argument("offcenter_wavefunction: one-dimensional packets only");
  const double xt = real_trajectory.final().Q(0).real();
  if (std::abs(xt - x) > 1e-9 * std::max(1.0, std::abs(x))) {
    throw std::invalid_argument("offcenter_wavefunction: trajectory does not end at x");
  }
  const double h = alpha.hbar();
  const double b = alpha.b()(0, 0);
  const double p0 = real_trajectory.initial().P(0).real();
  const double dq = real_trajectory.initial().Q(0).real() - alpha.center_q()(0);
  const double pa = alpha.center_p()(0);
  const Complex M21 = real_trajectory.M21(0, 0);
  BranchAccumulator acc = track_branch(
      real_trajectory.stability_path, [&](const CMat& M) { return wavefunction_determinant(alpha, M); }, tracking);
  Complex B = (I / h) * (pa - p0) - 2.0 * b * dq;
  Complex C = (I / h) * real_trajectory.action.real() - b * dq * dq + (I / h) * pa * dq;
  return alpha.norm_constant() * std::exp(C + B * B * I * h * M21 / (2.0 * acc.value())) / acc.sqrt();
}

RotorWavefunctionSolver::RotorWavefunctionSolver(const GaussianPacket& alpha, int t, const RotorParams& params,
                                                 const SaddleSearchOptions& opts, double width_sigmas, double spacing)
    : alpha_(alpha), t_(t), params_(params), opts_(opts) {
  ManifoldCurve line = shearing_manifold(alpha, width_sigmas, spacing);
  const double q0 = alpha.center_q()(0);
  auto qt = [&](double p) {
    RealPoint x{p, q0};
    for (int i = 0; i < t_; ++i) x = map_step(x, params_.K);
    return x.q;
  };
  const double lo = line.points.front().p, hi = line.points.back().p;
  const int coarse = 64;
  p0_.push_back(lo);
  qt_.push_back(qt(lo));
  for (int i = 1; i <= coarse; ++i) {
    double pe = lo + (hi - lo) * i / coarse;
    std::vector<std::pair<double, int>> stack{{pe, 0}};
    while (!stack.empty()) {
      auto [pm, depth] = stack.back();
      double qm = qt(pm);
      if (std::abs(qm - qt_.back()) > spacing && depth < 50) {
        stack.emplace_back(0.5 * (p0_.back() + pm), depth + 1);
        continue;
      }
      stack.pop_back();
      p0_.push_back(pm);
      qt_.push_back(qm);
    }
  }
  auto [mn, mx] = std::minmax_element(qt_.begin(), qt_.end());
  q_min_ = *mn;
  q_max_ = *mx;
}

std::vector<ComplexTrajectory> RotorWavefunctionSolver::operator()(const RVec& x) const {
  if (x.size() != 1) throw std::invalid_argument("RotorWavefunctionSolver: one-dimensional positions only");
  const double target = x(0);
  const double q0 = alpha_.center_q()(0);
  auto g = [&](double p) {
    RealPoint z{p, q0};
    for (int i = 0; i < t_; ++i) z = map_step(z, params_.K);
    return z.q - target;
  };
  TrajectoryPropagator prop = [&](const ComplexPhasePoint& z) { return propagate(z, t_, params_, opts_.propagation); };
  std::vector<ComplexTrajectory> out;
  for (std::size_t i = 0; i + 1 < p0_.size(); ++i) {
    double ga = qt_[i] - target, gb = qt_[i + 1] - target;
    bool bracket = ga == 0.0 || (gb != 0.0 && (ga < 0.0) != (gb < 0.0));
    if (!bracket) continue;
    double lo = p0_[i], hi = p0_[i + 1], glo = ga;
    for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      double gm = g(mid);
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
    ComplexPhasePoint start = complexify({0.5 * (lo + hi), q0});
    out.push_back(solve_endpoint_saddle(alpha_, x, start, prop, opts_));
  }
  return out;
}

CVec ggwpd_torus_wavefunction(const GaussianPacket& alpha, int N, int t, const RotorParams& params,
                              const SaddleSearchOptions& opts, const BranchTracking& tracking, double width_sigmas) {
  if (N < 2) throw std::invalid_argument("ggwpd_torus_wavefunction: N must be at least 2");
  RotorWavefunctionSolver solver(alpha, t, params, opts, width_sigmas);
  CVec psi = CVec::Zero(N);
  RVec x(1);
  for (int s = 1; s <= N; ++s) {
    double q = static_cast<double>(s) / N;
    int m0 = static_cast<int>(std::ceil(solver.q_min() - q));
    int m1 = static_cast<int>(std::floor(solver.q_max() - q));
    for (int m = m0; m <= m1; ++m) {
      x(0) = q + m;
      psi(s - 1) += ggwpd_wavefunction(alpha, x, solver, tracking);
    }
  }
  return psi;
}

}  // namespace ggwpd
