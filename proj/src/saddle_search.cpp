#include <cmath>
#include <stdexcept>
#include <string>

#include "ggwpd/error.hpp"
#include "ggwpd/semiclassics.hpp"

namespace ggwpd {

namespace {

CMat block(const CMat& M, int i, int j) {
  const auto d = M.rows() / 2;
  return M.block(i * d, j * d, d, d);
}

CVec solve_checked(const CMat& A, const CVec& rhs) {
  Eigen::PartialPivLU<CMat> lu(A);
  double rc = lu.rcond();
  if (!(rc > 1e-14)) {
    throw NumericalError(NumericalErrorKind::singular_system, "Newton system is singular (coalescing saddles or caustic)");
  }
  return lu.solve(rhs);
}

struct Evaluated {
  ComplexTrajectory traj;
  double norm;
};

using Measure = std::function<double(const ComplexTrajectory&)>;

std::optional<Evaluated> try_evaluate(const ComplexPhasePoint& z, const TrajectoryPropagator& prop, const Measure& measure) {
  try {
    ComplexTrajectory tr = prop(z);
    double r = measure(tr);
    if (!std::isfinite(r)) return std::nullopt;
    return Evaluated{std::move(tr), r};
  } catch (const NumericalError& e) {
    if (e.kind() == NumericalErrorKind::runaway) return std::nullopt;
    throw;
  }
}

// damped Newton iteration shared by the correlation and wavefunction searches
template <class StepFn>
SaddleTrajectory iterate(const ComplexPhasePoint& start, const TrajectoryPropagator& prop, const Measure& measure,
                         StepFn step, const SaddleSearchOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("saddle search: tol must be positive");
  if (opts.max_iter < 0) throw std::invalid_argument("saddle search: max_iter must be non-negative");
  SaddleTrajectory out;
  out.trajectory = prop(start);
  out.residual_norm = measure(out.trajectory);
  out.residual_history.push_back(out.residual_norm);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (out.residual_norm < opts.tol) return out;
    const ComplexPhasePoint& z0 = out.trajectory.initial();
    ComplexPhasePoint target = step(out.trajectory);
    CVec dP = target.P - z0.P;
    CVec dQ = target.Q - z0.Q;
    double lambda = 1.0;
    std::optional<Evaluated> accepted;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      ComplexPhasePoint trial{z0.P + lambda * dP, z0.Q + lambda * dQ};
      auto ev = try_evaluate(trial, prop, measure);
      if (ev && ev->norm <= out.residual_norm) {
        accepted = std::move(ev);
        break;
      }
    }
    if (!accepted) {
      throw NumericalError(NumericalErrorKind::non_convergence,
                           "saddle search stalled: damped step did not reduce the residual at iteration " +
                               std::to_string(it + 1),
                           out.residual_norm);
    }
    out.trajectory = std::move(accepted->traj);
    out.residual_norm = accepted->norm;
    out.residual_history.push_back(out.residual_norm);
    out.iterations = it + 1;
  }
  if (!(out.residual_norm < opts.tol)) {
    throw NumericalError(NumericalErrorKind::non_convergence,
                         "saddle search did not converge in " + std::to_string(opts.max_iter) + " iterations",
                         out.residual_norm);
  }
  return out;
}

}  // namespace

NewtonStep newton_step(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexTrajectory& current) {
  const auto d = alpha.dim();
  if (beta.dim() != d) throw std::invalid_argument("newton_step: dimension mismatch");
  const double h = alpha.hbar();
  NewtonStep out;
  out.residuals = residuals(alpha, beta, current.initial(), current.final());
  CMat ba = alpha.b().cast<Complex>();
  CMat bb = beta.b().cast<Complex>();
  CMat A(2 * d, 2 * d);
  A.topLeftCorner(d, d) = (I / h) * CMat::Identity(d, d);
  A.topRightCorner(d, d) = 2.0 * ba;
  A.bottomLeftCorner(d, d) = 2.0 * bb * current.M21 - (I / beta.hbar()) * current.M11;
  A.bottomRightCorner(d, d) = 2.0 * bb * current.M22 - (I / beta.hbar()) * current.M12;
  CVec rhs(2 * d);
  rhs << -out.residuals.C0, -out.residuals.Ct;
  CVec delta = solve_checked(A, rhs);
  out.updated.P = current.initial().P + delta.head(d);
  out.updated.Q = current.initial().Q + delta.tail(d);
  return out;
}

SaddleTrajectory solve_saddle(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexPhasePoint& start,
                              const TrajectoryPropagator& propagator, const SaddleSearchOptions& opts) {
  Measure measure = [&](const ComplexTrajectory& tr) {
    return residual_norm(residuals(alpha, beta, tr.initial(), tr.final()), alpha.hbar());
  };
  auto step = [&](const ComplexTrajectory& tr) { return newton_step(alpha, beta, tr).updated; };
  return iterate(start, propagator, measure, step, opts);
}

SaddleTrajectory find_saddle(const GaussianPacket& alpha, const GaussianPacket& beta, const SeedTrajectory& seed,
                             const RotorParams& params, const SaddleSearchOptions& opts) {
  GaussianPacket target = beta.shifted(seed.winding[0], seed.winding[1]);
  const int t = seed.t;
  TrajectoryPropagator prop = [&](const ComplexPhasePoint& z) { return propagate(z, t, params, opts.propagation); };
  SaddleTrajectory out = solve_saddle(alpha, target, complexify(seed.ic), prop, opts);
  out.seed = seed;
  return out;
}

ComplexTrajectory solve_endpoint_saddle(const GaussianPacket& alpha, const RVec& x, const ComplexPhasePoint& start,
                                        const TrajectoryPropagator& propagator, const SaddleSearchOptions& opts) {
  const auto d = alpha.dim();
  if (x.size() != d) throw std::invalid_argument("solve_endpoint_saddle: dimension mismatch");
  const double h = alpha.hbar();
  CMat ba = alpha.b().cast<Complex>();
  auto c0 = [&](const ComplexPhasePoint& z) {
    return CVec(2.0 * ba * (z.Q - alpha.center_q().cast<Complex>()) + (I / h) * (z.P - alpha.center_p().cast<Complex>()));
  };
  Measure measure = [&](const ComplexTrajectory& tr) {
    return std::max(h * c0(tr.initial()).norm(), (tr.final().Q - x.cast<Complex>()).norm());
  };
  auto step = [&](const ComplexTrajectory& tr) {
    CMat A(2 * d, 2 * d);
    A.topLeftCorner(d, d) = (I / h) * CMat::Identity(d, d);
    A.topRightCorner(d, d) = 2.0 * ba;
    A.bottomLeftCorner(d, d) = tr.M21;
    A.bottomRightCorner(d, d) = tr.M22;
    CVec rhs(2 * d);
    rhs << -c0(tr.initial()), -(tr.final().Q - x.cast<Complex>());
    CVec delta = solve_checked(A, rhs);
    return ComplexPhasePoint{tr.initial().P + delta.head(d), tr.initial().Q + delta.tail(d)};
  };
  return iterate(start, propagator, measure, step, opts).trajectory;
}

Complex correlation_determinant(const GaussianPacket& alpha, const GaussianPacket& beta, const CMat& M) {
  const double h = alpha.hbar();
  CMat ba = alpha.b().cast<Complex>();
  CMat bb = beta.b().cast<Complex>();
  CMat A = block(M, 0, 0) * ba + bb * block(M, 1, 1) + (2.0 * I * h) * bb * block(M, 1, 0) * ba -
           (I / (2.0 * h)) * block(M, 0, 1);
  return A.determinant();
}

Complex wavefunction_determinant(const GaussianPacket& alpha, const CMat& M) {
  CMat Z = block(M, 1, 1) + (2.0 * I * alpha.hbar()) * block(M, 1, 0) * alpha.b().cast<Complex>();
  return Z.determinant();
}

Complex image_phase(const GaussianPacket& beta, const std::array<int, 2>& winding) {
  double arg = -winding[0] * beta.center_q().sum() / beta.hbar();
  return std::polar(1.0, std::remainder(arg, 2.0 * kPi));
}

}  // namespace ggwpd
