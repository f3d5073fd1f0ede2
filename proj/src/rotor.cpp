#include "ggwpd/rotor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ggwpd/error.hpp"

namespace ggwpd {

void RotorParams::validate() const {
  if (!std::isfinite(K) || K < 0.0) throw std::invalid_argument("RotorParams: K must be finite and non-negative");
}

CMat assemble_stability(const CMat& M11, const CMat& M12, const CMat& M21, const CMat& M22) {
  const auto d = M11.rows();
  CMat M(2 * d, 2 * d);
  M.topLeftCorner(d, d) = M11;
  M.topRightCorner(d, d) = M12;
  M.bottomLeftCorner(d, d) = M21;
  M.bottomRightCorner(d, d) = M22;
  return M;
}

CMat ComplexTrajectory::stability() const { return assemble_stability(M11, M12, M21, M22); }

ComplexPhasePoint map_step(const ComplexPhasePoint& point, const RotorParams& params, bool fold) {
  if (point.dim() != 1 || point.P.size() != 1) throw std::invalid_argument("map_step: rotor points are one-dimensional");
  const double K = params.K;
  Complex q = point.Q(0);
  Complex p = point.P(0) - K / (2.0 * kPi) * std::sin(2.0 * kPi * q);
  Complex q2 = q + p;
  if (fold) {
    if (point.P(0).imag() != 0.0 || point.Q(0).imag() != 0.0) {
      throw std::invalid_argument("map_step: folding requires a real point");
    }
    double pr = p.real() - std::floor(p.real());
    double qr = q2.real() - std::floor(q2.real());
    p = pr;
    q2 = qr;
  }
  ComplexPhasePoint out;
  out.P = CVec::Constant(1, p);
  out.Q = CVec::Constant(1, q2);
  return out;
}

RealPoint map_step(RealPoint x, double K) {
  double p = x.p - K / (2.0 * kPi) * std::sin(2.0 * kPi * x.q);
  return {p, x.q + p};
}

RealPoint inverse_map_step(RealPoint x, double K) {
  double q = x.q - x.p;
  return {x.p + K / (2.0 * kPi) * std::sin(2.0 * kPi * q), q};
}

Eigen::Matrix2d step_stability(double q, double K) {
  double c = K * std::cos(2.0 * kPi * q);
  Eigen::Matrix2d M;
  M << 1.0, -c, 1.0, 1.0 - c;
  return M;
}

namespace {

ComplexTrajectory propagate_impl(const ComplexPhasePoint& ic, int t, const RotorParams& params,
                                 const PropagationOptions& opts) {
  params.validate();
  if (t < 0) throw std::invalid_argument("propagate: t must be non-negative");
  if (ic.dim() != 1 || ic.P.size() != 1) throw std::invalid_argument("propagate: rotor points are one-dimensional");
  const double K = params.K;
  ComplexTrajectory traj;
  traj.points.reserve(t + 1);
  traj.points.push_back(ic);
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity();
  traj.stability_path.reserve(2 * t + 1);
  traj.stability_path.push_back(M);
  Complex S{0.0, 0.0};
  Complex p = ic.P(0);
  Complex q = ic.Q(0);
  for (int n = 0; n < t; ++n) {
    Complex c = K * std::cos(2.0 * kPi * q);
    Complex p2 = p - K / (2.0 * kPi) * std::sin(2.0 * kPi * q);
    Complex q2 = q + p2;
    S += 0.5 * (q2 - q) * (q2 - q) + K / (4.0 * kPi * kPi) * std::cos(2.0 * kPi * q);
    if (std::abs(p2.imag()) > opts.runaway_bound || std::abs(q2.imag()) > opts.runaway_bound ||
        !std::isfinite(std::abs(p2)) || !std::isfinite(std::abs(q2))) {
      throw NumericalError(NumericalErrorKind::runaway, "runaway trajectory at step " + std::to_string(n + 1));
    }
    Eigen::Matrix2cd kick;
    kick << 1.0, -c, 0.0, 1.0;
    Eigen::Matrix2cd drift;
    drift << 1.0, 0.0, 1.0, 1.0;
    M = kick * M;
    traj.stability_path.push_back(M);
    M = drift * M;
    traj.stability_path.push_back(M);
    p = p2;
    q = q2;
    ComplexPhasePoint z;
    z.P = CVec::Constant(1, p);
    z.Q = CVec::Constant(1, q);
    traj.points.push_back(std::move(z));
  }
  traj.action = S;
  traj.M11 = M.block(0, 0, 1, 1);
  traj.M12 = M.block(0, 1, 1, 1);
  traj.M21 = M.block(1, 0, 1, 1);
  traj.M22 = M.block(1, 1, 1, 1);
  return traj;
}

}  // namespace

ComplexTrajectory propagate(const ComplexPhasePoint& ic, int t, const RotorParams& params,
                            const PropagationOptions& opts) {
  return propagate_impl(ic, t, params, opts);
}

ComplexTrajectory propagate(const ComplexPhasePoint& ic, int t, const RotorParams& params,
                            const DeterminantOf& det_of, const BranchTracking& tracking,
                            const PropagationOptions& opts) {
  ComplexTrajectory traj = propagate_impl(ic, t, params, opts);
  traj.branch_phase = track_branch(traj.stability_path, det_of, tracking).phase();
  return traj;
}

}  // namespace ggwpd
