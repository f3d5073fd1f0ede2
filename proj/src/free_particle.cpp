#include "ggwpd/free_particle.hpp"

#include <cmath>
#include <stdexcept>

namespace ggwpd {

namespace {

void check(const GaussianPacket& alpha, double mass) {
  if (alpha.dim() != 1) throw std::invalid_argument("free particle: one-dimensional packets only");
  if (!(mass > 0.0)) throw std::invalid_argument("free particle: mass must be positive");
}

}  // namespace

ComplexTrajectory free_particle_trajectory(const ComplexPhasePoint& ic, double t, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("free particle: mass must be positive");
  const auto d = ic.dim();
  ComplexTrajectory tr;
  tr.points.push_back(ic);
  ComplexPhasePoint end{ic.P, ic.Q + (t / mass) * ic.P};
  tr.points.push_back(end);
  tr.action = (t / (2.0 * mass)) * (ic.P.transpose() * ic.P)(0, 0);
  tr.M11 = CMat::Identity(d, d);
  tr.M12 = CMat::Zero(d, d);
  tr.M21 = (t / mass) * CMat::Identity(d, d);
  tr.M22 = CMat::Identity(d, d);
  tr.stability_path = {CMat::Identity(2 * d, 2 * d), tr.stability()};
  return tr;
}

TrajectoryPropagator free_particle_propagator(double t, double mass) {
  return [t, mass](const ComplexPhasePoint& z) { return free_particle_trajectory(z, t, mass); };
}

ComplexPhasePoint free_particle_saddle(const GaussianPacket& alpha, double x, double t, double mass) {
  check(alpha, mass);
  const double pa = alpha.center_p()(0), qa = alpha.center_q()(0);
  if (t == 0.0) return manifold_point(alpha, CVec::Constant(1, Complex(x, 0.0)));
  const double s2 = alpha.sigma() * alpha.sigma();
  const double kappa = alpha.hbar() * t / (2.0 * mass * s2);
  const double qt = qa + t * pa / mass;
  const Complex den(1.0, kappa);
  ComplexPhasePoint z;
  z.P = CVec::Constant(1, pa + I * kappa * mass / t * (x - qt) / den);
  z.Q = CVec::Constant(1, qa + (x - qt) / den);
  return z;
}

RealPoint free_particle_offcenter_ic(const GaussianPacket& alpha, double x, double t, double mass) {
  check(alpha, mass);
  if (t == 0.0) throw std::invalid_argument("free_particle_offcenter_ic: t must be nonzero");
  const double pa = alpha.center_p()(0), qa = alpha.center_q()(0);
  const double qt = qa + t * pa / mass;
  return {pa + mass / t * (x - qt), qa};
}

Complex free_particle_exact(const GaussianPacket& alpha, double x, double t, double mass) {
  check(alpha, mass);
  const double h = alpha.hbar();
  const double s2 = alpha.sigma() * alpha.sigma();
  const double kappa = h * t / (2.0 * mass * s2);
  const double pt = alpha.center_p()(0);
  const double dx = x - (alpha.center_q()(0) + t * pt / mass);
  const Complex den(1.0, kappa);
  Complex expo = -dx * dx / (4.0 * s2 * den) + I * pt * dx / h + I * pt * pt * t / (2.0 * mass * h);
  return std::pow(1.0 / (2.0 * kPi * s2), 0.25) / std::sqrt(den) * std::exp(expo);
}

}  // namespace ggwpd
