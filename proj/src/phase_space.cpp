#include "ggwpd/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace ggwpd {

GaussianPacket::GaussianPacket(RVec center_q, RVec center_p, RMat b, double hbar)
    : q_(std::move(center_q)), p_(std::move(center_p)), b_(std::move(b)), hbar_(hbar) {
  const auto d = q_.size();
  if (d < 1 || p_.size() != d || b_.rows() != d || b_.cols() != d) {
    throw std::invalid_argument("GaussianPacket: inconsistent dimensions");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw std::invalid_argument("GaussianPacket: hbar must be positive");
  if (!q_.allFinite() || !p_.allFinite() || !b_.allFinite()) {
    throw std::invalid_argument("GaussianPacket: non-finite parameters");
  }
  if ((b_ - b_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * b_.cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("GaussianPacket: b must be symmetric");
  }
  Eigen::LLT<RMat> llt(b_);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("GaussianPacket: b must be positive definite");
  b_inv_ = llt.solve(RMat::Identity(d, d));
  det_b_ = b_.determinant();
}

GaussianPacket GaussianPacket::one_d(double p, double q, double b, double hbar) {
  return GaussianPacket(RVec::Constant(1, q), RVec::Constant(1, p), RMat::Constant(1, 1, b), hbar);
}

GaussianPacket GaussianPacket::rotor(double p, double q, int N) {
  if (N < 2) throw std::invalid_argument("GaussianPacket::rotor: N must be at least 2");
  return one_d(p, q, kPi * N, 1.0 / (2.0 * kPi * N));
}

double GaussianPacket::norm_constant() const {
  const double d = static_cast<double>(dim());
  return std::pow(std::pow(2.0 / kPi, d) * det_b_, 0.25);
}

double GaussianPacket::sigma() const {
  if (dim() != 1) throw std::invalid_argument("GaussianPacket::sigma: one-dimensional packets only");
  return std::sqrt(0.25 / b_(0, 0));
}

GaussianPacket GaussianPacket::shifted(const RVec& dp, const RVec& dq) const {
  return GaussianPacket(q_ + dq, p_ + dp, b_, hbar_);
}

GaussianPacket GaussianPacket::shifted(int n_p, int n_q) const {
  return shifted(RVec::Constant(dim(), n_p), RVec::Constant(dim(), n_q));
}

Complex packet_evaluate(const GaussianPacket& packet, const RVec& x) {
  RVec dx = x - packet.center_q();
  double quad = dx.dot(packet.b() * dx);
  double lin = packet.center_p().dot(dx) / packet.hbar();
  return packet.norm_constant() * std::exp(Complex(-quad, lin));
}

ComplexPhasePoint manifold_point(const GaussianPacket& packet, const CVec& Q) {
  ComplexPhasePoint z;
  z.Q = Q;
  z.P = packet.center_p().cast<Complex>() +
        (2.0 * I * packet.hbar()) * (packet.b().cast<Complex>() * (Q - packet.center_q().cast<Complex>()));
  return z;
}

namespace {

Complex f_common(const GaussianPacket& g, const ComplexPhasePoint& z, double sign) {
  const double h = g.hbar();
  RVec pr = z.P.real();
  RVec pi = z.P.imag();
  RVec qi = z.Q.imag();
  const RMat& binv = g.b_inverse();
  double cross = pr.dot(binv * pi) / (2.0 * h * h);
  double re = -pi.dot(binv * pi) / (4.0 * h * h) - qi.dot(g.b() * qi) + sign * pr.dot(qi) / h;
  return Complex(re, cross);
}

}  // namespace

Complex f_minus(const GaussianPacket& alpha, const ComplexPhasePoint& point0) {
  return f_common(alpha, point0, -1.0);
}

Complex f_plus(const GaussianPacket& beta, const ComplexPhasePoint& point_t) {
  return f_common(beta, point_t, +1.0);
}

ResidualPair residuals(const GaussianPacket& alpha, const GaussianPacket& beta,
                       const ComplexPhasePoint& point0, const ComplexPhasePoint& point_t) {
  ResidualPair r;
  r.C0 = 2.0 * alpha.b().cast<Complex>() * (point0.Q - alpha.center_q().cast<Complex>()) +
         (I / alpha.hbar()) * (point0.P - alpha.center_p().cast<Complex>());
  r.Ct = 2.0 * beta.b().cast<Complex>() * (point_t.Q - beta.center_q().cast<Complex>()) -
         (I / beta.hbar()) * (point_t.P - beta.center_p().cast<Complex>());
  return r;
}

double residual_norm(const ResidualPair& r, double hbar) {
  return hbar * std::max(r.C0.norm(), r.Ct.norm());
}

Complex gaussian_overlap(const GaussianPacket& alpha, const GaussianPacket& beta) {
  if (alpha.dim() != beta.dim()) throw std::invalid_argument("gaussian_overlap: dimension mismatch");
  if (std::abs(alpha.hbar() - beta.hbar()) > 1e-14 * alpha.hbar()) {
    throw std::invalid_argument("gaussian_overlap: hbar mismatch");
  }
  const double h = alpha.hbar();
  const RMat& ba = alpha.b();
  const RMat& bb = beta.b();
  const RVec& qa = alpha.center_q();
  const RVec& qb = beta.center_q();
  const RVec& pa = alpha.center_p();
  const RVec& pb = beta.center_p();
  RMat A = ba + bb;
  CVec J = (2.0 * (ba * qa + bb * qb)).cast<Complex>() + (I / h) * (pa - pb).cast<Complex>();
  Complex c = -qa.dot(ba * qa) - qb.dot(bb * qb) - (I / h) * (pa.dot(qa) - pb.dot(qb));
  Eigen::LLT<RMat> llt(A);
  CVec AinvJ = llt.solve(RMat::Identity(A.rows(), A.cols())).cast<Complex>() * J;
  Complex expo = 0.25 * (J.transpose() * AinvJ)(0, 0) + c;
  const double d = static_cast<double>(alpha.dim());
  double pref = std::pow(std::pow(4.0, d) * alpha.det_b() * beta.det_b(), 0.25) / std::sqrt(A.determinant());
  return pref * std::exp(expo);
}

}  // namespace ggwpd
