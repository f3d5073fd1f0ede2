#pragma once

#include "ggwpd/types.hpp"

namespace ggwpd {

class GaussianPacket {
 public:
  // throws std::invalid_argument unless b is symmetric positive definite and hbar > 0
  GaussianPacket(RVec center_q, RVec center_p, RMat b, double hbar);

  // one-dimensional rotor packet at Hilbert dimension N: b = pi N, hbar = 1/(2 pi N)
  static GaussianPacket rotor(double p, double q, int N);
  static GaussianPacket one_d(double p, double q, double b, double hbar);

  const RVec& center_q() const { return q_; }
  const RVec& center_p() const { return p_; }
  const RMat& b() const { return b_; }
  const RMat& b_inverse() const { return b_inv_; }
  double hbar() const { return hbar_; }
  double det_b() const { return det_b_; }
  Eigen::Index dim() const { return q_.size(); }

  // (2^D Det b / pi^D)^{1/4}
  double norm_constant() const;
  // position width of a one-dimensional packet, sigma^2 = 1/(4b)
  double sigma() const;

  // same packet moved to the lattice image (p + n_p, q + n_q)
  GaussianPacket shifted(const RVec& dp, const RVec& dq) const;
  GaussianPacket shifted(int n_p, int n_q) const;

 private:
  RVec q_;
  RVec p_;
  RMat b_;
  RMat b_inv_;
  double hbar_;
  double det_b_;
};

struct ResidualPair {
  CVec C0;
  CVec Ct;
};

Complex packet_evaluate(const GaussianPacket& packet, const RVec& x);

ComplexPhasePoint manifold_point(const GaussianPacket& packet, const CVec& Q);

Complex f_minus(const GaussianPacket& alpha, const ComplexPhasePoint& point0);
Complex f_plus(const GaussianPacket& beta, const ComplexPhasePoint& point_t);

ResidualPair residuals(const GaussianPacket& alpha, const GaussianPacket& beta,
                       const ComplexPhasePoint& point0, const ComplexPhasePoint& point_t);

// hbar * max(|C0|, |Ct|); dimensionless in rotor units where 2 b hbar = 1
double residual_norm(const ResidualPair& r, double hbar);

Complex gaussian_overlap(const GaussianPacket& alpha, const GaussianPacket& beta);

}  // namespace ggwpd
