#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ggwpd {

using Complex = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

struct ComplexPhasePoint {
  CVec P;
  CVec Q;

  Eigen::Index dim() const { return Q.size(); }
};

// real phase-space point of the one-dimensional rotor
struct RealPoint {
  double p = 0.0;
  double q = 0.0;
};

inline ComplexPhasePoint complexify(const RealPoint& x) {
  ComplexPhasePoint z;
  z.P = CVec::Constant(1, Complex(x.p, 0.0));
  z.Q = CVec::Constant(1, Complex(x.q, 0.0));
  return z;
}

}  // namespace ggwpd
