#include "ggwpd/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace ggwpd {

FloquetMatrix floquet_matrix(int N, double K) {
  if (N < 2) throw std::invalid_argument("floquet_matrix: N must be at least 2");
  if (!std::isfinite(K)) throw std::invalid_argument("floquet_matrix: K must be finite");
  FloquetMatrix F;
  F.N = N;
  F.K = K;
  F.entries.resize(N, N);
  const Complex pref = 1.0 / std::sqrt(Complex(0.0, N));
  CVec kick(N);
  for (int s = 1; s <= N; ++s) {
    kick(s - 1) = std::polar(1.0, N * K / (2.0 * kPi) * std::cos(2.0 * kPi * s / N));
  }
  // (r - s)^2 mod 2N keeps the phase argument small and exact
  CVec shear(N);
  for (int d = 0; d < N; ++d) {
    long long m = (static_cast<long long>(d) * d) % (2LL * N);
    shear(d) = std::polar(1.0, kPi * static_cast<double>(m) / N);
  }
  for (int s = 0; s < N; ++s) {
    for (int r = 0; r < N; ++r) {
      F.entries(r, s) = pref * shear(std::abs(r - s)) * kick(s);
    }
  }
  return F;
}

StateVector discretize_packet(const GaussianPacket& packet, int N, int image_cutoff, bool check_hbar) {
  if (packet.dim() != 1) throw std::invalid_argument("discretize_packet: one-dimensional packets only");
  if (N < 2) throw std::invalid_argument("discretize_packet: N must be at least 2");
  if (image_cutoff < 0) throw std::invalid_argument("discretize_packet: negative image cutoff");
  if (check_hbar && std::abs(2.0 * kPi * N * packet.hbar() - 1.0) > 1e-12) {
    throw std::invalid_argument("discretize_packet: hbar inconsistent with N");
  }
  StateVector v;
  v.amplitudes = CVec::Zero(N);
  RVec x(1);
  for (int s = 1; s <= N; ++s) {
    Complex a{0.0, 0.0};
    for (int n = -image_cutoff; n <= image_cutoff; ++n) {
      x(0) = static_cast<double>(s) / N + n;
      a += packet_evaluate(packet, x);
    }
    v.amplitudes(s - 1) = a;
  }
  double nrm = v.amplitudes.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("discretize_packet: packet vanishes on the grid");
  v.amplitudes /= nrm;
  return v;
}

StateVector apply(const FloquetMatrix& F, const StateVector& v, int t) {
  if (t < 0) throw std::invalid_argument("apply: t must be non-negative");
  StateVector out = v;
  for (int k = 0; k < t; ++k) out.amplitudes = F.entries * out.amplitudes;
  return out;
}

StateVector apply_adjoint(const FloquetMatrix& F, const StateVector& v, int t) {
  if (t < 0) throw std::invalid_argument("apply_adjoint: t must be non-negative");
  StateVector out = v;
  for (int k = 0; k < t; ++k) out.amplitudes = F.entries.adjoint() * out.amplitudes;
  return out;
}

Complex quantum_correlation(const FloquetMatrix& F, const GaussianPacket& alpha, const GaussianPacket& beta, int t) {
  StateVector a = apply(F, discretize_packet(alpha, F.N), t);
  StateVector b = discretize_packet(beta, F.N);
  return b.amplitudes.dot(a.amplitudes);
}

Complex quantum_correlation(const GaussianPacket& alpha, const GaussianPacket& beta, int t, int N, double K) {
  if (t < 0) throw std::invalid_argument("quantum_correlation: t must be non-negative");
  if (t == 0) {
    return discretize_packet(beta, N).amplitudes.dot(discretize_packet(alpha, N).amplitudes);
  }
  return quantum_correlation(floquet_matrix(N, K), alpha, beta, t);
}

double unitarity_defect(const FloquetMatrix& F) {
  CMat E = F.entries.adjoint() * F.entries;
  E.diagonal().array() -= 1.0;
  return E.cwiseAbs().maxCoeff();
}

}  // namespace ggwpd
