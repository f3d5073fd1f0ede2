#pragma once

#include "ggwpd/phase_space.hpp"

namespace ggwpd {

struct FloquetMatrix {
  int N = 0;
  double K = 0.0;
  CMat entries;
};

struct StateVector {
  CVec amplitudes;
};

// F_rs = (i N)^{-1/2} exp(i pi (r-s)^2 / N) exp(i N K cos(2 pi s / N) / (2 pi)), r, s = 1..N
FloquetMatrix floquet_matrix(int N, double K);

// Samples the packet at q_s = s/N, summing torus images |n| <= image_cutoff,
// and rescales to unit norm. Throws std::invalid_argument if hbar != 1/(2 pi N)
// unless check_hbar is false.
StateVector discretize_packet(const GaussianPacket& packet, int N, int image_cutoff = 1, bool check_hbar = true);

StateVector apply(const FloquetMatrix& F, const StateVector& v, int t);
StateVector apply_adjoint(const FloquetMatrix& F, const StateVector& v, int t);

// <beta| F^t |alpha>
Complex quantum_correlation(const GaussianPacket& alpha, const GaussianPacket& beta, int t, int N, double K);
Complex quantum_correlation(const FloquetMatrix& F, const GaussianPacket& alpha, const GaussianPacket& beta, int t);

// max |(F^dagger F - 1)_rs|
double unitarity_defect(const FloquetMatrix& F);

}  // namespace ggwpd
