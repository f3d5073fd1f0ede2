#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ggwpd/quantum.hpp"

using namespace ggwpd;

TEST_CASE("Floquet entries and unitarity") {
  for (double K : {0.05, 8.25}) {
    FloquetMatrix F = floquet_matrix(700, K);
    CHECK(unitarity_defect(F) < 1e-12);
    double worst = (F.entries.cwiseAbs().array() - 1.0 / std::sqrt(700.0)).abs().maxCoeff();
    CHECK(worst < 1e-14);
  }
  // element formula written out independently
  const int N = 7;
  const double K = 1.7;
  FloquetMatrix F = floquet_matrix(N, K);
  Complex pre = 1.0 / std::sqrt(Complex(0.0, N));
  for (int r = 1; r <= N; ++r) {
    for (int s = 1; s <= N; ++s) {
      Complex e = pre * std::exp(I * kPi * double((r - s) * (r - s)) / double(N)) *
                  std::exp(I * double(N) * K * std::cos(2 * kPi * s / N) / (2 * kPi));
      CHECK(std::abs(F.entries(r - 1, s - 1) - e) < 1e-13);
    }
  }
  CHECK(std::arg(std::sqrt(Complex(0.0, N))) == doctest::Approx(kPi / 4));
}

TEST_CASE("spectrum on the unit circle") {
  FloquetMatrix F = floquet_matrix(64, 8.25);
  Eigen::ComplexEigenSolver<CMat> es(F.entries);
  CHECK((es.eigenvalues().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("free rotor acts diagonally on momentum states") {
  const int N = 32;
  FloquetMatrix F = floquet_matrix(N, 0.0);
  for (int k : {0, 3, 11}) {
    StateVector v;
    v.amplitudes.resize(N);
    for (int s = 1; s <= N; ++s) v.amplitudes(s - 1) = std::exp(2.0 * I * kPi * double(k * s) / double(N)) / std::sqrt(N);
    StateVector w = apply(F, v, 1);
    Complex ratio = w.amplitudes(0) / v.amplitudes(0);
    CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    CHECK((w.amplitudes - ratio * v.amplitudes).norm() < 1e-12);
  }
}

TEST_CASE("discretized packets") {
  GaussianPacket g = GaussianPacket::rotor(0.815, 0.2, 700);
  StateVector v = discretize_packet(g, 700);
  CHECK(std::abs(v.amplitudes.norm() - 1.0) < 1e-14);
  StateVector wide = discretize_packet(g, 700, 3);
  CHECK((wide.amplitudes - v.amplitudes).norm() < 1e-200 + 1e-15);
  GaussianPacket h = GaussianPacket::rotor(0.815, 0.7, 700);
  StateVector u = discretize_packet(h, 700);
  CHECK(std::abs(u.amplitudes.dot(v.amplitudes)) < 1e-100);
  CHECK(std::abs(v.amplitudes.dot(v.amplitudes) - 1.0) < 1e-14);
  CHECK_THROWS_AS(discretize_packet(g, 600), std::invalid_argument);
  CHECK_NOTHROW(discretize_packet(g, 600, 1, false));
}

TEST_CASE("correlations") {
  GaussianPacket a = GaussianPacket::rotor(0.815, 0.2, 300);
  GaussianPacket b = GaussianPacket::rotor(0.77, 0.8, 300);
  CHECK(std::abs(quantum_correlation(a, a, 0, 300, 0.05) - 1.0) < 1e-14);
  FloquetMatrix F = floquet_matrix(300, 8.25);
  StateVector va = discretize_packet(a, 300), vb = discretize_packet(b, 300);
  for (int t : {1, 2, 5}) {
    Complex fw = quantum_correlation(F, a, b, t);
    // <alpha| F^-t |beta>
    Complex rev = va.amplitudes.dot(apply_adjoint(F, vb, t).amplitudes);
    CHECK(std::abs(fw - std::conj(rev)) < 1e-12);
    CHECK(std::abs(fw - vb.amplitudes.dot(apply(F, va, t).amplitudes)) < 1e-12);
    CHECK(std::abs(fw) <= 1.0 + 1e-12);
    CHECK(std::abs(apply(F, va, t).amplitudes.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("integrable correlation decreases with N") {
  double last = 2.0;
  for (int N = 50; N <= 700; N += 50) {
    Complex c = quantum_correlation(GaussianPacket::rotor(0.815, 0.2, N), GaussianPacket::rotor(0.77, 0.8, N), 2, N, 0.05);
    CHECK(std::abs(c) < last);
    last = std::abs(c);
  }
}
