#include <doctest.h>

#include <random>

#include "ggwpd/phase_space.hpp"
#include "oracles.hpp"

using namespace ggwpd;

TEST_CASE("packet amplitude at the center and at unit offset") {
  GaussianPacket g = GaussianPacket::one_d(0.3, -0.2, 2.5, 0.7);
  Complex c = packet_evaluate(g, RVec::Constant(1, -0.2));
  CHECK(c.imag() == 0.0);
  CHECK(c.real() == doctest::Approx(std::pow(2.0 * 2.5 / kPi, 0.25)).epsilon(1e-15));

  GaussianPacket u = GaussianPacket::one_d(0.0, 0.0, 1.0, 1.0);
  Complex v = packet_evaluate(u, RVec::Constant(1, 1.0));
  CHECK(std::abs(v - std::pow(2.0 / kPi, 0.25) * std::exp(-1.0)) < 1e-16);
}

TEST_CASE("packet is normalized") {
  GaussianPacket g = GaussianPacket::rotor(0.815, 0.2, 120);
  double s = g.sigma();
  Complex n = oracle::simpson(
      [&](double x) { return std::norm(packet_evaluate(g, RVec::Constant(1, x))); }, 0.2 - 8 * s, 0.2 + 8 * s, 4000);
  CHECK(std::abs(n - 1.0) < 1e-10);
}

TEST_CASE("two-dimensional packet is normalized") {
  RMat b(2, 2);
  b << 1.3, 0.4, 0.4, 0.9;
  RVec q(2), p(2);
  q << 0.1, -0.3;
  p << 0.5, 0.2;
  GaussianPacket g(q, p, b, 0.4);
  double total = 0.0;
  const double L = 6.0, h = 0.02;
  for (double x = -L; x <= L; x += h) {
    for (double y = -L; y <= L; y += h) {
      RVec r(2);
      r << x, y;
      total += std::norm(packet_evaluate(g, r)) * h * h;
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("invalid packets are rejected") {
  CHECK_THROWS_AS(GaussianPacket::one_d(0, 0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianPacket::one_d(0, 0, 1.0, 0.0), std::invalid_argument);
  RMat b(2, 2);
  b << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(GaussianPacket(RVec::Zero(2), RVec::Zero(2), b, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianPacket::rotor(0, 0, 1), std::invalid_argument);
}

TEST_CASE("manifold points satisfy the ket constraint") {
  GaussianPacket g = GaussianPacket::rotor(0.815, 0.2, 90);
  ComplexPhasePoint c = manifold_point(g, CVec::Constant(1, Complex(0.2, 0.0)));
  CHECK(std::abs(c.P(0) - 0.815) < 1e-16);

  std::mt19937 rng(7);
  std::normal_distribution<double> n(0.0, 0.3);
  for (int k = 0; k < 20; ++k) {
    CVec Q = CVec::Constant(1, Complex(n(rng), n(rng)));
    ComplexPhasePoint z = manifold_point(g, Q);
    ResidualPair r = residuals(g, g, z, z);
    CHECK(r.C0.norm() * g.hbar() < 1e-14);
  }

  GaussianPacket o = GaussianPacket::rotor(0.0, 0.0, 300);
  for (int k = 0; k < 20; ++k) {
    CVec Q = CVec::Constant(1, Complex(n(rng), n(rng)));
    ComplexPhasePoint z = manifold_point(o, Q);
    CHECK(std::abs(z.P(0) - I * z.Q(0)) < 1e-14);
  }
}

TEST_CASE("F terms vanish on real points and differ by the cross term") {
  GaussianPacket g = GaussianPacket::one_d(0.4, 0.1, 3.0, 0.25);
  ComplexPhasePoint real{CVec::Constant(1, 0.9), CVec::Constant(1, -0.4)};
  CHECK(f_minus(g, real) == Complex(0.0, 0.0));
  CHECK(f_plus(g, real) == Complex(0.0, 0.0));

  ComplexPhasePoint z{CVec::Constant(1, Complex(0.3, -0.7)), CVec::Constant(1, Complex(-0.2, 0.45))};
  Complex d = f_plus(g, z) - f_minus(g, z);
  CHECK(std::abs(d - 2.0 / g.hbar() * 0.3 * 0.45) < 1e-13);

  double h = g.hbar(), b = 3.0;
  double re = -0.49 / (4 * h * h * b) - 0.45 * 0.45 * b - 0.3 * 0.45 / h;
  CHECK(f_minus(g, z).real() == doctest::Approx(re).epsilon(1e-14));
}

TEST_CASE("complex-center Gaussian with the F factor reproduces the packet") {
  GaussianPacket g = GaussianPacket::one_d(0.6, 0.25, 4.0, 0.1);
  const double h = g.hbar(), b = 4.0, s = g.sigma();
  for (Complex Q : {Complex(0.3, 0.2), Complex(0.1, -0.35), Complex(0.25, 0.0)}) {
    ComplexPhasePoint z = manifold_point(g, CVec::Constant(1, Q));
    Complex Fm = f_minus(g, z);
    Complex P = z.P(0);
    double worst = 0.0;
    for (int k = -80; k <= 80; ++k) {
      double x = 0.25 + k * s / 10.0;
      Complex ket = g.norm_constant() * std::exp(Fm) * std::exp(-b * (x - Q) * (x - Q) + I * P * (x - Q) / h);
      worst = std::max(worst, std::abs(ket - packet_evaluate(g, RVec::Constant(1, x))));
    }
    CHECK(worst < 1e-12);

    // bra side: the manifold with the opposite sign of the momentum term
    ComplexPhasePoint w;
    w.Q = CVec::Constant(1, Q);
    w.P = CVec::Constant(1, 0.6 - 2.0 * I * h * b * (Q - 0.25));
    ResidualPair r = residuals(g, g, w, w);
    CHECK(r.Ct.norm() * h < 1e-14);
    Complex Fp = f_plus(g, w);
    Complex Pw = w.P(0);
    worst = 0.0;
    for (int k = -80; k <= 80; ++k) {
      double x = 0.25 + k * s / 10.0;
      Complex bra = g.norm_constant() * std::exp(Fp) * std::exp(-b * (x - Q) * (x - Q) - I * Pw * (x - Q) / h);
      worst = std::max(worst, std::abs(bra - std::conj(packet_evaluate(g, RVec::Constant(1, x)))));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("residuals vanish at the real centers") {
  GaussianPacket a = GaussianPacket::rotor(0.815, 0.2, 50);
  GaussianPacket b = GaussianPacket::rotor(0.77, 0.8, 50);
  ComplexPhasePoint za{CVec::Constant(1, 0.815), CVec::Constant(1, 0.2)};
  ComplexPhasePoint zb{CVec::Constant(1, 0.77), CVec::Constant(1, 0.8)};
  ResidualPair r = residuals(a, b, za, zb);
  CHECK(r.C0.norm() == 0.0);
  CHECK(r.Ct.norm() == 0.0);
}

TEST_CASE("overlap matches quadrature") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_real_distribution<double> w(0.5, 4.0);
  for (int k = 0; k < 10; ++k) {
    GaussianPacket a = GaussianPacket::one_d(u(rng), u(rng), w(rng), 0.3);
    GaussianPacket b = GaussianPacket::one_d(u(rng), u(rng), w(rng), 0.3);
    Complex quad = oracle::simpson(
        [&](double x) {
          RVec v = RVec::Constant(1, x);
          return std::conj(packet_evaluate(b, v)) * packet_evaluate(a, v);
        },
        -8.0, 8.0, 20000);
    Complex c = gaussian_overlap(a, b);
    CHECK(std::abs(c - quad) < 1e-10);
    CHECK(std::abs(c) <= 1.0 + 1e-15);
  }
  GaussianPacket a = GaussianPacket::one_d(0.3, 0.1, 2.0, 0.5);
  CHECK(std::abs(gaussian_overlap(a, a) - 1.0) < 1e-15);

  // equal widths, momenta differing by dp
  const double dp = 0.4, s2 = 1.0 / (4 * 2.0);
  GaussianPacket m = GaussianPacket::one_d(0.3 + dp, 0.1, 2.0, 0.5);
  CHECK(std::abs(gaussian_overlap(a, m)) == doctest::Approx(std::exp(-dp * dp * s2 / (2 * 0.25))).epsilon(1e-14));
}
