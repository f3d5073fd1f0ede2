#include <doctest.h>

#include <random>

#include "ggwpd/error.hpp"
#include "ggwpd/rotor.hpp"

using namespace ggwpd;

namespace {

ComplexPhasePoint pt(Complex p, Complex q) { return {CVec::Constant(1, p), CVec::Constant(1, q)}; }

// action of the trajectory joining Q0 to Qt in t steps, continued from the guess P0
Complex boundary_action(Complex Q0, Complex Qt, int t, const RotorParams& params, Complex& P0) {
  for (int it = 0; it < 60; ++it) {
    ComplexTrajectory tr = propagate(pt(P0, Q0), t, params);
    Complex miss = tr.final().Q(0) - Qt;
    if (std::abs(miss) < 1e-15) break;
    P0 -= miss / tr.M21(0, 0);
  }
  return propagate(pt(P0, Q0), t, params).action;
}

}  // namespace

TEST_CASE("fixed points and the free shear") {
  RotorParams p{8.25};
  RealPoint a = map_step(RealPoint{0.0, 0.0}, 8.25);
  RealPoint b = map_step(RealPoint{0.0, 0.5}, 8.25);
  CHECK(a.p == 0.0);
  CHECK(a.q == 0.0);
  CHECK(std::abs(b.p) < 1e-15);
  CHECK(std::abs(b.q - 0.5) < 1e-15);

  ComplexPhasePoint z = map_step(pt(Complex(0.3, 0.1), Complex(-0.2, 0.05)), RotorParams{0.0});
  CHECK(z.P(0) == Complex(0.3, 0.1));
  CHECK(std::abs(z.Q(0) - Complex(0.1, 0.15)) < 1e-16);

  ComplexTrajectory tr = propagate(pt(0.21, 0.4), 5, RotorParams{0.0});
  CHECK(tr.M11(0, 0) == Complex(1.0));
  CHECK(tr.M12(0, 0) == Complex(0.0));
  CHECK(tr.M21(0, 0) == Complex(5.0));
  CHECK(tr.M22(0, 0) == Complex(1.0));
  (void)p;
}

TEST_CASE("folding") {
  ComplexPhasePoint z = map_step(pt(0.7, 0.6), RotorParams{0.0}, true);
  CHECK(z.P(0).real() == doctest::Approx(0.7));
  CHECK(z.Q(0).real() == doctest::Approx(0.3));
  CHECK_THROWS_AS(map_step(pt(Complex(0.1, 0.2), 0.3), RotorParams{1.0}, true), std::invalid_argument);
}

TEST_CASE("zero steps") {
  ComplexTrajectory tr = propagate(pt(0.3, 0.1), 0, RotorParams{2.0});
  CHECK(tr.points.size() == 1);
  CHECK(tr.action == Complex(0.0));
  CHECK((tr.stability() - CMat::Identity(2, 2)).norm() == 0.0);
  CHECK_THROWS_AS(propagate(pt(0.3, 0.1), -1, RotorParams{2.0}), std::invalid_argument);
  CHECK_THROWS_AS(RotorParams{-1.0}.validate(), std::invalid_argument);
}

TEST_CASE("inverse map") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double K : {0.05, 1.3, 8.25}) {
    for (int k = 0; k < 100; ++k) {
      RealPoint x{u(rng), u(rng)};
      RealPoint y = inverse_map_step(map_step(x, K), K);
      CHECK(std::abs(y.p - x.p) < 1e-14);
      CHECK(std::abs(y.q - x.q) < 1e-14);
    }
  }
}

TEST_CASE("unit stability determinant") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double K : {0.05, 8.25}) {
    for (int k = 0; k < 20; ++k) {
      for (bool complex : {false, true}) {
        Complex p(u(rng), complex ? 0.02 * u(rng) : 0.0);
        Complex q(u(rng), complex ? 0.02 * u(rng) : 0.0);
        int t = K > 1 ? (complex ? 2 : 3) : 20;
        ComplexTrajectory tr = propagate(pt(p, q), t, RotorParams{K}, PropagationOptions{1e6});
        Complex det = tr.stability().determinant();
        CHECK(std::abs(det - 1.0) < 1e-10);
        for (const CMat& m : tr.stability_path) CHECK(std::abs(m.determinant() - 1.0) < 1e-10);
        if (!complex) {
          CHECK(std::abs(tr.final().P(0).imag()) < 1e-15);
          CHECK(std::abs(tr.action.imag()) < 1e-15);
        }
      }
    }
  }
}

TEST_CASE("stability matches finite differences of the map") {
  RotorParams params{8.25};
  ComplexPhasePoint z = pt(Complex(0.02, 0.03), Complex(-0.07, 0.01));
  ComplexTrajectory tr = propagate(z, 2, params);
  const double e = 1e-7;
  ComplexTrajectory dp1 = propagate(pt(z.P(0) + e, z.Q(0)), 2, params);
  ComplexTrajectory dp0 = propagate(pt(z.P(0) - e, z.Q(0)), 2, params);
  ComplexTrajectory dq1 = propagate(pt(z.P(0), z.Q(0) + e), 2, params);
  ComplexTrajectory dq0 = propagate(pt(z.P(0), z.Q(0) - e), 2, params);
  auto fd = [&](const ComplexTrajectory& a, const ComplexTrajectory& b, bool P) {
    return ((P ? a.final().P(0) : a.final().Q(0)) - (P ? b.final().P(0) : b.final().Q(0))) / (2 * e);
  };
  CHECK(std::abs(fd(dp1, dp0, true) - tr.M11(0, 0)) < 1e-5);
  CHECK(std::abs(fd(dq1, dq0, true) - tr.M12(0, 0)) < 1e-5);
  CHECK(std::abs(fd(dp1, dp0, false) - tr.M21(0, 0)) < 1e-5);
  CHECK(std::abs(fd(dq1, dq0, false) - tr.M22(0, 0)) < 1e-5);
}

TEST_CASE("action is the generating function") {
  for (double K : {0.05, 8.25}) {
    RotorParams params{K};
    ComplexPhasePoint z = pt(Complex(0.08, 0.02), Complex(-0.05, 0.01));
    ComplexTrajectory tr = propagate(z, 2, params);
    Complex Q0 = z.Q(0), Qt = tr.final().Q(0);
    auto S = [&](Complex a, Complex b) {
      Complex P = z.P(0);
      return boundary_action(a, b, 2, params, P);
    };
    const double h = 1e-6;
    Complex dS0 = (S(Q0 + h, Qt) - S(Q0 - h, Qt)) / (2 * h);
    Complex dSt = (S(Q0, Qt + h) - S(Q0, Qt - h)) / (2 * h);
    CHECK(std::abs(dS0 + z.P(0)) < 1e-5);
    CHECK(std::abs(dSt - tr.final().P(0)) < 1e-5);

    const double g = 1e-4;
    Complex S00 = (S(Q0 + g, Qt) - 2.0 * S(Q0, Qt) + S(Q0 - g, Qt)) / (g * g);
    Complex Stt = (S(Q0, Qt + g) - 2.0 * S(Q0, Qt) + S(Q0, Qt - g)) / (g * g);
    Complex S0t = (S(Q0 + g, Qt + g) - S(Q0 + g, Qt - g) - S(Q0 - g, Qt + g) + S(Q0 - g, Qt - g)) / (4 * g * g);
    Complex m11 = tr.M11(0, 0), m21 = tr.M21(0, 0), m22 = tr.M22(0, 0);
    CHECK(std::abs(S0t + 1.0 / m21) < 1e-5 * std::max(1.0, std::abs(1.0 / m21)));
    CHECK(std::abs(S00 - m22 / m21) < 1e-5 * std::max(1.0, std::abs(m22 / m21)));
    CHECK(std::abs(Stt - m11 / m21) < 1e-5 * std::max(1.0, std::abs(m11 / m21)));
  }
}

TEST_CASE("reflection symmetry of the chaotic map") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    RealPoint x{u(rng), u(rng)};
    RealPoint a = map_step(x, 8.25);
    RealPoint b = map_step(RealPoint{-x.p, -x.q}, 8.25);
    CHECK(std::abs(a.p + b.p) < 1e-14);
    CHECK(std::abs(a.q + b.q) < 1e-14);
  }
}

TEST_CASE("runaway trajectories are flagged") {
  ComplexPhasePoint z = pt(Complex(0.1, 0.0), Complex(0.0, 0.8));
  try {
    propagate(z, 3, RotorParams{8.25});
    FAIL("expected runaway");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == NumericalErrorKind::runaway);
  }
}
