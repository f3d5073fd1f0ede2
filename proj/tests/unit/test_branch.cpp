#include <doctest.h>

#include "ggwpd/branch.hpp"
#include "ggwpd/error.hpp"

using namespace ggwpd;

TEST_CASE("fresh accumulator") {
  BranchAccumulator acc(Complex(1.0, 0.0));
  CHECK(branch_sqrt(Complex(1.0, 0.0), acc) == Complex(1.0, 0.0));
  BranchAccumulator neg(Complex(-4.0, 1e-300));
  CHECK(neg.sqrt().real() >= 0.0);
}

TEST_CASE("unwrapping past the principal cut") {
  BranchAccumulator acc(Complex(1.0, 0.0));
  const int n = 300;
  Complex r;
  for (int k = 1; k <= n; ++k) r = branch_sqrt(std::polar(1.0, 1.5 * kPi * k / n), acc);
  CHECK(std::abs(r - std::polar(1.0, 0.75 * kPi)) < 1e-14);
  CHECK(acc.phase() == doctest::Approx(1.5 * kPi));
}

TEST_CASE("zero determinant is a caustic") {
  BranchAccumulator acc(Complex(1.0, 0.0));
  try {
    acc.advance(Complex(0.0, 0.0));
    FAIL("expected caustic");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == NumericalErrorKind::caustic);
  }
}

TEST_CASE("tracking along a path of matrices") {
  // rotation by 3 pi/2 split into three checkpoints
  std::vector<CMat> path;
  for (int k = 0; k <= 3; ++k) {
    CMat m(1, 1);
    m(0, 0) = std::polar(2.0, 0.5 * kPi * k);
    path.push_back(m);
  }
  // linear interpolation between the checkpoints passes near zero on the chord, not through it
  DeterminantOf det = [](const CMat& m) { return m(0, 0); };
  BranchAccumulator acc = track_branch(path, det);
  CHECK(acc.phase() == doctest::Approx(1.5 * kPi).epsilon(1e-12));
  BranchTracking fine;
  fine.subdivisions = 160;
  CHECK(track_branch(path, det, fine).phase() == doctest::Approx(acc.phase()).epsilon(1e-14));
}
