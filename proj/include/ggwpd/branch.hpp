#pragma once

#include <functional>
#include <vector>

#include "ggwpd/types.hpp"

namespace ggwpd {

// Continuous square root of a determinant followed along a path.
// The branch at the starting point is the one with positive real part.
class BranchAccumulator {
 public:
  explicit BranchAccumulator(Complex initial);

  void advance(Complex det);

  Complex value() const { return last_; }
  double phase() const { return phase_; }
  Complex sqrt() const;

 private:
  Complex last_;
  double phase_;
};

Complex branch_sqrt(Complex det, BranchAccumulator& acc);

using DeterminantOf = std::function<Complex(const CMat&)>;

// Follows det_of(M) along a piecewise linear path of stability matrices.
// Each segment is sampled `subdivisions` times and bisected further wherever
// the argument jumps by more than max_step radians.
struct BranchTracking {
  int subdivisions = 16;
  double max_step = 0.5;
  int max_depth = 40;
};

BranchAccumulator track_branch(const std::vector<CMat>& path, const DeterminantOf& det_of,
                               const BranchTracking& opts = {});

}  // namespace ggwpd
