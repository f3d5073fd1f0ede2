#pragma once

#include <vector>

#include "ggwpd/branch.hpp"
#include "ggwpd/types.hpp"

namespace ggwpd {

struct RotorParams {
  double K = 0.0;

  // throws std::invalid_argument for negative or non-finite K
  void validate() const;
};

struct PropagationOptions {
  double runaway_bound = 10.0;
};

struct ComplexTrajectory {
  std::vector<ComplexPhasePoint> points;
  Complex action{0.0, 0.0};
  CMat M11, M12, M21, M22;
  // checkpoints of the stability matrix along a continuous path from the
  // identity; consecutive entries are joined by straight lines
  std::vector<CMat> stability_path;
  // unwrapped argument of the determinant tracked under the square root
  double branch_phase = 0.0;

  int steps() const { return static_cast<int>(points.size()) - 1; }
  const ComplexPhasePoint& initial() const { return points.front(); }
  const ComplexPhasePoint& final() const { return points.back(); }
  CMat stability() const;
};

// single map step; fold applies mod 1 and is only valid for real points
ComplexPhasePoint map_step(const ComplexPhasePoint& point, const RotorParams& params, bool fold = false);

RealPoint map_step(RealPoint x, double K);
RealPoint inverse_map_step(RealPoint x, double K);
// single-step stability matrix acting on (dp, dq)
Eigen::Matrix2d step_stability(double q, double K);

ComplexTrajectory propagate(const ComplexPhasePoint& ic, int t, const RotorParams& params,
                            const PropagationOptions& opts = {});

// as propagate, and additionally follows det_of along the stability path,
// storing the unwrapped phase in branch_phase
ComplexTrajectory propagate(const ComplexPhasePoint& ic, int t, const RotorParams& params,
                            const DeterminantOf& det_of, const BranchTracking& tracking = {},
                            const PropagationOptions& opts = {});

CMat assemble_stability(const CMat& M11, const CMat& M12, const CMat& M21, const CMat& M22);

}  // namespace ggwpd
