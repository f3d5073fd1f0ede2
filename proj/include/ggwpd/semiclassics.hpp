#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ggwpd/branch.hpp"
#include "ggwpd/manifolds.hpp"
#include "ggwpd/phase_space.hpp"
#include "ggwpd/rotor.hpp"

namespace ggwpd {

using TrajectoryPropagator = std::function<ComplexTrajectory(const ComplexPhasePoint&)>;

struct SaddleSearchOptions {
  double tol = 1e-12;
  int max_iter = 25;
  int max_halvings = 6;
  PropagationOptions propagation;
};

struct SaddleTrajectory {
  ComplexTrajectory trajectory;
  SeedTrajectory seed;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;
};

struct NewtonStep {
  ComplexPhasePoint updated;
  ResidualPair residuals;
};

// One Newton-Raphson correction of the initial point of `current` towards the
// saddle joining the alpha manifold to the beta manifold.
NewtonStep newton_step(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexTrajectory& current);

SaddleTrajectory solve_saddle(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexPhasePoint& start,
                              const TrajectoryPropagator& propagator, const SaddleSearchOptions& opts = {});

// rotor saddle for the beta image selected by seed.winding
SaddleTrajectory find_saddle(const GaussianPacket& alpha, const GaussianPacket& beta, const SeedTrajectory& seed,
                             const RotorParams& params, const SaddleSearchOptions& opts = {});

// saddle whose endpoint position is the real point x
ComplexTrajectory solve_endpoint_saddle(const GaussianPacket& alpha, const RVec& x, const ComplexPhasePoint& start,
                                        const TrajectoryPropagator& propagator, const SaddleSearchOptions& opts = {});

// Det[M11 b_a + b_b M22 + 2i hbar b_b M21 b_a - (i / 2 hbar) M12]
Complex correlation_determinant(const GaussianPacket& alpha, const GaussianPacket& beta, const CMat& M);
// Det[M22 + 2i hbar M21 b_a]
Complex wavefunction_determinant(const GaussianPacket& alpha, const CMat& M);

// exp(-i n_p q_b / hbar): phase between a lattice image of beta and beta
// itself on the discrete torus grid
Complex image_phase(const GaussianPacket& beta, const std::array<int, 2>& winding);

struct SaddleContribution {
  Complex action;
  Complex f_minus;
  Complex f_plus;
  Complex prefactor;
  double branch_phase = 0.0;
  Complex value;
};

struct OffCenterContribution {
  Complex A0, A1, A2, A3, A4;
  double dx_a = 0.0, dp_a = 0.0, dx_b = 0.0, dp_b = 0.0;
  double branch_phase = 0.0;
  Complex value;
};

struct BranchContribution {
  SeedTrajectory seed;
  std::optional<SaddleContribution> saddle;
  std::optional<OffCenterContribution> offcenter;
  Complex value;
  bool pruned = false;
};

struct CorrelationResult {
  Complex value;
  std::vector<BranchContribution> branches;
};

struct EvaluationOptions {
  BranchTracking tracking;
  // terms smaller than prune_ratio times the largest term are dropped
  double prune_ratio = 1e-12;
};

// single term; beta is the packet the trajectory ends on
SaddleContribution ggwpd_term(const GaussianPacket& alpha, const GaussianPacket& beta, const ComplexTrajectory& saddle,
                              const BranchTracking& tracking = {});

// sums the saddles; each term targets beta shifted by its seed winding
CorrelationResult ggwpd_correlation(const GaussianPacket& alpha, const GaussianPacket& beta,
                                    const std::vector<SaddleTrajectory>& saddles, const EvaluationOptions& opts = {});

// single off-center term along a real trajectory; equal packet widths, D = 1
OffCenterContribution offcenter_term(const GaussianPacket& alpha, const GaussianPacket& beta,
                                     const ComplexTrajectory& real_trajectory, const BranchTracking& tracking = {});

CorrelationResult offcenter_correlation(const GaussianPacket& alpha, const GaussianPacket& beta,
                                        const std::vector<SeedTrajectory>& seeds, const RotorParams& params, int t,
                                        const EvaluationOptions& opts = {});

// off-center evaluation along the center trajectory of alpha, against the
// beta image nearest to its endpoint
Complex linearized_correlation(const GaussianPacket& alpha, const GaussianPacket& beta, const RotorParams& params,
                               int t, const EvaluationOptions& opts = {});

using WavefunctionSaddleSolver = std::function<std::vector<ComplexTrajectory>(const RVec& x)>;

Complex ggwpd_wavefunction_term(const GaussianPacket& alpha, const ComplexTrajectory& saddle,
                                const BranchTracking& tracking = {});
Complex ggwpd_wavefunction(const GaussianPacket& alpha, const RVec& x, const WavefunctionSaddleSolver& solver,
                           const BranchTracking& tracking = {});

Complex linearized_wavefunction(const GaussianPacket& alpha, const ComplexTrajectory& center, const RVec& x,
                                const BranchTracking& tracking = {});

// trajectory must be real and end at position x; D = 1
Complex offcenter_wavefunction(const GaussianPacket& alpha, const ComplexTrajectory& real_trajectory, double x,
                               const BranchTracking& tracking = {});

// Endpoint saddles of the rotor, seeded from the shearing line of alpha.
class RotorWavefunctionSolver {
 public:
  RotorWavefunctionSolver(const GaussianPacket& alpha, int t, const RotorParams& params,
                          const SaddleSearchOptions& opts = {}, double width_sigmas = 5.0, double spacing = 1e-3);

  std::vector<ComplexTrajectory> operator()(const RVec& x) const;

  // unfolded final positions reached by the seeding line
  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }

 private:
  GaussianPacket alpha_;
  int t_;
  RotorParams params_;
  SaddleSearchOptions opts_;
  std::vector<double> p0_;
  std::vector<double> qt_;
  double q_min_ = 0.0;
  double q_max_ = 0.0;
};

// semiclassical state on the grid q_s = s/N, summed over the unfolded images
// of each grid point reached by the seeding line of half-width width_sigmas
CVec ggwpd_torus_wavefunction(const GaussianPacket& alpha, int N, int t, const RotorParams& params,
                              const SaddleSearchOptions& opts = {}, const BranchTracking& tracking = {},
                              double width_sigmas = 15.0);

}  // namespace ggwpd
