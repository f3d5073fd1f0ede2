#pragma once

#include <array>
#include <string>
#include <vector>

#include "ggwpd/phase_space.hpp"
#include "ggwpd/rotor.hpp"

namespace ggwpd {

enum class ManifoldKind { unstable, stable, shearing };

struct ManifoldOptions {
  double spacing = 1e-3;
  // initial offset from the fixed point along the eigenvector
  double start_offset = 1e-9;
  std::size_t max_points = 400000;
  int max_levels = 200;
};

// Exact description of an invariant manifold branch pair: the point at curve
// parameter tau (sign selects the branch) is
//   g^{m k}(base_k + sign * start_offset * Lambda^phi * e),  k = floor|tau|, phi = |tau| - k
// where g is the forward map for unstable and the inverse map for stable
// manifolds and base_k is the lattice-exact orbit of the anchor under g^{-m k}.
struct ManifoldGeometry {
  Eigen::Vector2d eigenvector{0.0, 0.0};  // (dp, dq), unit length
  double eigenvalue = 0.0;                // expanding eigenvalue of a single step of g
  double multiplier = 0.0;                // Lambda = eigenvalue^m > 1
  int period = 1;                         // m, 2 when the eigenvalue is negative
  double start_offset = 0.0;
  double K = 0.0;
};

struct ManifoldCurve {
  ManifoldKind kind = ManifoldKind::shearing;
  std::vector<RealPoint> points;
  std::vector<double> parameter;
  RealPoint anchor;
  ManifoldGeometry geometry;
};

// lattice-exact n-fold image of a torus fixed point; n < 0 iterates the inverse map
RealPoint fixed_point_orbit(RealPoint fp, int n, double K);

bool is_torus_fixed_point(RealPoint fp, double K, double tol = 1e-12);

ManifoldCurve unstable_manifold(RealPoint fp, const RotorParams& params, double arc_budget,
                                const ManifoldOptions& opts = {});
ManifoldCurve stable_manifold(RealPoint fp, const RotorParams& params, double arc_budget,
                              const ManifoldOptions& opts = {});
// q = q_center, p in [p_center - w, p_center + w], w = width_sigmas * sigma_p
ManifoldCurve shearing_manifold(const GaussianPacket& packet, double width_sigmas = 5.0,
                                double spacing = 1e-3);

// exact point of an unstable or stable curve at parameter tau
RealPoint manifold_point_at(const ManifoldCurve& curve, double tau);

// distance from x to the curve, refined against the exact parametrization
double distance_to_curve(const ManifoldCurve& curve, RealPoint x);

std::string manifold_csv(const ManifoldCurve& curve);

enum class Regime { integrable, chaotic };
enum class SeedKind { integrable, heteroclinic };

struct SeedTrajectory {
  RealPoint ic;
  int t = 0;
  std::array<int, 2> winding{0, 0};  // (n_p, n_q)
  SeedKind kind = SeedKind::integrable;
};

// Distances are measured in units of the packets' own widths, so the pruning
// radius follows the packets passed to find_seeds.
struct SeedSearchOptions {
  double prune_sigmas = 5.0;
  double width_sigmas = 5.0;
  double spacing = 1e-3;
  double arc_budget = 1.0;
  ManifoldOptions manifold;
};

std::vector<SeedTrajectory> find_seeds(const GaussianPacket& alpha, const GaussianPacket& beta, int t,
                                       const RotorParams& params, Regime regime, int image_range = 1,
                                       const SeedSearchOptions& opts = {});

}  // namespace ggwpd
