#pragma once

#include "ggwpd/phase_space.hpp"
#include "ggwpd/rotor.hpp"
#include "ggwpd/semiclassics.hpp"

namespace ggwpd {

// exact free motion over time t; one straight segment of stability
ComplexTrajectory free_particle_trajectory(const ComplexPhasePoint& ic, double t, double mass);
TrajectoryPropagator free_particle_propagator(double t, double mass);

ComplexPhasePoint free_particle_saddle(const GaussianPacket& alpha, double x, double t, double mass);

// real initial condition at the packet position that ends at x
RealPoint free_particle_offcenter_ic(const GaussianPacket& alpha, double x, double t, double mass);

Complex free_particle_exact(const GaussianPacket& alpha, double x, double t, double mass);

}  // namespace ggwpd
