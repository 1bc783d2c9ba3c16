#pragma once

// Magnetic geodesic flow on the Poincare disk.
//
// Hamiltonian H = 1/2 g^{ik} p_i p_k with the twisted bracket
// {x^i, p_j} = delta^i_j, {p_i, p_j} = F_ij, F_12 = s lambda^2. In disk
// coordinates the equations reduce to
//
//   xdot = p / lambda^2
//   pdot = 1/2 (1 - |x|^2) |p|^2 x + s (p_y, -p_x)
//
// No vector potential appears anywhere: only F enters.

#include <array>
#include <cstddef>
#include <vector>

#include "maggeo/hyperbolic.hpp"

namespace maggeo {

/// Covector components (p_x, p_y) in disk coordinates.
struct Momentum {
    double x = 0.0;
    double y = 0.0;

    Complex as_complex() const { return {x, y}; }
    static Momentum from_complex(Complex p) { return {p.real(), p.imag()}; }
    friend bool operator==(const Momentum&, const Momentum&) = default;
};

struct PhaseState {
    DiskPoint position;
    Momentum momentum;

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Scalar multiple of the area form: F = s dmu. s = 1 is the physical field.
class FieldStrength {
public:
    constexpr FieldStrength() = default;
    explicit FieldStrength(double s);

    constexpr double s() const { return s_; }

    static constexpr FieldStrength unit() { return {}; }
    static FieldStrength none() { return FieldStrength{0.0}; }

private:
    double s_ = 1.0;
};

/// (xdot, pdot) packed as (x, y, p_x, p_y).
using PhaseVector = std::array<double, 4>;
using PhaseMatrix = std::array<std::array<double, 4>, 4>;

PhaseVector to_vector(const PhaseState& state);
/// Throws NumericError when the position has left the disk.
PhaseState from_vector(const PhaseVector& v);

struct TrajectorySample {
    double t;
    PhaseState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double step = 0.0;

    std::size_t size() const { return samples.size(); }
    const PhaseState& state(std::size_t i) const { return samples[i].state; }
};

struct StepOptions {
    /// Rescale the momentum after each step so that H equals its value
    /// before the step, or `target_energy` when that is positive.
    bool project_energy = false;
    double target_energy = 0.0;
};

double energy(const PhaseState& state);
/// Euclidean-chart velocity xdot = g^{-1} p, as a complex number.
Complex velocity(const PhaseState& state);
/// Hyperbolic speed |xdot|_g = sqrt(2 H).
double hyperbolic_speed(const PhaseState& state);

/// State at z moving in the Euclidean direction `angle` with energy E.
PhaseState state_from_direction(DiskPoint z, double angle, double energy);
/// State at z with Euclidean-chart velocity v.
PhaseState state_from_velocity(DiskPoint z, Complex v);

PhaseVector vector_field(const PhaseState& state, FieldStrength field);
PhaseVector vector_field(const PhaseVector& y, FieldStrength field);

/// Analytic Jacobian of the vector field with respect to (x, y, p_x, p_y).
PhaseMatrix vector_field_jacobian(const PhaseState& state, FieldStrength field);

/// One classical fourth-order Runge-Kutta step. Negative dt is accepted for
/// internal backward stencils; the public contract is dt > 0.
PhaseState step(const PhaseState& state, double dt, FieldStrength field, StepOptions options = {});

/// Uniform-step trajectory from t = 0 to within dt of total_time.
Trajectory integrate(const PhaseState& state, double total_time, double dt, FieldStrength field,
                     StepOptions options = {});

/// Number of uniform steps integrate() takes.
std::size_t step_count(double total_time, double dt);

/// Default step: 1e-3 for hyperbolic speed <= 2, halved per doubling of speed.
double default_step(double energy);

/// Unsigned geodesic curvature of the sampled curve at `index`, from the
/// covariant acceleration over speed squared (central differences).
double geodesic_curvature(const Trajectory& traj, std::size_t index);
/// Same, positive for clockwise turning in the disk chart.
double signed_geodesic_curvature(const Trajectory& traj, std::size_t index);

/// Geodesic curvature of the numerical orbit through `state`, from a
/// five-sample stencil integrated around it with step dt.
double local_geodesic_curvature(const PhaseState& state, double dt, FieldStrength field);

/// Lift of an isometry to phase space: z -> m(z), p -> p / conj(m'(z)).
PhaseState transform_state(const MobiusTransform& m, const PhaseState& state);
/// Pushforward of a tangent vector (dx, dy, dp_x, dp_y) at `state`.
PhaseVector transform_tangent(const MobiusTransform& m, const PhaseState& state,
                              const PhaseVector& tangent);

}  // namespace maggeo
