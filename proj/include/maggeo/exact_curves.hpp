#pragma once

// Curves of constant geodesic curvature on the disk and the closed-form
// orbits of the flow below the critical energy E = 1/2.

#include <string_view>

#include "maggeo/flow.hpp"
#include "maggeo/hyperbolic.hpp"

namespace maggeo {

inline constexpr double kCriticalEnergy = 0.5;
/// |k_g - 1| below this classifies as a horocycle.
inline constexpr double kHorocycleTolerance = 1e-9;

enum class CurveKind { Geodesic, Hypercycle, Horocycle, HyperbolicCircle };

std::string_view to_string(CurveKind kind);

struct CurveClass {
    CurveKind kind;
    /// Intersections/tangencies of the Euclidean representative with the unit circle.
    int boundary_contacts;

    friend bool operator==(const CurveClass&, const CurveClass&) = default;
};

CurveClass classify_by_curvature(double k_g);

/// k_g = s / sqrt(2E) for the magnetic flow of strength s.
double curvature_for_energy(double energy, FieldStrength field = FieldStrength::unit());
CurveClass classify_by_energy(double energy, FieldStrength field = FieldStrength::unit());

/// Hyperbolic radius rho with coth(rho) = k_g; requires E < 1/2 (s = 1).
double orbit_radius(double energy);
/// Closed-orbit period 2 pi sinh(rho) / sqrt(2E).
double orbit_period(double energy);

struct CircleOrbit {
    DiskPoint center;
    double hyp_radius;
    double energy;
    double period;
    double phase;
};

/// Center of the hyperbolic circle traced by the orbit through `state` at
/// energy E. The center sits a quarter turn clockwise of the velocity.
DiskPoint hyperbolic_center(const PhaseState& state, double energy);
/// Same with E = energy(state).
DiskPoint hyperbolic_center(const PhaseState& state);

CircleOrbit circle_orbit(DiskPoint center, double energy, double phase);
/// Exact state at time t. At t = 0 and zero phase the particle sits directly
/// "above" the center in the centered chart (at +i r), moving along +x.
PhaseState orbit_state(const CircleOrbit& orbit, double t);

struct EuclideanCircle {
    /// When is_line, the curve is the straight line through `point` along `direction`.
    bool is_line = false;
    Complex center{};
    double radius = 0.0;
    Complex point{};
    Complex direction{};
    CurveClass curve_class{CurveKind::Geodesic, 2};
    /// | |center| + radius - 1 |: zero for horocycles.
    double tangency_residual = 0.0;
    /// | |center|^2 - radius^2 - 1 |: zero for circles orthogonal to the unit circle.
    double orthogonality_residual = 0.0;
};

/// Euclidean circle (or line) containing the whole orbit through `state`.
EuclideanCircle euclidean_representation(const PhaseState& state, double energy,
                                         FieldStrength field = FieldStrength::unit());

}  // namespace maggeo
