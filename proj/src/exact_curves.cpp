#include "maggeo/exact_curves.hpp"

#include <cmath>
#include <numbers>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace {

// Quarter turn clockwise: the side of the velocity the orbit curves towards.
const Complex kTurnSide{0.0, -1.0};

constexpr double kContactTolerance = 1e-9;

void require_subcritical(double energy) {
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("energy must be positive");
    }
    if (energy >= kCriticalEnergy) {
        throw OutOfRegimeError("orbits with E >= 1/2 are unbounded and have no hyperbolic center");
    }
}

}  // namespace

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::Geodesic: return "Geodesic";
        case CurveKind::Hypercycle: return "Hypercycle";
        case CurveKind::Horocycle: return "Horocycle";
        case CurveKind::HyperbolicCircle: return "HyperbolicCircle";
    }
    return "Unknown";
}

CurveClass classify_by_curvature(double k_g) {
    if (!(k_g >= 0.0) || !std::isfinite(k_g)) {
        throw DomainError("geodesic curvature must be finite and non-negative");
    }
    if (k_g == 0.0) return {CurveKind::Geodesic, 2};
    if (std::abs(k_g - 1.0) < kHorocycleTolerance) return {CurveKind::Horocycle, 1};
    if (k_g < 1.0) return {CurveKind::Hypercycle, 2};
    return {CurveKind::HyperbolicCircle, 0};
}

double curvature_for_energy(double energy, FieldStrength field) {
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("energy must be positive");
    }
    return field.s() / std::sqrt(2.0 * energy);
}

CurveClass classify_by_energy(double energy, FieldStrength field) {
    return classify_by_curvature(curvature_for_energy(energy, field));
}

double orbit_radius(double energy) {
    require_subcritical(energy);
    // coth(rho) = 1 / sqrt(2E)
    return std::atanh(std::sqrt(2.0 * energy));
}

double orbit_period(double energy) {
    const double rho = orbit_radius(energy);
    return 2.0 * std::numbers::pi * std::sinh(rho) / std::sqrt(2.0 * energy);
}

DiskPoint hyperbolic_center(const PhaseState& state, double energy) {
    require_subcritical(energy);
    const Complex v = velocity(state);
    if (!(std::abs(v) > 0.0)) {
        throw DomainError("hyperbolic center undefined for zero momentum");
    }
    const Complex dir = v / std::abs(v);
    const double euclid = std::tanh(0.5 * orbit_radius(energy));
    const MobiusTransform to_state = MobiusTransform::translation_to(state.position);
    return DiskPoint{to_state.apply_raw(kTurnSide * dir * euclid)};
}

DiskPoint hyperbolic_center(const PhaseState& state) { return hyperbolic_center(state, energy(state)); }

CircleOrbit circle_orbit(DiskPoint center, double energy, double phase) {
    const double rho = orbit_radius(energy);
    return {center, rho, energy, orbit_period(energy), phase};
}

PhaseState orbit_state(const CircleOrbit& orbit, double t) {
    const double r = std::tanh(0.5 * orbit.hyp_radius);
    const double omega = 2.0 * std::numbers::pi / orbit.period;
    // Clockwise in the centered chart, starting at +i r for zero phase.
    const double angle = 0.5 * std::numbers::pi + orbit.phase - omega * t;
    const Complex w = std::polar(r, angle);
    const Complex w_dot = Complex{0.0, -omega} * w;
    const MobiusTransform m = MobiusTransform::translation_to(orbit.center);
    const DiskPoint z{m.apply_raw(w)};
    return state_from_velocity(z, m.derivative(w) * w_dot);
}

EuclideanCircle euclidean_representation(const PhaseState& state, double energy, FieldStrength field) {
    const double k_g = curvature_for_energy(energy, field);
    const Complex v = velocity(state);
    if (!(std::abs(v) > 0.0)) {
        throw DomainError("Euclidean representation undefined for zero momentum");
    }
    const Complex u = v / std::abs(v);
    const Complex normal = kTurnSide * u;
    const Complex x = state.position.value();
    const double lambda = conformal_factor(state.position);
    // Euclidean curvature towards `normal` for the conformal metric e^{2 phi}|dz|^2:
    // kappa = e^phi k_g + d phi / d normal, with grad phi = lambda x.
    const double kappa = lambda * k_g + lambda * (x.real() * normal.real() + x.imag() * normal.imag());

    EuclideanCircle out;
    out.curve_class = classify_by_curvature(k_g);
    if (std::abs(kappa) < 1e-14) {
        out.is_line = true;
        out.point = x;
        out.direction = u;
        // A line is a geodesic only when it passes through the origin.
        const double offset = std::abs(x.real() * u.imag() - x.imag() * u.real());
        out.orthogonality_residual = offset;
        out.tangency_residual = std::abs(offset - 1.0);
        out.curve_class.boundary_contacts = offset < 1.0 ? 2 : (offset - 1.0 < kContactTolerance ? 1 : 0);
        return out;
    }
    out.center = x + normal / kappa;
    out.radius = 1.0 / std::abs(kappa);
    const double c = std::abs(out.center);
    out.tangency_residual = std::abs(c + out.radius - 1.0);
    out.orthogonality_residual = std::abs(c * c - out.radius * out.radius - 1.0);
    if (out.tangency_residual < kContactTolerance) {
        out.curve_class.boundary_contacts = 1;
    } else if (c + out.radius < 1.0) {
        out.curve_class.boundary_contacts = 0;
    } else {
        out.curve_class.boundary_contacts = 2;
    }
    return out;
}

}  // namespace maggeo
