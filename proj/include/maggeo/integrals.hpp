#pragma once

// Integrals of motion I_f(x, p) = f(x_gamma) below the critical energy, where
// x_gamma is the hyperbolic center of the orbit, and tools around them:
// twisted Poisson brackets, isolation of closed orbits from two integral
// values, and smoothness of I_f in the energy.

#include <functional>
#include <optional>
#include <vector>

#include "maggeo/ensemble.hpp"
#include "maggeo/exact_curves.hpp"
#include "maggeo/flow.hpp"
#include "maggeo/fuchsian.hpp"

namespace maggeo {

/// Function on the disk (or, when Gamma-invariant, on M).
using ObservableFunction = std::function<double(DiskPoint)>;
/// Function on phase space.
using PhaseObservable = std::function<double(const PhaseState&)>;

namespace observables {

ObservableFunction constant(double c);
ObservableFunction real_part();
ObservableFunction imag_part();
ObservableFunction distance_to(DiskPoint base);
/// f(representative of z in the fundamental domain): Gamma-invariant.
ObservableFunction on_quotient(ObservableFunction f, const FuchsianGroup& group);

}  // namespace observables

/// Smooth Gamma-invariant function
///   f(z) = sum over gamma of exp(-width * cosh d(z, gamma basepoint)),
/// truncated where the kernel drops below e^-40.
class PoincareSeries {
public:
    PoincareSeries(const FuchsianGroup& group, DiskPoint basepoint, double width = 1.0);

    double operator()(DiskPoint z) const;
    std::size_t terms() const { return orbit_.size(); }

private:
    const FuchsianGroup* group_;
    std::vector<Complex> orbit_;
    double width_;
};

struct IntegralValue {
    double value;
    double energy_level;
};

/// I_f = f(hyperbolic center). Throws OutOfRegimeError for E >= 1/2.
double integral_I_f(const PhaseState& state, const ObservableFunction& f);
/// Quotient form: f evaluated at the fundamental-domain representative of the center.
double integral_I_f(const PhaseState& state, const ObservableFunction& f, const FuchsianGroup& group);
IntegralValue integral_value(const PhaseState& state, const ObservableFunction& f, const FuchsianGroup& group);

/// Phase-space observable state -> I_f(state).
PhaseObservable integral_observable(ObservableFunction f);
PhaseObservable hamiltonian_observable();

/// {F1, F2} = sum_i (dF1/dx^i dF2/dp_i - dF1/dp_i dF2/dx^i)
///          + sum_ij F_ij dF1/dp_i dF2/dp_j,
/// with F_12 = -F_21 = s lambda^2 and central differences of step h.
double poisson_bracket(const PhaseObservable& f1, const PhaseObservable& f2, const PhaseState& state, double h,
                       FieldStrength field = FieldStrength::unit());

inline constexpr double kBracketStep = 1e-5;

/// Singular values (largest first) of the finite-difference Jacobian of (f, g) at z.
std::array<double, 2> jacobian_singular_values(const ObservableFunction& f, const ObservableFunction& g,
                                               DiskPoint z, double h = 1e-6);

struct LocateOptions {
    int grid = 32;
    /// Roots closer than this are the same root.
    double merge_distance = 1e-8;
    /// |det J| below this at the root is a degenerate level.
    double degenerate_det = 1e-10;
    NewtonOptions newton{};
    Execution exec = Execution::Parallel;
};

struct LocatedOrbit {
    CircleOrbit orbit;
    std::size_t converged_starts;
    std::size_t distinct_roots;
    /// Largest distance between any converged root and the winning one,
    /// over roots counted as the same.
    double root_spread;
};

/// Finds a center z* in the fundamental domain with f(z*) = c_f, g(z*) = c_g
/// by damped Newton from a grid of starts, and returns the closed orbit
/// around it. Returns nullopt when no start converges inside the domain.
std::optional<LocatedOrbit> locate_closed_trajectory(double c_f, double c_g, const ObservableFunction& f,
                                                     const ObservableFunction& g, double energy,
                                                     const FuchsianGroup& group, const LocateOptions& options = {});

/// I_f along a one-parameter family of states, one value per energy.
std::vector<double> integral_energy_dependence(const std::function<PhaseState(double)>& family,
                                               const ObservableFunction& f, std::span<const double> energies);

struct SmoothnessReport {
    std::vector<double> second_differences;
    /// Max over i of |d2_i| / (local median of |d2| + floor).
    double max_spike_ratio;
    bool smooth;
};

/// Spike detector on second differences: a point is a spike when its |d2|
/// exceeds `spike_factor` times the median of |d2| over a centered window.
SmoothnessReport smoothness_diagnostic(std::span<const double> values, double spike_factor = 10.0,
                                       std::size_t window = 21);

}  // namespace maggeo

namespace maggeo {

struct ConservationReport {
    double initial_value;
    /// max_t |I_f(t) - I_f(0)|
    double integral_drift;
    /// max_t d(x_gamma(t), x_gamma(0)) on the disk
    double center_drift;
    double energy_drift;
    double total_time;
    double dt;
};

/// Integrates on the disk (closed orbits stay bounded) and tracks the center
/// and I_f at every step. f is evaluated on the quotient when a group is given.
ConservationReport conservation_check(const PhaseState& state, double total_time, double dt,
                                      const ObservableFunction& f, const FuchsianGroup* group);

}  // namespace maggeo
