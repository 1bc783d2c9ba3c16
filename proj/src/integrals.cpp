#include "maggeo/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace observables {

ObservableFunction constant(double c) {
    return [c](DiskPoint) { return c; };
}

ObservableFunction real_part() {
    return [](DiskPoint z) { return z.re(); };
}

ObservableFunction imag_part() {
    return [](DiskPoint z) { return z.im(); };
}

ObservableFunction distance_to(DiskPoint base) {
    return [base](DiskPoint z) { return distance(base, z); };
}

ObservableFunction on_quotient(ObservableFunction f, const FuchsianGroup& group) {
    return [f = std::move(f), &group](DiskPoint z) { return f(reduce(z, group).representative); };
}

}  // namespace observables

namespace {

constexpr double kSeriesKernelCutoff = 40.0;

double cosh_distance(Complex z, Complex w) {
    return 1.0 + 2.0 * std::norm(z - w) / ((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
}

}  // namespace

PoincareSeries::PoincareSeries(const FuchsianGroup& group, DiskPoint basepoint, double width)
    : group_(&group), width_(width) {
    if (!(width > 0.0)) {
        throw DomainError("series width must be positive");
    }
    // Terms with cosh d > cutoff / width are below e^-cutoff. The argument of
    // the series is always a representative, within circumradius of 0.
    const double reach = std::acosh(std::max(1.0, kSeriesKernelCutoff / width));
    const double radius = group.domain().circumradius + reach;
    const double base_offset = distance(DiskPoint{}, basepoint);
    for (const auto& g : group.elements_within(radius + base_offset)) {
        const Complex p = g.apply_raw(basepoint.value());
        if (2.0 * std::atanh(std::abs(p)) <= radius) orbit_.push_back(p);
    }
}

double PoincareSeries::operator()(DiskPoint z) const {
    const Complex rep = reduce(z, *group_).representative.value();
    double sum = 0.0;
    for (const Complex& p : orbit_) {
        sum += std::exp(-width_ * cosh_distance(rep, p));
    }
    return sum;
}

double integral_I_f(const PhaseState& state, const ObservableFunction& f) {
    return f(hyperbolic_center(state));
}

double integral_I_f(const PhaseState& state, const ObservableFunction& f, const FuchsianGroup& group) {
    return f(reduce(hyperbolic_center(state), group).representative);
}

IntegralValue integral_value(const PhaseState& state, const ObservableFunction& f, const FuchsianGroup& group) {
    return {integral_I_f(state, f, group), energy(state)};
}

PhaseObservable integral_observable(ObservableFunction f) {
    return [f = std::move(f)](const PhaseState& s) { return integral_I_f(s, f); };
}

PhaseObservable hamiltonian_observable() {
    return [](const PhaseState& s) { return energy(s); };
}

double poisson_bracket(const PhaseObservable& f1, const PhaseObservable& f2, const PhaseState& state, double h,
                       FieldStrength field) {
    if (!(h > 0.0)) {
        throw DomainError("bracket step must be positive");
    }
    const PhaseVector base = to_vector(state);
    if (std::abs(state.position.value()) + h >= 1.0 - kBoundaryEpsilon) {
        throw DomainError("bracket stencil leaves the disk");
    }
    std::array<double, 4> d1{};
    std::array<double, 4> d2{};
    for (std::size_t k = 0; k < 4; ++k) {
        PhaseVector plus = base;
        PhaseVector minus = base;
        plus[k] += h;
        minus[k] -= h;
        const PhaseState sp = from_vector(plus);
        const PhaseState sm = from_vector(minus);
        d1[k] = (f1(sp) - f1(sm)) / (2.0 * h);
        d2[k] = (f2(sp) - f2(sm)) / (2.0 * h);
    }
    double bracket = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        bracket += d1[i] * d2[2 + i] - d1[2 + i] * d2[i];
    }
    const double lambda = conformal_factor(state.position);
    const double f12 = field.s() * lambda * lambda;
    bracket += f12 * (d1[2] * d2[3] - d1[3] * d2[2]);
    return bracket;
}

std::array<double, 2> jacobian_singular_values(const ObservableFunction& f, const ObservableFunction& g,
                                               DiskPoint z, double h) {
    const Complex c = z.value();
    auto at = [](Complex w) { return DiskPoint{w}; };
    const double fx = (f(at(c + Complex{h, 0})) - f(at(c - Complex{h, 0}))) / (2 * h);
    const double fy = (f(at(c + Complex{0, h})) - f(at(c - Complex{0, h}))) / (2 * h);
    const double gx = (g(at(c + Complex{h, 0})) - g(at(c - Complex{h, 0}))) / (2 * h);
    const double gy = (g(at(c + Complex{0, h})) - g(at(c - Complex{0, h}))) / (2 * h);
    // Singular values of [[fx, fy], [gx, gy]] from trace and determinant of J^T J.
    const double frob = fx * fx + fy * fy + gx * gx + gy * gy;
    const double det = std::abs(fx * gy - fy * gx);
    const double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det * det));
    const double s1 = std::sqrt(0.5 * (frob + disc));
    const double s2 = s1 > 0.0 ? det / s1 : 0.0;
    return {s1, s2};
}

std::optional<LocatedOrbit> locate_closed_trajectory(double c_f, double c_g, const ObservableFunction& f,
                                                     const ObservableFunction& g, double energy,
                                                     const FuchsianGroup& group, const LocateOptions& options) {
    if (!(energy > 0.0) || energy >= kCriticalEnergy) {
        throw OutOfRegimeError("closed orbits exist only for 0 < E < 1/2");
    }
    const double extent = std::abs(group.domain().vertices[0].value());
    std::vector<Complex> starts;
    for (int i = 0; i < options.grid; ++i) {
        for (int j = 0; j < options.grid; ++j) {
            const Complex z{-extent + (2.0 * extent) * (i + 0.5) / options.grid,
                            -extent + (2.0 * extent) * (j + 0.5) / options.grid};
            if (inside_disk(z) && group.in_domain(z, 0.0)) starts.push_back(z);
        }
    }
    const Residual2D residual = [&](DiskPoint z) { return std::array<double, 2>{f(z) - c_f, g(z) - c_g}; };
    const auto outcomes = newton_multistart(starts, residual, options.newton, options.exec);

    std::vector<const NewtonOutcome*> roots;
    for (const auto& o : outcomes) {
        if (o.converged && group.in_domain(o.root, 1e-12)) roots.push_back(&o);
    }
    if (roots.empty()) return std::nullopt;

    const NewtonOutcome& first = *roots.front();
    if (std::abs(first.jacobian_det) < options.degenerate_det) {
        throw NumericError("level set is degenerate: Jacobian of (f, g) is singular at the root");
    }
    std::vector<Complex> distinct{first.root};
    double spread = 0.0;
    for (const auto* r : roots) {
        const double d = std::abs(r->root - first.root);
        if (d <= options.merge_distance) {
            spread = std::max(spread, d);
            continue;
        }
        const bool known = std::any_of(distinct.begin(), distinct.end(), [&](Complex w) {
            return std::abs(w - r->root) <= options.merge_distance;
        });
        if (!known) distinct.push_back(r->root);
    }
    return LocatedOrbit{circle_orbit(DiskPoint{first.root}, energy, 0.0), roots.size(), distinct.size(), spread};
}

std::vector<double> integral_energy_dependence(const std::function<PhaseState(double)>& family,
                                               const ObservableFunction& f, std::span<const double> energies) {
    for (double e : energies) {
        if (!(e > 0.0) || e >= kCriticalEnergy) {
            throw OutOfRegimeError("energy grid must lie in (0, 1/2)");
        }
    }
    std::vector<double> out;
    out.reserve(energies.size());
    for (double e : energies) {
        out.push_back(integral_I_f(family(e), f));
    }
    return out;
}

SmoothnessReport smoothness_diagnostic(std::span<const double> values, double spike_factor, std::size_t window) {
    SmoothnessReport report{{}, 0.0, true};
    if (values.size() < 3) return report;
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);

    auto& d2 = report.second_differences;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        d2.push_back(values[i + 1] - 2.0 * values[i] + values[i - 1]);
    }
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < d2.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(d2.size(), i + half + 1);
        std::vector<double> local;
        for (std::size_t k = lo; k < hi; ++k) local.push_back(std::abs(d2[k]));
        std::nth_element(local.begin(), local.begin() + local.size() / 2, local.end());
        const double median = local[local.size() / 2];
        const double ratio = std::abs(d2[i]) / (median + floor);
        report.max_spike_ratio = std::max(report.max_spike_ratio, ratio);
    }
    report.smooth = report.max_spike_ratio <= spike_factor;
    return report;
}

}  // namespace maggeo

namespace maggeo {

ConservationReport conservation_check(const PhaseState& state, double total_time, double dt,
                                      const ObservableFunction& f, const FuchsianGroup* group) {
    const double e0 = energy(state);
    if (!(e0 > 0.0) || e0 >= kCriticalEnergy) {
        throw OutOfRegimeError("integrals of motion exist only for 0 < E < 1/2");
    }
    auto value = [&](const PhaseState& s) {
        return group != nullptr ? integral_I_f(s, f, *group) : integral_I_f(s, f);
    };
    ConservationReport report{value(state), 0.0, 0.0, 0.0, total_time, dt};
    const DiskPoint c0 = hyperbolic_center(state);
    const std::size_t n = step_count(total_time, dt);
    PhaseState current = state;
    for (std::size_t k = 0; k < n; ++k) {
        current = step(current, dt, FieldStrength::unit());
        report.integral_drift = std::max(report.integral_drift, std::abs(value(current) - report.initial_value));
        report.center_drift = std::max(report.center_drift, distance(hyperbolic_center(current), c0));
        report.energy_drift = std::max(report.energy_drift, std::abs(energy(current) - e0));
    }
    return report;
}

}  // namespace maggeo
