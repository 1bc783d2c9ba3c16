#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "maggeo/errors.hpp"
#include "maggeo/integrals.hpp"
#include "test_support.hpp"

using namespace maggeo;
using std::numbers::pi;

namespace {

const FuchsianGroup& group() { return genus2_octagon_group(); }

PhaseState random_closed_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> e(0.03, 0.4);
    return state_from_direction(maggeo::testing::random_point(rng, 0.5), angle(rng), e(rng));
}

double nonlinear_f(DiskPoint z) { return z.re() + 0.5 * z.im() * z.im(); }
double nonlinear_g(DiskPoint z) { return z.im() - 0.3 * z.re() * z.re() + 0.2 * z.re() * z.im(); }

}  // namespace

TEST_CASE("integrals from simple observables") {
    const auto orbit = circle_orbit(DiskPoint{0.0, 0.0}, 0.2, 0.4);
    const auto origin_distance = observables::distance_to(DiskPoint{0.0, 0.0});
    for (double t : {0.0, 1.0, 3.7}) {
        const auto s = orbit_state(orbit, t);
        CHECK(integral_I_f(s, observables::constant(2.5)) == 2.5);
        CHECK(integral_I_f(s, origin_distance) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
    const auto shifted = orbit_state(circle_orbit(DiskPoint{0.3, -0.1}, 0.2, 0.0), 2.0);
    CHECK(integral_I_f(shifted, observables::real_part()) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(integral_I_f(shifted, observables::imag_part()) == doctest::Approx(-0.1).epsilon(1e-13));
    CHECK(integral_value(shifted, observables::real_part(), group()).energy_level == doctest::Approx(0.2));
    CHECK_THROWS_AS(integral_I_f(state_from_direction(DiskPoint{0.0, 0.0}, 0.0, 0.5), observables::real_part()),
                    OutOfRegimeError);
}

TEST_CASE("the Poincare series is invariant under the group") {
    const PoincareSeries series(group(), DiskPoint{0.3, 0.2});
    CHECK(series.terms() > 1);
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> letter(0, kLetterCount - 1);
    for (int n = 0; n < 200; ++n) {
        const DiskPoint z = maggeo::testing::random_point(rng, 0.6);
        Word w(1 + n % 3);
        for (auto& l : w) l = letter(rng);
        const DiskPoint gz = mobius_apply(group().evaluate(w), z);
        CHECK(std::abs(series(gz) - series(z)) < 1e-9);
    }
    const auto folded = observables::on_quotient(observables::real_part(), group());
    const DiskPoint z{0.1, 0.05};
    CHECK(folded(mobius_apply(group().generators()[2], z)) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("integrals are conserved along the flow") {
    const PoincareSeries series(group(), DiskPoint{0.3, 0.2});
    const auto s = state_from_direction(DiskPoint{0.1, 0.05}, 0.3, 0.125);
    const auto report = conservation_check(s, 10.0 * orbit_period(0.125), 1e-3, series, &group());
    CHECK(report.center_drift < 1e-10);
    CHECK(report.integral_drift < 1e-10);
    CHECK(report.energy_drift < 1e-12);

    const auto plain = conservation_check(s, 5.0, 1e-3, observables::real_part(), nullptr);
    CHECK(plain.integral_drift < 1e-10);
    CHECK(plain.initial_value == doctest::Approx(hyperbolic_center(s).re()));
    CHECK_THROWS_AS(conservation_check(state_from_direction(DiskPoint{0.0, 0.0}, 0.0, 0.75), 1.0, 1e-3,
                                       observables::real_part(), nullptr),
                    OutOfRegimeError);
}

TEST_CASE("center drift shrinks with the fourth power of the step") {
    const auto s = state_from_direction(DiskPoint{0.1, 0.05}, 0.3, 0.125);
    const double total = 10.0 * orbit_period(0.125);
    std::vector<double> drifts;
    for (double dt : {0.04, 0.02, 0.01}) {
        drifts.push_back(conservation_check(s, total, dt, observables::real_part(), nullptr).center_drift);
    }
    for (std::size_t i = 1; i < drifts.size(); ++i) {
        CHECK(std::log2(drifts[i - 1] / drifts[i]) == doctest::Approx(4.0).epsilon(0.5 / 4.0));
    }
}

TEST_CASE("canonical brackets") {
    const PhaseObservable x = [](const PhaseState& s) { return s.position.re(); };
    const PhaseObservable px = [](const PhaseState& s) { return s.momentum.x; };
    const PhaseObservable py = [](const PhaseState& s) { return s.momentum.y; };
    const PhaseState s = state_from_direction(DiskPoint{0.3, -0.2}, 0.4, 0.3);
    CHECK(poisson_bracket(x, px, s, kBracketStep) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(poisson_bracket(x, py, s, kBracketStep) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    const double lambda = conformal_factor(s.position);
    CHECK(poisson_bracket(px, py, s, kBracketStep, FieldStrength{0.7}) ==
          doctest::Approx(0.7 * lambda * lambda).epsilon(1e-9));
}

TEST_CASE("bracket algebra") {
    const PhaseObservable a = [](const PhaseState& s) { return s.position.re() * s.momentum.y + s.momentum.x; };
    const PhaseObservable b = [](const PhaseState& s) { return s.position.im() * s.position.im() - s.momentum.y; };
    const PhaseObservable c = [](const PhaseState& s) { return std::sin(s.position.re()) + s.momentum.x * s.momentum.y; };
    const PhaseObservable bc = [&](const PhaseState& s) { return b(s) * c(s); };
    std::mt19937_64 rng(53);
    for (int n = 0; n < 50; ++n) {
        const auto s = random_closed_state(rng);
        const double ab = poisson_bracket(a, b, s, kBracketStep);
        CHECK(poisson_bracket(b, a, s, kBracketStep) == doctest::Approx(-ab).epsilon(1e-8).scale(1.0));
        const double leibniz = poisson_bracket(a, b, s, kBracketStep) * c(s) + b(s) * poisson_bracket(a, c, s, kBracketStep);
        CHECK(poisson_bracket(a, bc, s, kBracketStep) == doctest::Approx(leibniz).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("integrals commute with the Hamiltonian but not with each other") {
    const auto h = hamiltonian_observable();
    const auto re = integral_observable(observables::real_part());
    const auto im = integral_observable(observables::imag_part());
    const auto series = integral_observable(PoincareSeries(group(), DiskPoint{0.3, 0.2}));
    std::mt19937_64 rng(59);
    double smallest_mixed = 1e300;
    for (int n = 0; n < 100; ++n) {
        const auto s = random_closed_state(rng);
        CHECK(std::abs(poisson_bracket(h, h, s, kBracketStep)) < 1e-12);
        CHECK(std::abs(poisson_bracket(h, re, s, kBracketStep)) < 1e-6);
        CHECK(std::abs(poisson_bracket(h, series, s, kBracketStep)) < 1e-6);
        smallest_mixed = std::min(smallest_mixed, std::abs(poisson_bracket(re, im, s, kBracketStep)));
    }
    MESSAGE("smallest |{I_re, I_im}| over sampled states: " << smallest_mixed);
    CHECK(smallest_mixed > 1e-4);
}

TEST_CASE("locating a closed orbit from two integrals") {
    const auto at_origin = locate_closed_trajectory(0.0, 0.0, observables::real_part(), observables::imag_part(), 0.125,
                                                    group());
    REQUIRE(at_origin.has_value());
    CHECK(std::abs(at_origin->orbit.center.value()) < 1e-12);
    CHECK(at_origin->distinct_roots == 1);
    CHECK(at_origin->orbit.hyp_radius == doctest::Approx(orbit_radius(0.125)));

    const DiskPoint target{0.2, -0.1};
    const double cf = nonlinear_f(target);
    const double cg = nonlinear_g(target);
    const auto found = locate_closed_trajectory(cf, cg, nonlinear_f, nonlinear_g, 0.2, group());
    REQUIRE(found.has_value());
    CHECK(std::abs(found->orbit.center.value() - target.value()) < 1e-10);
    CHECK(found->distinct_roots == 1);
    CHECK(found->converged_starts > 10);
    // The located orbit has the requested integral values.
    const auto s = orbit_state(found->orbit, 1.1);
    CHECK(integral_I_f(s, nonlinear_f) == doctest::Approx(cf).epsilon(1e-10));
    CHECK(integral_I_f(s, nonlinear_g) == doctest::Approx(cg).epsilon(1e-10));

    // Exhaustive grid oracle: every near-root on a fine grid of the domain
    // sits next to the target, so the root is unique.
    const double extent = std::abs(group().domain().vertices[0].value());
    const int n = 400;
    const double cell = 2.0 * extent / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Complex z{-extent + (i + 0.5) * cell, -extent + (j + 0.5) * cell};
            if (!group().in_domain(z, 0.0)) continue;
            const DiskPoint p{z};
            if (std::hypot(nonlinear_f(p) - cf, nonlinear_g(p) - cg) < 2.0 * cell) {
                CHECK(std::abs(z - target.value()) < 4.0 * cell);
            }
        }
    }

    const auto sv = jacobian_singular_values(nonlinear_f, nonlinear_g, target);
    CHECK(sv[0] >= sv[1]);
    CHECK(sv[1] > 1e-6);
    const auto identity_sv = jacobian_singular_values(observables::real_part(), observables::imag_part(), target);
    CHECK(identity_sv[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(identity_sv[1] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("locating fails cleanly") {
    CHECK_FALSE(locate_closed_trajectory(5.0, 0.0, observables::real_part(), observables::imag_part(), 0.125, group())
                    .has_value());
    CHECK_THROWS_AS(
        locate_closed_trajectory(0.0, 0.0, observables::real_part(), observables::imag_part(), 0.5, group()),
        OutOfRegimeError);
    const ObservableFunction twice = [](DiskPoint z) { return 2.0 * z.re(); };
    CHECK_THROWS_AS(locate_closed_trajectory(0.1, 0.2, observables::real_part(), twice, 0.125, group()), NumericError);
}

TEST_CASE("integral as a function of energy") {
    std::vector<double> energies;
    for (int i = 0; i < 200; ++i) energies.push_back(0.01 + 0.44 * i / 199.0);
    const auto family = [](double e) { return state_from_direction(DiskPoint{0.0, 0.0}, 0.0, e); };
    const auto values = integral_energy_dependence(family, observables::distance_to(DiskPoint{0.0, 0.0}), energies);
    for (std::size_t i = 0; i < energies.size(); ++i) {
        CHECK(values[i] == doctest::Approx(orbit_radius(energies[i])).epsilon(1e-12));
    }
    const auto report = smoothness_diagnostic(values);
    CHECK(report.smooth);
    CHECK(report.second_differences.size() == values.size() - 2);

    auto spiked = values;
    spiked[100] += 1e-3;
    CHECK_FALSE(smoothness_diagnostic(spiked).smooth);

    const std::vector<double> bad{0.1, 0.5};
    CHECK_THROWS_AS(integral_energy_dependence(family, observables::real_part(), bad), OutOfRegimeError);
}
