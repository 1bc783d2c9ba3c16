#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "maggeo/errors.hpp"
#include "maggeo/exact_curves.hpp"
#include "test_support.hpp"

using namespace maggeo;
using std::numbers::pi;

namespace {

// Position in the chart where `center` sits at the origin.
Complex centered(DiskPoint center, const PhaseState& s) {
    return mobius_apply(mobius_inverse(MobiusTransform::translation_to(center)), s.position).value();
}

// First return time from the winding angle around the center.
double numeric_period(const PhaseState& start, DiskPoint center, double dt) {
    const FieldStrength field = FieldStrength::unit();
    double wound = 0.0;
    double previous = std::arg(centered(center, start));
    PhaseState s = start;
    for (int k = 1;; ++k) {
        s = step(s, dt, field);
        const double angle = std::arg(centered(center, s));
        double delta = angle - previous;
        if (delta > pi) delta -= 2.0 * pi;
        if (delta < -pi) delta += 2.0 * pi;
        if (std::abs(wound + delta) >= 2.0 * pi) {
            const double fraction = (2.0 * pi - std::abs(wound)) / std::abs(delta);
            return (k - 1 + fraction) * dt;
        }
        wound += delta;
        previous = angle;
    }
}

}  // namespace

TEST_CASE("classification by curvature") {
    CHECK(classify_by_curvature(0.0) == CurveClass{CurveKind::Geodesic, 2});
    CHECK(classify_by_curvature(0.5) == CurveClass{CurveKind::Hypercycle, 2});
    CHECK(classify_by_curvature(1.0) == CurveClass{CurveKind::Horocycle, 1});
    CHECK(classify_by_curvature(1.0 + 1e-11) == CurveClass{CurveKind::Horocycle, 1});
    CHECK(classify_by_curvature(2.0) == CurveClass{CurveKind::HyperbolicCircle, 0});
    CHECK_THROWS_AS(classify_by_curvature(-0.1), DomainError);

    CHECK(classify_by_energy(0.125).kind == CurveKind::HyperbolicCircle);
    CHECK(classify_by_energy(0.5).kind == CurveKind::Horocycle);
    CHECK(classify_by_energy(2.0).kind == CurveKind::Hypercycle);
    CHECK(classify_by_energy(2.0, FieldStrength::none()).kind == CurveKind::Geodesic);
    CHECK(curvature_for_energy(0.125) == doctest::Approx(2.0));
    CHECK(curvature_for_energy(2.0, FieldStrength{3.0}) == doctest::Approx(1.5));
    CHECK_THROWS_AS(classify_by_energy(0.0), DomainError);
    CHECK(to_string(CurveKind::Horocycle) == "Horocycle");
}

TEST_CASE("radius and period of closed orbits") {
    CHECK(orbit_radius(0.125) == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
    CHECK(1.0 / std::tanh(orbit_radius(0.125)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(orbit_period(0.125) == doctest::Approx(4.0 * pi / std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(orbit_radius(0.5), OutOfRegimeError);
    CHECK_THROWS_AS(orbit_period(0.75), OutOfRegimeError);
    CHECK_THROWS_AS(orbit_radius(-1.0), DomainError);
}

TEST_CASE("center of the orbit through the origin") {
    const auto s = state_from_direction(DiskPoint{0.0, 0.0}, 0.0, 0.125);
    const DiskPoint c = hyperbolic_center(s);
    CHECK(c.re() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(c.im() == doctest::Approx(-(2.0 - std::sqrt(3.0))).epsilon(1e-14));
    CHECK_THROWS_AS(hyperbolic_center(state_from_direction(DiskPoint{0.0, 0.0}, 0.0, 0.5)), OutOfRegimeError);
    CHECK_THROWS_AS(hyperbolic_center(PhaseState{DiskPoint{0.1, 0.1}, {0.0, 0.0}}), DomainError);
}

TEST_CASE("the center is equidistant from the numerical orbit") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> e(0.02, 0.4);
    for (int n = 0; n < 10; ++n) {
        const double energy_value = e(rng);
        const auto s = state_from_direction(maggeo::testing::random_point(rng, 0.5), angle(rng), energy_value);
        const DiskPoint c = hyperbolic_center(s);
        const auto tr = integrate(s, orbit_period(energy_value), 1e-3, FieldStrength::unit());
        for (std::size_t i = 0; i < tr.size(); i += 50) {
            CHECK(distance(c, tr.state(i).position) == doctest::Approx(orbit_radius(energy_value)).epsilon(1e-9));
        }
    }
}

TEST_CASE("center is equivariant under isometries") {
    std::mt19937_64 rng(23);
    for (int n = 0; n < 200; ++n) {
        const auto m = maggeo::testing::random_isometry(rng, 1.0);
        const auto s = state_from_direction(maggeo::testing::random_point(rng, 0.5), 0.7 * n, 0.2);
        const Complex lhs = hyperbolic_center(transform_state(m, s)).value();
        const Complex rhs = mobius_apply(m, hyperbolic_center(s)).value();
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("every phase of a circle orbit shares its center") {
    const DiskPoint c{0.3, -0.2};
    for (double phase : {0.0, 1.0, 2.5, 4.0}) {
        const auto orbit = circle_orbit(c, 0.125, phase);
        for (double t : {0.0, 1.3, 5.0}) {
            const auto s = orbit_state(orbit, t);
            CHECK(energy(s) == doctest::Approx(0.125).epsilon(1e-13));
            CHECK(std::abs(hyperbolic_center(s).value() - c.value()) < 1e-12);
        }
    }
}

TEST_CASE("period matches the numerical first return") {
    for (double e : {0.125, 0.05, 0.3}) {
        const auto s = state_from_direction(DiskPoint{0.2, 0.1}, 0.4, e);
        const double measured = numeric_period(s, hyperbolic_center(s), 1e-4);
        CHECK(measured == doctest::Approx(orbit_period(e)).epsilon(1e-5));
    }
}

TEST_CASE("closed form agrees with the integrator over one period") {
    const auto orbit = circle_orbit(DiskPoint{-0.1, 0.25}, 0.125, 0.6);
    const auto tr = integrate(orbit_state(orbit, 0.0), orbit.period, 1e-3, FieldStrength::unit());
    double worst = 0.0;
    for (const auto& sample : tr.samples) {
        worst = std::max(worst, std::abs(sample.state.position.value() - orbit_state(orbit, sample.t).position.value()));
    }
    CHECK(worst < 1e-6);
    const auto end = orbit_state(orbit, orbit.period);
    CHECK(std::abs(end.position.value() - orbit_state(orbit, 0.0).position.value()) < 1e-12);
}

TEST_CASE("closed orbits turn clockwise") {
    const auto s = state_from_direction(DiskPoint{0.1, 0.2}, 2.0, 0.125);
    const DiskPoint c = hyperbolic_center(s);
    const auto tr = integrate(s, 0.5, 1e-3, FieldStrength::unit());
    double previous = std::arg(centered(c, tr.state(0)));
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const double angle = std::arg(centered(c, tr.state(i)));
        double delta = angle - previous;
        if (delta > pi) delta -= 2.0 * pi;
        if (delta < -pi) delta += 2.0 * pi;
        CHECK(delta < 0.0);
        previous = angle;
    }
    const auto orbit = circle_orbit(DiskPoint{0.0, 0.0}, 0.125, 0.0);
    CHECK(orbit_state(orbit, 0.0).position.im() > 0.0);
    CHECK(velocity(orbit_state(orbit, 0.0)).real() > 0.0);
}

TEST_CASE("center stays fixed over many periods") {
    const auto s = state_from_direction(DiskPoint{0.1, 0.05}, 0.3, 0.125);
    const DiskPoint c0 = hyperbolic_center(s);
    const auto tr = integrate(s, 10.0 * orbit_period(0.125), 1e-3, FieldStrength::unit());
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); i += 100) {
        worst = std::max(worst, distance(c0, hyperbolic_center(tr.state(i), 0.125)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("Euclidean representatives") {
    const auto inside = euclidean_representation(state_from_direction(DiskPoint{0.0, 0.0}, 0.0, 0.125), 0.125);
    CHECK_FALSE(inside.is_line);
    CHECK(inside.curve_class.boundary_contacts == 0);
    // The orbit through 0 has the diameter [0, -i tanh(rho)] = [0, -i/2].
    CHECK(inside.radius == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(inside.center - Complex{0.0, -0.25}) < 1e-13);

    const auto horo = euclidean_representation(state_from_direction(DiskPoint{0.2, -0.3}, 1.0, 0.5), 0.5);
    CHECK(horo.curve_class.boundary_contacts == 1);
    CHECK(horo.tangency_residual < 1e-9);

    const auto hyper = euclidean_representation(state_from_direction(DiskPoint{0.2, -0.3}, 1.0, 2.0), 2.0);
    CHECK(hyper.curve_class.boundary_contacts == 2);
    CHECK(hyper.curve_class.kind == CurveKind::Hypercycle);

    const auto diameter = euclidean_representation(state_from_direction(DiskPoint{0.0, 0.0}, 0.5, 1.0), 1.0,
                                                   FieldStrength::none());
    CHECK(diameter.is_line);
    CHECK(diameter.curve_class.boundary_contacts == 2);
}

TEST_CASE("numerical orbits lie on their Euclidean representatives") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (double e : {0.125, 0.5, 2.0}) {
        for (int n = 0; n < 5; ++n) {
            const auto s = state_from_direction(maggeo::testing::random_point(rng, 0.5), angle(rng), e);
            const auto rep = euclidean_representation(s, e);
            const auto tr = integrate(s, 1.0, 1e-3, FieldStrength::unit());
            for (std::size_t i = 0; i < tr.size(); i += 100) {
                CHECK(std::abs(std::abs(tr.state(i).position.value() - rep.center) - rep.radius) < 1e-9);
            }
        }
    }
}

TEST_CASE("geodesics are orthogonal to the boundary") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int n = 0; n < 50; ++n) {
        DiskPoint z = maggeo::testing::random_point(rng, 0.8);
        if (std::abs(z.value()) < 0.05) continue;
        const double a = angle(rng);
        // Skip directions along the diameter, whose representative is a line.
        if (std::abs(std::sin(a - std::arg(z.value()))) < 0.05) continue;
        const auto rep = euclidean_representation(state_from_direction(z, a, 1.0), 1.0, FieldStrength::none());
        REQUIRE_FALSE(rep.is_line);
        CHECK(rep.orthogonality_residual < 1e-9);
    }
}
