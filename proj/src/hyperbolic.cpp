#include "maggeo/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace {

constexpr double kDenominatorEpsilon = 1e-300;

void check_inside(Complex z) {
    if (!inside_disk(z)) {
        throw DomainError("point lies on or outside the boundary shell of the unit disk");
    }
}

}  // namespace

bool inside_disk(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1.0 - kBoundaryEpsilon;
}

DiskPoint::DiskPoint(double re, double im) : DiskPoint(Complex{re, im}) {}

DiskPoint::DiskPoint(Complex z) : z_(z) { check_inside(z_); }

MobiusTransform::MobiusTransform(Complex a, Complex b) {
    const double det = std::norm(a) - std::norm(b);
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw DomainError("MobiusTransform requires |a|^2 - |b|^2 > 0");
    }
    const double scale = 1.0 / std::sqrt(det);
    a_ = a * scale;
    b_ = b * scale;
}

MobiusTransform MobiusTransform::rotation(double angle) {
    return {std::polar(1.0, angle / 2.0), Complex{0.0, 0.0}};
}

MobiusTransform MobiusTransform::translation_to(DiskPoint z) {
    return {Complex{1.0, 0.0}, z.value()};
}

Complex MobiusTransform::apply_raw(Complex z) const {
    const Complex den = c() * z + d();
    if (std::abs(den) < kDenominatorEpsilon) {
        throw NumericError("Mobius denominator vanished");
    }
    return (a_ * z + b_) / den;
}

Complex MobiusTransform::derivative(Complex z) const {
    // ad - bc = 1 after normalization.
    const Complex den = c() * z + d();
    return 1.0 / (den * den);
}

Complex MobiusTransform::second_derivative(Complex z) const {
    const Complex den = c() * z + d();
    return -2.0 * c() / (den * den * den);
}

double MobiusTransform::distance_to(const MobiusTransform& other) const {
    auto maxdiff = [](const MobiusTransform& x, const MobiusTransform& y, double sign) {
        return std::max(std::abs(x.a_ - sign * y.a_), std::abs(x.b_ - sign * y.b_));
    };
    return std::min(maxdiff(*this, other, 1.0), maxdiff(*this, other, -1.0));
}

bool MobiusTransform::approx_equal(const MobiusTransform& other, double tol) const {
    return distance_to(other) <= tol;
}

double conformal_factor(Complex z) {
    check_inside(z);
    return 2.0 / (1.0 - std::norm(z));
}

double conformal_factor(DiskPoint z) { return conformal_factor(z.value()); }

MetricData metric_at(DiskPoint z) { return {conformal_factor(z), z}; }

double distance(DiskPoint z, DiskPoint w) {
    const Complex num = z.value() - w.value();
    const Complex den = 1.0 - std::conj(w.value()) * z.value();
    return 2.0 * std::atanh(std::min(std::abs(num) / std::abs(den), 1.0));
}

DiskPoint mobius_apply(const MobiusTransform& m, DiskPoint z) {
    return DiskPoint{m.apply_raw(z.value())};
}

MobiusTransform mobius_compose(const MobiusTransform& outer, const MobiusTransform& inner) {
    // [[a1, b1], [c1, d1]] * [[a2, b2], [c2, d2]]; the product stays in SU(1,1),
    // so only the first row is kept and the constructor renormalizes.
    const Complex a = outer.a() * inner.a() + outer.b() * inner.c();
    const Complex b = outer.a() * inner.b() + outer.b() * inner.d();
    return {a, b};
}

MobiusTransform mobius_inverse(const MobiusTransform& m) { return {std::conj(m.a()), -m.b()}; }

GeodesicCarrier geodesic_through(Complex z, Complex w) {
    // Center c of a circle orthogonal to |z| = 1 through z satisfies
    // Re(conj(c) z) = (1 + |z|^2) / 2; solve for z and w together.
    const double det = z.real() * w.imag() - z.imag() * w.real();
    const double scale = std::max(1.0, std::abs(z) * std::abs(w));
    if (std::abs(det) < 1e-14 * scale) {
        return {true, Complex{0.0, 0.0}, 0.0};
    }
    const double rz = 0.5 * (1.0 + std::norm(z));
    const double rw = 0.5 * (1.0 + std::norm(w));
    const Complex c{(rz * w.imag() - rw * z.imag()) / det, (z.real() * rw - w.real() * rz) / det};
    return {false, c, std::sqrt(std::norm(c) - 1.0)};
}

Complex geodesic_tangent(Complex from, Complex to) {
    const GeodesicCarrier g = geodesic_through(from, to);
    Complex t = g.is_line ? (to - from) : Complex{0.0, 1.0} * (from - g.center);
    if (t.real() * (to - from).real() + t.imag() * (to - from).imag() < 0.0) t = -t;
    return t / std::abs(t);
}

double gaussian_curvature_check(DiskPoint z, double h) {
    if (!(h > 0.0)) {
        throw DomainError("curvature stencil step must be positive");
    }
    if (std::abs(z.value()) + 2.0 * h >= 1.0 - kBoundaryEpsilon) {
        throw DomainError("curvature stencil leaves the disk");
    }
    auto log_lambda = [](Complex w) { return std::log(conformal_factor(w)); };
    const Complex c = z.value();
    const Complex dx{h, 0.0};
    const Complex dy{0.0, h};
    auto second = [&](Complex dir) {
        return (-log_lambda(c + 2.0 * dir) + 16.0 * log_lambda(c + dir) - 30.0 * log_lambda(c) +
                16.0 * log_lambda(c - dir) - log_lambda(c - 2.0 * dir)) /
               (12.0 * h * h);
    };
    const double laplacian = second(dx) + second(dy);
    const double lambda = conformal_factor(c);
    return -laplacian / (lambda * lambda);
}

}  // namespace maggeo
