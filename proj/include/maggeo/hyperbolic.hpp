#pragma once

// Poincare disk model of the hyperbolic plane, curvature -1.
//
// The metric is ds^2 = lambda(z)^2 |dz|^2 with lambda(z) = 2 / (1 - |z|^2).
// Orientation-preserving isometries are SU(1,1)/{+-1} acting by
// z -> (a z + b) / (conj(b) z + conj(a)).

#include <complex>

namespace maggeo {

using Complex = std::complex<double>;

/// Points closer than this to |z| = 1 are rejected.
inline constexpr double kBoundaryEpsilon = 1e-12;

/// A point of the open unit disk. Construction validates |z| < 1 - kBoundaryEpsilon.
class DiskPoint {
public:
    DiskPoint() = default;
    DiskPoint(double re, double im);
    explicit DiskPoint(Complex z);

    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }
    Complex value() const { return z_; }
    double norm_sq() const { return std::norm(z_); }

    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

private:
    Complex z_{0.0, 0.0};
};

/// True when z lies strictly inside the disk with the boundary margin.
bool inside_disk(Complex z);

/// SU(1,1) element [[a, b], [conj(b), conj(a)]], identified with its negative.
class MobiusTransform {
public:
    MobiusTransform() = default;  // identity
    /// Rescales (a, b) so that |a|^2 - |b|^2 = 1. Throws DomainError if the
    /// determinant is not positive.
    MobiusTransform(Complex a, Complex b);

    static MobiusTransform identity() { return {}; }
    /// Euclidean rotation z -> e^{i angle} z.
    static MobiusTransform rotation(double angle);
    /// The isometry w -> (w + z) / (conj(z) w + 1): sends 0 to z with
    /// positive real derivative at 0.
    static MobiusTransform translation_to(DiskPoint z);

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return std::conj(b_); }
    Complex d() const { return std::conj(a_); }

    double determinant() const { return std::norm(a_) - std::norm(b_); }
    double trace() const { return 2.0 * a_.real(); }

    /// Applies to an arbitrary complex number (no disk check).
    Complex apply_raw(Complex z) const;
    /// Complex derivative of the map at z.
    Complex derivative(Complex z) const;
    /// Second complex derivative of the map at z.
    Complex second_derivative(Complex z) const;

    /// Max-norm distance of the matrices, minimized over the sign ambiguity.
    double distance_to(const MobiusTransform& other) const;
    bool approx_equal(const MobiusTransform& other, double tol) const;

private:
    Complex a_{1.0, 0.0};
    Complex b_{0.0, 0.0};
};

/// lambda(z) = 2 / (1 - |z|^2).
double conformal_factor(DiskPoint z);
double conformal_factor(Complex z);

struct MetricData {
    double conformal_factor;
    DiskPoint position;
};

MetricData metric_at(DiskPoint z);

/// Hyperbolic distance 2 artanh(|z - w| / |1 - conj(w) z|).
double distance(DiskPoint z, DiskPoint w);

DiskPoint mobius_apply(const MobiusTransform& m, DiskPoint z);
MobiusTransform mobius_compose(const MobiusTransform& outer, const MobiusTransform& inner);
MobiusTransform mobius_inverse(const MobiusTransform& m);

/// Euclidean carrier of the geodesic through two points: a circle orthogonal
/// to the unit circle, or a diameter when both points are collinear with 0.
struct GeodesicCarrier {
    bool is_line;
    Complex center;
    double radius;
};

GeodesicCarrier geodesic_through(Complex z, Complex w);

/// Unit Euclidean tangent at `from` of the geodesic segment towards `to`.
Complex geodesic_tangent(Complex from, Complex to);

/// Finite-difference Gaussian curvature K = -Laplacian(log lambda) / lambda^2,
/// fourth-order central stencil of half-width 2h.
double gaussian_curvature_check(DiskPoint z, double h);

}  // namespace maggeo
