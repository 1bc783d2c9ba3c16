#include "maggeo/flow.hpp"

#include <cmath>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace {

void check_escape(double x, double y) {
    if (!inside_disk(Complex{x, y})) {
        throw NumericError("trajectory escaped to the boundary shell of the disk");
    }
}

PhaseVector axpy(const PhaseVector& y, double h, const PhaseVector& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

double cross(Complex u, Complex w) { return u.real() * w.imag() - u.imag() * w.real(); }

}  // namespace

FieldStrength::FieldStrength(double s) : s_(s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw DomainError("field strength must be finite and non-negative");
    }
}

PhaseVector to_vector(const PhaseState& state) {
    return {state.position.re(), state.position.im(), state.momentum.x, state.momentum.y};
}

PhaseState from_vector(const PhaseVector& v) {
    check_escape(v[0], v[1]);
    return {DiskPoint{v[0], v[1]}, Momentum{v[2], v[3]}};
}

double energy(const PhaseState& state) {
    const double mu = 1.0 - state.position.norm_sq();
    const double p2 = state.momentum.x * state.momentum.x + state.momentum.y * state.momentum.y;
    return 0.125 * mu * mu * p2;
}

Complex velocity(const PhaseState& state) {
    const double lambda = conformal_factor(state.position);
    return state.momentum.as_complex() / (lambda * lambda);
}

double hyperbolic_speed(const PhaseState& state) { return std::sqrt(2.0 * energy(state)); }

PhaseState state_from_velocity(DiskPoint z, Complex v) {
    const double lambda = conformal_factor(z);
    return {z, Momentum::from_complex(lambda * lambda * v)};
}

PhaseState state_from_direction(DiskPoint z, double angle, double energy) {
    if (!(energy >= 0.0) || !std::isfinite(energy)) {
        throw DomainError("energy must be finite and non-negative");
    }
    const double speed = std::sqrt(2.0 * energy) / conformal_factor(z);
    return state_from_velocity(z, std::polar(speed, angle));
}

PhaseVector vector_field(const PhaseVector& y, FieldStrength field) {
    check_escape(y[0], y[1]);
    const double w = 1.0 - (y[0] * y[0] + y[1] * y[1]);
    const double mu = 0.25 * w * w;  // lambda^{-2}
    const double p2 = y[2] * y[2] + y[3] * y[3];
    const double q = 0.5 * w * p2;  // -dH/dx = q x
    const double s = field.s();
    return {mu * y[2], mu * y[3], q * y[0] + s * y[3], q * y[1] - s * y[2]};
}

PhaseVector vector_field(const PhaseState& state, FieldStrength field) {
    return vector_field(to_vector(state), field);
}

PhaseMatrix vector_field_jacobian(const PhaseState& state, FieldStrength field) {
    const double x = state.position.re();
    const double y = state.position.im();
    const double px = state.momentum.x;
    const double py = state.momentum.y;
    const double w = 1.0 - (x * x + y * y);
    const double mu = 0.25 * w * w;
    const double p2 = px * px + py * py;
    const double q = 0.5 * w * p2;
    const double s = field.s();
    const std::array<double, 2> pos{x, y};
    const std::array<double, 2> mom{px, py};

    PhaseMatrix jac{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            // xdot_i = mu p_i, d mu / dx_j = -w x_j
            jac[i][j] = -w * mom[i] * pos[j];
            jac[i][2 + j] = (i == j) ? mu : 0.0;
            // pdot_i = q x_i + magnetic, dq/dx_j = -p2 x_j, dq/dp_j = w p_j
            jac[2 + i][j] = ((i == j) ? q : 0.0) - p2 * pos[i] * pos[j];
            jac[2 + i][2 + j] = w * pos[i] * mom[j];
        }
    }
    jac[2][3] += s;
    jac[3][2] -= s;
    return jac;
}

PhaseState step(const PhaseState& state, double dt, FieldStrength field, StepOptions options) {
    const PhaseVector y = to_vector(state);
    const PhaseVector k1 = vector_field(y, field);
    const PhaseVector k2 = vector_field(axpy(y, 0.5 * dt, k1), field);
    const PhaseVector k3 = vector_field(axpy(y, 0.5 * dt, k2), field);
    const PhaseVector k4 = vector_field(axpy(y, dt, k3), field);
    PhaseVector next;
    for (std::size_t i = 0; i < 4; ++i) {
        next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    PhaseState out = from_vector(next);
    if (options.project_energy) {
        const double before = options.target_energy > 0.0 ? options.target_energy : energy(state);
        const double after = energy(out);
        if (after > 0.0) {
            const double scale = std::sqrt(before / after);
            out.momentum.x *= scale;
            out.momentum.y *= scale;
        }
    }
    return out;
}

std::size_t step_count(double total_time, double dt) {
    const double ratio = total_time / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

Trajectory integrate(const PhaseState& state, double total_time, double dt, FieldStrength field,
                     StepOptions options) {
    if (!(dt > 0.0) || !(total_time > 0.0) || dt > total_time * (1.0 + 1e-12)) {
        throw DomainError("integrate requires 0 < dt <= total_time");
    }
    const std::size_t n = step_count(total_time, dt);
    Trajectory traj;
    traj.step = dt;
    traj.samples.reserve(n + 1);
    traj.samples.push_back({0.0, state});
    PhaseState current = state;
    // Anchor the projection to the starting energy so rounding cannot drift.
    if (options.project_energy && options.target_energy <= 0.0) options.target_energy = energy(state);
    for (std::size_t k = 1; k <= n; ++k) {
        current = step(current, dt, field, options);
        traj.samples.push_back({static_cast<double>(k) * dt, current});
    }
    return traj;
}

double default_step(double energy) {
    const double speed = std::sqrt(2.0 * energy);
    double dt = 1e-3;
    for (double limit = 2.0; speed > limit; limit *= 2.0) {
        dt *= 0.5;
    }
    return dt;
}

double signed_geodesic_curvature(const Trajectory& traj, std::size_t index) {
    const std::size_t n = traj.size();
    if (index < 1 || index + 2 > n) {
        throw DomainError("geodesic curvature needs a neighbour on each side");
    }
    const double dt = traj.step;
    auto vel = [&](std::size_t i) { return velocity(traj.state(i)); };
    Complex acc;
    if (index >= 2 && index + 3 <= n) {
        acc = (vel(index - 2) - 8.0 * vel(index - 1) + 8.0 * vel(index + 1) - vel(index + 2)) / (12.0 * dt);
    } else {
        acc = (vel(index + 1) - vel(index - 1)) / (2.0 * dt);
    }
    const PhaseState& s = traj.state(index);
    const Complex x = s.position.value();
    const Complex v = vel(index);
    const double lambda = conformal_factor(s.position);
    const double speed2 = std::norm(v);
    if (!(speed2 > 0.0)) {
        throw NumericError("geodesic curvature undefined at zero speed");
    }
    // Christoffel term for g = e^{2 phi} delta with grad phi = lambda x.
    const Complex grad_phi = lambda * x;
    const double v_dot_grad = v.real() * grad_phi.real() + v.imag() * grad_phi.imag();
    const Complex covariant = acc + 2.0 * v_dot_grad * v - speed2 * grad_phi;
    const double ccw = cross(v, covariant) / (lambda * speed2 * std::sqrt(speed2));
    return -ccw;
}

double geodesic_curvature(const Trajectory& traj, std::size_t index) {
    return std::abs(signed_geodesic_curvature(traj, index));
}

double local_geodesic_curvature(const PhaseState& state, double dt, FieldStrength field) {
    Trajectory stencil;
    stencil.step = dt;
    const PhaseState back1 = step(state, -dt, field);
    const PhaseState back2 = step(back1, -dt, field);
    const PhaseState fwd1 = step(state, dt, field);
    const PhaseState fwd2 = step(fwd1, dt, field);
    stencil.samples = {{-2.0 * dt, back2}, {-dt, back1}, {0.0, state}, {dt, fwd1}, {2.0 * dt, fwd2}};
    return geodesic_curvature(stencil, 2);
}

PhaseState transform_state(const MobiusTransform& m, const PhaseState& state) {
    const Complex z = state.position.value();
    const Complex dm = m.derivative(z);
    const Complex p = state.momentum.as_complex() / std::conj(dm);
    return {DiskPoint{m.apply_raw(z)}, Momentum::from_complex(p)};
}

PhaseVector transform_tangent(const MobiusTransform& m, const PhaseState& state, const PhaseVector& tangent) {
    const Complex z = state.position.value();
    const Complex p = state.momentum.as_complex();
    const Complex dz{tangent[0], tangent[1]};
    const Complex dp{tangent[2], tangent[3]};
    const Complex d1 = m.derivative(z);
    const Complex d2 = m.second_derivative(z);
    const Complex cd1 = std::conj(d1);
    const Complex dz_out = d1 * dz;
    const Complex dp_out = dp / cd1 - p * std::conj(d2 * dz) / (cd1 * cd1);
    return {dz_out.real(), dz_out.imag(), dp_out.real(), dp_out.imag()};
}

}  // namespace maggeo
