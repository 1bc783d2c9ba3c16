#include "maggeo/ensemble.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>

namespace maggeo {

namespace {

// Runs body(i) for i in [0, n); the first exception thrown by any iteration
// is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

PhaseState propagate_one(const PhaseState& start, double total_time, double dt, FieldStrength field,
                         const FuchsianGroup* group) {
    const std::size_t n = step_count(total_time, dt);
    PhaseState state = start;
    if (group != nullptr) {
        const QuotientIntegrator integrator{*group, dt, field};
        integrator.reduce_state(state);
        for (std::size_t k = 0; k < n; ++k) integrator.advance(state);
    } else {
        for (std::size_t k = 0; k < n; ++k) state = step(state, dt, field);
    }
    return state;
}

NewtonOutcome newton_one(Complex start, const Residual2D& residual, const NewtonOptions& options) {
    NewtonOutcome out;
    Complex z = start;
    auto eval = [&](Complex w) { return residual(DiskPoint{w}); };
    auto norm = [](const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); };
    std::array<double, 2> r;
    try {
        r = eval(z);
    } catch (const std::exception&) {
        return out;
    }
    const double h = options.jacobian_step;
    for (int it = 0; it < options.max_iterations; ++it) {
        out.iterations = it;
        if (norm(r) < options.tolerance) break;
        std::array<double, 4> jac{};
        try {
            const auto rxp = eval(z + Complex{h, 0.0});
            const auto rxm = eval(z - Complex{h, 0.0});
            const auto ryp = eval(z + Complex{0.0, h});
            const auto rym = eval(z - Complex{0.0, h});
            jac = {(rxp[0] - rxm[0]) / (2 * h), (ryp[0] - rym[0]) / (2 * h), (rxp[1] - rxm[1]) / (2 * h),
                   (ryp[1] - rym[1]) / (2 * h)};
        } catch (const std::exception&) {
            return out;
        }
        // Levenberg-Marquardt with a tiny regularizer: the plain Newton step
        // when J is well conditioned, a least-squares step when it is singular
        // (so degenerate levels still converge and can be reported as such).
        const double jtj_xx = jac[0] * jac[0] + jac[2] * jac[2];
        const double jtj_xy = jac[0] * jac[1] + jac[2] * jac[3];
        const double jtj_yy = jac[1] * jac[1] + jac[3] * jac[3];
        const double mu = 1e-12 * (jtj_xx + jtj_yy);
        const double gx = jac[0] * r[0] + jac[2] * r[1];
        const double gy = jac[1] * r[0] + jac[3] * r[1];
        const double det = (jtj_xx + mu) * (jtj_yy + mu) - jtj_xy * jtj_xy;
        if (!(det > 1e-300)) return out;
        const Complex delta{((jtj_yy + mu) * gx - jtj_xy * gy) / det, (-jtj_xy * gx + (jtj_xx + mu) * gy) / det};
        double damping = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving, damping *= 0.5) {
            const Complex trial = z - damping * delta;
            if (!inside_disk(trial)) continue;
            std::array<double, 2> r_trial;
            try {
                r_trial = eval(trial);
            } catch (const std::exception&) {
                continue;
            }
            if (norm(r_trial) < norm(r) || halving == 29) {
                z = trial;
                r = r_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) return out;
    }
    out.root = z;
    out.residual = norm(r);
    out.converged = out.residual < options.tolerance;
    if (out.converged) {
        try {
            const auto rxp = eval(z + Complex{h, 0.0});
            const auto rxm = eval(z - Complex{h, 0.0});
            const auto ryp = eval(z + Complex{0.0, h});
            const auto rym = eval(z - Complex{0.0, h});
            out.jacobian_det = ((rxp[0] - rxm[0]) * (ryp[1] - rym[1]) - (ryp[0] - rym[0]) * (rxp[1] - rxm[1])) /
                               (4 * h * h);
        } catch (const std::exception&) {
            out.jacobian_det = 0.0;
        }
    }
    return out;
}

}  // namespace

std::vector<PhaseState> propagate_ensemble(std::span<const PhaseState> initial, double total_time, double dt,
                                           FieldStrength field, const FuchsianGroup* group, Execution exec) {
    std::vector<PhaseState> out(initial.size());
    for_each_index(initial.size(), exec,
                   [&](std::size_t i) { out[i] = propagate_one(initial[i], total_time, dt, field, group); });
    return out;
}

std::vector<ReduceResult> reduce_batch(std::span<const DiskPoint> points, const FuchsianGroup& group,
                                       Execution exec) {
    std::vector<ReduceResult> out(points.size(), ReduceResult{DiskPoint{}, {}, MobiusTransform::identity()});
    for_each_index(points.size(), exec, [&](std::size_t i) { out[i] = reduce(points[i], group); });
    return out;
}

std::vector<NewtonOutcome> newton_multistart(std::span<const Complex> starts, const Residual2D& residual,
                                             const NewtonOptions& options, Execution exec) {
    std::vector<NewtonOutcome> out(starts.size());
    for_each_index(starts.size(), exec, [&](std::size_t i) { out[i] = newton_one(starts[i], residual, options); });
    return out;
}

std::vector<double> parallel_evaluate(std::size_t n, const std::function<double(std::size_t)>& fn,
                                      Execution exec) {
    std::vector<double> out(n);
    for_each_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace maggeo
