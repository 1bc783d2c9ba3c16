#include "maggeo/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "maggeo/errors.hpp"
#include "maggeo/integrals.hpp"

namespace maggeo {

namespace {

constexpr int kMinimumWindows = 10;

// Norm of a phase-space tangent vector measured after carrying the base point
// to 0 by an isometry: 4 |dx|^2 + |dp|^2 / 4 there. The result does not
// depend on the chart, so window-to-window ratios are chart independent.
double tangent_norm(const PhaseState& base, const PhaseVector& dev) {
    const MobiusTransform to_origin = mobius_inverse(MobiusTransform::translation_to(base.position));
    const PhaseVector t = transform_tangent(to_origin, base, dev);
    return std::sqrt(4.0 * (t[0] * t[0] + t[1] * t[1]) + 0.25 * (t[2] * t[2] + t[3] * t[3]));
}

// Removes the component of dev that changes H to first order.
PhaseVector project_to_energy_shell(const PhaseState& base, PhaseVector dev) {
    const double w = 1.0 - base.position.norm_sq();
    const double p2 = base.momentum.x * base.momentum.x + base.momentum.y * base.momentum.y;
    // H = w^2 |p|^2 / 8
    const PhaseVector grad{-0.5 * w * p2 * base.position.re(), -0.5 * w * p2 * base.position.im(),
                           0.25 * w * w * base.momentum.x, 0.25 * w * w * base.momentum.y};
    double dot = 0.0;
    double gg = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        dot += grad[i] * dev[i];
        gg += grad[i] * grad[i];
    }
    if (gg > 0.0) {
        for (std::size_t i = 0; i < 4; ++i) dev[i] -= dot / gg * grad[i];
    }
    return dev;
}

PhaseVector difference(const PhaseState& a, const PhaseState& b) {
    const PhaseVector va = to_vector(a);
    const PhaseVector vb = to_vector(b);
    return {va[0] - vb[0], va[1] - vb[1], va[2] - vb[2], va[3] - vb[3]};
}

PhaseState displaced(const PhaseState& base, const PhaseVector& dev, double scale) {
    PhaseVector v = to_vector(base);
    for (std::size_t i = 0; i < 4; ++i) v[i] += scale * dev[i];
    return from_vector(v);
}

PhaseVector matvec(const PhaseMatrix& m, const PhaseVector& v) {
    PhaseVector out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
    }
    return out;
}

// RK4 on the state together with the linearized flow.
void variational_step(PhaseState& state, PhaseVector& tangent, double dt, FieldStrength field) {
    using Pair = std::pair<PhaseVector, PhaseVector>;
    auto rhs = [&](const PhaseVector& y, const PhaseVector& d) -> Pair {
        return {vector_field(y, field), matvec(vector_field_jacobian(from_vector(y), field), d)};
    };
    auto shift = [](const PhaseVector& y, double h, const PhaseVector& k) {
        return PhaseVector{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
    };
    const PhaseVector y = to_vector(state);
    const Pair k1 = rhs(y, tangent);
    const Pair k2 = rhs(shift(y, 0.5 * dt, k1.first), shift(tangent, 0.5 * dt, k1.second));
    const Pair k3 = rhs(shift(y, 0.5 * dt, k2.first), shift(tangent, 0.5 * dt, k2.second));
    const Pair k4 = rhs(shift(y, dt, k3.first), shift(tangent, dt, k3.second));
    PhaseVector y_next;
    PhaseVector t_next;
    for (std::size_t i = 0; i < 4; ++i) {
        y_next[i] = y[i] + dt / 6.0 * (k1.first[i] + 2 * k2.first[i] + 2 * k3.first[i] + k4.first[i]);
        t_next[i] = tangent[i] + dt / 6.0 * (k1.second[i] + 2 * k2.second[i] + 2 * k3.second[i] + k4.second[i]);
    }
    state = from_vector(y_next);
    tangent = t_next;
}

PhaseVector random_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    return {normal(rng), normal(rng), normal(rng), normal(rng)};
}

}  // namespace

std::string_view to_string(TangentMethod method) {
    return method == TangentMethod::Cloning ? "cloning" : "variational";
}

double block_bootstrap_stderr(std::span<const double> values, std::uint64_t seed, int resamples) {
    const std::size_t n = values.size();
    if (n < 2 || resamples < 2) return 0.0;
    const std::size_t block = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(n))));
    const std::size_t blocks_needed = (n + block - 1) / block;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - block);
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t b = 0; b < blocks_needed; ++b) {
            const std::size_t start = pick(rng);
            for (std::size_t k = 0; k < block && count < n; ++k, ++count) sum += values[start + k];
        }
        means.push_back(sum / static_cast<double>(count));
    }
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    return std::sqrt(var / static_cast<double>(means.size() - 1));
}

LyapunovEstimate lyapunov_top(const PhaseState& state, double energy_level, double total_time,
                              const FuchsianGroup* group, const LyapunovOptions& options) {
    const double e = energy(state);
    if (!(energy_level > 0.0) || std::abs(e - energy_level) > 1e-9 * std::max(1.0, energy_level)) {
        throw DomainError("state energy does not match the requested energy level");
    }
    if (!(options.renorm_interval > 0.0) || !(total_time > 0.0)) {
        throw DomainError("total time and renormalization interval must be positive");
    }
    const std::size_t windows = static_cast<std::size_t>(std::floor(total_time / options.renorm_interval + 1e-9));
    if (windows < static_cast<std::size_t>(kMinimumWindows)) {
        throw DomainError("insufficient data: fewer than 10 renormalization windows");
    }
    const double dt = options.dt > 0.0 ? options.dt : default_step(energy_level);
    const std::size_t steps_per_window = step_count(options.renorm_interval, dt);
    const double window_dt = options.renorm_interval / static_cast<double>(steps_per_window);

    std::mt19937_64 rng(options.seed);
    PhaseVector tangent = random_direction(rng);

    PhaseState base = state;
    const FuchsianGroup* quotient = group;
    std::optional<QuotientIntegrator> integrator;
    if (quotient != nullptr) {
        integrator.emplace(*quotient, window_dt, options.field);
        integrator->reduce_state(base);
    }
    // On the disk the chart is recentered so the base point sits at 0.
    auto recenter = [&](PhaseState& b, auto&& carry) {
        const MobiusTransform m = mobius_inverse(MobiusTransform::translation_to(b.position));
        carry(m, b);
        b = transform_state(m, b);
    };

    LyapunovEstimate est{0.0, 0.0, 0.0, options.renorm_interval, options.method, {}};
    est.log_stretches.reserve(windows);
    if (options.energy_shell) tangent = project_to_energy_shell(base, tangent);

    if (options.method == TangentMethod::Cloning) {
        const double norm0 = tangent_norm(base, tangent);
        for (auto& t : tangent) t /= norm0;
        PhaseState clone = displaced(base, tangent, options.separation);
        for (std::size_t w = 0; w < windows; ++w) {
            for (std::size_t k = 0; k < steps_per_window; ++k) {
                if (integrator) {
                    const auto jump = integrator->advance(base);
                    clone = step(clone, window_dt, options.field);
                    if (jump) clone = transform_state(*jump, clone);
                } else {
                    base = step(base, window_dt, options.field);
                    clone = step(clone, window_dt, options.field);
                }
            }
            if (!integrator) {
                recenter(base, [&](const MobiusTransform& m, const PhaseState&) { clone = transform_state(m, clone); });
            }
            PhaseVector dev = difference(clone, base);
            const double n = tangent_norm(base, dev);
            est.log_stretches.push_back(std::log(n / options.separation));
            if (options.energy_shell) dev = project_to_energy_shell(base, dev);
            clone = displaced(base, dev, options.separation / tangent_norm(base, dev));
        }
    } else {
        const double norm0 = tangent_norm(base, tangent);
        for (auto& t : tangent) t /= norm0;
        for (std::size_t w = 0; w < windows; ++w) {
            for (std::size_t k = 0; k < steps_per_window; ++k) {
                variational_step(base, tangent, window_dt, options.field);
                if (integrator && !quotient->in_domain(base.position.value())) {
                    const ReduceResult r = reduce(base.position, *quotient);
                    tangent = transform_tangent(r.transform, base, tangent);
                    base = transform_state(r.transform, base);
                }
            }
            if (!integrator) {
                recenter(base, [&](const MobiusTransform& m, const PhaseState& b) {
                    tangent = transform_tangent(m, b, tangent);
                });
            }
            est.log_stretches.push_back(std::log(tangent_norm(base, tangent)));
            if (options.energy_shell) tangent = project_to_energy_shell(base, tangent);
            const double n = tangent_norm(base, tangent);
            for (auto& t : tangent) t /= n;
        }
    }

    est.total_time = static_cast<double>(windows) * options.renorm_interval;
    const double sum = std::accumulate(est.log_stretches.begin(), est.log_stretches.end(), 0.0);
    est.lambda = sum / est.total_time;
    est.std_error = block_bootstrap_stderr(est.log_stretches, options.seed ^ 0x9e3779b97f4a7c15ULL,
                                           options.bootstrap_samples) /
                    options.renorm_interval;
    return est;
}

PhaseState seeded_state(double energy_level, std::uint64_t seed, const FuchsianGroup& group) {
    std::mt19937_64 rng(seed);
    const double extent = std::abs(group.domain().vertices[0].value());
    std::uniform_real_distribution<double> coord(-extent, extent);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (;;) {
        const Complex z{coord(rng), coord(rng)};
        if (inside_disk(z) && group.in_domain(z, 0.0)) {
            return state_from_direction(DiskPoint{z}, angle(rng), energy_level);
        }
    }
}

CoverageReport coverage(const PhaseState& state, double energy_level, double total_time, int grid_n,
                        const FuchsianGroup& group, const CoverageOptions& options) {
    if (grid_n < 1 || !(total_time > 0.0)) {
        throw DomainError("coverage needs grid_n >= 1 and positive total time");
    }
    const double dt = options.dt > 0.0 ? options.dt : default_step(energy_level);
    const double extent = std::abs(group.domain().vertices[0].value());
    const double cell = 2.0 * extent / grid_n;
    const auto n = static_cast<std::size_t>(grid_n);

    std::vector<char> in_domain(n * n, 0);
    std::vector<char> visited(n * n, 0);
    std::size_t domain_cells = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex c{-extent + (i + 0.5) * cell, -extent + (j + 0.5) * cell};
            if (inside_disk(c) && group.in_domain(c, 0.0)) {
                in_domain[i * n + j] = 1;
                ++domain_cells;
            }
        }
    }

    std::size_t hits = 0;
    auto mark = [&](const PhaseState& s) {
        const auto i = static_cast<long>(std::floor((s.position.re() + extent) / cell));
        const auto j = static_cast<long>(std::floor((s.position.im() + extent) / cell));
        if (i < 0 || j < 0 || i >= grid_n || j >= grid_n) return;
        const std::size_t idx = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
        if (in_domain[idx] && !visited[idx]) {
            visited[idx] = 1;
            ++hits;
        }
    };

    CoverageReport report{grid_n, 0.0, domain_cells, {}};
    auto fraction = [&] { return domain_cells == 0 ? 0.0 : static_cast<double>(hits) / domain_cells; };

    const QuotientIntegrator integrator{group, dt, options.field};
    PhaseState current = state;
    integrator.reduce_state(current);
    mark(current);
    report.time_series.push_back({0.0, fraction()});
    const std::size_t steps = step_count(total_time, dt);
    const std::size_t record_every =
        std::max<std::size_t>(1, step_count(std::max(options.record_interval, dt), dt));
    for (std::size_t k = 1; k <= steps; ++k) {
        integrator.advance(current);
        mark(current);
        if (k % record_every == 0 || k == steps) {
            report.time_series.push_back({static_cast<double>(k) * dt, fraction()});
        }
    }
    report.visited_fraction = fraction();
    return report;
}

std::vector<RegimeRow> regime_report(std::span<const double> energies, const RegimeSettings& settings) {
    const FuchsianGroup& group = genus2_octagon_group();
    const PoincareSeries series{group, DiskPoint{0.3, 0.2}};
    const ObservableFunction f = [&series](DiskPoint z) { return series(z); };

    std::vector<RegimeRow> rows(energies.size());
    // One row per task; the per-row work is sequential.
    parallel_evaluate(
        energies.size(),
        [&](std::size_t i) {
            const double e = energies[i];
            RegimeRow row{e, curvature_for_energy(e), classify_by_energy(e), 0.0, 0.0, 0.0, std::nullopt};
            const PhaseState start = seeded_state(e, settings.seed, group);
            LyapunovOptions lopt;
            lopt.seed = settings.seed;
            const LyapunovEstimate lyap = lyapunov_top(start, e, settings.lyapunov_time, &group, lopt);
            row.lambda = lyap.lambda;
            row.lambda_stderr = lyap.std_error;
            row.coverage_fraction = coverage(start, e, settings.coverage_time, settings.grid_n, group).visited_fraction;
            if (e < kCriticalEnergy) {
                const ConservationReport cons = conservation_check(
                    start, settings.conservation_periods * orbit_period(e), settings.conservation_dt, f, &group);
                row.integral_drift = cons.integral_drift;
            }
            rows[i] = row;
            return 0.0;
        },
        settings.exec);
    return rows;
}

}  // namespace maggeo
