#pragma once

// Numerical diagnostics of the three energy regimes: top Lyapunov exponent,
// grid coverage of single trajectories on M, and the summary table.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maggeo/ensemble.hpp"
#include "maggeo/exact_curves.hpp"
#include "maggeo/flow.hpp"
#include "maggeo/fuchsian.hpp"

namespace maggeo {

enum class TangentMethod {
    /// Finite-difference clone at small separation, rescaled each window.
    Cloning,
    /// Linearized flow integrated with the analytic Jacobian.
    Variational,
};

std::string_view to_string(TangentMethod method);

struct LyapunovOptions {
    double renorm_interval = 1.0;
    /// 0 selects default_step(E).
    double dt = 0.0;
    double separation = 1e-8;
    TangentMethod method = TangentMethod::Cloning;
    FieldStrength field = FieldStrength::unit();
    /// Keep the tangent vector inside the energy level (remove its dH component).
    bool energy_shell = true;
    std::uint64_t seed = 1;
    int bootstrap_samples = 400;
};

struct LyapunovEstimate {
    double lambda;
    double std_error;
    double total_time;
    double renorm_interval;
    TangentMethod method;
    /// log stretch factor of every renormalization window
    std::vector<double> log_stretches;
};

/// Top exponent by tangent-vector renormalization. With a group the
/// integration stays on the quotient; without one the chart is recentered on
/// the disk at every renormalization. Throws DomainError when fewer than 10
/// renormalization windows fit in total_time.
LyapunovEstimate lyapunov_top(const PhaseState& state, double energy, double total_time, const FuchsianGroup* group,
                              const LyapunovOptions& options = {});

/// Stderr of the mean of `values` by moving-block bootstrap.
double block_bootstrap_stderr(std::span<const double> values, std::uint64_t seed, int resamples);

struct CoverageSample {
    double t;
    double fraction;
};

struct CoverageReport {
    int grid_n;
    double visited_fraction;
    std::size_t domain_cells;
    std::vector<CoverageSample> time_series;
};

struct CoverageOptions {
    /// 0 selects default_step(E).
    double dt = 0.0;
    double record_interval = 1.0;
    FieldStrength field = FieldStrength::unit();
};

/// Fraction of grid cells (grid_n x grid_n over the domain's bounding square,
/// cells counted when their center lies in the domain) visited by the
/// projected trajectory.
CoverageReport coverage(const PhaseState& state, double energy, double total_time, int grid_n,
                        const FuchsianGroup& group, const CoverageOptions& options = {});

/// Deterministic pseudo-random state with energy E: position uniform in the
/// domain's bounding square (rejected outside the domain), direction uniform.
PhaseState seeded_state(double energy, std::uint64_t seed, const FuchsianGroup& group);

struct RegimeSettings {
    double lyapunov_time = 400.0;
    double coverage_time = 400.0;
    int grid_n = 50;
    double conservation_periods = 10.0;
    double conservation_dt = 1e-3;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

struct RegimeRow {
    double energy;
    double k_g;
    CurveClass curve_class;
    double lambda;
    double lambda_stderr;
    double coverage_fraction;
    /// I_f drift over the conservation run; empty above the critical energy.
    std::optional<double> integral_drift;
};

std::vector<RegimeRow> regime_report(std::span<const double> energies, const RegimeSettings& settings = {});

}  // namespace maggeo
