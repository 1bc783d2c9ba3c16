#pragma once

// Data-parallel kernels. Every kernel takes an Execution tag: Parallel runs
// the OpenMP loop, Serial runs the reference loop the tests compare against.
// Both produce identical results element by element.

#include <functional>
#include <span>
#include <vector>

#include "maggeo/flow.hpp"
#include "maggeo/fuchsian.hpp"

namespace maggeo {

enum class Execution { Serial, Parallel };

/// Final state of each initial state after `total_time`. With a group the
/// integration runs on the quotient, otherwise on the disk.
std::vector<PhaseState> propagate_ensemble(std::span<const PhaseState> initial, double total_time, double dt,
                                           FieldStrength field, const FuchsianGroup* group,
                                           Execution exec = Execution::Parallel);

std::vector<ReduceResult> reduce_batch(std::span<const DiskPoint> points, const FuchsianGroup& group,
                                       Execution exec = Execution::Parallel);

/// Residual of a 2D root problem at a point of the disk: (f(z) - c_f, g(z) - c_g).
using Residual2D = std::function<std::array<double, 2>(DiskPoint)>;

struct NewtonOptions {
    int max_iterations = 60;
    double tolerance = 1e-13;
    /// Finite-difference step of the Jacobian.
    double jacobian_step = 1e-7;
};

struct NewtonOutcome {
    bool converged = false;
    Complex root{};
    double residual = 0.0;
    /// |det J| at the root, for degeneracy checks.
    double jacobian_det = 0.0;
    int iterations = 0;
};

/// Damped Newton iteration from every start.
std::vector<NewtonOutcome> newton_multistart(std::span<const Complex> starts, const Residual2D& residual,
                                             const NewtonOptions& options = {},
                                             Execution exec = Execution::Parallel);

/// Applies `fn` to every index in [0, n) and collects the results in order.
std::vector<double> parallel_evaluate(std::size_t n, const std::function<double(std::size_t)>& fn,
                                      Execution exec = Execution::Parallel);

}  // namespace maggeo
