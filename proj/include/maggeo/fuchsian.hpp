#pragma once

// The genus-2 surface M = D / Gamma built from the regular hyperbolic octagon
// with all interior angles pi/4. Opposite sides are paired by
// g_k = R_k T R_k^{-1}, k = 0..3, where R_k rotates by k pi/4 and T is the
// translation along the real axis with a = 1 + sqrt(2), b = sqrt(2 + 2 sqrt(2)).
//
// Letters 0..3 denote g_0..g_3 and letters 4..7 their inverses.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "maggeo/flow.hpp"
#include "maggeo/hyperbolic.hpp"

namespace maggeo {

using Word = std::vector<int>;

inline constexpr int kLetterCount = 8;

/// Letter of the inverse element.
constexpr int inverse_letter(int letter) { return (letter + 4) % kLetterCount; }

struct SidePairing {
    /// Letter whose element maps this side onto `partner`.
    int letter;
    int partner;
};

/// Dirichlet domain of Gamma centered at 0. Side j has its midpoint at angle
/// j pi/4 and runs between vertices j-1 and j (mod 8); vertex j sits at angle
/// (2j + 1) pi/8.
struct FundamentalDomain {
    std::array<DiskPoint, 8> vertices;
    std::array<SidePairing, 8> side_pairings;
    /// Hyperbolic distance from 0 to each side.
    double inradius;
    /// Hyperbolic distance from 0 to each vertex.
    double circumradius;
};

struct ReduceResult {
    DiskPoint representative;
    /// Letters in the order they were applied.
    Word word;
    /// Composite isometry: transform(z) == representative.
    MobiusTransform transform;
};

class FuchsianGroup {
public:
    /// Builds the generators and validates the relator and SU(1,1) residuals.
    FuchsianGroup();

    const std::array<MobiusTransform, 4>& generators() const { return generators_; }
    const MobiusTransform& letter(int index) const;
    const Word& relator_word() const { return relator_; }
    const FundamentalDomain& domain() const { return domain_; }

    /// Product of the letters, leftmost letter outermost.
    MobiusTransform evaluate(const Word& word) const;
    /// Max-norm distance of the relator from +-identity.
    double relator_residual() const;

    /// True when no letter moves z strictly closer to 0 (beyond `tol` in |z|).
    bool in_domain(Complex z, double tol = 1e-14) const;

    /// Every group element gamma with d(0, gamma 0) <= radius, identity first.
    std::vector<MobiusTransform> elements_within(double radius) const;
    /// Elements whose tiles touch the fundamental domain (identity excluded).
    const std::vector<MobiusTransform>& neighbours() const { return neighbours_; }

private:
    std::array<MobiusTransform, 4> generators_;
    std::array<MobiusTransform, 8> letters_;
    Word relator_;
    FundamentalDomain domain_;
    std::vector<MobiusTransform> neighbours_;
};

/// The standard regular-octagon group (shared immutable instance).
const FuchsianGroup& genus2_octagon_group();

/// Greedy descent to the closed fundamental domain; among letters that bring
/// the point closest to 0 the lowest index wins. Throws NumericError if the
/// descent exceeds `max_steps`.
ReduceResult reduce(DiskPoint z, const FuchsianGroup& group, std::size_t max_steps = 10000);

/// Distance on M between the projections of z and w.
double quotient_distance(DiskPoint z, DiskPoint w, const FuchsianGroup& group);

/// Reduces every sample and carries the momentum with the reducing isometry.
Trajectory project_trajectory(const Trajectory& traj, const FuchsianGroup& group);

/// Fixed-step integrator that keeps the state in the fundamental domain,
/// applying the side pairing whenever a step leaves it.
class QuotientIntegrator {
public:
    QuotientIntegrator(const FuchsianGroup& group, double dt, FieldStrength field);

    /// Reduces a state onto the fundamental domain; returns the isometry
    /// used, or nothing when the state was already in the domain.
    std::optional<MobiusTransform> reduce_state(PhaseState& state) const;
    /// One step followed by reduction; returns the side-pairing isometry
    /// applied when the step crossed a seam.
    std::optional<MobiusTransform> advance(PhaseState& state) const;

    double dt() const { return dt_; }
    FieldStrength field() const { return field_; }
    const FuchsianGroup& group() const { return *group_; }

private:
    const FuchsianGroup* group_;
    double dt_;
    FieldStrength field_;
};

/// Trajectory sampled at every step, each sample already on the domain.
Trajectory integrate_on_quotient(const PhaseState& state, double total_time, double dt, FieldStrength field,
                                 const FuchsianGroup& group);

}  // namespace maggeo
