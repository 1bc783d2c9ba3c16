#include "maggeo/fuchsian.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <utility>

#include "maggeo/errors.hpp"

namespace maggeo {

namespace {

constexpr double kRelatorTolerance = 1e-10;
constexpr double kDeterminantTolerance = 1e-12;

// Spatial hash for orbit points gamma(0); neighbouring cells are probed so
// that rounding at a cell edge cannot duplicate a point.
class OrbitPointSet {
public:
    bool insert(Complex z) {
        const auto key = cell(z);
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find({key.first + dx, key.second + dy});
                if (it == cells_.end()) continue;
                for (const Complex& w : it->second) {
                    if (std::abs(w - z) < 1e-9) return false;
                }
            }
        }
        cells_[key].push_back(z);
        return true;
    }

private:
    static std::pair<long long, long long> cell(Complex z) {
        return {std::llround(z.real() * 1e7), std::llround(z.imag() * 1e7)};
    }
    std::map<std::pair<long long, long long>, std::vector<Complex>> cells_;
};

double distance_from_origin(Complex z) { return 2.0 * std::atanh(std::abs(z)); }

}  // namespace

FuchsianGroup::FuchsianGroup() {
    const double a = 1.0 + std::numbers::sqrt2;
    const double b = std::sqrt(2.0 + 2.0 * std::numbers::sqrt2);
    const MobiusTransform translation{Complex{a, 0.0}, Complex{b, 0.0}};
    for (int k = 0; k < 4; ++k) {
        const MobiusTransform rot = MobiusTransform::rotation(k * std::numbers::pi / 4.0);
        generators_[k] = mobius_compose(mobius_compose(rot, translation), mobius_inverse(rot));
        letters_[k] = generators_[k];
        letters_[k + 4] = mobius_inverse(generators_[k]);
    }
    relator_ = {0, 5, 2, 7, 4, 1, 6, 3};

    for (const auto& g : letters_) {
        if (std::abs(g.determinant() - 1.0) > kDeterminantTolerance || std::abs(g.trace()) <= 2.0) {
            throw NumericError("octagon generator failed the SU(1,1)/hyperbolicity check");
        }
    }
    if (relator_residual() > kRelatorTolerance) {
        throw NumericError("octagon relator does not evaluate to the identity");
    }

    // cosh(inradius) = 1 + sqrt 2, cosh(circumradius) = (1 + sqrt 2)^2.
    domain_.inradius = std::acosh(a);
    domain_.circumradius = std::acosh(a * a);
    const double vertex_radius = std::tanh(0.5 * domain_.circumradius);
    for (int j = 0; j < 8; ++j) {
        domain_.vertices[j] = DiskPoint{std::polar(vertex_radius, (2 * j + 1) * std::numbers::pi / 8.0)};
    }
    for (int side = 0; side < 8; ++side) {
        // g_k maps side k + 4 onto side k; g_k^{-1} maps side k onto side k + 4.
        if (side < 4) {
            domain_.side_pairings[side] = {side + 4, side + 4};
        } else {
            domain_.side_pairings[side] = {side - 4, side - 4};
        }
    }
    neighbours_ = elements_within(2.0 * domain_.circumradius + 1e-9);
    neighbours_.erase(neighbours_.begin());
}

const MobiusTransform& FuchsianGroup::letter(int index) const {
    if (index < 0 || index >= kLetterCount) {
        throw DomainError("letter index out of range");
    }
    return letters_[index];
}

MobiusTransform FuchsianGroup::evaluate(const Word& word) const {
    MobiusTransform out;
    for (int l : word) {
        out = mobius_compose(out, letter(l));
    }
    return out;
}

double FuchsianGroup::relator_residual() const {
    return evaluate(relator_).distance_to(MobiusTransform::identity());
}

bool FuchsianGroup::in_domain(Complex z, double tol) const {
    const double r = std::abs(z);
    for (const auto& l : letters_) {
        if (std::abs(l.apply_raw(z)) < r - tol) return false;
    }
    return true;
}

std::vector<MobiusTransform> FuchsianGroup::elements_within(double radius) const {
    // Breadth-first search over tiles. Any tile whose center is within `radius`
    // is reached through tiles meeting the geodesic from 0 to it, all of
    // which have centers within radius + circumradius.
    const double expand_limit = radius + domain_.circumradius + 1e-9;
    std::vector<MobiusTransform> found{MobiusTransform::identity()};
    OrbitPointSet seen;
    seen.insert(Complex{0.0, 0.0});
    std::deque<MobiusTransform> queue{MobiusTransform::identity()};
    while (!queue.empty()) {
        const MobiusTransform g = queue.front();
        queue.pop_front();
        for (const auto& l : letters_) {
            const MobiusTransform h = mobius_compose(g, l);
            const Complex center = h.apply_raw(Complex{0.0, 0.0});
            const double d = distance_from_origin(center);
            if (d > expand_limit || !seen.insert(center)) continue;
            queue.push_back(h);
            if (d <= radius) found.push_back(h);
        }
    }
    return found;
}

const FuchsianGroup& genus2_octagon_group() {
    static const FuchsianGroup group;
    return group;
}

ReduceResult reduce(DiskPoint z, const FuchsianGroup& group, std::size_t max_steps) {
    ReduceResult out{z, {}, MobiusTransform::identity()};
    Complex current = z.value();
    for (std::size_t steps = 0;; ++steps) {
        double best_abs = std::abs(current);
        const double threshold = best_abs - 1e-14;
        int best = -1;
        Complex best_point;
        for (int l = 0; l < kLetterCount; ++l) {
            const Complex cand = group.letter(l).apply_raw(current);
            const double r = std::abs(cand);
            if (r < threshold && (best < 0 || r < best_abs)) {
                best = l;
                best_abs = r;
                best_point = cand;
            }
        }
        if (best < 0) break;
        if (steps >= max_steps) {
            throw NumericError("fundamental-domain reduction did not terminate");
        }
        current = best_point;
        out.word.push_back(best);
        out.transform = mobius_compose(group.letter(best), out.transform);
    }
    out.representative = DiskPoint{current};
    return out;
}

double quotient_distance(DiskPoint z, DiskPoint w, const FuchsianGroup& group) {
    const DiskPoint zr = reduce(z, group).representative;
    const DiskPoint wr = reduce(w, group).representative;
    double best = distance(zr, wr);
    for (const auto& g : group.neighbours()) {
        best = std::min(best, distance(zr, DiskPoint{g.apply_raw(wr.value())}));
    }
    return best;
}

Trajectory project_trajectory(const Trajectory& traj, const FuchsianGroup& group) {
    Trajectory out;
    out.step = traj.step;
    out.samples.reserve(traj.size());
    for (const auto& sample : traj.samples) {
        const ReduceResult r = reduce(sample.state.position, group);
        out.samples.push_back({sample.t, transform_state(r.transform, sample.state)});
    }
    return out;
}

QuotientIntegrator::QuotientIntegrator(const FuchsianGroup& group, double dt, FieldStrength field)
    : group_(&group), dt_(dt), field_(field) {
    if (!(dt > 0.0)) {
        throw DomainError("time step must be positive");
    }
}

std::optional<MobiusTransform> QuotientIntegrator::reduce_state(PhaseState& state) const {
    if (group_->in_domain(state.position.value())) {
        return std::nullopt;
    }
    const ReduceResult r = reduce(state.position, *group_);
    state = transform_state(r.transform, state);
    return r.transform;
}

std::optional<MobiusTransform> QuotientIntegrator::advance(PhaseState& state) const {
    state = step(state, dt_, field_);
    return reduce_state(state);
}

Trajectory integrate_on_quotient(const PhaseState& state, double total_time, double dt, FieldStrength field,
                                 const FuchsianGroup& group) {
    if (!(dt > 0.0) || !(total_time > 0.0) || dt > total_time * (1.0 + 1e-12)) {
        throw DomainError("integrate requires 0 < dt <= total_time");
    }
    const QuotientIntegrator integrator{group, dt, field};
    const std::size_t n = step_count(total_time, dt);
    Trajectory traj;
    traj.step = dt;
    traj.samples.reserve(n + 1);
    PhaseState current = state;
    integrator.reduce_state(current);
    traj.samples.push_back({0.0, current});
    for (std::size_t k = 1; k <= n; ++k) {
        integrator.advance(current);
        traj.samples.push_back({static_cast<double>(k) * dt, current});
    }
    return traj;
}

}  // namespace maggeo
