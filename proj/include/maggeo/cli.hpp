#pragma once

// Command-line front end. run_cli is the whole program minus main() so the
// commands can be exercised in-process.
//
// Exit codes: 0 success, 2 usage error, 3 out-of-regime, 4 numeric failure.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maggeo/fuchsian.hpp"

namespace maggeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitOutOfRegime = 3;
inline constexpr int kExitNumeric = 4;

inline constexpr int kSchemaVersion = 1;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One CSV/JSON trajectory row.
struct TrajectoryRecord {
    double t;
    double re;
    double im;
    double p_x;
    double p_y;
    double energy;
    double k_g;
};

struct RunMetadata {
    double energy;
    double dt;
    std::uint64_t seed;
    double field;
    bool quotient;
};

/// Header: t,re,im,p_x,p_y,energy,k_g. Values use 17 significant digits.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& rows);
void write_trajectory_json(std::ostream& os, const std::vector<TrajectoryRecord>& rows, const RunMetadata& meta);
/// Throws DomainError on a malformed file.
std::vector<TrajectoryRecord> read_trajectory_csv(std::istream& is);
std::vector<TrajectoryRecord> read_trajectory_json(std::istream& is);

struct SvgScene {
    /// Tiles gamma F drawn in addition to the fundamental domain.
    std::vector<MobiusTransform> tiles;
    std::vector<TrajectoryRecord> trajectory;
    bool draw_domain = true;
};

/// SVG 1.1, unit disk mapped onto a 1000 x 1000 viewBox with y flipped.
void write_svg(std::ostream& os, const SvgScene& scene, const FuchsianGroup& group);

/// Group elements reachable by words of length <= depth (identity first).
std::vector<MobiusTransform> tiles_up_to_depth(const FuchsianGroup& group, int depth);

}  // namespace maggeo::cli
