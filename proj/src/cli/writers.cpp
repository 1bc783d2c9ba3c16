#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "maggeo/cli.hpp"
#include "maggeo/errors.hpp"
#include "maggeo/exact_curves.hpp"

namespace maggeo::cli {

namespace {

constexpr const char* kCsvHeader = "t,re,im,p_x,p_y,energy,k_g";
constexpr double kHalfView = 500.0;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_svg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

double svg_x(Complex z) { return kHalfView + kHalfView * z.real(); }
double svg_y(Complex z) { return kHalfView - kHalfView * z.imag(); }

std::string svg_point(Complex z) { return fmt_svg(svg_x(z)) + " " + fmt_svg(svg_y(z)); }

// SVG path command for the geodesic segment from a to b (pen already at a).
std::string geodesic_segment(Complex a, Complex b) {
    const GeodesicCarrier g = geodesic_through(a, b);
    if (g.is_line) return "L " + svg_point(b);
    // Screen coordinates flip y, which flips the orientation of the turn.
    const Complex pa = a - g.center;
    const Complex pb = b - g.center;
    const double cross = pa.real() * pb.imag() - pa.imag() * pb.real();
    const int sweep = cross > 0.0 ? 1 : 0;
    const std::string r = fmt_svg(kHalfView * g.radius);
    return "A " + r + " " + r + " 0 0 " + std::to_string(sweep) + " " + svg_point(b);
}

std::string polygon_path(const std::array<DiskPoint, 8>& vertices, const MobiusTransform& m) {
    std::array<Complex, 8> v;
    for (std::size_t i = 0; i < 8; ++i) v[i] = m.apply_raw(vertices[i].value());
    std::string d = "M " + svg_point(v[0]);
    for (std::size_t i = 1; i <= 8; ++i) d += " " + geodesic_segment(v[i - 1], v[i % 8]);
    return d + " Z";
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << fmt17(r.t) << ',' << fmt17(r.re) << ',' << fmt17(r.im) << ',' << fmt17(r.p_x) << ','
           << fmt17(r.p_y) << ',' << fmt17(r.energy) << ',' << fmt17(r.k_g) << '\n';
    }
}

void write_trajectory_json(std::ostream& os, const std::vector<TrajectoryRecord>& rows, const RunMetadata& meta) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["E"] = meta.energy;
    doc["dt"] = meta.dt;
    doc["seed"] = meta.seed;
    doc["field"] = meta.field;
    doc["quotient"] = meta.quotient;
    auto& samples = doc["samples"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        samples.push_back({{"t", r.t},
                           {"re", r.re},
                           {"im", r.im},
                           {"p_x", r.p_x},
                           {"p_y", r.p_y},
                           {"energy", r.energy},
                           {"k_g", r.k_g}});
    }
    os << doc.dump(1) << '\n';
}

std::vector<TrajectoryRecord> read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw DomainError("trajectory CSV must start with the header " + std::string(kCsvHeader));
    }
    std::vector<TrajectoryRecord> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::array<double, 7> v{};
        std::string cell;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!std::getline(fields, cell, ',')) throw DomainError("trajectory CSV row has too few columns");
            try {
                v[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw DomainError("trajectory CSV cell is not a number: " + cell);
            }
        }
        rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    }
    return rows;
}

std::vector<TrajectoryRecord> read_trajectory_json(std::istream& is) {
    const auto doc = nlohmann::json::parse(is, nullptr, false);
    if (doc.is_discarded() || !doc.contains("samples") || doc.value("schema_version", 0) != kSchemaVersion) {
        throw DomainError("not a trajectory JSON document with schema_version 1");
    }
    std::vector<TrajectoryRecord> rows;
    for (const auto& s : doc["samples"]) {
        rows.push_back({s.at("t").get<double>(), s.at("re").get<double>(), s.at("im").get<double>(),
                        s.at("p_x").get<double>(), s.at("p_y").get<double>(), s.at("energy").get<double>(),
                        s.at("k_g").get<double>()});
    }
    return rows;
}

std::vector<MobiusTransform> tiles_up_to_depth(const FuchsianGroup& group, int depth) {
    std::vector<MobiusTransform> tiles{MobiusTransform::identity()};
    std::vector<Complex> centers{Complex{0.0, 0.0}};
    std::size_t frontier_begin = 0;
    for (int level = 0; level < depth; ++level) {
        const std::size_t frontier_end = tiles.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (int l = 0; l < kLetterCount; ++l) {
                const MobiusTransform g = mobius_compose(tiles[i], group.letter(l));
                const Complex c = g.apply_raw(Complex{0.0, 0.0});
                bool seen = false;
                for (const Complex& w : centers) {
                    if (std::abs(w - c) < 1e-9) {
                        seen = true;
                        break;
                    }
                }
                if (!seen) {
                    tiles.push_back(g);
                    centers.push_back(c);
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return tiles;
}

void write_svg(std::ostream& os, const SvgScene& scene, const FuchsianGroup& group) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
          "viewBox=\"0 0 1000 1000\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n"
       << "<circle id=\"boundary\" cx=\"500.0000\" cy=\"500.0000\" r=\"500.0000\" fill=\"none\" "
          "stroke=\"black\" stroke-width=\"2\"/>\n";

    const auto& vertices = group.domain().vertices;
    for (std::size_t i = 1; i < scene.tiles.size(); ++i) {
        os << "<path class=\"tile\" d=\"" << polygon_path(vertices, scene.tiles[i])
           << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\"/>\n";
    }
    if (scene.draw_domain) {
        os << "<path id=\"fundamental-domain\" d=\"" << polygon_path(vertices, MobiusTransform::identity())
           << "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n";
    }

    const auto& traj = scene.trajectory;
    if (traj.empty()) {
        os << "</svg>\n";
        return;
    }
    const TrajectoryRecord& first = traj.front();
    const PhaseState start{DiskPoint{first.re, first.im}, Momentum{first.p_x, first.p_y}};
    const double e = first.energy;
    // A closed orbit of the unit field is drawn as its exact circle.
    bool closed_orbit = e > 0.0 && e < kCriticalEnergy;
    for (const auto& r : traj) {
        closed_orbit = closed_orbit && std::abs(r.k_g - curvature_for_energy(e)) < 1e-3;
    }
    if (closed_orbit) {
        const EuclideanCircle circle = euclidean_representation(start, e);
        os << "<circle class=\"orbit\" cx=\"" << fmt_svg(svg_x(circle.center)) << "\" cy=\""
           << fmt_svg(svg_y(circle.center)) << "\" r=\"" << fmt_svg(kHalfView * circle.radius)
           << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
    } else {
        // Break the polyline at seams of the quotient.
        std::string points;
        Complex prev{first.re, first.im};
        auto flush = [&] {
            if (!points.empty()) {
                os << "<polyline class=\"trajectory\" points=\"" << points
                   << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\"/>\n";
            }
            points.clear();
        };
        for (const auto& r : traj) {
            const Complex z{r.re, r.im};
            if (std::abs(z - prev) > 0.05) flush();
            if (!points.empty()) points += ' ';
            points += fmt_svg(svg_x(z)) + "," + fmt_svg(svg_y(z));
            prev = z;
        }
        flush();
    }
    os << "</svg>\n";
}

}  // namespace maggeo::cli
