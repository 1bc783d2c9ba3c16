#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maggeo/chaos.hpp"
#include "maggeo/cli.hpp"
#include "maggeo/errors.hpp"
#include "maggeo/exact_curves.hpp"
#include "maggeo/flow.hpp"
#include "maggeo/integrals.hpp"

namespace maggeo::cli {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Writes to the file at `path`, or to `out` for "-".
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& writer) {
    if (path == "-") {
        writer(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DomainError("cannot open output file " + path);
    writer(file);
}

DiskPoint parse_point(const std::vector<double>& coords) {
    if (coords.size() != 2) throw DomainError("--z0 expects two numbers: re im");
    return DiskPoint{coords[0], coords[1]};
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

ObservableFunction pick_observable(const std::string& name, const FuchsianGroup& group,
                                   std::shared_ptr<PoincareSeries>& series_holder) {
    if (name == "re") return observables::real_part();
    if (name == "im") return observables::imag_part();
    if (name == "dist") return observables::distance_to(DiskPoint{});
    series_holder = std::make_shared<PoincareSeries>(group, DiskPoint{0.3, 0.2});
    return [series = series_holder](DiskPoint z) { return (*series)(z); };
}

struct SimulateArgs {
    double energy = 0.125;
    std::vector<double> z0{0.0, 0.0};
    double direction = 0.0;
    double time = 10.0;
    double dt = 0.0;
    double field = 1.0;
    bool quotient = false;
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "csv";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    require_positive(a.energy, "energy");
    require_positive(a.time, "total time");
    const double dt = a.dt > 0.0 ? a.dt : default_step(a.energy);
    const FieldStrength field{a.field};
    const PhaseState start = state_from_direction(parse_point(a.z0), a.direction, a.energy);
    const FuchsianGroup& group = genus2_octagon_group();
    const Trajectory traj = a.quotient ? integrate_on_quotient(start, a.time, dt, field, group)
                                       : integrate(start, a.time, dt, field);
    std::vector<TrajectoryRecord> rows;
    rows.reserve(traj.size());
    for (const auto& s : traj.samples) {
        const PhaseState& st = s.state;
        rows.push_back({s.t, st.position.re(), st.position.im(), st.momentum.x, st.momentum.y, energy(st),
                        local_geodesic_curvature(st, dt, field)});
    }
    emit(a.out, out, [&](std::ostream& os) {
        if (a.format == "json") {
            write_trajectory_json(os, rows, {a.energy, dt, a.seed, a.field, a.quotient});
        } else {
            write_trajectory_csv(os, rows);
        }
    });
    return kExitOk;
}

int cmd_classify(double e, std::ostream& out) {
    const CurveClass c = classify_by_energy(e);
    out << to_string(c.kind) << ", k_g = " << fmt17(curvature_for_energy(e)) << '\n';
    return kExitOk;
}

struct ConserveArgs {
    double energy = 0.125;
    double time = 0.0;
    double dt = 1e-3;
    std::string f = "series";
    std::vector<double> z0{0.1, 0.05};
    double direction = 0.3;
    bool dt_sweep = false;
};

int cmd_conserve(const ConserveArgs& a, std::ostream& out) {
    require_positive(a.energy, "energy");
    if (a.energy >= kCriticalEnergy) {
        throw OutOfRegimeError("no integral I_f exists at E >= 1/2 (E = " + fmt17(a.energy) + ")");
    }
    require_positive(a.dt, "dt");
    const FuchsianGroup& group = genus2_octagon_group();
    std::shared_ptr<PoincareSeries> holder;
    const ObservableFunction f = pick_observable(a.f, group, holder);
    const PhaseState start = state_from_direction(parse_point(a.z0), a.direction, a.energy);
    const double total = a.time > 0.0 ? a.time : 10.0 * orbit_period(a.energy);
    auto line = [&](const ConservationReport& r) {
        out << fmt_fixed(r.dt, 6) << '\t' << fmt_fixed(r.integral_drift, 6) << '\t' << fmt_fixed(r.center_drift, 6)
            << '\t' << fmt_fixed(r.energy_drift, 6) << '\n';
    };
    out << "E\t" << fmt17(a.energy) << "\nperiod\t" << fmt17(orbit_period(a.energy)) << "\ntotal_time\t"
        << fmt17(total) << "\nobservable\t" << a.f << '\n';
    out << "dt\tI_f_drift\tcenter_drift\tenergy_drift\n";
    if (a.dt_sweep) {
        std::vector<double> drifts;
        for (double dt : {0.08, 0.04, 0.02, 0.01}) {
            const ConservationReport r = conservation_check(start, total, dt, f, &group);
            line(r);
            drifts.push_back(r.center_drift);
        }
        for (std::size_t i = 1; i < drifts.size(); ++i) {
            out << "order\t" << fmt_fixed(std::log2(drifts[i - 1] / drifts[i]), 4) << '\n';
        }
    } else {
        line(conservation_check(start, total, a.dt, f, &group));
    }
    return kExitOk;
}

struct LyapunovArgs {
    double energy = 2.0;
    double time = 400.0;
    std::uint64_t seed = 1;
    double field = 1.0;
    std::string method = "cloning";
    bool cover = false;
};

int cmd_lyapunov(const LyapunovArgs& a, std::ostream& out) {
    require_positive(a.energy, "energy");
    require_positive(a.time, "total time");
    const FuchsianGroup& group = genus2_octagon_group();
    LyapunovOptions opt;
    opt.seed = a.seed;
    opt.field = FieldStrength{a.field};
    if (a.method == "variational") {
        opt.method = TangentMethod::Variational;
    } else if (a.method != "cloning") {
        throw DomainError("--method must be cloning or variational");
    }
    const PhaseState start = seeded_state(a.energy, a.seed, group);
    const LyapunovEstimate est = lyapunov_top(start, a.energy, a.time, a.cover ? nullptr : &group, opt);
    out << "E\t" << fmt17(a.energy) << "\nfield\t" << fmt17(a.field) << "\nmethod\t" << to_string(est.method)
        << "\nlambda\t" << fmt17(est.lambda) << "\nstderr\t" << fmt17(est.std_error) << "\ntotal_time\t"
        << fmt17(est.total_time) << "\nrenorm_interval\t" << fmt17(est.renorm_interval) << '\n';
    return kExitOk;
}

struct CoverageArgs {
    double energy = 0.5;
    double time = 400.0;
    int grid = 50;
    std::uint64_t seed = 1;
    double record = 1.0;
    std::string out = "-";
};

int cmd_coverage(const CoverageArgs& a, std::ostream& out) {
    require_positive(a.energy, "energy");
    require_positive(a.time, "total time");
    if (a.grid < 1) throw DomainError("--grid must be at least 1");
    const FuchsianGroup& group = genus2_octagon_group();
    CoverageOptions opt;
    opt.record_interval = a.record;
    const CoverageReport rep = coverage(seeded_state(a.energy, a.seed, group), a.energy, a.time, a.grid, group, opt);
    emit(a.out, out, [&](std::ostream& os) {
        os << "t,fraction\n";
        for (const auto& s : rep.time_series) os << fmt17(s.t) << ',' << fmt17(s.fraction) << '\n';
    });
    return kExitOk;
}

struct ReportArgs {
    std::string energies = "0.125,0.5,2.0";
    double lyapunov_time = 400.0;
    double coverage_time = 400.0;
    int grid = 50;
    std::uint64_t seed = 1;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    std::vector<double> energies;
    std::stringstream ss(a.energies);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            energies.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw DomainError("--energies must be a comma-separated list of numbers");
        }
    }
    if (energies.empty()) throw DomainError("--energies is empty");
    for (double e : energies) require_positive(e, "energy");
    RegimeSettings settings;
    settings.lyapunov_time = a.lyapunov_time;
    settings.coverage_time = a.coverage_time;
    settings.grid_n = a.grid;
    settings.seed = a.seed;
    const auto rows = regime_report(energies, settings);
    out << "E\tk_g\tclass\tlambda\tstderr\tcoverage\tI_f_drift\n";
    for (const auto& r : rows) {
        out << fmt_fixed(r.energy, 6) << '\t' << fmt_fixed(r.k_g, 6) << '\t' << to_string(r.curve_class.kind) << '\t'
            << fmt_fixed(r.lambda, 6) << '\t' << fmt_fixed(r.lambda_stderr, 6) << '\t'
            << fmt_fixed(r.coverage_fraction, 6) << '\t'
            << (r.integral_drift ? fmt_fixed(*r.integral_drift, 6) : std::string("n/a")) << '\n';
    }
    return kExitOk;
}

struct SvgArgs {
    std::string trajectory;
    int tiling_depth = 0;
    std::string out = "-";
};

int cmd_export_svg(const SvgArgs& a, std::ostream& out) {
    if (a.tiling_depth < 0 || a.tiling_depth > 4) throw DomainError("--tiling-depth must be in [0, 4]");
    const FuchsianGroup& group = genus2_octagon_group();
    SvgScene scene;
    scene.tiles = tiles_up_to_depth(group, a.tiling_depth);
    if (!a.trajectory.empty()) {
        std::ifstream in(a.trajectory);
        if (!in) throw DomainError("cannot open trajectory file " + a.trajectory);
        const bool json = a.trajectory.size() >= 5 && a.trajectory.substr(a.trajectory.size() - 5) == ".json";
        scene.trajectory = json ? read_trajectory_json(in) : read_trajectory_csv(in);
    }
    emit(a.out, out, [&](std::ostream& os) { write_svg(os, scene, group); });
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Magnetic geodesic flows on the hyperbolic disk and the genus-2 surface", "maggeo"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and write samples");
    simulate->add_option("-E,--energy", sim.energy, "energy level E > 0")->required();
    simulate->add_option("--z0", sim.z0, "initial position: re im")->expected(2);
    simulate->add_option("--direction", sim.direction, "initial Euclidean direction angle (radians)");
    simulate->add_option("-T,--time", sim.time, "total time");
    simulate->add_option("--dt", sim.dt, "time step (default depends on speed)");
    simulate->add_option("--field", sim.field, "field strength s (default 1)");
    simulate->add_flag("--quotient", sim.quotient, "reduce onto the genus-2 fundamental domain");
    simulate->add_option("--seed", sim.seed, "recorded in JSON metadata");
    simulate->add_option("-o,--out", sim.out, "output path, - for stdout");
    simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    double classify_energy = 0.0;
    auto* classify = app.add_subcommand("classify", "print the curve class and k_g of an energy level");
    classify->add_option("-E,--energy", classify_energy, "energy level")->required();

    ConserveArgs cons;
    auto* conserve = app.add_subcommand("conserve", "check conservation of I_f and the hyperbolic center");
    conserve->add_option("-E,--energy", cons.energy, "energy level E < 1/2")->required();
    conserve->add_option("-T,--time", cons.time, "total time (default 10 periods)");
    conserve->add_option("--dt", cons.dt, "time step");
    conserve->add_option("--f", cons.f, "observable: re, im, dist, series")
        ->check(CLI::IsMember({"re", "im", "dist", "series"}));
    conserve->add_option("--z0", cons.z0, "initial position: re im")->expected(2);
    conserve->add_option("--direction", cons.direction, "initial direction angle");
    conserve->add_flag("--dt-sweep", cons.dt_sweep, "tabulate drift for dt = 0.08 .. 0.01");

    LyapunovArgs lya;
    auto* lyapunov = app.add_subcommand("lyapunov", "estimate the top Lyapunov exponent on the surface");
    lyapunov->add_option("-E,--energy", lya.energy, "energy level")->required();
    lyapunov->add_option("-T,--time", lya.time, "total time");
    lyapunov->add_option("--seed", lya.seed, "seed for the initial state and tangent vector");
    lyapunov->add_option("--field", lya.field, "field strength s");
    lyapunov->add_option("--method", lya.method, "cloning or variational");
    lyapunov->add_flag("--cover", lya.cover, "integrate on the disk with chart recentering");

    CoverageArgs cov;
    auto* coverage_cmd = app.add_subcommand("coverage", "grid coverage of one projected trajectory");
    coverage_cmd->add_option("-E,--energy", cov.energy, "energy level")->required();
    coverage_cmd->add_option("-T,--time", cov.time, "total time");
    coverage_cmd->add_option("--grid", cov.grid, "grid resolution n (n x n cells)");
    coverage_cmd->add_option("--seed", cov.seed, "seed for the initial state");
    coverage_cmd->add_option("--record", cov.record, "time between rows of the output");
    coverage_cmd->add_option("-o,--out", cov.out, "output path, - for stdout");

    ReportArgs rep;
    auto* report = app.add_subcommand("report", "regime table across energy levels");
    report->add_option("--energies", rep.energies, "comma-separated energies");
    report->add_option("--lyapunov-time", rep.lyapunov_time, "Lyapunov run length");
    report->add_option("--coverage-time", rep.coverage_time, "coverage run length");
    report->add_option("--grid", rep.grid, "coverage grid resolution");
    report->add_option("--seed", rep.seed, "seed");

    SvgArgs svg;
    auto* export_svg = app.add_subcommand("export-svg", "draw the disk, the octagon tiling and a trajectory");
    export_svg->add_option("--trajectory", svg.trajectory, "trajectory file (.csv or .json)");
    export_svg->add_option("--tiling-depth", svg.tiling_depth, "draw tiles up to this word length (0-4)");
    export_svg->add_option("-o,--out", svg.out, "output path, - for stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim, out);
        if (*classify) return cmd_classify(classify_energy, out);
        if (*conserve) return cmd_conserve(cons, out);
        if (*lyapunov) return cmd_lyapunov(lya, out);
        if (*coverage_cmd) return cmd_coverage(cov, out);
        if (*report) return cmd_report(rep, out);
        if (*export_svg) return cmd_export_svg(svg, out);
    } catch (const OutOfRegimeError& e) {
        err << "out of regime: " << e.what() << '\n';
        return kExitOutOfRegime;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace maggeo::cli
