#include "liegyro/closedform.hpp"
#include "liegyro/lieflow.hpp"
#include "liegyro/polyalg.hpp"
#include "liegyro/refintegrator.hpp"
#include "liegyro/rigidcore.hpp"
#include "liegyro/trajectory_io.hpp"
#include "liegyro/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace liegyro;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitNumerical = 3;

struct RunSpec {
    std::string method = "closed";  // closed | lie | rk4 | all
    std::array<double, 3> inertia{1.0, 1.0, 2.0};
    bool rigid_mode = true;  // momentum given; otherwise explicit omega0 / r0
    Vec3 momentum{0.0, 3.0, 4.0};
    Vec3 omega0;
    Mat3 r0;
    double t_end = 1.0;
    int samples = 100;
    // propagator overrides
    int order = 20;
    double abs_tol = 1e-12;
    double dt = 1e-4;
};

void validate(const RunSpec& spec, bool closed_needed) {
    for (double i : spec.inertia)
        if (!(i > 0.0) || !std::isfinite(i))
            throw std::invalid_argument("inertia moments must be positive and finite");
    if (spec.samples < 2) throw std::invalid_argument("samples must be >= 2");
    if (!(spec.t_end >= 0.0) || !std::isfinite(spec.t_end))
        throw std::invalid_argument("t-end must be finite and >= 0");
    if (spec.rigid_mode && spec.inertia[0] != spec.inertia[1])
        throw std::invalid_argument("rigid (momentum) mode requires I1 = I2");
    if (closed_needed && spec.inertia[0] != spec.inertia[1])
        throw std::invalid_argument("method 'closed' requires I1 = I2");
    if (!spec.rigid_mode && !is_rotation(spec.r0))
        throw std::invalid_argument("r0 must be a rotation matrix (orthogonal, det 1)");
}

Vec3 initial_omega(const RunSpec& spec) {
    if (!spec.rigid_mode) return spec.omega0;
    return {spec.momentum.x / spec.inertia[0], spec.momentum.y / spec.inertia[1],
            spec.momentum.z / spec.inertia[2]};
}

Mat3 initial_r(const RunSpec& spec) { return spec.rigid_mode ? Mat3::identity() : spec.r0; }

std::vector<double> sample_times(const RunSpec& spec) {
    std::vector<double> ts(spec.samples);
    for (int j = 0; j < spec.samples; ++j) ts[j] = spec.t_end * j / (spec.samples - 1);
    return ts;
}

TrajectoryRow make_row(const std::array<double, 3>& moments, double t, const Vec3& omega,
                       const Mat3& r) {
    TrajectoryRow row;
    row.t = t;
    row.omega = {omega.x, omega.y, omega.z};
    row.r = r.a;
    MotionInvariants inv = invariants_of(moments, omega, r);
    row.energy = inv.energy;
    row.m = {inv.momentum.x, inv.momentum.y, inv.momentum.z};
    return row;
}

std::vector<TrajectoryRow> run_closed(const RunSpec& spec) {
    DiagInertia inertia{spec.inertia[1], spec.inertia[2]};
    std::vector<TrajectoryRow> rows;
    if (spec.rigid_mode) {
        // General momentum via the adapted-frame conjugation
        // R(t) = Q^T R_aligned(t) Q with Q from align_frame.
        FrameAlignment fa = align_frame(spec.momentum);
        Mat3 qt = fa.rotation.transpose();
        GeneralSolutionInput aligned{
            inertia,
            Vec3{0.0, fa.aligned.y / inertia.i2, fa.aligned.z / inertia.i3},
            Mat3::identity()};
        for (double t : sample_times(spec)) {
            Mat3 r = qt * rigid_rotation(inertia, fa.aligned, t) * fa.rotation;
            Vec3 omega = qt * omega_solution(aligned, t);
            rows.push_back(make_row(spec.inertia, t, omega, r));
        }
    } else {
        GeneralSolutionInput inp{inertia, spec.omega0, spec.r0};
        for (double t : sample_times(spec))
            rows.push_back(make_row(spec.inertia, t, omega_solution(inp, t), r_general(inp, t)));
    }
    return rows;
}

std::vector<TrajectoryRow> run_lie(const RunSpec& spec) {
    PolyVectorField field = ep_field_general(Rational(spec.inertia[0]), Rational(spec.inertia[1]),
                                             Rational(spec.inertia[2]));
    FlowConfig cfg;
    cfg.order = spec.order;
    cfg.abs_tol = spec.abs_tol;
    Vec3 w0 = initial_omega(spec);
    Mat3 r0 = initial_r(spec);
    std::vector<double> z(12);
    z[0] = w0.x;
    z[1] = w0.y;
    z[2] = w0.z;
    for (int k = 0; k < 9; ++k) z[3 + k] = r0.a[k];

    std::vector<TrajectoryRow> rows;
    double t_prev = 0.0;
    for (double t : sample_times(spec)) {
        z = lie_propagate(field, z, t - t_prev, cfg);
        t_prev = t;
        std::array<double, 9> r;
        for (int k = 0; k < 9; ++k) r[k] = z[3 + k];
        rows.push_back(make_row(spec.inertia, t, Vec3{z[0], z[1], z[2]}, Mat3{r}));
    }
    return rows;
}

std::vector<TrajectoryRow> run_rk4(const RunSpec& spec) {
    IntegratorConfig cfg;
    cfg.dt = spec.dt;
    BodyState s0{initial_omega(spec), initial_r(spec)};
    Rk4Cursor cur{pack_state(s0)};
    std::vector<TrajectoryRow> rows;
    double t_prev = 0.0;
    for (double t : sample_times(spec)) {
        rk4_advance(spec.inertia, cur, t - t_prev, cfg, t_prev);
        t_prev = t;
        EpState z = cur.state();
        std::array<double, 9> r;
        for (int k = 0; k < 9; ++k) r[k] = z[3 + k];
        rows.push_back(make_row(spec.inertia, t, Vec3{z[0], z[1], z[2]}, Mat3{r}));
    }
    return rows;
}

std::vector<TrajectoryRow> run_method(const RunSpec& spec, const std::string& method) {
    if (method == "closed") return run_closed(spec);
    if (method == "lie") return run_lie(spec);
    if (method == "rk4") return run_rk4(spec);
    throw std::invalid_argument("unknown method: " + method);
}

std::string join_csv(std::initializer_list<double> vals) {
    std::string out;
    for (double v : vals) {
        if (!out.empty()) out += ",";
        out += format_double(v);
    }
    return out;
}

std::vector<std::string> meta_lines(const RunSpec& spec, const std::string& method,
                                    bool timestamp) {
    std::vector<std::string> lines;
    lines.push_back("liegyro trajectory");
    if (timestamp) {
        char buf[64];
        std::time_t now = std::time(nullptr);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        lines.push_back(std::string("generated=") + buf);
    }
    lines.push_back("method=" + method);
    lines.push_back("inertia=" + join_csv({spec.inertia[0], spec.inertia[1], spec.inertia[2]}));
    lines.push_back("t_end=" + format_double(spec.t_end) +
                    " samples=" + std::to_string(spec.samples));
    if (method == "lie")
        lines.push_back("order=" + std::to_string(spec.order) +
                        " abs_tol=" + format_double(spec.abs_tol));
    if (method == "rk4") lines.push_back("dt=" + format_double(spec.dt));
    if (spec.rigid_mode) {
        lines.push_back("momentum=" + join_csv({spec.momentum.x, spec.momentum.y, spec.momentum.z}));
        RigidParams p =
            rigid_params(DiagInertia{spec.inertia[1], spec.inertia[2]}, spec.momentum);
        lines.push_back("k=" + format_double(p.k) + " phi=" + format_double(p.phi) +
                        " mhat=" + join_csv({p.mhat.x, p.mhat.y, p.mhat.z}));
    } else {
        lines.push_back("omega0=" + join_csv({spec.omega0.x, spec.omega0.y, spec.omega0.z}));
        std::string r0 = "r0=";
        for (int k = 0; k < 9; ++k) r0 += (k ? "," : "") + format_double(spec.r0.a[k]);
        lines.push_back(r0);
    }
    return lines;
}

std::string metadata_json(const RunSpec& spec, const std::string& method) {
    nlohmann::json meta;
    meta["format"] = "liegyro trajectory";
    meta["method"] = method;
    meta["inertia"] = spec.inertia;
    meta["t_end"] = spec.t_end;
    meta["samples"] = spec.samples;
    if (method == "lie") {
        meta["order"] = spec.order;
        meta["abs_tol"] = spec.abs_tol;
    }
    if (method == "rk4") meta["dt"] = spec.dt;
    if (spec.rigid_mode) {
        meta["momentum"] = {spec.momentum.x, spec.momentum.y, spec.momentum.z};
        RigidParams p =
            rigid_params(DiagInertia{spec.inertia[1], spec.inertia[2]}, spec.momentum);
        meta["rigid_params"] = {
            {"k", p.k}, {"phi", p.phi}, {"mhat", {p.mhat.x, p.mhat.y, p.mhat.z}}};
    } else {
        meta["omega0"] = {spec.omega0.x, spec.omega0.y, spec.omega0.z};
        meta["r0"] = spec.r0.a;
    }
    return meta.dump();
}

void write_trajectory(const RunSpec& spec, const std::string& method,
                      const std::vector<TrajectoryRow>& rows, const std::string& path,
                      const std::string& format, bool timestamp) {
    std::ostringstream body;
    if (format == "json")
        write_json(body, rows, metadata_json(spec, method));
    else
        write_csv(body, rows, meta_lines(spec, method, timestamp));
    if (path.empty()) {
        std::cout << body.str();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << body.str();
}

std::string suffixed_path(const std::string& path, const std::string& method) {
    if (path.empty()) return path;
    size_t dot = path.rfind('.');
    size_t slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + method;
    return path.substr(0, dot) + "." + method + path.substr(dot);
}

int cmd_simulate(const RunSpec& spec, const std::string& out_path, const std::string& format,
                 bool timestamp) {
    validate(spec, spec.method == "closed" || spec.method == "all");
    if (spec.method == "all") {
        for (const char* m : {"closed", "lie", "rk4"})
            write_trajectory(spec, m, run_method(spec, m), suffixed_path(out_path, m), format,
                             timestamp);
        return kExitOk;
    }
    write_trajectory(spec, spec.method, run_method(spec, spec.method), out_path, format, timestamp);
    return kExitOk;
}

int cmd_compare(const RunSpec& spec, const std::string& out_path) {
    validate(spec, true);
    std::vector<TrajectoryRow> closed = run_closed(spec);
    std::vector<TrajectoryRow> lie = run_lie(spec);
    std::vector<TrajectoryRow> rk4 = run_rk4(spec);

    auto r_diff = [](const TrajectoryRow& a, const TrajectoryRow& b) {
        double m = 0.0;
        for (int k = 0; k < 9; ++k) m = std::max(m, std::fabs(a.r[k] - b.r[k]));
        return m;
    };
    auto w_diff = [](const TrajectoryRow& a, const TrajectoryRow& b) {
        double m = 0.0;
        for (int k = 0; k < 3; ++k) m = std::max(m, std::fabs(a.omega[k] - b.omega[k]));
        return m;
    };

    std::ostringstream out;
    out << "t,dR_closed_lie,dOmega_closed_lie,dR_closed_rk4,dOmega_closed_rk4,dR_lie_rk4,"
           "dOmega_lie_rk4\n";
    double worst_cl = 0.0, worst_cr = 0.0, worst_lr = 0.0;
    for (size_t j = 0; j < closed.size(); ++j) {
        double d_cl = r_diff(closed[j], lie[j]), w_cl = w_diff(closed[j], lie[j]);
        double d_cr = r_diff(closed[j], rk4[j]), w_cr = w_diff(closed[j], rk4[j]);
        double d_lr = r_diff(lie[j], rk4[j]), w_lr = w_diff(lie[j], rk4[j]);
        worst_cl = std::max({worst_cl, d_cl, w_cl});
        worst_cr = std::max({worst_cr, d_cr, w_cr});
        worst_lr = std::max({worst_lr, d_lr, w_lr});
        out << format_double(closed[j].t) << "," << format_double(d_cl) << ","
            << format_double(w_cl) << "," << format_double(d_cr) << "," << format_double(w_cr)
            << "," << format_double(d_lr) << "," << format_double(w_lr) << "\n";
    }
    out << "# worst closed-lie=" << format_double(worst_cl)
        << " closed-rk4=" << format_double(worst_cr) << " lie-rk4=" << format_double(worst_lr)
        << "\n";
    bool ok = worst_cl <= 1e-8 && worst_cr <= 1e-6;
    out << "# status=" << (ok ? "ok" : "exceeded") << " (closed-lie tol 1e-8, closed-rk4 tol 1e-6)\n";

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
        f << out.str();
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& suite, uint64_t seed) {
    verify::Suite results = verify::run_named_suite(suite, seed);
    bool ok = true;
    for (const verify::CheckResult& c : results) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        ok = ok && c.passed;
    }
    std::cout << (ok ? "verify: all checks passed\n" : "verify: failures detected\n");
    return ok ? kExitOk : kExitCheckFailed;
}

uint64_t env_seed() {
    const char* s = std::getenv("LIEGYRO_SEED");
    if (!s || !*s) return 0;
    return std::strtoull(s, nullptr, 10);
}

// Flat key=value config support: `--config FILE` is pulled out of the
// argument list and each entry is injected as `--key value` right after the
// subcommand token, unless the same flag was given explicitly (flags
// override the file).
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    while (std::getline(file, line)) {
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::invalid_argument("config file: expected key=value, got: " + line);
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        size_t vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        entries.emplace_back(key, value);
    }

    // insert after the subcommand token
    size_t insert_at = args.size();
    for (size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            insert_at = i + 1;
            break;
        }
    }
    for (const auto& [key, value] : entries) {
        std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.insert(args.begin() + insert_at, {flag, value});
        insert_at += 2;
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liegyro: free symmetric rigid body motion, three independent ways"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string out_path;
    std::string format = "csv";
    bool timestamp = false;
    std::string config_path;
    std::vector<double> inertia_in{1.0, 1.0, 2.0};
    std::vector<double> momentum_in;
    std::vector<double> omega0_in;
    std::vector<double> r0_in;

    auto add_run_options = [&](CLI::App* cmd, bool with_method) {
        if (with_method)
            cmd->add_option("--method", spec.method, "closed | lie | rk4 | all")
                ->check(CLI::IsMember({"closed", "lie", "rk4", "all"}));
        cmd->add_option("--inertia", inertia_in, "principal moments I1,I2,I3")
            ->delimiter(',')
            ->expected(3);
        cmd->add_option("--momentum", momentum_in,
                        "angular momentum m1,m2,m3 (rigid mode: R0 = identity, Omega0 = m/I)")
            ->delimiter(',')
            ->expected(3);
        cmd->add_option("--omega0", omega0_in, "initial angular velocity (explicit mode)")
            ->delimiter(',')
            ->expected(3);
        cmd->add_option("--r0", r0_in, "initial rotation, nine row-major values")
            ->delimiter(',')
            ->expected(9);
        cmd->add_option("--t-end", spec.t_end, "end time");
        cmd->add_option("--samples", spec.samples, "number of equally spaced samples (>= 2)");
        cmd->add_option("--order", spec.order, "Lie series truncation order");
        cmd->add_option("--abs-tol", spec.abs_tol, "Lie series tail tolerance per substep");
        cmd->add_option("--dt", spec.dt, "RK4 step size");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        // handled by apply_config_file before parsing; registered for --help
        // and so that a missing path still errors
        cmd->add_option("--config", config_path, "flat key=value config file mirroring the flags");
    };

    CLI::App* sim = app.add_subcommand("simulate", "propagate and export a trajectory");
    add_run_options(sim, true);
    sim->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sim->add_flag("--timestamp", timestamp, "include a generation timestamp in the metadata");

    CLI::App* cmp = app.add_subcommand("compare", "run all three methods and report differences");
    add_run_options(cmp, false);

    CLI::App* ver = app.add_subcommand("verify", "run the verification suites");
    std::string suite = "all";
    ver->add_option("--suite", suite, "kernel | lemma1 | coeffs | flow | geometry | all")
        ->check(CLI::IsMember({"kernel", "lemma1", "coeffs", "flow", "geometry", "all"}));

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(args);
        std::reverse(args.begin(), args.end());  // CLI11 takes a reversed vector
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (ver->parsed()) return cmd_verify(suite, env_seed());

        if (!momentum_in.empty() && !omega0_in.empty())
            throw std::invalid_argument("give either --momentum or --omega0, not both");
        if (!omega0_in.empty()) {
            spec.rigid_mode = false;
            spec.omega0 = Vec3{omega0_in[0], omega0_in[1], omega0_in[2]};
            if (!r0_in.empty()) {
                std::array<double, 9> a;
                std::copy(r0_in.begin(), r0_in.end(), a.begin());
                spec.r0 = Mat3{a};
            }
        } else if (!r0_in.empty()) {
            throw std::invalid_argument("--r0 requires --omega0");
        } else if (!momentum_in.empty()) {
            spec.momentum = Vec3{momentum_in[0], momentum_in[1], momentum_in[2]};
        }
        std::copy(inertia_in.begin(), inertia_in.end(), spec.inertia.begin());

        if (sim->parsed()) return cmd_simulate(spec, out_path, format, timestamp);
        if (cmp->parsed()) return cmd_compare(spec, out_path);
        return kExitUsage;
    } catch (const FlowError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::overflow_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
