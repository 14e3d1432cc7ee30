// Command-line front end: evaluate geometry and estimation bounds at points,
// sweep a parameter to tabulate bound curves, run the modulated-drive
// reconstruction protocol, compute topological invariants, and audit the
// library's invariants on random models.
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical/fit failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgeo/estimation.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/model.hpp"
#include "qgeo/protocol.hpp"
#include "qgeo/random_models.hpp"
#include "qgeo/serialize.hpp"

namespace {

using namespace qgeo;

constexpr const char* kToolVersion = "0.1.0";

struct OutputTarget {
    std::string path;  // empty = stdout

    void write(const std::string& payload, const ordered_json& manifest) const {
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot open output file: " + path);
        out << payload;
        out.close();

        std::ofstream mout(path + ".manifest.json", std::ios::binary);
        mout << manifest.dump(2) << "\n";
    }
};

ordered_json make_manifest(const std::string& command, const ordered_json& config,
                           std::uint64_t seed) {
    ordered_json m;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    m["timestamp"] = buf;
    return m;
}

RealVector parse_csv_doubles(const std::string& text) {
    RealVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw DomainError("empty numeric field in '" + text + "'");
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw DomainError("bad numeric field '" + item + "'");
    }
    if (out.empty()) throw DomainError("expected a comma-separated numeric list");
    return out;
}

DiffScheme parse_scheme(const std::string& name, const StateModel& model) {
    if (name == "analytic") {
        if (!model.has_analytic_tangent())
            throw DomainError("model " + model.name + " has no analytic tangent");
        return DiffScheme::analytic;
    }
    if (name == "fd2") return DiffScheme::central2;
    if (name == "fd4") return DiffScheme::central4_richardson;
    if (name == "auto") return best_scheme(model);
    throw DomainError("unknown scheme: " + name);
}

std::string format_sig(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

struct GeometryArgs {
    std::string model = "qutrit";
    std::string theta;
    std::string scheme = "auto";
    std::string out;
};

int cmd_geometry(const GeometryArgs& args) {
    const StateModel model = model_by_name(args.model);
    const RealVector theta = parse_csv_doubles(args.theta);
    const DiffScheme scheme = parse_scheme(args.scheme, model);

    const QGTensor tensor = qgt(model, theta, scheme);
    const auto [g, f] = split(tensor);
    const QFIMatrix j = qfim(g);

    ordered_json out;
    out["model"] = model.name;
    ordered_json labels = ordered_json::array();
    for (const AxisSpec& ax : model.axes) labels.push_back(ax.label);
    out["axes"] = labels;
    out["theta"] = json_vector(theta);
    out["scheme"] = args.scheme;
    out["chi_re"] = json_matrix(real_part(tensor.chi));
    out["chi_im"] = json_matrix(imag_part(tensor.chi));
    out["g"] = json_matrix(g.g);
    out["f"] = json_matrix(f.f);
    out["j"] = json_matrix(j.j);

    ordered_json config;
    config["model"] = args.model;
    config["theta"] = args.theta;
    config["scheme"] = args.scheme;
    OutputTarget{args.out}.write(out.dump(2) + "\n", make_manifest("geometry", config, 0));
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string model = "qutrit";
    std::string axis;
    std::string range;                  // start:stop:count
    std::string fixed;                  // label=value,label=value
    std::string subspace;               // label,label
    std::string weight = "qfim";
    std::string scheme = "auto";
    std::string format = "csv";
    std::string out;
};

struct SweepRow {
    double theta_value;
    BoundReport report;
};

int cmd_sweep(const SweepArgs& args) {
    const StateModel model = model_by_name(args.model);
    const std::size_t axis = model.axis_index(args.axis);
    const DiffScheme scheme = parse_scheme(args.scheme, model);

    const RealVector range = parse_csv_doubles([&] {
        std::string r = args.range;
        for (char& c : r)
            if (c == ':') c = ',';
        return r;
    }());
    if (range.size() != 3) throw DomainError("range must be start:stop:count");
    const double start = range[0], stop = range[1];
    const std::size_t count = static_cast<std::size_t>(range[2]);
    if (count < 2 || start >= stop || range[2] != std::floor(range[2]))
        throw DomainError("range requires start < stop and an integer count >= 2");

    RealVector theta(model.param_dim, 0.0);
    if (!args.fixed.empty()) {
        std::stringstream ss(args.fixed);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos) throw DomainError("fixed values must be label=value");
            theta[model.axis_index(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
        }
    }

    std::vector<std::size_t> sub_axes;
    if (!args.subspace.empty()) {
        std::stringstream ss(args.subspace);
        std::string item;
        while (std::getline(ss, item, ',')) sub_axes.push_back(model.axis_index(item));
    }

    WeightKind wkind;
    if (args.weight == "qfim")
        wkind = WeightKind::qfim;
    else if (args.weight == "identity")
        wkind = WeightKind::identity;
    else
        throw DomainError("weight must be qfim or identity");

    std::vector<SweepRow> rows;
    rows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        RealVector point = theta;
        point[axis] = start + (stop - start) * static_cast<double>(k) /
                      static_cast<double>(count - 1);
        const auto [g, f] = split(qgt(model, point, scheme));
        QFIMatrix j = qfim(g);
        CurvatureMatrix curv = f;
        if (!sub_axes.empty()) std::tie(j, curv) = subspace(j, f, sub_axes);
        const BoundReport report = holevo_sandwich(j, curv, make_weight(wkind, j));
        rows.push_back(SweepRow{point[axis], report});
    }

    const std::size_t d = sub_axes.empty() ? model.param_dim : sub_axes.size();
    std::string payload;
    if (args.format == "csv") {
        std::string header = "theta";
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j)
                header += ",J_" + std::to_string(i) + std::to_string(j);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                header += ",F_" + std::to_string(i) + std::to_string(j);
        header += ",gamma,sld_crb,attainable_qcrb,sandwich_mid,sandwich_gamma";
        payload = header + "\n";
        for (const SweepRow& row : rows) {
            std::string line = format_sig(row.theta_value);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i; j < d; ++j) line += "," + format_sig(row.report.j(i, j));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j)
                    line += "," + format_sig(row.report.f(i, j));
            line += "," + format_sig(row.report.spectrum.gamma);
            line += "," + format_sig(row.report.sld_crb);
            line += "," + format_sig(row.report.attainable_qcrb);
            line += "," + format_sig(row.report.sandwich_mid);
            line += "," + format_sig(row.report.sandwich_gamma);
            payload += line + "\n";
        }
    } else if (args.format == "json") {
        ordered_json out;
        out["model"] = model.name;
        out["axis"] = args.axis;
        out["subspace"] = args.subspace;
        out["weight"] = args.weight;
        ordered_json jrows = ordered_json::array();
        for (const SweepRow& row : rows) {
            ordered_json jr = bound_report_json(row.report);
            jr["sweep_value"] = round_sig(row.theta_value);
            jrows.push_back(jr);
        }
        out["rows"] = jrows;
        payload = out.dump(2) + "\n";
    } else {
        throw DomainError("format must be csv or json");
    }

    ordered_json config;
    config["model"] = args.model;
    config["axis"] = args.axis;
    config["range"] = args.range;
    config["fixed"] = args.fixed;
    config["subspace"] = args.subspace;
    config["weight"] = args.weight;
    config["scheme"] = args.scheme;
    config["format"] = args.format;
    OutputTarget{args.out}.write(payload, make_manifest("sweep", config, 0));
    return 0;
}

// ---------------------------------------------------------------------------
// protocol
// ---------------------------------------------------------------------------

struct ProtocolArgs {
    std::string theta0;
    std::string gaps = "1,2.5";
    double amplitude = 0.05;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_protocol(const ProtocolArgs& args) {
    const RealVector theta0 = parse_csv_doubles(args.theta0);
    const RealVector gaps = parse_csv_doubles(args.gaps);
    if (gaps.size() != 2) throw DomainError("gaps must be two comma-separated values");

    ProtocolOptions options;
    options.noise_sigma = args.noise;
    options.seed = args.seed;
    const Reconstruction rec =
        reconstruct_qgt(theta0, {gaps[0], gaps[1]}, args.amplitude, options);

    const auto [g_ref, f_ref] = split(qgt(qutrit_model(), theta0, best_scheme(qutrit_model())));

    ordered_json out = reconstruction_json(rec, {gaps[0], gaps[1]}, args.amplitude);
    out["noise_sigma"] = round_sig(args.noise);
    out["seed"] = args.seed;
    out["direct_g"] = json_matrix(g_ref.g);
    out["direct_f"] = json_matrix(f_ref.f);

    // relative errors against the direct evaluation (absolute for small refs)
    RealMatrix g_err(3, 3), f_err(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double dg = std::abs(rec.metric.g(i, j) - g_ref.g(i, j));
            const double df = std::abs(rec.curvature.f(i, j) - f_ref.f(i, j));
            g_err(i, j) = std::abs(g_ref.g(i, j)) >= 0.05 ? dg / std::abs(g_ref.g(i, j)) : dg;
            f_err(i, j) = std::abs(f_ref.f(i, j)) >= 0.05 ? df / std::abs(f_ref.f(i, j)) : df;
        }
    out["g_error"] = json_matrix(g_err);
    out["f_error"] = json_matrix(f_err);

    ordered_json config;
    config["theta0"] = args.theta0;
    config["gaps"] = args.gaps;
    config["amplitude"] = args.amplitude;
    config["noise"] = args.noise;
    OutputTarget{args.out}.write(out.dump(2) + "\n", make_manifest("protocol", config, args.seed));
    return 0;
}

// ---------------------------------------------------------------------------
// topology
// ---------------------------------------------------------------------------

struct TopologyArgs {
    std::string model = "qubit";
    std::string grid;
    std::string scheme = "auto";
    std::string out;
};

int cmd_topology(const TopologyArgs& args) {
    const StateModel model = model_by_name(args.model);
    const DiffScheme scheme = parse_scheme(args.scheme, model);
    const RealVector grid = parse_csv_doubles(args.grid);
    for (double g : grid)
        if (g < 1.0 || g != std::floor(g)) throw DomainError("grid entries must be integers >= 1");

    ordered_json out;
    out["model"] = model.name;
    double value = 0.0;
    if (args.model == "qubit") {
        if (grid.size() != 2) throw DomainError("qubit grid must be n_theta,n_phi");
        value = chern_number(model, static_cast<std::size_t>(grid[0]),
                             static_cast<std::size_t>(grid[1]), scheme);
        out["invariant_name"] = "chern_number";
    } else if (args.model == "qutrit") {
        if (grid.size() != 3) throw DomainError("qutrit grid must be n_alpha,n_beta,n_phi");
        value = dd_invariant(model, static_cast<std::size_t>(grid[0]),
                             static_cast<std::size_t>(grid[1]),
                             static_cast<std::size_t>(grid[2]), scheme);
        out["invariant_name"] = "dixmier_douady";
    } else {
        throw DomainError("topology supports the qubit and qutrit models");
    }
    out["value"] = round_sig(value);
    ordered_json jgrid = ordered_json::array();
    for (double g : grid) jgrid.push_back(static_cast<std::size_t>(g));
    out["grid"] = jgrid;

    ordered_json config;
    config["model"] = args.model;
    config["grid"] = args.grid;
    config["scheme"] = args.scheme;
    OutputTarget{args.out}.write(out.dump(2) + "\n", make_manifest("topology", config, 0));
    return 0;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditArgs {
    std::size_t n_models = 500;
    std::string dims = "2:5";
    std::uint64_t seed = 1;
    bool inject_corruption = false;
    std::string out;
};

int cmd_audit(const AuditArgs& args) {
    if (args.n_models < 1) throw DomainError("audit requires at least one model");
    RealVector dims = parse_csv_doubles([&] {
        std::string r = args.dims;
        for (char& c : r)
            if (c == ':') c = ',';
        return r;
    }());
    if (dims.size() != 2 || dims[0] < 2 || dims[1] < dims[0])
        throw DomainError("dims must be lo:hi with 2 <= lo <= hi");
    const std::size_t dim_lo = static_cast<std::size_t>(dims[0]);
    const std::size_t dim_hi = static_cast<std::size_t>(dims[1]);

    Rng rng(args.seed);
    std::size_t failures = 0;
    double worst_gamma = 0.0;
    double worst_slack = 1e300;
    double worst_ordering = 0.0;      // most negative sandwich margin seen
    double worst_cross_route = 0.0;   // largest pairwise QFIM difference
    double worst_antisymmetry = 0.0;

    for (std::size_t i = 0; i < args.n_models; ++i) {
        const std::size_t n = dim_lo + i % (dim_hi - dim_lo + 1);
        const std::size_t d = 2 + i % 3;
        const RandomModelSample sample = random_unitary_model(rng, n, d);

        const auto [g, f] = split(qgt_from_generators(sample.model, sample.theta));
        QFIMatrix j = qfim(g);
        CurvatureMatrix curv = f;
        if (args.inject_corruption && i == args.n_models / 2)
            curv.f(0, 1) += 0.25;  // break antisymmetry on purpose

        bool ok = true;

        const double antisym = antisymmetry_residual(curv.f);
        worst_antisymmetry = std::max(worst_antisymmetry, antisym);
        if (antisym > 1e-9) ok = false;

        if (ok) {
            const GammaSpectrum spec = gamma_spectrum(j, curv);
            worst_gamma = std::max(worst_gamma, spec.gamma);
            if (spec.gamma > 1.0 + 1e-8) ok = false;

            const BoundReport r = holevo_sandwich(j, curv, make_weight(WeightKind::qfim, j));
            const double margin =
                std::min({r.sandwich_mid - r.sld_crb, r.sandwich_gamma - r.sandwich_mid,
                          r.sandwich_two - r.sandwich_gamma});
            worst_ordering = std::min(worst_ordering, margin);
            if (margin < -1e-9) ok = false;

            for (std::size_t a = 0; a < d && ok; ++a)
                for (std::size_t b = a + 1; b < d; ++b) {
                    const double slack = uncertainty_check(sample.model, sample.theta, a, b);
                    worst_slack = std::min(worst_slack, slack);
                    if (slack < -1e-10) ok = false;
                }

            const auto [gfd, ffd] =
                split(qgt(sample.model, sample.theta, DiffScheme::central4_richardson));
            const QFIMatrix j_fd = qfim(gfd);
            const QFIMatrix j_sld =
                qfim_from_sld(density(sample.model.evaluate(sample.theta)),
                              sld_pure(sample.model, sample.theta, DiffScheme::analytic));
            const double cross = std::max(max_abs_diff(j.j, j_fd.j), max_abs_diff(j.j, j_sld.j));
            worst_cross_route = std::max(worst_cross_route, cross);
            if (cross > 1e-7) ok = false;
        }

        if (!ok) ++failures;
    }

    ordered_json out;
    out["n_models"] = args.n_models;
    out["dims"] = args.dims;
    out["seed"] = args.seed;
    ordered_json checks;
    checks["gamma_bound"] = {{"worst_gamma", round_sig(worst_gamma)}, {"tolerance", 1e-8}};
    checks["sandwich_ordering"] = {{"worst_margin", round_sig(worst_ordering)},
                                   {"tolerance", 1e-9}};
    checks["uncertainty_slack"] = {{"worst_slack", round_sig(worst_slack)},
                                   {"tolerance", 1e-10}};
    checks["qfim_cross_route"] = {{"worst_difference", round_sig(worst_cross_route)},
                                  {"tolerance", 1e-7}};
    checks["curvature_antisymmetry"] = {{"worst_residual", round_sig(worst_antisymmetry)},
                                        {"tolerance", 1e-9}};
    out["checks"] = checks;
    out["failures"] = failures;
    out["status"] = failures == 0 ? "pass" : "fail";

    ordered_json config;
    config["n_models"] = args.n_models;
    config["dims"] = args.dims;
    config["inject_corruption"] = args.inject_corruption;
    OutputTarget{args.out}.write(out.dump(2) + "\n", make_manifest("audit", config, args.seed));
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-geometry estimation bounds and Rabi-protocol simulator"};
    app.require_subcommand(1);

    GeometryArgs geo;
    CLI::App* geo_cmd = app.add_subcommand("geometry", "evaluate chi, g, F, J at one point");
    geo_cmd->add_option("--model", geo.model, "qubit | qutrit | ququart");
    geo_cmd->add_option("--theta", geo.theta, "comma-separated parameter point (radians)")
        ->required();
    geo_cmd->add_option("--scheme", geo.scheme, "auto | analytic | fd2 | fd4");
    geo_cmd->add_option("--out", geo.out, "output file (default stdout)");

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "tabulate bounds along one axis");
    sweep_cmd->add_option("--model", sweep.model, "qubit | qutrit | ququart");
    sweep_cmd->add_option("--axis", sweep.axis, "axis label to sweep")->required();
    sweep_cmd->add_option("--range", sweep.range, "start:stop:count")->required();
    sweep_cmd->add_option("--fixed", sweep.fixed, "fixed values, label=value[,label=value...]");
    sweep_cmd->add_option("--subspace", sweep.subspace, "restrict to axes, label[,label...]");
    sweep_cmd->add_option("--weight", sweep.weight, "qfim | identity");
    sweep_cmd->add_option("--scheme", sweep.scheme, "auto | analytic | fd2 | fd4");
    sweep_cmd->add_option("--format", sweep.format, "csv | json");
    sweep_cmd->add_option("--out", sweep.out, "output file (default stdout)");

    ProtocolArgs proto;
    CLI::App* proto_cmd =
        app.add_subcommand("protocol", "simulate the modulated-drive reconstruction");
    proto_cmd->add_option("--theta0", proto.theta0, "qutrit working point alpha,beta,phi")
        ->required();
    proto_cmd->add_option("--gaps", proto.gaps, "level splittings gap1,gap2");
    proto_cmd->add_option("--amplitude", proto.amplitude, "modulation amplitude (radians)");
    proto_cmd->add_option("--noise", proto.noise, "additive population noise sigma");
    proto_cmd->add_option("--seed", proto.seed, "noise seed");
    proto_cmd->add_option("--out", proto.out, "output file (default stdout)");

    TopologyArgs topo;
    CLI::App* topo_cmd = app.add_subcommand("topology", "integrate a topological invariant");
    topo_cmd->add_option("--model", topo.model, "qubit | qutrit");
    topo_cmd->add_option("--grid", topo.grid, "qubit: n_theta,n_phi; qutrit: n_a,n_b,n_phi")
        ->required();
    topo_cmd->add_option("--scheme", topo.scheme, "auto | analytic | fd2 | fd4");
    topo_cmd->add_option("--out", topo.out, "output file (default stdout)");

    AuditArgs audit;
    CLI::App* audit_cmd = app.add_subcommand("audit", "invariant checks on random models");
    audit_cmd->add_option("--models", audit.n_models, "number of random models");
    audit_cmd->add_option("--dims", audit.dims, "hilbert dimension range lo:hi");
    audit_cmd->add_option("--seed", audit.seed, "rng seed");
    audit_cmd->add_flag("--inject-corruption", audit.inject_corruption,
                        "negative control: corrupt one curvature matrix");
    audit_cmd->add_option("--out", audit.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (geo_cmd->parsed()) return cmd_geometry(geo);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (proto_cmd->parsed()) return cmd_protocol(proto);
        if (topo_cmd->parsed()) return cmd_topology(topo);
        if (audit_cmd->parsed()) return cmd_audit(audit);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IndexOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // numerical failures: fit, convergence, support, consistency
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
