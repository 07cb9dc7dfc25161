#include "inhibnet/cli.hpp"

#include "inhibnet/config.hpp"
#include "inhibnet/errors.hpp"
#include "inhibnet/flow.hpp"
#include "inhibnet/io.hpp"
#include "inhibnet/manifest.hpp"
#include "inhibnet/pdmp.hpp"
#include "inhibnet/perfect.hpp"
#include "inhibnet/spectral.hpp"
#include "inhibnet/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

namespace inhibnet::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = INHIBNET_VERSION;

json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json numbers(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
}

struct Loaded {
    json doc;
    NetworkModel model;
};

Loaded load(const std::string& path) {
    Loaded l{read_config_document(path), {}};
    l.model = parse_model(l.doc);
    const auto report = validate(l.model);
    if (!report.ok()) throw ConfigError("invalid model in " + path + ":\n" + report.describe());
    return l;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const NetworkModel& model) {
    return flag ? *flag : model.seed.value_or(0);
}

void require_finite(const NetworkModel& model, const char* command) {
    if (model.is_lattice()) throw ConfigError(std::string(command) + " needs a finite model (set n, not lattice)");
}

/// Writes `doc` to `path` when given, else prints it. Returns the file that was written, if any.
std::optional<std::string> emit(const json& doc, const std::string& path, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return std::nullopt;
    }
    write_atomic(path, text);
    return path;
}

void finish_manifest(const std::string& requested, const std::string& primary, RunManifest manifest) {
    if (requested.empty() && primary.empty()) return;
    manifest.version = kVersion;
    write_manifest(requested.empty() ? primary + ".manifest.json" : requested, manifest);
}

struct SimulateArgs {
    std::string config, out, summary, manifest;
    std::size_t n_events = 0;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto [doc, model] = load(a.config);
    require_finite(model, "simulate");
    const std::uint64_t seed = resolve_seed(a.seed, model);
    const std::size_t n = model.size();
    const Trajectory traj = simulate(model, a.n_events, seed);

    std::string csv = "time,neuron,label,accepted,reset_value";
    for (std::size_t i = 0; i < n; ++i) csv += ",state_" + std::to_string(i + 1);
    csv += '\n';
    for (std::size_t e = 0; e < traj.events.size(); ++e) {
        const auto& ev = traj.events[e];
        csv += format_double(ev.time) + ',' + std::to_string(ev.neuron + 1) + ',' +
               (ev.label == Label::Sure ? "sure" : "uncertain") + ',' + (ev.accepted ? "1" : "0") + ',' +
               (ev.reset_value ? format_double(*ev.reset_value) : "") + ',' + join_doubles(traj.states[e]) + '\n';
    }
    write_atomic(a.out, csv);

    const auto sure = static_cast<std::size_t>(std::count_if(
        traj.events.begin(), traj.events.end(), [](const EventRecord& e) { return e.label == Label::Sure; }));
    const RateBounds b = model_rate_bounds(model);
    json neurons = json::array();
    for (std::size_t i = 0; i < n; ++i)
        neurons.push_back({{"neuron", i + 1},
                           {"accepted", traj.accepted_count(i)},
                           {"rate", number(empirical_jump_rate(traj, i))}});
    const json summary{{"events", traj.events.size()},
                       {"accepted", traj.accepted_count()},
                       {"sure", sure},
                       {"uncertain", traj.events.size() - sure},
                       {"elapsed", traj.elapsed()},
                       {"beta_lower", b.lower},
                       {"beta_upper", b.upper},
                       {"seed", seed},
                       {"neurons", neurons}};
    RunManifest m{"simulate", config_hash(doc), seed, {}, {a.out}};
    if (auto file = emit(summary, a.summary, out)) m.outputs.push_back(*file);
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

struct ConfigOnlyArgs {
    std::string config, out, manifest;
};

int cmd_spectral(const ConfigOnlyArgs& a, std::ostream& out, std::ostream& err) {
    const auto [doc, model] = load(a.config);
    require_finite(model, "spectral");
    json result;
    try {
        const ReproductionMatrix H = build_H(model);
        result = {{"rho", H.rho},
                  {"kappa", numbers(H.kappa)},
                  {"m", numbers(H.m)},
                  {"gamma_sup", numbers(H.gamma_sup)},
                  {"reset_mean", numbers(H.reset_mean)},
                  {"verdict", to_string(non_evanescence_verdict(H).verdict)},
                  {"iterations", H.iterations},
                  {"residual", H.residual}};
    } catch (const SpectralError& e) {
        if (e.code() != SpectralError::Code::UnboundedGamma && e.code() != SpectralError::Code::Reducible) {
            err << "spectral: " << e.what() << "\n";
            return kRuntimeError;
        }
        std::vector<double> g(model.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = gamma_sup(flow_context(model, i));
        result = {{"verdict", "Unavailable"}, {"reason", e.what()}, {"gamma_sup", numbers(g)}};
    }
    RunManifest m{"spectral", config_hash(doc), model.seed.value_or(0), {}, {}};
    if (auto file = emit(result, a.out, out)) m.outputs.push_back(*file);
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

struct FirstJumpArgs {
    std::string config, out, manifest;
    double t_max = 1.0;
    std::size_t points = 101;
    std::size_t runs = 0;
    std::optional<std::uint64_t> seed;
};

int cmd_first_jump(const FirstJumpArgs& a, std::ostream& out) {
    const auto [doc, model] = load(a.config);
    require_finite(model, "first-jump");
    const std::uint64_t seed = resolve_seed(a.seed, model);
    std::vector<double> grid(a.points), survival(a.points);
    bool quadrature = false;
    for (std::size_t k = 0; k < a.points; ++k) {
        grid[k] = k + 1 == a.points ? a.t_max : a.t_max * static_cast<double>(k) / static_cast<double>(a.points - 1);
        const auto s = first_jump_survival(model, grid[k]);
        survival[k] = s.probability;
        quadrature = quadrature || s.quadrature;
    }
    json result{{"grid", numbers(grid)}, {"survival", numbers(survival)}, {"quadrature", quadrature}};
    if (a.runs > 0) {
        auto times = first_accepted_jump_times(model, a.runs, seed, Exec::Serial);
        const double ks =
            ks_distance(times, [&](double t) { return 1.0 - first_jump_survival(model, t).probability; });
        std::sort(times.begin(), times.end());
        std::vector<double> empirical(a.points);
        for (std::size_t k = 0; k < a.points; ++k) {
            const auto above = times.end() - std::upper_bound(times.begin(), times.end(), grid[k]);
            empirical[k] = static_cast<double>(above) / static_cast<double>(times.size());
        }
        result["runs"] = a.runs;
        result["seed"] = seed;
        result["empirical_survival"] = numbers(empirical);
        result["ks"] = ks;
    }
    RunManifest m{"first-jump", config_hash(doc), seed, {}, {}};
    if (auto file = emit(result, a.out, out)) m.outputs.push_back(*file);
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

struct PerfectArgs {
    std::string config, out, density, manifest;
    std::int64_t neuron = 0;
    std::size_t samples = 1000;
    std::size_t cap = 1'000'000;
    std::size_t grid = 512;
    std::optional<std::uint64_t> seed;
};

int cmd_perfect(const PerfectArgs& a, std::ostream& out, std::ostream& err) {
    const auto [doc, model] = load(a.config);
    if (!model.is_lattice()) throw ConfigError("perfect needs a lattice model (set \"lattice\": true)");
    const std::uint64_t seed = resolve_seed(a.seed, model);
    SampleSet set;
    try {
        set = draw_stationary(model, a.neuron, a.samples, seed, a.cap, Exec::Parallel);
    } catch (const SubcriticalityError& e) {
        err << "perfect: " << e.what() << "\n";
        return kRuntimeError;
    }

    std::string csv = "sample,value,events_processed,clan_max_size,status\n";
    for (const auto& r : set.records)
        csv += std::to_string(r.index) + ',' + (r.sample ? format_double(r.sample->value) : "") + ',' +
               std::to_string(r.events_processed) + ',' + std::to_string(r.clan_max_size) + ',' +
               to_string(r.status) + '\n';
    write_atomic(a.out, csv);
    RunManifest m{"perfect", config_hash(doc), seed, {}, {a.out}};

    const auto values = set.values();
    json summary{{"samples", a.samples}, {"stopped", values.size()}, {"capped", set.capped},
                 {"neuron", a.neuron},   {"seed", seed},             {"delta", number(delta(model))}};
    if (!values.empty()) {
        const Summary s = summarize(values);
        summary["mean"] = s.mean;
        summary["sd"] = s.sd;
        summary["min"] = s.min;
        summary["max"] = s.max;
    }

    if (!a.density.empty()) {
        if (values.size() < 2) throw std::invalid_argument("perfect: density needs at least 2 samples");
        const auto est = kde(values, a.grid, Exec::Serial);
        const Summary s = summarize(values);
        json meta{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
        std::string dcsv = "grid,value\n";
        if (const auto* d = std::get_if<DensityEstimate>(&est)) {
            meta["bandwidth"] = d->bandwidth;
            meta["bandwidth_rule"] = "silverman";
            meta["kernel"] = "gaussian";
            for (std::size_t g = 0; g < d->grid.size(); ++g)
                dcsv += format_double(d->grid[g]) + ',' + format_double(d->values[g]) + '\n';
        } else {
            meta["bandwidth"] = nullptr;
            meta["point_mass"] = std::get<PointMass>(est).location;
        }
        write_atomic(a.density, dcsv);
        const std::string meta_path = a.density + ".meta.json";
        write_atomic(meta_path, meta.dump(2) + "\n");
        m.outputs.push_back(a.density);
        m.outputs.push_back(meta_path);
    }
    out << summary.dump(2) << "\n";
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

struct ContourArgs {
    std::optional<double> delta, beta_min, beta_max;
    std::string out, manifest;
};

int cmd_contour(const ContourArgs& a, std::ostream& out) {
    json params;
    double d = 0.0;
    if (a.delta) {
        d = *a.delta;
        params["delta"] = d;
    } else {
        if (!a.beta_min || !a.beta_max) throw std::invalid_argument("contour: give --delta or both --beta-min and --beta-max");
        d = delta(*a.beta_min, *a.beta_max);
        params["beta_min"] = *a.beta_min;
        params["beta_max"] = *a.beta_max;
    }
    if (!(d > 0.0)) throw std::invalid_argument("contour: delta must be positive");
    json result = params;
    result["delta"] = number(d);
    try {
        result["phi"] = contour_bound(d);
    } catch (const DomainError& e) {
        result["domain_error"] = e.what();
    }
    // Nearest-neighbour lattice in units of beta^* - beta_*: birth 2, death delta.
    result["birth_rate"] = 2.0;
    result["death_rate"] = number(d);
    result["branching_verdict"] = d > 2.0 ? "Subcritical" : "Inconclusive";
    result["regime"] = d > 1.0 ? "finite_clan" : (d < 1.0 / 256.0 ? "survival_possible" : "unresolved");
    RunManifest m{"contour", config_hash(params), 0, {}, {}};
    if (auto file = emit(result, a.out, out)) m.outputs.push_back(*file);
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

struct DriftArgs {
    std::string config, state, out, manifest;
    std::size_t random = 0;
    double max_state = 100.0;
    std::optional<std::uint64_t> seed;
};

std::vector<double> parse_state(const std::string& text) {
    std::vector<double> x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw std::invalid_argument("drift: bad state entry '" + item + "'");
        x.push_back(v);
    }
    return x;
}

int cmd_drift(const DriftArgs& a, std::ostream& out) {
    const auto [doc, model] = load(a.config);
    require_finite(model, "drift");
    const std::uint64_t seed = resolve_seed(a.seed, model);
    const ReproductionMatrix H = build_H(model);
    const std::size_t n = model.size();

    std::vector<std::vector<double>> states;
    if (!a.state.empty()) {
        states.push_back(parse_state(a.state));
        if (states.back().size() != n)
            throw std::invalid_argument("drift: --state has " + std::to_string(states.back().size()) +
                                        " entries, model has " + std::to_string(n));
    } else {
        if (a.random == 0) throw std::invalid_argument("drift: give --state or --random");
        StreamEngine eng(derive_key(seed, {tag(Purpose::State)}));
        for (std::size_t r = 0; r < a.random; ++r) {
            std::vector<double> x(n);
            for (auto& v : x) v = a.max_state * (1.0 - eng.uniform());
            states.push_back(std::move(x));
        }
    }

    json rows = json::array();
    bool ordered = true, nonpositive = true;
    for (const auto& x : states) {
        const LyapunovDrift d = drift_of_lyapunov(model, H, x);
        ordered = ordered && d.exact <= d.bound;
        nonpositive = nonpositive && d.bound <= 0.0;
        rows.push_back({{"state", numbers(x)}, {"lyapunov", lyapunov_value(H, x)}, {"exact", d.exact},
                        {"bound", d.bound}});
    }
    const json result{{"rho", H.rho},
                      {"verdict", to_string(non_evanescence_verdict(H).verdict)},
                      {"m", numbers(H.m)},
                      {"states", rows},
                      {"exact_le_bound", ordered},
                      {"bound_nonpositive", nonpositive}};
    RunManifest m{"drift", config_hash(doc), seed, {}, {}};
    if (auto file = emit(result, a.out, out)) m.outputs.push_back(*file);
    finish_manifest(a.manifest, a.out, m);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    apply_worker_cap_from_env();

    CLI::App app{"Simulation and analysis of inhibitory interacting-neuron networks", "inhibnet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Thinning simulation of a finite network");
    s->add_option("--config", sim.config, "Model JSON")->required();
    s->add_option("--n-events", sim.n_events, "Number of proposals")->required()->check(CLI::PositiveNumber);
    s->add_option("--seed", sim.seed, "Master seed (default: config seed, else 0)");
    s->add_option("--out", sim.out, "Trajectory CSV")->required();
    s->add_option("--summary", sim.summary, "Summary JSON (default: stdout)");
    s->add_option("--manifest", sim.manifest, "Manifest path (default: <out>.manifest.json)");

    ConfigOnlyArgs spec;
    auto* sp = app.add_subcommand("spectral", "Reproduction matrix, Perron root and stability verdict");
    sp->add_option("--config", spec.config, "Model JSON")->required();
    sp->add_option("--out", spec.out, "Result JSON (default: stdout)");
    sp->add_option("--manifest", spec.manifest, "Manifest path");

    FirstJumpArgs fj;
    auto* f = app.add_subcommand("first-jump", "Survival function of the first accepted jump");
    f->add_option("--config", fj.config, "Model JSON")->required();
    f->add_option("--t-max", fj.t_max, "Grid end")->required()->check(CLI::PositiveNumber);
    f->add_option("--points", fj.points, "Grid points")->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
    f->add_option("--runs", fj.runs, "Thinning runs for an empirical comparison");
    f->add_option("--seed", fj.seed, "Master seed");
    f->add_option("--out", fj.out, "Result JSON (default: stdout)");
    f->add_option("--manifest", fj.manifest, "Manifest path");

    PerfectArgs pf;
    auto* p = app.add_subcommand("perfect", "Perfect simulation of the stationary state on the lattice");
    p->add_option("--config", pf.config, "Lattice model JSON")->required();
    p->add_option("--neuron", pf.neuron, "Root lattice site");
    p->add_option("--samples", pf.samples, "Number of samples")->check(CLI::PositiveNumber);
    p->add_option("--seed", pf.seed, "Master seed");
    p->add_option("--cap", pf.cap, "Scanned-event cap per sample")->check(CLI::PositiveNumber);
    p->add_option("--out", pf.out, "Samples CSV")->required();
    p->add_option("--density", pf.density, "Kernel density CSV (metadata in <density>.meta.json)");
    p->add_option("--grid", pf.grid, "Density grid size")->check(CLI::Range(std::size_t{2}, std::size_t{10'000'000}));
    p->add_option("--manifest", pf.manifest, "Manifest path");

    ContourArgs ct;
    auto* c = app.add_subcommand("contour", "Contour bound and branching diagnostics for delta");
    auto* od = c->add_option("--delta", ct.delta, "beta_* / (beta^* - beta_*)");
    auto* olo = c->add_option("--beta-min", ct.beta_min, "beta_*");
    auto* ohi = c->add_option("--beta-max", ct.beta_max, "beta^*");
    od->excludes(olo)->excludes(ohi);
    olo->needs(ohi);
    ohi->needs(olo);
    c->add_option("--out", ct.out, "Result JSON (default: stdout)");
    c->add_option("--manifest", ct.manifest, "Manifest path");

    DriftArgs dr;
    auto* d = app.add_subcommand("drift", "Lyapunov drift and its upper bound at given states");
    d->add_option("--config", dr.config, "Model JSON")->required();
    auto* ost = d->add_option("--state", dr.state, "Comma-separated state x1,...,xN");
    auto* orn = d->add_option("--random", dr.random, "Number of random states in (0, max-state]");
    ost->excludes(orn);
    d->add_option("--max-state", dr.max_state, "Upper end for random states")->check(CLI::PositiveNumber);
    d->add_option("--seed", dr.seed, "Seed for random states");
    d->add_option("--out", dr.out, "Result JSON (default: stdout)");
    d->add_option("--manifest", dr.manifest, "Manifest path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "inhibnet: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (s->parsed()) return cmd_simulate(sim, out);
        if (sp->parsed()) return cmd_spectral(spec, out, err);
        if (f->parsed()) return cmd_first_jump(fj, out);
        if (p->parsed()) return cmd_perfect(pf, out, err);
        if (c->parsed()) return cmd_contour(ct, out);
        if (d->parsed()) return cmd_drift(dr, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    err << app.help();
    return kUsage;
}

} // namespace inhibnet::cli
