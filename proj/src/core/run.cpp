#include "core/run.hpp"

#include "core/conditions.hpp"
#include "core/config.hpp"
#include "core/counterexample.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/sampler.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#ifndef LINPROC_VERSION
#define LINPROC_VERSION "v0.0.0-unknown"
#endif

namespace linproc {

const char* version_string() noexcept { return LINPROC_VERSION; }

const std::vector<std::string>& commands() {
    static const std::vector<std::string> names = {"check",    "build", "simulate", "annealed", "quenched",
                                                   "failure",  "wip",   "tn",       "trends"};
    return names;
}

const std::string& RunResult::artifact(const std::string& name) const {
    for (const auto& [file, contents] : artifacts)
        if (file == name) return contents;
    fail(ErrorCode::invalid_argument, "no artifact named '" + name + "'");
}

namespace {

struct Setup {
    LinearProcess process;
    std::optional<CounterexampleSpec> spec;
};

CoefficientSeq load_coefficients(const Config& cfg) {
    const double tail = cfg.get_double("tail_l2", 0.0);
    if (cfg.has("coefficients_file")) {
        if (cfg.has("coefficients"))
            fail(ErrorCode::parse, "give either 'coefficients' or 'coefficients_file', not both");
        std::filesystem::path p(cfg.get("coefficients_file", ""));
        if (p.is_relative() && !cfg.base_dir().empty()) p = std::filesystem::path(cfg.base_dir()) / p;
        auto a = read_coefficients_csv(p.string());
        if (cfg.has("tail_l2")) return CoefficientSeq(std::vector<double>(a.values().begin(), a.values().end()), tail);
        return a;
    }
    auto values = cfg.get_double_list("coefficients");
    if (values.empty()) values = {1.0};
    return CoefficientSeq(std::move(values), tail);
}

Setup make_setup(const Config& cfg) {
    const auto kind = cfg.get("process", "linear");
    Setup s;
    if (kind == "counterexample") {
        for (const char* key : {"coefficients", "coefficients_file", "tail_l2"})
            if (cfg.has(key)) fail(ErrorCode::parse, std::string("key '") + key + "' does not apply to the counterexample");
        if (cfg.get("innovation", "towers") != "towers")
            fail(ErrorCode::parse, "the counterexample is driven by the tower innovation");
        CounterexampleParams p;
        p.V = cfg.get_uint_list("V");
        p.N = cfg.get_uint_list("N");
        p.kappa = cfg.get_double_list("kappa");
        for (auto k : cfg.get_uint_list("scheduled")) p.scheduled.push_back(static_cast<std::size_t>(k));
        p.renormalize = cfg.get_bool("renormalize", true);
        if (cfg.has("K") && cfg.get_uint("K", 0) != p.V.size())
            fail(ErrorCode::parse, "K = " + cfg.get("K", "") + " but V lists " + std::to_string(p.V.size()) + " blocks");
        s.spec = make_counterexample(p);
        s.process.coefficients = coefficients_of_f(*s.spec);
        if (!s.spec->N.empty()) s.process.innovations = InnovationModel::towers(innovation_spec(*s.spec));
        else s.process.innovations = InnovationModel::rademacher();
    } else if (kind == "linear") {
        for (const char* key : {"K", "V", "N", "kappa", "scheduled", "renormalize"})
            if (cfg.has(key)) fail(ErrorCode::parse, std::string("key '") + key + "' needs process=counterexample");
        s.process.coefficients = load_coefficients(cfg);
        const auto inn = cfg.get("innovation", "rademacher");
        if (inn == "rademacher") s.process.innovations = InnovationModel::rademacher();
        else if (inn == "gaussian") s.process.innovations = InnovationModel::gaussian();
        else fail(ErrorCode::parse, "innovation must be rademacher or gaussian for a linear process, got '" + inn + "'");
    } else {
        fail(ErrorCode::parse, "process must be 'linear' or 'counterexample', got '" + kind + "'");
    }
    return s;
}

const CounterexampleSpec& need_spec(const Setup& s, const std::string& command) {
    if (!s.spec) fail(ErrorCode::parse, "command '" + command + "' needs process=counterexample");
    if (s.spec->N.empty()) fail(ErrorCode::parse, "command '" + command + "' needs tower scales N");
    return *s.spec;
}

std::string header(std::uint64_t seed) {
    return std::string("# linproc ") + version_string() + " seed=" + std::to_string(seed) + "\n";
}

std::string experiment_csv(const ExperimentReport& rep, std::uint64_t seed) {
    std::string out = header(seed);
    out += csv::join_row({"kind", "name", "value", "relation", "threshold", "pass"}) + "\n";
    for (const auto& [name, value] : rep.statistics)
        out += csv::join_row({"stat", name, csv::format_double(value), "", "", ""}) + "\n";
    for (const auto& v : rep.verdicts)
        out += csv::join_row({"verdict", v.name, csv::format_double(v.value), v.relation,
                              csv::format_double(v.threshold), v.pass ? "true" : "false"}) +
               "\n";
    return out;
}

std::string experiment_summary(const ExperimentReport& rep, std::uint64_t seed) {
    std::ostringstream os;
    os << header(seed) << "experiment " << rep.name << "\n";
    for (const auto& [name, value] : rep.statistics) os << "  " << name << " = " << csv::format_double(value) << "\n";
    for (const auto& v : rep.verdicts)
        os << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << csv::format_double(v.value) << " " << v.relation << " "
           << csv::format_double(v.threshold) << "\n";
    os << "verdict: " << (rep.pass() ? "pass" : "fail") << "\n";
    return os.str();
}

std::string ecdf_csv(const std::vector<double>& sorted, std::uint64_t seed) {
    std::string out = header(seed) + "value,ecdf\n";
    const double m = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out += csv::format_double(sorted[i]) + "," + csv::format_double(static_cast<double>(i + 1) / m) + "\n";
    return out;
}

// Empirical distribution function against the standard normal one.
std::string ecdf_svg(const std::vector<double>& sorted, std::uint64_t seed, const std::string& title) {
    const double W = 640, H = 400, pad = 40;
    const double lo = -4, hi = 4;
    auto px = [&](double x) { return pad + (std::clamp(x, lo, hi) - lo) / (hi - lo) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - y * (H - 2 * pad); };
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--" << header(seed).substr(1) << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\" points=\"";
    for (int i = 0; i <= 200; ++i) {
        const double x = lo + (hi - lo) * i / 200.0;
        os << px(x) << "," << py(normal_cdf(x)) << " ";
    }
    os << "\"/>\n<polyline fill=\"none\" stroke=\"#1f5fa8\" points=\"";
    const std::size_t step = std::max<std::size_t>(1, sorted.size() / 2000);
    for (std::size_t i = 0; i < sorted.size(); i += step)
        os << px(sorted[i]) << "," << py(static_cast<double>(i + 1) / static_cast<double>(sorted.size())) << " ";
    os << "\"/>\n</svg>\n";
    return os.str();
}

struct Context {
    Config cfg;
    Setup setup;
    std::uint64_t seed = default_seed;
    unsigned threads = 1;
    std::string command;
};

void finish_experiment(RunResult& out, const Context& ctx, const ExperimentReport& rep, bool distribution) {
    out.pass = rep.pass();
    out.summary = experiment_summary(rep, ctx.seed);
    out.artifacts.emplace_back("report.csv", experiment_csv(rep, ctx.seed));
    out.artifacts.emplace_back("summary.txt", out.summary);
    if (distribution) {
        out.artifacts.emplace_back("ecdf.csv", ecdf_csv(rep.ecdf_samples, ctx.seed));
        if (ctx.cfg.get_bool("svg", false))
            out.artifacts.emplace_back("ecdf.svg", ecdf_svg(rep.ecdf_samples, ctx.seed, rep.name));
    }
}

std::size_t default_n_max(const Setup& s) {
    if (!s.spec) return 1000;
    std::uint64_t m = s.spec->V_max();
    for (auto n : s.spec->N) m = std::max(m, 4 * n);
    return std::max<std::size_t>(m, 2);
}

void do_check(RunResult& out, const Context& ctx) {
    const auto& a = ctx.setup.process.coefficients;
    const auto n_max = ctx.cfg.get_uint("n_max", default_n_max(ctx.setup));
    const auto W = ctx.cfg.get_uint("past_window", a.last_index());
    const auto profile = variance_profile(a, n_max, W);
    const auto rep = condition_report(a, profile, n_max, ctx.setup.spec ? &*ctx.setup.spec : nullptr);
    std::string csv_text = header(ctx.seed) + csv::join_row(ConditionReport::csv_header()) + "\n" +
                           csv::join_row(rep.csv_row()) + "\n";
    out.pass = true;
    out.summary = header(ctx.seed) + rep.text();
    out.artifacts.emplace_back("report.csv", csv_text);
    out.artifacts.emplace_back("summary.txt", out.summary);
}

void do_build(RunResult& out, const Context& ctx) {
    if (!ctx.setup.spec) fail(ErrorCode::parse, "command 'build' needs process=counterexample");
    const auto& spec = *ctx.setup.spec;
    const auto& a = ctx.setup.process.coefficients;
    std::ostringstream sum;
    sum << header(ctx.seed) << "counterexample K=" << spec.K << " support a_0..a_" << a.last_index()
        << (spec.renormalize ? " (renormalized weights)" : " (raw weights)") << "\n";
    for (std::size_t k = 0; k < spec.K; ++k)
        sum << "  gamma_" << k + 1 << " = " << csv::format_double(spec.gamma[k]) << "  V_" << k + 1 << " = "
            << spec.V[k] << "\n";

    std::string report = header(ctx.seed) + csv::join_row({"constraint", "lhs", "rhs", "margin", "pass"}) + "\n";
    out.pass = true;
    if (!spec.N.empty()) {
        std::uint64_t need = 0;
        for (auto n : spec.N) need = std::max(need, 4 * n);
        const auto profile = variance_profile(a, need);
        const auto v = validate_schedule(spec, profile);
        for (const auto& c : v.checks) {
            report += csv::join_row({c.name, csv::format_double(c.lhs), csv::format_double(c.rhs),
                                     csv::format_double(c.margin), c.pass ? "true" : "false"}) +
                      "\n";
            sum << (c.pass ? "PASS " : "FAIL ") << c.name << ": lhs " << csv::format_double(c.lhs) << ", rhs "
                << csv::format_double(c.rhs) << "\n";
        }
        for (std::size_t k = 0; k < v.divergence.size(); ++k)
            sum << "  sqrt(V_" << k + 1 << ")(1 - sum_{j<=" << k + 2 << "} gamma_j) = "
                << csv::format_double(v.divergence[k]) << "\n";
        const auto inn = innovation_spec(spec);
        sum << "  innovation d = " << csv::format_double(inn.d) << ", ||e||^2 = " << csv::format_double(inn.norm_sq())
            << "\n";
        out.pass = v.pass();
    }
    sum << "verdict: " << (out.pass ? "pass" : "fail") << "\n";
    out.summary = sum.str();
    out.artifacts.emplace_back("coefficients.csv",
                               coefficients_csv(a, std::string("linproc ") + version_string() +
                                                       " seed=" + std::to_string(ctx.seed)));
    out.artifacts.emplace_back("report.csv", report);
    out.artifacts.emplace_back("summary.txt", out.summary);
}

void do_simulate(RunResult& out, const Context& ctx) {
    const auto& p = ctx.setup.process;
    const auto N = ctx.cfg.get_uint("n", 1000);
    const auto W = ctx.cfg.get_uint("past_window", p.coefficients.last_index());
    const auto omega = sample_omega(p.innovations, W, split_seed(ctx.seed, {0}));
    const auto path = path_sum(p, omega, N, SignStream(split_seed(ctx.seed, {1})));

    ExperimentReport rep;
    rep.name = "simulate";
    rep.seed = ctx.seed;
    rep.add("N", static_cast<double>(N));
    rep.add("S_N", path.s.back());
    rep.add("cond_exp", path.cond_exp);
    rep.add("innovations_used", static_cast<double>(path.innovations_used));
    for (std::size_t k = 0; k < omega.phases.size(); ++k)
        rep.add("phase_" + std::to_string(k + 1), static_cast<double>(omega.phases[k]));

    std::string path_csv = header(ctx.seed) + "n,S_n\n";
    for (std::size_t n = 1; n <= N; ++n) path_csv += std::to_string(n) + "," + csv::format_double(path.s[n - 1]) + "\n";
    finish_experiment(out, ctx, rep, false);
    out.artifacts.emplace_back("path.csv", path_csv);
}

void do_experiment(RunResult& out, const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto& cmd = ctx.command;
    if (cmd == "annealed") {
        AnnealedOptions o;
        o.N = cfg.get_uint("n", ctx.setup.spec ? ctx.setup.spec->V_max() : 10'000);
        o.M = cfg.get_uint("replicates", o.M);
        o.ks_max = cfg.get_double("ks_max", o.ks_max);
        finish_experiment(out, ctx, annealed_clt(ctx.setup.process, o, ctx.seed, ctx.threads), true);
    } else if (cmd == "quenched") {
        QuenchedOptions o;
        o.N = cfg.get_uint("n", 10'000);
        o.M = cfg.get_uint("replicates", o.M);
        o.omegas = cfg.get_uint("omegas", o.omegas);
        o.ks_max = cfg.get_double("ks_max", o.ks_max);
        finish_experiment(out, ctx, quenched_clt(ctx.setup.process, o, ctx.seed, ctx.threads), true);
    } else if (cmd == "failure") {
        FailureOptions o;
        o.tower = cfg.get_uint("tower", o.tower);
        o.N = cfg.get_uint("n", 0);
        o.M = cfg.get_uint("replicates", o.M);
        o.threshold = cfg.get_optional_double("threshold");
        finish_experiment(out, ctx, quenched_failure(need_spec(ctx.setup, cmd), o, ctx.seed, ctx.threads), true);
    } else if (cmd == "wip") {
        WipOptions o;
        o.tower = cfg.get_uint("tower", o.tower);
        o.M = cfg.get_uint("replicates", o.M);
        o.threshold = cfg.get_optional_double("threshold");
        finish_experiment(out, ctx, wip_failure(need_spec(ctx.setup, cmd), o, ctx.seed, ctx.threads), true);
    } else if (cmd == "tn") {
        TnOptions o;
        o.orbit_length = cfg.get_uint("orbit_length", o.orbit_length);
        o.orbits = cfg.get_uint("orbits", o.orbits);
        o.spread_max = cfg.get_double("spread_max", o.spread_max);
        for (auto n : cfg.get_uint_list("grid")) o.grid.push_back(n);
        finish_experiment(out, ctx, tn_convergence(ctx.setup.process, o, ctx.seed, ctx.threads), false);
    } else if (cmd == "trends") {
        TrendOptions o;
        o.band_min = cfg.get_double("band_min", o.band_min);
        if (!ctx.setup.spec) fail(ErrorCode::parse, "command 'trends' needs process=counterexample");
        auto rep = ratio_trends(*ctx.setup.spec, o);
        rep.seed = ctx.seed;
        finish_experiment(out, ctx, rep, false);
    }
}

} // namespace

RunResult prepare(const RunRequest& request) {
    const auto& names = commands();
    if (std::find(names.begin(), names.end(), request.command) == names.end())
        fail(ErrorCode::invalid_argument, "unknown command '" + request.command + "'");
    if (request.threads == 0) fail(ErrorCode::invalid_argument, "threads must be at least 1");

    Context ctx;
    ctx.command = request.command;
    ctx.threads = request.threads;
    ctx.cfg = request.spec_path.empty() ? Config() : Config::load(request.spec_path);
    for (const auto& o : request.overrides) ctx.cfg.apply_override(o);
    if (request.seed) ctx.cfg.set("seed", std::to_string(*request.seed));
    ctx.seed = ctx.cfg.get_uint("seed", default_seed);
    ctx.cfg.set("seed", std::to_string(ctx.seed));
    ctx.setup = make_setup(ctx.cfg);

    RunResult out;
    out.artifacts.emplace_back("config.txt", header(ctx.seed) + "command=" + ctx.command + "\n" + ctx.cfg.echo());
    if (ctx.command == "check") do_check(out, ctx);
    else if (ctx.command == "build") do_build(out, ctx);
    else if (ctx.command == "simulate") do_simulate(out, ctx);
    else do_experiment(out, ctx);
    return out;
}

RunResult run(const RunRequest& request) {
    auto result = prepare(request);
    if (request.out_dir.empty()) return result;
    std::error_code ec;
    std::filesystem::create_directories(request.out_dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory '" + request.out_dir + "': " + ec.message());
    for (const auto& [name, contents] : result.artifacts)
        csv::write_file((std::filesystem::path(request.out_dir) / name).string(), contents);
    return result;
}

} // namespace linproc
