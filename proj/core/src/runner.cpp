#include "ubiq/runner.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "ubiq/config.hpp"
#include "ubiq/covering.hpp"
#include "ubiq/dimension.hpp"
#include "ubiq/eutaxy.hpp"
#include "ubiq/number.hpp"

namespace ubiq::run {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr const char* kVersion = "ubiqlab 0.1.0";

ordered_json parse_cfg(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw validation_error("config: not valid JSON");
    if (!j.is_object()) throw validation_error("config: expected a JSON object");
    return j;
}

}  // namespace

std::string fnv64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    bool need = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!need) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ordered_json j = parse_cfg(text);
    ExperimentConfig cfg;
    cfg.raw_json = j.dump();
    if (!j.contains("command") || !j["command"].is_string())
        throw validation_error("config field 'command': expected a string");
    cfg.command = j["command"].get<std::string>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) throw validation_error("config field 'seed': expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        if (b.contains("height_max")) cfg.budgets.height_max = b["height_max"].get<double>();
        if (b.contains("j_max")) cfg.budgets.j_max = b["j_max"].get<int>();
        if (b.contains("depth")) cfg.budgets.depth = b["depth"].get<int>();
        if (b.contains("trials")) cfg.budgets.trials = b["trials"].get<std::uint64_t>();
        if (b.contains("points")) cfg.budgets.points = b["points"].get<std::uint64_t>();
        if (b.contains("threads")) cfg.budgets.threads = b["threads"].get<unsigned>();
        if (cfg.budgets.height_max <= 0 || cfg.budgets.j_max < 0 || cfg.budgets.depth < 0 ||
            cfg.budgets.trials < 1 || cfg.budgets.threads < 1)
            throw validation_error("config field 'budgets': budgets must be positive");
    }
    return cfg;
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["schema_version"] = 1;
    j["artifact_version"] = artifact_version;
    j["wall_ms"] = wall_ms;
    j["truncated"] = truncated;
    j["shortfall"] = shortfall;
    ordered_json outs = ordered_json::array();
    for (const auto& [path, digest] : output_digests) outs.push_back({{"path", path}, {"digest", digest}});
    j["outputs"] = outs;
    j["config"] = ordered_json::parse(config_echo);
    return j.dump(2);
}

namespace {

struct OutputSink {
    std::filesystem::path dir;
    std::vector<std::pair<std::string, std::string>>* digests;

    void write(const std::string& name, const std::string& bytes) const {
        std::filesystem::path p = dir / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        digests->emplace_back(name, fnv64_hex(bytes));
    }
};

eutaxy::DyadicCube parse_cube(const ordered_json& j, int d) {
    // "gen:k" or "gen:k1,k2"
    if (!j.is_string()) throw validation_error("config field 'cube': expected \"gen:k[,k2]\"");
    std::string s = j.get<std::string>();
    auto colon = s.find(':');
    if (colon == std::string::npos) throw validation_error("config field 'cube': expected \"gen:k\"");
    eutaxy::DyadicCube c;
    c.gen = std::stoi(s.substr(0, colon));
    std::string rest = s.substr(colon + 1);
    std::size_t pos = 0;
    while (pos != std::string::npos && !rest.empty()) {
        auto comma = rest.find(',', pos);
        std::string tok = comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
        c.k.emplace_back(tok);
        pos = comma == std::string::npos ? std::string::npos : comma + 1;
    }
    if (static_cast<int>(c.k.size()) != d) throw validation_error("config field 'cube': dimension mismatch");
    return c;
}

std::unique_ptr<eutaxy::PointSource> source_from_system(const sys::ApproxSystemSpec& s,
                                                        const Budgets& budgets) {
    using Kind = sys::ApproxSystemSpec::Kind;
    if (s.kind == Kind::fractional_part) return eutaxy::fractional_part_source(s.generator);
    if (s.kind == Kind::random_uniform) return eutaxy::uniform_source(s.d, s.seed);
    // monotone enumeration of the system as a point sequence
    auto en = sys::enumerate_system(s, budgets.height_max, budgets.points);
    std::vector<Point> pts;
    pts.reserve(en.pairs.size());
    for (auto& p : en.pairs) pts.push_back(p.x);
    return eutaxy::list_source(std::move(pts));
}

// ---- command implementations ---------------------------------------------

void cmd_enumerate(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink& out,
                   ordered_json& report, RunManifest& mf) {
    auto s = config::parse_system(j.at("system"), "system");
    auto en = sys::enumerate_system(s, cfg.budgets.height_max, cfg.budgets.points);
    mf.truncated = en.truncated;
    std::string csv = "index,height,radius";
    for (int i = 0; i < s.d; ++i) csv += ",x" + std::to_string(i);
    csv += "\n";
    for (std::size_t i = 0; i < en.pairs.size(); ++i) {
        const auto& p = en.pairs[i];
        csv += std::to_string(i + 1) + "," + format_double(p.height) + "," + format_double(p.r);
        for (const auto& c : p.x) csv += "," + format_double(c.to_double());
        csv += "\n";
    }
    out.write("pairs.csv", csv);
    report["pairs"] = en.pairs.size();
    report["truncated"] = en.truncated;
}

void cmd_exponent(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink&,
                  ordered_json& report, RunManifest&) {
    bool any = false;
    if (j.contains("number")) {
        any = true;
        RealSpec x = config::parse_real(j["number"], "number");
        ordered_json r;
        auto cf = num::cf_expand(x, 24);
        ordered_json quot = ordered_json::array();
        for (const auto& a : cf.quotients) quot.push_back(a.convert_to<std::int64_t>());
        r["cf_quotients"] = quot;
        r["cf_complete"] = cf.complete;
        if (!x.is_rational()) {
            auto irr = num::irrationality_exponent(x, 16);
            r["tau_hat"] = irr.tau_hat;
            r["tau_exact"] = irr.exact;
            auto q_max = static_cast<std::uint64_t>(cfg.budgets.height_max);
            auto kap = num::kappa_exponents({x}, std::max<std::uint64_t>(q_max, 16),
                                            std::max<std::uint64_t>(q_max / 10, 4));
            r["kappa_star"] = kap.kappa_star;
            r["kappa"] = kap.kappa;
        }
        report["number"] = r;
    }
    if (j.contains("radii")) {
        any = true;
        auto radii = config::parse_radii(j["radii"], "radii");
        int d = j.contains("d") ? j["d"].get<int>() : 1;
        ordered_json r;
        r["critical_exponent"] = seq::critical_exponent(radii, d);
        auto pd = seq::is_pd(radii, d);
        r["pd"] = pd.tag == seq::PdTag::in_pd ? "in" : (pd.tag == seq::PdTag::not_in_pd ? "out" : "band");
        r["pd_reason"] = pd.reason;
        report["radii"] = r;
    }
    if (j.contains("measure")) {
        any = true;
        auto nu = config::parse_measure(j["measure"], "measure");
        report["measure_exponent"] = gauge::exponent_of_measure(nu, nu.d);
    }
    if (!any) throw validation_error("config: 'exponent' needs one of number/radii/measure");
}

void cmd_eutaxy(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink& out,
                ordered_json& report, RunManifest&) {
    auto s = config::parse_system(j.at("system"), "system");
    auto src = source_from_system(s, cfg.budgets);
    eutaxy::DyadicCube cube =
        j.contains("cube") ? parse_cube(j["cube"], src->dim()) : eutaxy::DyadicCube::unit(src->dim());
    unsigned window = j.contains("window") ? j["window"].get<unsigned>() : 4;
    auto prof = eutaxy::eutaxy_profile(*src, cube, cfg.budgets.j_max, window, cfg.budgets.points,
                                       cfg.budgets.threads);
    std::string csv = "j,count,normalized\n";
    for (std::size_t i = 0; i < prof.counts.size(); ++i)
        csv += std::to_string(i) + "," + std::to_string(prof.counts[i]) + "," +
               format_double(prof.normalized[i]) + "\n";
    out.write("eutaxy.csv", csv);
    eutaxy::EutaxyThresholds th;
    if (j.contains("threshold_low")) th.low = j["threshold_low"].get<double>();
    if (j.contains("threshold_zero")) th.zero = j["threshold_zero"].get<double>();
    report["trailing_min"] = prof.trailing_min;
    report["verdict"] = eutaxy::to_string(eutaxy::eutaxy_verdict(prof, th));
    report["verdict_scale"] = "desk-scale heuristic";
    report["note"] = prof.note;
}

void cmd_dimension(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink&,
                   ordered_json& report, RunManifest& mf) {
    double tau = j.contains("tau") ? j["tau"].get<double>() : 3.0;
    std::string mode = j.contains("mode") ? j["mode"].get<std::string>() : "bracket";
    if (mode != "bracket") throw validation_error("config field 'mode': only 'bracket' is supported");
    int d = j.contains("d") ? j["d"].get<int>() : 1;
    if (d != 1) throw unsupported_error("dimension bracket: only d = 1 is supported");
    // upper bound: analytic covering exponent of the tau-system
    sys::RateSpec target_psi{1.0, tau, 0.0};
    auto target = sys::ApproxSystemSpec::hom_rational(1, target_psi, sys::Box::interval(0.0, 1.0));
    auto upper = dim::covering_exponent(target, target.region);
    // lower bound: relaxed-mode tree on the base (ubiquitous) system
    double t = tau * d / (d + 1.0);
    sys::RateSpec base_psi{1.0, 1.0 + 1.0 / d, 0.0};
    auto base = sys::ApproxSystemSpec::hom_rational(1, base_psi, sys::Box::interval(0.0, 1.0));
    dim::CantorTree tree = dim::build_cantor(base, t, base.region, cfg.budgets.depth, dim::CantorMode::relaxed);
    dim::MinDimInput in;
    in.m = tree.branching_minima();
    in.eps = tree.separation_minima();
    double lower = 0.0;
    bool hypotheses_ok = true;
    try {
        lower = dim::mindim_bound(in, 1).value;
    } catch (const domain_error&) {
        hypotheses_ok = false;
    }
    report["upper"] = upper.value;
    report["upper_method"] = upper.method;
    report["lower"] = lower;
    report["lower_hypotheses_ok"] = hypotheses_ok;
    ordered_json ts;
    ts["nodes"] = tree.nodes.size();
    ts["depth"] = tree.depth;
    ts["mode"] = "relaxed";
    report["tree_stats"] = ts;
    mf.shortfall = false;
}

void cmd_cantor(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink& out,
                ordered_json& report, RunManifest&) {
    double t = j.contains("t") ? j["t"].get<double>() : 1.5;
    std::string mode_s = j.contains("mode") ? j["mode"].get<std::string>() : "relaxed";
    dim::CantorMode mode = mode_s == "strict" ? dim::CantorMode::strict : dim::CantorMode::relaxed;
    sys::ApproxSystemSpec s = j.contains("system")
                                  ? config::parse_system(j["system"], "system")
                                  : sys::ApproxSystemSpec::hom_rational(1, sys::RateSpec{1.0, 2.0, 0.0},
                                                                        sys::Box::interval(0.0, 1.0));
    dim::CantorTree tree = dim::build_cantor(s, t, s.region, cfg.budgets.depth, mode);
    auto rep = tree.check_conditions();
    report["nodes"] = tree.nodes.size();
    report["mode"] = mode_s;
    report["conditions_pass"] = rep.all(mode == dim::CantorMode::strict);
    ordered_json cj;
    cj["every_node_has_child"] = rep.every_node_has_child;
    cj["root_mass_formula"] = rep.root_mass_formula;
    cj["nested_compacts"] = rep.nested_compacts;
    cj["diameter_clause"] = rep.diameter_clause;
    cj["disjoint_siblings"] = rep.disjoint_siblings;
    cj["sibling_measure_bound"] = rep.sibling_measure_bound;
    cj["mass_additivity"] = rep.mass_additivity;
    report["conditions"] = cj;
    if (j.contains("check") && j["check"].get<bool>()) {
        std::string csv = "node,depth,parent,children,center,ball_radius,zeta\n";
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& n = tree.nodes[i];
            csv += std::to_string(i) + "," + std::to_string(n.depth) + "," + std::to_string(n.parent) + "," +
                   std::to_string(n.children.size()) + "," + format_double(to_double(n.center)) + "," +
                   format_double(to_double(n.ball_radius)) + "," + format_double(n.zeta) + "\n";
        }
        out.write("cantor_nodes.csv", csv);
    }
}

void cmd_classify(const ordered_json& j, const ExperimentConfig&, const OutputSink&, ordered_json& report,
                  RunManifest&) {
    gauge::DescribabilityVerdict verdict = gauge::DescribabilityVerdict::lebesgue_full(1);
    if (j.contains("system")) {
        auto s = config::parse_system(j["system"], "system");
        verdict = sys::system_describability(s);
    } else if (j.contains("measure")) {
        verdict = gauge::DescribabilityVerdict::nu_describable(config::parse_measure(j["measure"], "measure"));
    } else if (j.contains("s_describable")) {
        int d = j.contains("d") ? j["d"].get<int>() : 1;
        verdict = gauge::DescribabilityVerdict::s_describable(j["s_describable"].get<double>(), d);
    } else {
        throw validation_error("config: 'classify' needs a system, measure, or s_describable");
    }
    report["describable"] = verdict.describe();
    if (verdict.kind == gauge::DescribabilityVerdict::Kind::nu_describable)
        report["set_dimension"] = gauge::exponent_of_measure(*verdict.nu, verdict.d);
    if (j.contains("gauge")) {
        auto g = config::parse_gauge(j["gauge"], "gauge");
        report["gauge"] = g.describe();
        report["gauge_outcome"] = gauge::to_string(gauge::classify_gauge(verdict, g));
    }
}

void cmd_cover(const ordered_json& j, const ExperimentConfig& cfg, const OutputSink& out,
               ordered_json& report, RunManifest&) {
    std::string model = j.contains("model") ? j["model"].get<std::string>() : "dvoretzky";
    if (model == "dvoretzky") {
        auto radii = config::parse_radii(j.at("radii"), "radii");
        auto n = j.contains("N") ? j["N"].get<std::uint64_t>() : 100;
        int resolution = j.contains("resolution") ? j["resolution"].get<int>() : 10;
        bool torus = j.contains("torus") && j["torus"].get<bool>();
        sys::Box box = j.contains("region") ? config::parse_box(j["region"], "region")
                                            : sys::Box::interval(0.0, 1.0);
        auto rep = cover::simulate_uniform(box, radii, n, resolution, cfg.budgets.trials, cfg.seed, torus,
                                           cfg.budgets.threads);
        std::string csv = "trial,covered_fraction\n";
        for (std::size_t tindex = 0; tindex < rep.covered_fraction.size(); ++tindex)
            csv += std::to_string(tindex) + "," + format_double(rep.covered_fraction[tindex]) + "\n";
        out.write("trials.csv", csv);
        std::string tail_csv = "m,mean_tail_fraction\n";
        for (auto& [m, f] : rep.tail_coverage) tail_csv += std::to_string(m) + "," + format_double(f) + "\n";
        out.write("tails.csv", tail_csv);
        report["mean_covered"] = rep.mean_covered;
        report["mean_uncovered"] = rep.mean_uncovered;
        report["trials"] = rep.trials;
    } else if (model == "poisson") {
        auto nu = config::parse_measure(j.at("measure"), "measure");
        double rho_min = j.contains("rho_min") ? j["rho_min"].get<double>() : 0.01;
        sys::Box box = j.contains("region") ? config::parse_box(j["region"], "region")
                                            : sys::Box::interval(0.0, 1.0);
        std::vector<double> grid = {rho_min};
        if (j.contains("rho_grid")) grid = j["rho_grid"].get<std::vector<double>>();
        auto rows = cover::poisson_intensity_check(nu, box, grid, cfg.budgets.trials, cfg.seed);
        std::string csv = "rho,empirical_mean,expected,z\n";
        ordered_json jr = ordered_json::array();
        for (auto& r : rows) {
            csv += format_double(r.rho) + "," + format_double(r.empirical_mean) + "," +
                   format_double(r.expected) + "," + format_double(r.z_score) + "\n";
            jr.push_back({{"rho", r.rho}, {"mean", r.empirical_mean}, {"expected", r.expected}, {"z", r.z_score}});
        }
        out.write("intensity.csv", csv);
        report["intensity"] = jr;
    } else {
        throw validation_error("config field 'model': expected dvoretzky or poisson");
    }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult res;
    res.manifest.artifact_version = kVersion;
    res.manifest.config_echo = cfg.raw_json;
    auto t0 = std::chrono::steady_clock::now();
    auto fail = [&](int code, const std::string& kind, const std::string& what) {
        ordered_json e;
        e["error"] = {{"code", code}, {"kind", kind}, {"message", what}};
        res.error_record = e.dump();
        res.exit_code = code;
        return res;
    };
    try {
        ordered_json j = parse_cfg(cfg.raw_json);
        std::filesystem::path dir = cfg.out_dir.empty() ? std::filesystem::current_path()
                                                        : std::filesystem::path(cfg.out_dir);
        std::filesystem::create_directories(dir);
        OutputSink sink{dir, &res.manifest.output_digests};
        ordered_json report;
        report["schema_version"] = 1;
        report["command"] = cfg.command;
        report["seed"] = cfg.seed;

        if (cfg.command == "enumerate")
            cmd_enumerate(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "exponent")
            cmd_exponent(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "eutaxy")
            cmd_eutaxy(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "dimension")
            cmd_dimension(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "cantor")
            cmd_cantor(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "classify")
            cmd_classify(j, cfg, sink, report, res.manifest);
        else if (cfg.command == "cover")
            cmd_cover(j, cfg, sink, report, res.manifest);
        else
            throw validation_error("config field 'command': unknown command '" + cfg.command + "'");

        sink.write(cfg.report_name, report.dump(2) + "\n");
        res.manifest.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        // the manifest carries the output digests, so it is written directly
        std::ofstream mf(dir / "manifest.json", std::ios::binary);
        mf << res.manifest.to_json() << "\n";
        return res;
    } catch (const validation_error& e) {
        return fail(schema_violation, "schema", e.what());
    } catch (const budget_exceeded& e) {
        return fail(budget_overflow, "budget", e.what());
    } catch (const ubiq::precision_exhausted& e) {
        return fail(ExitCode::precision_exhausted, "precision", e.what());
    } catch (const unsupported_error& e) {
        return fail(unsupported, "unsupported", e.what());
    } catch (const std::exception& e) {
        return fail(generic_error, "error", e.what());
    }
}

}  // namespace ubiq::run
