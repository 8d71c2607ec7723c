// ubiqlab: reproducible experiments on limsup sets from approximation
// systems — enumeration, eutaxy diagnostics, dimension brackets, gauge
// classification and random-covering simulation.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ubiq/runner.hpp"

namespace {

using nlohmann::ordered_json;

int run_with(ordered_json j, const std::string& out_dir) {
    if (!out_dir.empty()) j["out"] = out_dir;
    ubiq::run::ExperimentConfig cfg = ubiq::run::ExperimentConfig::from_json_text(j.dump());
    ubiq::run::RunResult res = ubiq::run::run_experiment(cfg);
    if (res.exit_code != 0) {
        std::cerr << res.error_record << "\n";
    } else {
        std::cout << "wrote outputs to " << (out_dir.empty() ? "." : out_dir) << " ("
                  << res.manifest.output_digests.size() << " files)\n";
    }
    return res.exit_code;
}

ordered_json parse_inline(const std::string& text, const std::string& what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        std::cerr << "{\"error\":{\"code\":2,\"kind\":\"schema\",\"message\":\"--" << what
                  << " is not valid JSON\"}}\n";
        std::exit(2);
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ubiqlab — limsup-set experiments at desk scale"};
    app.require_subcommand(1);

    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (default: current)")->capture_default_str();

    // run: full config file
    auto* run_cmd = app.add_subcommand("run", "run a JSON experiment config");
    std::string config_path;
    run_cmd->add_option("--config", config_path, "path to config.json")->required();

    // shared inline options
    std::string system_s, gauge_s, measure_s, radii_s, number_s, cube = "0:0", model = "dvoretzky", mode;
    std::uint64_t seed = 0, trials = 100, n_balls = 100;
    int jmax = 12, window = 4, depth = 3, resolution = 10;
    unsigned threads = 1;
    double height_max = 1000, tau = 3.0, t_param = 1.5, rho_min = 0.01;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--seed", seed, "experiment seed");
        c->add_option("--threads", threads, "worker threads (results are thread-count independent)");
    };

    auto* enum_cmd = app.add_subcommand("enumerate", "list system members by height");
    enum_cmd->add_option("--system", system_s, "system literal (JSON)")->required();
    enum_cmd->add_option("--height-max", height_max, "height bound");
    add_common(enum_cmd);

    auto* expo_cmd = app.add_subcommand("exponent", "critical / Diophantine exponents");
    expo_cmd->add_option("--number", number_s, "number literal (JSON)");
    expo_cmd->add_option("--radii", radii_s, "radius sequence literal (JSON)");
    expo_cmd->add_option("--measure", measure_s, "measure literal (JSON)");
    expo_cmd->add_option("--height-max", height_max, "q budget for kappa estimates");
    add_common(expo_cmd);

    auto* eut_cmd = app.add_subcommand("eutaxy", "dyadic-cube counts and eutaxy verdict");
    eut_cmd->add_option("--system", system_s, "system literal (JSON)")->required();
    eut_cmd->add_option("--cube", cube, "base cube gen:k[,k2]");
    eut_cmd->add_option("--jmax", jmax, "deepest generation offset");
    eut_cmd->add_option("--window", window, "trailing liminf window");
    add_common(eut_cmd);

    auto* dim_cmd = app.add_subcommand("dimension", "two-sided dimension bracket");
    dim_cmd->add_option("--tau", tau, "approximation exponent");
    dim_cmd->add_option("--depth", depth, "tree depth (generations below the root)");
    dim_cmd->add_option("--mode", mode, "bracket");
    add_common(dim_cmd);

    auto* cantor_cmd = app.add_subcommand("cantor", "build and check the nested-ball tree");
    cantor_cmd->add_option("--system", system_s, "system literal (JSON)");
    cantor_cmd->add_option("--t", t_param, "dilation exponent t > 1");
    cantor_cmd->add_option("--depth", depth, "generations below the root");
    cantor_cmd->add_option("--mode", mode, "strict | relaxed");
    auto* check_flag = cantor_cmd->add_flag("--check", "dump per-node data");
    add_common(cantor_cmd);

    auto* cls_cmd = app.add_subcommand("classify", "describability verdict and gauge outcome");
    cls_cmd->add_option("--system", system_s, "system literal (JSON)");
    cls_cmd->add_option("--measure", measure_s, "measure literal (JSON)");
    cls_cmd->add_option("--gauge", gauge_s, "gauge literal (JSON)");
    add_common(cls_cmd);

    auto* cover_cmd = app.add_subcommand("cover", "random covering simulation");
    cover_cmd->add_option("--model", model, "dvoretzky | poisson");
    cover_cmd->add_option("--radii", radii_s, "radius sequence literal (JSON)");
    cover_cmd->add_option("--measure", measure_s, "intensity measure literal (JSON)");
    cover_cmd->add_option("--N", n_balls, "balls per trial");
    cover_cmd->add_option("--trials", trials, "trial count");
    cover_cmd->add_option("--resolution", resolution, "grid generation j");
    cover_cmd->add_option("--rho-min", rho_min, "poisson truncation radius");
    add_common(cover_cmd);

    CLI11_PARSE(app, argc, argv);

    ordered_json j;
    j["seed"] = seed;
    j["budgets"] = {{"height_max", height_max}, {"j_max", jmax},      {"depth", depth},
                    {"trials", trials},         {"threads", threads}};

    if (run_cmd->parsed()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "{\"error\":{\"code\":2,\"kind\":\"schema\",\"message\":\"cannot read config file\"}}\n";
            return 2;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        ordered_json file_j = parse_inline(ss.str(), "config");
        return run_with(file_j, out_dir);
    }
    if (enum_cmd->parsed()) {
        j["command"] = "enumerate";
        j["system"] = parse_inline(system_s, "system");
    } else if (expo_cmd->parsed()) {
        j["command"] = "exponent";
        if (!number_s.empty()) j["number"] = parse_inline(number_s, "number");
        if (!radii_s.empty()) j["radii"] = parse_inline(radii_s, "radii");
        if (!measure_s.empty()) j["measure"] = parse_inline(measure_s, "measure");
    } else if (eut_cmd->parsed()) {
        j["command"] = "eutaxy";
        j["system"] = parse_inline(system_s, "system");
        j["cube"] = cube;
        j["window"] = window;
    } else if (dim_cmd->parsed()) {
        j["command"] = "dimension";
        j["tau"] = tau;
        j["mode"] = mode.empty() ? "bracket" : mode;
    } else if (cantor_cmd->parsed()) {
        j["command"] = "cantor";
        j["t"] = t_param;
        j["mode"] = mode.empty() ? "relaxed" : mode;
        if (!system_s.empty()) j["system"] = parse_inline(system_s, "system");
        if (check_flag->count() > 0) j["check"] = true;
    } else if (cls_cmd->parsed()) {
        j["command"] = "classify";
        if (!system_s.empty()) j["system"] = parse_inline(system_s, "system");
        if (!measure_s.empty()) j["measure"] = parse_inline(measure_s, "measure");
        if (!gauge_s.empty()) j["gauge"] = parse_inline(gauge_s, "gauge");
    } else if (cover_cmd->parsed()) {
        j["command"] = "cover";
        j["model"] = model;
        j["N"] = n_balls;
        j["resolution"] = resolution;
        j["rho_min"] = rho_min;
        if (!radii_s.empty()) j["radii"] = parse_inline(radii_s, "radii");
        if (!measure_s.empty()) j["measure"] = parse_inline(measure_s, "measure");
    }
    return run_with(j, out_dir);
}
