// Command-line driver: batch verification of the weighted bounds, the
// power-weight sharpness experiment, and sparse decomposition of step
// functions.  Exit codes: 0 all inequalities held, 1 a violation was found,
// 2 usage or configuration error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/errors.hpp"
#include "dyadic/experiments.hpp"

namespace {

struct CommonOptions {
    dyadic::ExperimentConfig cfg;
    std::string config_path;
    std::string format = "json";
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON file supplying any flag; flags override it");
    cmd->add_option("--p", opt.cfg.p, "Lebesgue exponent p");
    cmd->add_option("--q", opt.cfg.q, "target exponent; must satisfy 1/q = 1/p - alpha/n");
    cmd->add_option("--alpha", opt.cfg.alpha, "fractional order alpha");
    cmd->add_option("--n", opt.cfg.n, "dimension");
    cmd->add_option("--root-level", opt.cfg.root_level, "root cube level K");
    cmd->add_option("--resolution-level", opt.cfg.resolution_level, "cell level L");
    cmd->add_option("--trials", opt.cfg.trials, "number of randomized trials");
    cmd->add_option("--seed", opt.cfg.seed, "base seed; fixes the whole report");
    cmd->add_option("--restarts", opt.cfg.restarts, "norm-estimate restarts");
    cmd->add_option("--deltas", opt.cfg.deltas, "sharpness delta list");
    cmd->add_option("--depth", opt.cfg.depth, "sharpness tower depth (shells)");
    cmd->add_option("--stopping-factor", opt.cfg.stopping_factor, "stopping-cube factor a");
    cmd->add_option("--input", opt.cfg.input, "input step-function file");
    cmd->add_option("--out", opt.cfg.out, "output report path");
    cmd->add_option("--format", opt.format, "json|csv (stdout format)")
        ->check(CLI::IsMember({"json", "csv"}));
}

// config file first, then flags override: values from the file become the
// parse defaults
void apply_config_file(CLI::App* cmd, CommonOptions& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream is(opt.config_path);
    if (!is) throw dyadic::InputError("config: cannot open " + opt.config_path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw dyadic::InputError(std::string("config: bad JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        CLI::Option* o = cmd->get_option_no_throw("--" + key);
        if (o == nullptr) throw dyadic::InputError("config: unknown key \"" + key + "\"");
        if (o->count() > 0) continue; // explicit flag wins
        if (value.is_array()) {
            std::vector<std::string> parts;
            for (const auto& v : value) parts.push_back(v.dump());
            o->add_result(parts);
        } else if (value.is_string()) {
            o->add_result(value.get<std::string>());
        } else {
            o->add_result(value.dump());
        }
        o->run_callback();
    }
}

int emit(const dyadic::ExperimentResult& res, const CommonOptions& opt) {
    std::cout << (opt.format == "csv" ? res.csv : res.json) << std::endl;
    return res.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic sparse-operator verification harness"};
    app.require_subcommand(1);

    CommonOptions verify_maximal, verify_cz, verify_frac, sharpness, decompose;
    CLI::App* cmd_maximal =
        app.add_subcommand("verify-maximal", "universal maximal operator bounds (weak and strong type)");
    add_common_flags(cmd_maximal, verify_maximal);
    CLI::App* cmd_cz = app.add_subcommand("verify-cz", "sparse Calderon-Zygmund weighted bound");
    add_common_flags(cmd_cz, verify_cz);
    CLI::App* cmd_frac = app.add_subcommand("verify-frac", "sparse fractional weighted bound");
    add_common_flags(cmd_frac, verify_frac);
    CLI::App* cmd_sharp = app.add_subcommand("sharpness", "power-weight blow-up slope experiment");
    add_common_flags(cmd_sharp, sharpness);
    CLI::App* cmd_dec = app.add_subcommand("sparse-decompose", "stopping-cube family of a step function");
    add_common_flags(cmd_dec, decompose);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_maximal->parsed()) {
            apply_config_file(cmd_maximal, verify_maximal);
            return emit(dyadic::run_verify_maximal(verify_maximal.cfg), verify_maximal);
        }
        if (cmd_cz->parsed()) {
            apply_config_file(cmd_cz, verify_cz);
            return emit(dyadic::run_verify_cz(verify_cz.cfg), verify_cz);
        }
        if (cmd_frac->parsed()) {
            apply_config_file(cmd_frac, verify_frac);
            return emit(dyadic::run_verify_frac(verify_frac.cfg), verify_frac);
        }
        if (cmd_sharp->parsed()) {
            apply_config_file(cmd_sharp, sharpness);
            return emit(dyadic::run_sharpness(sharpness.cfg), sharpness);
        }
        if (cmd_dec->parsed()) {
            apply_config_file(cmd_dec, decompose);
            return emit(dyadic::run_sparse_decompose(decompose.cfg), decompose);
        }
    } catch (const dyadic::FalsifiedLemmaError& e) {
        std::cerr << "violation: " << e.what() << std::endl;
        return 1;
    } catch (const dyadic::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
