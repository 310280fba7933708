// singma command-line entry point.
//
//   singma_cli <subcommand> [--config FILE] [--solver.h=0.0078125 ...] [key=value ...]
//
// Positional key=value pairs without a section take the subcommand's section
// (bootstrap n=3 q=1 steps=10).

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singma/harness.hpp"

namespace {

const std::map<std::string, std::string> kSection{
    {"verify-barriers", "verify"}, {"solve", "solver"},         {"fit-exponent", "fit"},
    {"compare", "compare"},        {"bootstrap", "bootstrap"}, {"mixc-probe", "rhs"},
    {"reproduce-all", "acceptance"},
};

const std::map<std::string, std::string> kHelp{
    {"verify-barriers", "check barrier inequalities, jets and scaling on seeded samples"},
    {"solve", "wide-stencil solve on a planar domain; nodal, summary and timing CSVs"},
    {"fit-exponent", "log-log slope of |u| against boundary distance along the axis"},
    {"compare", "pointwise ordering of two barriers or a barrier and a solve"},
    {"bootstrap", "exponent bootstrap recurrence against its closed form"},
    {"mixc-probe", "growth of the affine-sphere right-hand side near the boundary"},
    {"reproduce-all", "run the acceptance criteria and write a summary table"},
};

std::string qualify(const std::string& sub, const std::string& key) {
    if (singma::config_defaults().count(key) || key.find('.') != std::string::npos) return key;
    return kSection.at(sub) + "." + key;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular Monge-Ampere barriers, solver and exponent experiments"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app = nullptr;
        std::string config_file;
        std::vector<std::string> pairs;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, Sub> subs;
    for (const auto& name : singma::subcommands()) {
        Sub& s = subs[name];
        s.app = app.add_subcommand(name, kHelp.at(name));
        s.app->add_option("--config", s.config_file, "key=value configuration file")->check(CLI::ExistingFile);
        s.app->add_option("pairs", s.pairs, "key=value overrides");
        for (const auto& [key, def] : singma::config_defaults()) {
            s.app->add_option("--" + key, s.flags[key], "default: " + (def.empty() ? std::string("(none)") : def));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (auto& [name, s] : subs) {
        if (!s.app->parsed()) continue;
        singma::Config cfg;
        try {
            if (!s.config_file.empty()) cfg = singma::Config::load(s.config_file);
            for (const auto& pair : s.pairs) {
                const auto eq = pair.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw singma::ConfigError(pair, "is not of the form key=value");
                }
                cfg.set(qualify(name, pair.substr(0, eq)), pair.substr(eq + 1));
            }
            for (const auto& [key, value] : s.flags) {
                if (s.app->count("--" + key)) cfg.set(key, value);
            }
        } catch (const singma::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        const singma::RunOutcome res = singma::run(name, cfg, std::cerr);
        return res.exit_code;
    }
    return 2;
}
