#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smc/acceptance/criteria.hpp"
#include "smc/cli/commands.hpp"
#include "smc/error.hpp"
#include "smc/parallel.hpp"

int main(int argc, char** argv)
{
    using namespace smc::cli;

    CLI::App app{"Particle smoothing experiments: PaRIS, particle Gibbs and score ascent"};
    app.require_subcommand(1);

    struct Options {
        std::string config_path;
        std::vector<std::string> overrides;
        bool check = false;
        std::uint64_t check_seed = smc::acceptance::kDefaultSeed;
    };
    Options opts;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", opts.config_path, "TOML config file");
        sub->add_option("-s,--set", opts.overrides, "override a config key: key=value (repeatable)");
        sub->add_flag("--check", opts.check, "run the built-in acceptance checks for this command instead");
        sub->add_option("--check-seed", opts.check_seed, "seed for --check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (const char* threads = std::getenv("SMC_THREADS")) {
        try {
            smc::set_thread_limit(std::stoi(threads));
        } catch (const std::exception&) {
            std::cerr << "config error: SMC_THREADS must be an integer\n";
            return kExitConfig;
        }
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (opts.check) return run_check(command, opts.check_seed, std::cout);

    Config cfg;
    try {
        if (!opts.config_path.empty()) cfg = Config::load(opts.config_path);
        for (const auto& o : opts.overrides) cfg.set(std::string_view(o));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run_command(command, cfg, std::cout, std::cerr);
}
