#include <iostream>

#include "CLI11.hpp"
#include "kfrac/commands.hpp"
#include "kfrac/config.hpp"
#include "kfrac/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"kfrac: directional fractional operators and their spectral checks"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir = "reports";
    int levels = 0;
    std::uint64_t seed = 42;
    app.add_option("--config", config_path, "configuration file (built-in defaults when omitted)");
    app.add_option("--out", out_dir, "report directory")->capture_default_str();
    app.add_option("--levels", levels, "dyadic refinement levels of convergence studies (>= 2)");
    app.add_option("--seed", seed, "seed of the random test vectors")->capture_default_str();
    app.fallthrough();

    for (const auto& name : kfrac::subcommand_names()) app.add_subcommand(name, "run the " + name + " checks");
    app.add_subcommand("all", "run every check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const kfrac::Config cfg = config_path.empty() ? kfrac::Config::defaults() : kfrac::Config::load(config_path);
        kfrac::RunOptions opt;
        opt.out_dir = out_dir;
        if (app.count("--levels")) opt.levels = levels;
        opt.seed = seed;
        return kfrac::run(app.get_subcommands().front()->get_name(), cfg, opt, std::cout);
    } catch (const kfrac::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
