#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "see/cli.hpp"
#include "see/model.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<std::string> out;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", args.seed, "override config seed");
    sub->add_option("--trials", args.trials, "override config trial count");
    sub->add_option("--out", args.out, "override config output path");
}

see::cli::ExperimentConfig load(const CommonArgs& args, see::cli::Kind expected,
                                bool enforce_kind) {
    auto cfg = see::cli::load_config(args.config_path);
    if (enforce_kind && cfg.kind != expected)
        throw std::invalid_argument("config kind does not match subcommand");
    if (args.seed) cfg.seed = *args.seed;
    if (args.trials) cfg.trials = *args.trials;
    if (args.out) cfg.output_path = *args.out;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure energy efficiency: power allocation and outage analysis"};
    app.require_subcommand(1);

    CommonArgs optimize_args, outage_args, mc_args, sweep_args, verify_args;
    auto* optimize = app.add_subcommand("optimize", "solve the power-allocation problem");
    auto* outage = app.add_subcommand("outage", "closed-form outage probability");
    auto* mc = app.add_subcommand("mc", "Monte Carlo outage estimate");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    auto* verify = app.add_subcommand("verify", "closed-form vs Monte Carlo comparison");
    add_common(optimize, optimize_args);
    add_common(outage, outage_args);
    add_common(mc, mc_args);
    add_common(sweep, sweep_args);
    add_common(verify, verify_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : see::cli::kExitUsage;
    }

    try {
        using see::cli::Kind;
        if (optimize->parsed())
            return see::cli::run(load(optimize_args, Kind::optimize, true));
        if (outage->parsed()) return see::cli::run(load(outage_args, Kind::outage, true));
        if (mc->parsed()) return see::cli::run(load(mc_args, Kind::mc, true));
        if (sweep->parsed()) return see::cli::run(load(sweep_args, Kind::sweep, true));
        if (verify->parsed()) {
            auto cfg = load(verify_args, Kind::mc, false);
            const auto rep = see::cli::verify(cfg);
            for (const auto& line : rep.lines) std::cout << line << "\n";
            std::cout << "max deviation: " << rep.max_dev_stderr_units
                      << " stderr units (" << rep.max_abs_dev << " absolute) at "
                      << rep.worst_point << "\n";
            if (rep.stderr_dominates_tolerance)
                std::cout << "warning: Monte Carlo stderr dominates the comparison "
                             "tolerance; increase --trials\n";
            std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
            return rep.pass ? see::cli::kExitOk : see::cli::kExitNumerical;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return see::cli::kExitUsage;
    } catch (const see::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return see::cli::kExitNumerical;
    }
    return see::cli::kExitUsage;
}
