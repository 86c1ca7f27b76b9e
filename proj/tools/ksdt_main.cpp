#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksdt/errors.hpp"
#include "ksdt/runner.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (!cell.empty()) out.push_back(std::stod(cell));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::istringstream in(csv);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (!cell.empty()) out.push_back(std::stoi(cell));
    }
    return out;
}

std::string trace_name(const std::string& stem) { return stem + ".csv"; }

void run_one(ksdt::RunConfig cfg, const fs::path& out_dir, const std::string& stem) {
    fs::create_directories(out_dir);
    const ksdt::RunResult result = ksdt::run_experiment(cfg);
    const fs::path trace_path = out_dir / trace_name(stem);
    ksdt::write_trace(result.trace, trace_path.string(), cfg);
    std::cout << stem << ": final |D|=" << result.final_dict_size
              << " ksd=" << result.final_ksd
              << " normalized=" << result.final_normalized_ksd << " -> "
              << trace_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online MCMC thinning via kernelized Stein discrepancy"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run config file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed_override, "override the config seed");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "execute one configured run");

    std::string sweep_param;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "sweep a parameter, e.g. --param alpha=1.2,1.5");
    sweep_cmd->add_option("--param", sweep_param, "name=v1,v2,... (alpha supported)")
        ->required();

    std::string modes_arg = "1,2,4,10";
    CLI::App* modes_cmd =
        app.add_subcommand("modes", "mode-adaptation study over grid mixtures");
    modes_cmd->add_option("--modes", modes_arg, "comma-separated mode counts");
    std::int64_t mode_seeds = 5;
    modes_cmd->add_option("--seeds", mode_seeds, "number of seeds to average over");

    add_common(run_cmd);
    add_common(sweep_cmd);
    add_common(modes_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        ksdt::RunConfig cfg = ksdt::RunConfig::from_file(config_path);
        if (seed_override) cfg.seed = *seed_override;

        if (*run_cmd) {
            run_one(cfg, out_dir, "trace");
        } else if (*sweep_cmd) {
            const std::size_t eq = sweep_param.find('=');
            if (eq == std::string::npos) {
                throw ksdt::ConfigError("--param must look like name=v1,v2,...");
            }
            const std::string name = sweep_param.substr(0, eq);
            if (name != "alpha") {
                throw ksdt::ConfigError("unsupported sweep parameter: " + name);
            }
            const std::vector<double> alphas =
                parse_double_list(sweep_param.substr(eq + 1));
            fs::create_directories(out_dir);
            for (const auto& [alpha, result] : ksdt::alpha_sweep(alphas, cfg)) {
                std::ostringstream stem;
                stem << "alpha_" << alpha;
                ksdt::RunConfig cell = cfg;
                cell.thinning.growth =
                    alpha == 2.0 ? ksdt::GrowthSchedule::linear(0.5)
                                 : ksdt::GrowthSchedule::power_log(alpha, 0.5);
                const fs::path trace_path = fs::path(out_dir) / trace_name(stem.str());
                ksdt::write_trace(result.trace, trace_path.string(), cell);
                std::cout << "alpha=" << alpha << ": final |D|=" << result.final_dict_size
                          << " ksd=" << result.final_ksd << " -> " << trace_path.string()
                          << "\n";
            }
        } else if (*modes_cmd) {
            std::vector<std::uint64_t> seeds;
            for (std::int64_t s = 0; s < mode_seeds; ++s) {
                seeds.push_back(cfg.seed + static_cast<std::uint64_t>(s));
            }
            const auto results =
                ksdt::mode_adaptation_experiment(parse_int_list(modes_arg), cfg, seeds);
            for (const auto& cell : results) {
                std::cout << "modes=" << cell.modes
                          << " mean_retained=" << cell.mean_retained << " per_seed=[";
                for (std::size_t i = 0; i < cell.per_seed.size(); ++i) {
                    if (i) std::cout << ',';
                    std::cout << cell.per_seed[i];
                }
                std::cout << "]\n";
            }
        }
    } catch (const ksdt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ksdt::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
