#include "ksdt/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ksdt/errors.hpp"
#include "ksdt/rng.hpp"
#include "ksdt/sampler.hpp"

namespace ksdt {

double normalized_ksd(double ksd, std::int64_t size) {
    if (size < 1) throw ConfigError("normalized KSD requires a non-empty dictionary");
    return ksd * std::sqrt(static_cast<double>(size));
}

RunResult run_experiment(const RunConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    auto target = std::make_shared<Target>(cfg.target.build());

    BaseKernelSpec base = cfg.kernel == KernelFamily::IMQ
                              ? BaseKernelSpec::imq()
                              : BaseKernelSpec::rbf(cfg.resolved_bandwidth());
    auto kernel = std::make_shared<SteinKernel>(
        base, [target](const Eigen::VectorXd& x) { return target->score(x); },
        target->dim());
    kernel->reset_eval_count();

    KsdState state(kernel);
    for (const auto& p : cfg.initial_dictionary) state.insert(p);

    RngStream init_rng = RngStream::split(cfg.seed, "init");
    ChainState chain(target->iid_draw(init_rng), RngStream::split(cfg.seed, "chain"));

    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    for (std::int64_t t = 1; t <= cfg.steps; ++t) {
        Eigen::VectorXd point;
        try {
            point = spmcmc_next(*target, chain, cfg.sampler, state);
        } catch (const NumericError& e) {
            throw NumericError("step " + std::to_string(t) + ": " + e.what());
        }

        InnerLoopStats stats;
        try {
            if (cfg.thinning_enabled) {
                stats = ksdt_step(state, point, t, cfg.thinning);
            } else {
                state.insert(point);
                stats.reference_squared_ksd = state.squared_ksd();
                stats.final_squared_ksd = stats.reference_squared_ksd;
            }
        } catch (const NumericError& e) {
            throw NumericError("step " + std::to_string(t) + ": " + e.what());
        }
        if (observer) observer(t, stats, state);

        if (t % cfg.record_every == 0 || t == cfg.steps) {
            TraceRecord rec;
            rec.step = t;
            rec.dict_size = static_cast<std::int64_t>(state.size());
            rec.ksd = state.ksd();
            rec.normalized_ksd = normalized_ksd(rec.ksd, rec.dict_size);
            rec.kernel_evals = kernel->eval_count();
            rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
            result.trace.push_back(rec);
        }
    }

    result.final_dict_size = static_cast<std::int64_t>(state.size());
    result.final_ksd = state.ksd();
    result.final_normalized_ksd = normalized_ksd(result.final_ksd, result.final_dict_size);
    result.total_kernel_evals = kernel->eval_count();
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_trace(const std::vector<TraceRecord>& records, const std::string& path,
                 const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open trace output file: " + path);
    out << "step,dict_size,ksd,normalized_ksd,kernel_evals,wall_ms\n";
    for (const auto& r : records) {
        out << r.step << ',' << r.dict_size << ',' << format_double(r.ksd) << ','
            << format_double(r.normalized_ksd) << ',' << r.kernel_evals << ','
            << r.wall_ms << '\n';
    }
    if (!out) throw ConfigError("failed writing trace to " + path);

    std::ofstream meta(path + ".meta.json");
    if (!meta) throw ConfigError("cannot open meta sidecar for " + path);
    nlohmann::json j;
    j["config"] = cfg.to_json();
    j["seed"] = cfg.seed;
    meta << j.dump(2) << '\n';
}

std::vector<TraceRecord> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty trace file: " + path);
    if (line != "step,dict_size,ksd,normalized_ksd,kernel_evals,wall_ms") {
        throw ConfigError("unexpected trace header in " + path);
    }
    std::vector<TraceRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceRecord r;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        r.step = std::stoll(cell);
        std::getline(row, cell, ',');
        r.dict_size = std::stoll(cell);
        std::getline(row, cell, ',');
        r.ksd = std::stod(cell);
        std::getline(row, cell, ',');
        r.normalized_ksd = std::stod(cell);
        std::getline(row, cell, ',');
        r.kernel_evals = std::stoull(cell);
        std::getline(row, cell, ',');
        r.wall_ms = std::stoll(cell);
        records.push_back(r);
    }
    return records;
}

void export_dictionary(const KsdState& state, const std::string& path,
                       std::int64_t step) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open dictionary output file: " + path);
    for (const auto& p : state.points()) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (i) out << ',';
            out << format_double(p[i]);
        }
        out << '\n';
    }
    std::ofstream meta(path + ".meta.json");
    if (!meta) throw ConfigError("cannot open dictionary sidecar for " + path);
    nlohmann::json j;
    j["size"] = state.size();
    j["ksd"] = state.empty() ? 0.0 : state.ksd();
    j["step"] = step;
    meta << j.dump(2) << '\n';
}

std::vector<ModeAdaptationResult> mode_adaptation_experiment(
    const std::vector<int>& mode_counts, const RunConfig& base,
    const std::vector<std::uint64_t>& seeds) {
    if (base.target.kind != TargetSpec::Kind::Grid) {
        throw ConfigError("mode adaptation template must use a grid target");
    }
    if (seeds.empty()) throw ConfigError("mode adaptation needs at least one seed");
    std::vector<ModeAdaptationResult> results;
    for (int modes : mode_counts) {
        ModeAdaptationResult cell;
        cell.modes = modes;
        for (std::uint64_t seed : seeds) {
            RunConfig cfg = base;
            cfg.target.modes = modes;
            cfg.seed = seed;
            const RunResult run = run_experiment(cfg);
            cell.per_seed.push_back(run.final_dict_size);
            cell.mean_retained += static_cast<double>(run.final_dict_size);
        }
        cell.mean_retained /= static_cast<double>(seeds.size());
        results.push_back(std::move(cell));
    }
    return results;
}

std::vector<std::pair<double, RunResult>> alpha_sweep(
    const std::vector<double>& alphas, const RunConfig& base) {
    std::vector<std::pair<double, RunResult>> results;
    for (double alpha : alphas) {
        if (!(alpha > 1.0 && alpha <= 2.0)) {
            throw ConfigError("alpha sweep values must lie in (1, 2]");
        }
        RunConfig cfg = base;
        cfg.thinning.growth = alpha == 2.0 ? GrowthSchedule::linear(0.5)
                                           : GrowthSchedule::power_log(alpha, 0.5);
        results.emplace_back(alpha, run_experiment(cfg));
    }
    return results;
}

}  // namespace ksdt
