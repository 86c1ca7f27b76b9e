#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ksdt/config.hpp"
#include "ksdt/ksd_state.hpp"
#include "ksdt/thinner.hpp"

namespace ksdt {

struct TraceRecord {
    std::int64_t step = 0;
    std::int64_t dict_size = 0;
    double ksd = 0.0;
    double normalized_ksd = 0.0;
    std::uint64_t kernel_evals = 0;
    std::int64_t wall_ms = 0;

    bool operator==(const TraceRecord&) const = default;
};

// KSD * sqrt(|D|); penalizes larger dictionaries at equal KSD.
double normalized_ksd(double ksd, std::int64_t size);

struct RunResult {
    std::vector<TraceRecord> trace;
    std::int64_t final_dict_size = 0;
    double final_ksd = 0.0;
    double final_normalized_ksd = 0.0;
    std::uint64_t total_kernel_evals = 0;
};

// Called after every outer-loop step with the thinning stats and the
// post-step state; used by tests for instrumented replay.
using StepObserver =
    std::function<void(std::int64_t t, const InnerLoopStats&, const KsdState&)>;

// Execute cfg.steps outer-loop iterations. Deterministic given the seed;
// records every record_every steps and always at the final step.
RunResult run_experiment(const RunConfig& cfg, const StepObserver& observer = {});

// CSV trace with a meta sidecar <path>.meta.json carrying the resolved
// config, so any run can be replayed exactly.
void write_trace(const std::vector<TraceRecord>& records, const std::string& path,
                 const RunConfig& cfg);
std::vector<TraceRecord> read_trace(const std::string& path);

// Dictionary snapshot: one point per CSV row plus {size, ksd, step} sidecar.
void export_dictionary(const KsdState& state, const std::string& path,
                       std::int64_t step);

struct ModeAdaptationResult {
    int modes = 0;
    double mean_retained = 0.0;
    std::vector<std::int64_t> per_seed;
};

// Final retained dictionary size per mode count, averaged over seeds.
// The template's target must be a grid mixture; its mode count and seed
// are overridden per cell.
std::vector<ModeAdaptationResult> mode_adaptation_experiment(
    const std::vector<int>& mode_counts, const RunConfig& base,
    const std::vector<std::uint64_t>& seeds);

// One run per alpha on the template config, with growth
// f(t) = sqrt(t^alpha * log t)/2; alpha = 2.0 maps to linear f(t) = t/2.
std::vector<std::pair<double, RunResult>> alpha_sweep(
    const std::vector<double>& alphas, const RunConfig& base);

}  // namespace ksdt
