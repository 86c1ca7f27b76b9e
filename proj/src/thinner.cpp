#include "ksdt/thinner.hpp"

#include <algorithm>

#include "ksdt/errors.hpp"

namespace ksdt {

void ThinnerConfig::validate() const {
    budget.validate();
    growth.validate();
    if (recompute_every < 0) throw ConfigError("recompute_every must be >= 0");
}

InnerLoopStats ksdt_inner(KsdState& state, double epsilon, std::int64_t min_size) {
    if (state.empty()) throw ConfigError("thinning requires a non-empty dictionary");
    if (epsilon < 0.0) throw ConfigError("thinning budget must be >= 0");
    if (min_size < 1) throw ConfigError("minimum dictionary size must be >= 1");

    InnerLoopStats stats;
    stats.reference_squared_ksd = state.squared_ksd();
    const double bound = stats.reference_squared_ksd + epsilon;

    while (static_cast<std::int64_t>(state.size()) > min_size) {
        const auto candidate = state.least_influential();
        const double m = static_cast<double>(state.size() - 1);
        const double post_sq = std::max(candidate.post_gram_sum, 0.0) / (m * m);
        if (post_sq < bound) {
            state.remove(candidate.index);
            ++stats.removed;
        } else {
            break;
        }
    }
    stats.final_squared_ksd = state.squared_ksd();
    return stats;
}

InnerLoopStats ksdt_step(KsdState& state, const Eigen::VectorXd& new_point,
                         std::int64_t t, const ThinnerConfig& cfg) {
    if (t < 1) throw ConfigError("outer loop step index must be >= 1");
    state.insert(new_point);
    auto stats = ksdt_inner(state, cfg.budget.at(t), cfg.growth.floor_at(t));
    if (cfg.recompute_every > 0 && t % cfg.recompute_every == 0) {
        state.recompute();
    }
    return stats;
}

}  // namespace ksdt
