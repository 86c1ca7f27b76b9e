#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "ksdt/ksd_state.hpp"
#include "ksdt/schedule.hpp"

namespace ksdt {

struct ThinnerConfig {
    BudgetSchedule budget = BudgetSchedule::constant(0.0);
    GrowthSchedule growth = GrowthSchedule::linear(0.5);
    // Full cache rebuild every this many outer steps; 0 disables.
    int recompute_every = 0;

    void validate() const;
};

struct InnerLoopStats {
    std::int64_t removed = 0;
    double reference_squared_ksd = 0.0;
    double final_squared_ksd = 0.0;
};

// Destructive thinning: starting from the current dictionary with
// reference squared KSD M^2, repeatedly drop the least influential point
// while the post-removal squared KSD stays strictly below M^2 + epsilon
// and the dictionary stays larger than min_size. The candidate's
// post-removal KSD is derived arithmetically from the cached sums, so a
// rejected candidate costs no kernel evaluations.
InnerLoopStats ksdt_inner(KsdState& state, double epsilon, std::int64_t min_size);

// One outer-loop step: insert the new point, then thin with the step-t
// budget and growth floor.
InnerLoopStats ksdt_step(KsdState& state, const Eigen::VectorXd& new_point,
                         std::int64_t t, const ThinnerConfig& cfg);

}  // namespace ksdt
