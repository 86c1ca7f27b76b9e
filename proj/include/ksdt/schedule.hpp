#pragma once

#include <cstdint>

namespace ksdt {

// Dictionary growth floor f(t). Linear: f(t) = c*t. SqrtLog:
// f(t) = sqrt(t*log t). PowerLog: f(t) = c*sqrt(t^alpha * log t) with
// alpha in (1,2). Fixed: f(t) = floor_size, the no-mandatory-growth mode.
struct GrowthSchedule {
    enum class Kind { Linear, SqrtLog, PowerLog, Fixed };

    Kind kind = Kind::Linear;
    double c = 0.5;
    double alpha = 1.5;
    int floor_size = 10;

    static GrowthSchedule linear(double c = 0.5) {
        return {Kind::Linear, c, 0.0, 0};
    }
    static GrowthSchedule sqrt_log() { return {Kind::SqrtLog, 1.0, 0.0, 0}; }
    static GrowthSchedule power_log(double alpha, double c = 0.5) {
        return {Kind::PowerLog, c, alpha, 0};
    }
    static GrowthSchedule fixed(int floor_size) {
        return {Kind::Fixed, 0.0, 0.0, floor_size};
    }

    void validate() const;

    // Real-valued f(t), t >= 1.
    double value_at(std::int64_t t) const;

    // ceil(f(t)) clamped below at 1; this is the minimum dictionary size
    // passed to the thinning inner loop.
    std::int64_t floor_at(std::int64_t t) const;
};

// Per-step thinning budget epsilon_t: either a constant or the decaying
// sequence log(t)/f(t)^2.
struct BudgetSchedule {
    enum class Kind { Constant, Decaying };

    Kind kind = Kind::Constant;
    double epsilon = 0.0;
    GrowthSchedule growth;  // Decaying only

    static BudgetSchedule constant(double epsilon) {
        return {Kind::Constant, epsilon, {}};
    }
    static BudgetSchedule decaying(GrowthSchedule f) {
        return {Kind::Decaying, 0.0, f};
    }

    void validate() const;
    double at(std::int64_t t) const;
};

}  // namespace ksdt
