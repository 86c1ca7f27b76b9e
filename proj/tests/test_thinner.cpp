#include <doctest.h>

#include <memory>

#include "ksdt/errors.hpp"
#include "ksdt/rng.hpp"
#include "ksdt/target.hpp"
#include "ksdt/thinner.hpp"
#include "oracle.hpp"

using namespace ksdt;
using namespace ksdt::testing;

namespace {

std::shared_ptr<SteinKernel> bimodal_kernel() {
    auto target = std::make_shared<Target>(Target::bimodal());
    return std::make_shared<SteinKernel>(
        BaseKernelSpec::imq(),
        [target](const Eigen::VectorXd& x) { return target->score(x); }, 2);
}

KsdState random_state(const std::shared_ptr<SteinKernel>& kernel, RngStream& rng,
                      int n, double scale = 2.0) {
    KsdState state(kernel);
    for (int i = 0; i < n; ++i) state.insert(random_point(rng, 2, scale));
    return state;
}

}  // namespace

TEST_CASE("inner loop respects the size guard") {
    auto kernel = bimodal_kernel();
    RngStream rng(41);
    KsdState state = random_state(kernel, rng, 6);
    const auto before = state.points();
    const auto stats = ksdt_inner(state, 10.0, 6);
    CHECK(stats.removed == 0);
    CHECK(state.points() == before);
}

TEST_CASE("zero budget: removals strictly decrease the KSD") {
    auto kernel = bimodal_kernel();
    RngStream rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        KsdState state = random_state(kernel, rng, 8, 3.0);
        const double before = state.squared_ksd();
        const auto stats = ksdt_inner(state, 0.0, 2);
        CHECK(state.squared_ksd() <= before);
        if (stats.removed > 0) CHECK(state.squared_ksd() < before);
        CHECK(static_cast<int>(state.size()) == 8 - stats.removed);
    }
}

TEST_CASE("inner loop matches the brute-force greedy simulation") {
    auto kernel = bimodal_kernel();
    RngStream rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 8);
        const double eps = trial % 3 == 0 ? 0.0 : 0.1 * rng.uniform();
        KsdState state = random_state(kernel, rng, n, 3.0);
        const auto points = state.points();

        const auto oracle = brute_force_thin(*kernel, points, eps, 2);
        ksdt_inner(state, eps, 2);

        REQUIRE(state.size() == oracle.points.size());
        for (std::size_t i = 0; i < oracle.points.size(); ++i) {
            CHECK(state.points()[i] == oracle.points[i]);
        }
    }
}

TEST_CASE("six-point hand-simulated instance") {
    auto kernel = bimodal_kernel();
    RngStream rng(44);
    KsdState state = random_state(kernel, rng, 6, 3.0);
    const auto oracle = brute_force_thin(*kernel, state.points(), 0.1, 2);
    const auto stats = ksdt_inner(state, 0.1, 2);
    CHECK(state.size() == oracle.points.size());
    CHECK(stats.removed ==
          static_cast<std::int64_t>(oracle.removed_indices.size()));
    CHECK(stats.final_squared_ksd < stats.reference_squared_ksd + 0.1);
}

TEST_CASE("inner loop at zero budget is idempotent") {
    auto kernel = bimodal_kernel();
    RngStream rng(45);
    KsdState state = random_state(kernel, rng, 10, 3.0);
    ksdt_inner(state, 0.0, 2);
    const auto once = state.points();
    const auto stats = ksdt_inner(state, 0.0, 2);
    CHECK(stats.removed == 0);
    CHECK(state.points() == once);
}

TEST_CASE("inner loop argument validation") {
    auto kernel = bimodal_kernel();
    KsdState state(kernel);
    CHECK_THROWS_AS(ksdt_inner(state, 0.0, 1), ConfigError);
    state.insert(Eigen::VectorXd::Zero(2));
    CHECK_THROWS_AS(ksdt_inner(state, -0.1, 1), ConfigError);
    CHECK_THROWS_AS(ksdt_inner(state, 0.0, 0), ConfigError);
}

TEST_CASE("ksdt_step with budget 0 on a one-point dictionary") {
    auto kernel = bimodal_kernel();
    KsdState state(kernel);
    Eigen::VectorXd near_mode(2);
    near_mode << 0.1, 0.0;
    state.insert(near_mode);

    ThinnerConfig cfg;
    cfg.budget = BudgetSchedule::constant(0.0);
    cfg.growth = GrowthSchedule::fixed(1);
    Eigen::VectorXd other(2);
    other << 1.0, 1.1;
    const double before = state.squared_ksd();
    ksdt_step(state, other, 1, cfg);
    // Grows to 2 unless dropping one strictly improves the KSD.
    if (state.size() == 1) CHECK(state.squared_ksd() < before);
    CHECK(state.size() >= 1);
    CHECK(state.size() <= 2);
}

TEST_CASE("degenerate floor S=t accumulates every sample") {
    auto kernel = bimodal_kernel();
    KsdState state(kernel);
    RngStream rng(46);
    ThinnerConfig cfg;
    cfg.budget = BudgetSchedule::constant(0.0);
    cfg.growth = GrowthSchedule::linear(1.0);  // floor(t) = t
    for (std::int64_t t = 1; t <= 50; ++t) {
        ksdt_step(state, random_point(rng, 2), t, cfg);
        CHECK(static_cast<std::int64_t>(state.size()) == t);
    }
}

TEST_CASE("100-step run keeps the floor and per-step budget invariants") {
    auto kernel = bimodal_kernel();
    auto target = Target::bimodal();
    KsdState state(kernel);
    RngStream rng(47);
    ThinnerConfig cfg;
    cfg.budget = BudgetSchedule::decaying(GrowthSchedule::linear(0.5));
    cfg.growth = GrowthSchedule::linear(0.5);

    for (std::int64_t t = 1; t <= 100; ++t) {
        const Eigen::VectorXd point = target.iid_draw(rng);

        // Replay oracle: predict the bound from a from-scratch recomputation.
        auto aux = state.points();
        aux.push_back(point);
        const double ref_sq = brute_force_squared_ksd(*kernel, aux);
        const double eps = cfg.budget.at(t);

        const auto stats = ksdt_step(state, point, t, cfg);
        CHECK(stats.reference_squared_ksd == doctest::Approx(ref_sq).epsilon(1e-9));
        CHECK(static_cast<std::int64_t>(state.size()) >=
              std::min(cfg.growth.floor_at(t), t));
        if (stats.removed > 0) {
            CHECK(state.squared_ksd() < ref_sq + eps);
        } else {
            CHECK(state.squared_ksd() <= ref_sq + eps);
        }
    }
}

TEST_CASE("periodic recompute leaves results unchanged") {
    auto kernel = bimodal_kernel();
    auto target = Target::bimodal();
    ThinnerConfig plain, guarded;
    plain.budget = guarded.budget = BudgetSchedule::constant(0.0);
    plain.growth = guarded.growth = GrowthSchedule::sqrt_log();
    guarded.recompute_every = 7;

    KsdState a(kernel), b(kernel);
    RngStream ra(48), rb(48);
    for (std::int64_t t = 1; t <= 60; ++t) {
        ksdt_step(a, target.iid_draw(ra), t, plain);
        ksdt_step(b, target.iid_draw(rb), t, guarded);
        REQUIRE(a.size() == b.size());
        CHECK(a.gram_sum() == doctest::Approx(b.gram_sum()).epsilon(1e-9));
    }
}
