#include <doctest.h>

#include <cmath>
#include <memory>

#include "ksdt/errors.hpp"
#include "ksdt/sampler.hpp"
#include "oracle.hpp"

using namespace ksdt;
using namespace ksdt::testing;

namespace {

Target std_normal(Eigen::Index dim) {
    return Target::gaussian(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim));
}

ChainState make_chain(Eigen::Index dim, std::uint64_t seed) {
    return ChainState(Eigen::VectorXd::Zero(dim), RngStream(seed));
}

// Direct evaluation of pi(x) q(y|x) alpha(x,y) for MALA, used by the
// detailed-balance check.
double mala_flow(const Target& target, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y, double h) {
    auto log_q = [&](const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
        const Eigen::VectorXd mean = from + 0.5 * h * target.score(from);
        return -(to - mean).squaredNorm() / (2.0 * h);
    };
    const double log_alpha =
        std::min(0.0, target.log_density_unnormalized(y) -
                          target.log_density_unnormalized(x) + log_q(y, x) - log_q(x, y));
    return std::exp(target.log_density_unnormalized(x) + log_q(x, y) + log_alpha);
}

}  // namespace

TEST_CASE("RWM near-zero step accepts almost everything") {
    const Target target = std_normal(1);
    ChainState chain = make_chain(1, 21);
    for (int i = 0; i < 1000; ++i) rwm_step(target, chain, 1e-8);
    CHECK(chain.proposal_count == 1000);
    CHECK(chain.accept_count >= 995);
}

TEST_CASE("RWM samples the standard normal") {
    const Target target = std_normal(1);
    ChainState chain = make_chain(1, 22);
    const int burn = 1000, n = 100000;
    for (int i = 0; i < burn; ++i) rwm_step(target, chain, 2.4);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        rwm_step(target, chain, 2.4);
        sum += chain.current[0];
    }
    // 3 standard errors with autocorrelation slack.
    CHECK(std::abs(sum / n) < 0.05);
}

TEST_CASE("MALA samples the standard normal with correct variance") {
    const Target target = std_normal(1);
    ChainState chain = make_chain(1, 23);
    const int burn = 1000, n = 100000;
    for (int i = 0; i < burn; ++i) mala_step(target, chain, 0.5);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        mala_step(target, chain, 0.5);
        sum += chain.current[0];
        sq += chain.current[0] * chain.current[0];
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("MALA satisfies detailed balance on random pairs") {
    const Target target = Target::bimodal();
    RngStream rng(24);
    const double h = 0.3;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd x = random_point(rng, 2, 1.0);
        const Eigen::VectorXd y = random_point(rng, 2, 1.0);
        const double forward = mala_flow(target, x, y, h);
        const double backward = mala_flow(target, y, x, h);
        CHECK(std::abs(forward - backward) <= 1e-10 * std::max(1.0, forward));
    }
}

TEST_CASE("MH correctness on N(0,I2): mean and covariance") {
    const Target target = std_normal(2);
    for (const SamplerKind kind : {SamplerKind::RWM, SamplerKind::MALA, SamplerKind::IID}) {
        SamplerConfig cfg;
        cfg.kind = kind;
        cfg.step = kind == SamplerKind::RWM ? 1.5 : 0.5;
        ChainState chain = make_chain(2, 25);
        const int burn = 1000, n = 100000;
        for (int i = 0; i < burn; ++i) sampler_step(target, chain, cfg);
        Eigen::Vector2d sum = Eigen::Vector2d::Zero();
        Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
        for (int i = 0; i < n; ++i) {
            sampler_step(target, chain, cfg);
            sum += chain.current;
            outer += chain.current * chain.current.transpose();
        }
        const Eigen::Vector2d mean = sum / n;
        const Eigen::Matrix2d cov = outer / n - mean * mean.transpose();
        CHECK(mean.cwiseAbs().maxCoeff() < 0.06);
        CHECK(std::abs(cov(0, 0) - 1.0) < 0.08);
        CHECK(std::abs(cov(1, 1) - 1.0) < 0.08);
        CHECK(std::abs(cov(0, 1)) < 0.06);
    }
}

TEST_CASE("acceptance bookkeeping stays within proposal counts") {
    const Target target = Target::bimodal();
    ChainState chain = make_chain(2, 26);
    for (int i = 0; i < 500; ++i) rwm_step(target, chain, 3.0);
    CHECK(chain.accept_count <= chain.proposal_count);
    CHECK(chain.proposal_count == 500);
    CHECK(chain.accept_count > 0);
    CHECK(chain.accept_count < 500);  // large steps must reject sometimes
}

TEST_CASE("identical seed and config give a bitwise identical trajectory") {
    const Target target = Target::bimodal();
    SamplerConfig cfg;
    cfg.kind = SamplerKind::MALA;
    cfg.step = 0.4;
    ChainState a = make_chain(2, 27);
    ChainState b = make_chain(2, 27);
    for (int i = 0; i < 200; ++i) {
        sampler_step(target, a, cfg);
        sampler_step(target, b, cfg);
        CHECK(a.current == b.current);
    }
}

TEST_CASE("spmcmc_next with m=1 returns the raw MCMC sample") {
    const Target target = std_normal(2);
    auto kernel = std::make_shared<SteinKernel>(
        BaseKernelSpec::imq(),
        [](const Eigen::VectorXd& x) { return Eigen::VectorXd(-x); }, 2);
    KsdState state(kernel);

    SamplerConfig cfg;
    cfg.kind = SamplerKind::RWM;
    cfg.step = 1.0;
    cfg.batch = 1;
    ChainState chain = make_chain(2, 28);
    ChainState shadow = make_chain(2, 28);
    for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXd picked = spmcmc_next(target, chain, cfg, state);
        rwm_step(target, shadow, 1.0);
        CHECK(picked == shadow.current);
    }
}

TEST_CASE("spmcmc_next picks the KSD-optimal candidate") {
    const Target target = std_normal(2);
    auto kernel = std::make_shared<SteinKernel>(
        BaseKernelSpec::imq(),
        [](const Eigen::VectorXd& x) { return Eigen::VectorXd(-x); }, 2);

    SamplerConfig cfg;
    cfg.kind = SamplerKind::IID;
    cfg.batch = 5;

    SUBCASE("empty dictionary minimizes the self kernel") {
        KsdState state(kernel);
        ChainState chain = make_chain(2, 29);
        ChainState shadow = make_chain(2, 29);
        std::vector<Eigen::VectorXd> batch;
        for (int l = 0; l < 5; ++l) {
            sampler_step(target, shadow, cfg);
            batch.push_back(shadow.current);
        }
        const Eigen::VectorXd picked = spmcmc_next(target, chain, cfg, state);
        std::size_t best = 0;
        for (std::size_t l = 1; l < batch.size(); ++l) {
            if (kernel->eval(batch[l], batch[l]) < kernel->eval(batch[best], batch[best])) {
                best = l;
            }
        }
        CHECK(picked == batch[best]);
        // The chain continues from the last raw sample.
        CHECK(chain.current == batch.back());
    }

    SUBCASE("10-point dictionary matches the brute-force argmin") {
        KsdState state(kernel);
        RngStream rng(30);
        for (int i = 0; i < 10; ++i) state.insert(random_point(rng, 2));
        ChainState chain = make_chain(2, 31);
        ChainState shadow = make_chain(2, 31);
        std::vector<Eigen::VectorXd> batch;
        for (int l = 0; l < 5; ++l) {
            sampler_step(target, shadow, cfg);
            batch.push_back(shadow.current);
        }
        const Eigen::VectorXd picked = spmcmc_next(target, chain, cfg, state);
        std::size_t best = 0;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < batch.size(); ++l) {
            auto with = state.points();
            with.push_back(batch[l]);
            const double sq = brute_force_squared_ksd(*kernel, with);
            if (sq < best_sq) {
                best = l;
                best_sq = sq;
            }
        }
        CHECK(picked == batch[best]);
    }
}

TEST_CASE("spmcmc_next never returns a point outside its batch") {
    const Target target = Target::bimodal();
    auto t = std::make_shared<Target>(target);
    auto kernel = std::make_shared<SteinKernel>(
        BaseKernelSpec::imq(),
        [t](const Eigen::VectorXd& x) { return t->score(x); }, 2);
    KsdState state(kernel);

    SamplerConfig cfg;
    cfg.kind = SamplerKind::RWM;
    cfg.step = 0.8;
    cfg.batch = 4;
    ChainState chain = make_chain(2, 32);
    ChainState shadow = make_chain(2, 32);
    for (int step = 0; step < 30; ++step) {
        std::vector<Eigen::VectorXd> batch;
        for (int l = 0; l < 4; ++l) {
            sampler_step(target, shadow, cfg);
            batch.push_back(shadow.current);
        }
        const Eigen::VectorXd picked = spmcmc_next(target, chain, cfg, state);
        bool found = false;
        for (const auto& c : batch) found = found || c == picked;
        CHECK(found);
        state.insert(picked);
    }
}

TEST_CASE("sampler config validation") {
    SamplerConfig cfg;
    cfg.step = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.step = 1.0;
    cfg.batch = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
