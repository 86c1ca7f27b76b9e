#include "ksdt/sampler.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ksdt/errors.hpp"

namespace ksdt {

void SamplerConfig::validate() const {
    if (kind != SamplerKind::IID && !(step > 0.0)) {
        throw ConfigError("sampler step size must be positive");
    }
    if (batch < 1) throw ConfigError("sampler batch size m must be >= 1");
}

void rwm_step(const Target& target, ChainState& chain, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("RWM step size must be positive");
    const Eigen::VectorXd proposal =
        chain.current + sigma * chain.rng.gaussian_vector(chain.current.size());
    const double log_ratio = target.log_density_unnormalized(proposal) -
                             target.log_density_unnormalized(chain.current);
    ++chain.proposal_count;
    if (log_ratio >= 0.0 || std::log(chain.rng.uniform()) < log_ratio) {
        chain.current = proposal;
        ++chain.accept_count;
    }
}

namespace {

// log of the MALA proposal density q(to | from), up to the shared
// Gaussian constant.
double mala_log_q(const Target& target, const Eigen::VectorXd& from,
                  const Eigen::VectorXd& to, double h) {
    const Eigen::VectorXd mean = from + 0.5 * h * target.score(from);
    return -(to - mean).squaredNorm() / (2.0 * h);
}

}  // namespace

void mala_step(const Target& target, ChainState& chain, double h) {
    if (!(h > 0.0)) throw ConfigError("MALA step size must be positive");
    const Eigen::VectorXd drift = 0.5 * h * target.score(chain.current);
    if (!drift.allFinite()) {
        throw NumericError("non-finite score at current MALA state");
    }
    const Eigen::VectorXd proposal = chain.current + drift +
                                     std::sqrt(h) *
                                         chain.rng.gaussian_vector(chain.current.size());
    ++chain.proposal_count;

    const double lp_prop = target.log_density_unnormalized(proposal);
    const Eigen::VectorXd score_prop = target.score(proposal);
    if (!std::isfinite(lp_prop) || !score_prop.allFinite()) {
        ++chain.nonfinite_rejects;
        return;
    }

    const double log_ratio = lp_prop - target.log_density_unnormalized(chain.current) +
                             mala_log_q(target, proposal, chain.current, h) -
                             mala_log_q(target, chain.current, proposal, h);
    if (log_ratio >= 0.0 || std::log(chain.rng.uniform()) < log_ratio) {
        chain.current = proposal;
        ++chain.accept_count;
    }
}

void sampler_step(const Target& target, ChainState& chain, const SamplerConfig& cfg) {
    switch (cfg.kind) {
        case SamplerKind::RWM:
            rwm_step(target, chain, cfg.step);
            return;
        case SamplerKind::MALA:
            mala_step(target, chain, cfg.step);
            return;
        case SamplerKind::IID:
            chain.current = target.iid_draw(chain.rng);
            ++chain.proposal_count;
            ++chain.accept_count;
            return;
    }
    throw ConfigError("unknown sampler kind");
}

Eigen::VectorXd spmcmc_next(const Target& target, ChainState& chain,
                            const SamplerConfig& cfg, const KsdState& state) {
    cfg.validate();
    std::vector<Eigen::VectorXd> candidates;
    candidates.reserve(cfg.batch);
    for (int l = 0; l < cfg.batch; ++l) {
        sampler_step(target, chain, cfg);
        candidates.push_back(chain.current);
    }
    if (cfg.batch == 1) return candidates.front();

    std::size_t best = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < candidates.size(); ++l) {
        const double obj = state.insertion_objective(candidates[l]);
        if (obj < best_obj) {
            best = l;
            best_obj = obj;
        }
    }
    if (cfg.continue_from == ContinueFrom::Selected) {
        chain.current = candidates[best];
    }
    return candidates[best];
}

}  // namespace ksdt
