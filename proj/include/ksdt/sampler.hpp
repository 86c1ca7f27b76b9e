#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "ksdt/ksd_state.hpp"
#include "ksdt/rng.hpp"
#include "ksdt/target.hpp"

namespace ksdt {

enum class SamplerKind { RWM, MALA, IID };

enum class ContinueFrom { Last, Selected };

struct SamplerConfig {
    SamplerKind kind = SamplerKind::RWM;
    // Proposal scale: RWM standard deviation or MALA step size h.
    double step = 1.0;
    // Candidates generated per outer step; 1 disables best-of-m selection.
    int batch = 1;
    ContinueFrom continue_from = ContinueFrom::Last;

    void validate() const;
};

struct ChainState {
    Eigen::VectorXd current;
    std::uint64_t accept_count = 0;
    std::uint64_t proposal_count = 0;
    std::uint64_t nonfinite_rejects = 0;
    RngStream rng;

    ChainState(Eigen::VectorXd start, RngStream rng_)
        : current(std::move(start)), rng(std::move(rng_)) {}
};

// One Metropolis-Hastings step with isotropic Gaussian proposals.
void rwm_step(const Target& target, ChainState& chain, double sigma);

// One Metropolis-adjusted Langevin step with step size h. Proposals with
// non-finite density or score are rejected and counted.
void mala_step(const Target& target, ChainState& chain, double h);

// Advance the chain by one sample of the configured kind.
void sampler_step(const Target& target, ChainState& chain, const SamplerConfig& cfg);

// Best-of-m selection: generate cfg.batch samples, return the one whose
// insertion into `state` minimizes the resulting KSD (ties to the earliest
// candidate). The chain continues from the last raw sample unless
// cfg.continue_from says otherwise.
Eigen::VectorXd spmcmc_next(const Target& target, ChainState& chain,
                            const SamplerConfig& cfg, const KsdState& state);

}  // namespace ksdt
