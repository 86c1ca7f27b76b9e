#include "ksdt/target.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ksdt/errors.hpp"

namespace ksdt {

namespace {

void check_finite(const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw NumericError("non-finite input point");
}

}  // namespace

Target::Target(std::vector<Component> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("target needs at least one component");
    dim_ = components_.front().mean.size();
    double weight_sum = 0.0;
    for (const auto& c : components_) {
        if (c.mean.size() != dim_ || c.cov_diag.size() != dim_) {
            throw ConfigError("target component dimension mismatch");
        }
        if (c.weight < 0.0) throw ConfigError("target mixture weight must be >= 0");
        if ((c.cov_diag.array() <= 0.0).any()) {
            throw ConfigError("target covariance diagonal entries must be > 0");
        }
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "mixture weights must sum to 1, got " << weight_sum;
        throw ConfigError(msg.str());
    }
}

Target Target::gaussian(Eigen::VectorXd mean, Eigen::VectorXd cov_diag) {
    return Target({Component{1.0, std::move(mean), std::move(cov_diag)}});
}

Target Target::mixture(std::vector<Component> components) {
    return Target(std::move(components));
}

Target Target::grid_mixture(int modes, double cov, double spacing) {
    if (modes < 1) throw ConfigError("grid mixture needs at least one mode");
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(modes))));
    std::vector<Component> comps;
    comps.reserve(modes);
    for (int k = 0; k < modes; ++k) {
        Eigen::VectorXd mean(2);
        mean << spacing * (k % side), spacing * (k / side);
        comps.push_back({1.0 / modes, mean, Eigen::VectorXd::Constant(2, cov)});
    }
    return Target(std::move(comps));
}

Target Target::bimodal() {
    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd m1 = Eigen::VectorXd::Ones(2);
    Eigen::VectorXd cov = Eigen::VectorXd::Constant(2, 0.5);
    return Target({{0.5, m0, cov}, {0.5, m1, cov}});
}

std::vector<double> Target::component_log_terms(const Eigen::VectorXd& x) const {
    std::vector<double> terms;
    terms.reserve(components_.size());
    for (const auto& c : components_) {
        // Relative normalization (log det cov) is kept so components with
        // different covariances weigh correctly; the shared (2*pi)^{d/2}
        // constant is dropped.
        const double quad = ((x - c.mean).array().square() / c.cov_diag.array()).sum();
        const double log_det = c.cov_diag.array().log().sum();
        const double log_w = c.weight > 0.0
                                 ? std::log(c.weight)
                                 : -std::numeric_limits<double>::infinity();
        terms.push_back(log_w - 0.5 * log_det - 0.5 * quad);
    }
    return terms;
}

double Target::log_density_unnormalized(const Eigen::VectorXd& x) const {
    check_finite(x);
    if (components_.size() == 1) {
        const auto& c = components_.front();
        return -0.5 * ((x - c.mean).array().square() / c.cov_diag.array()).sum();
    }
    const std::vector<double> terms = component_log_terms(x);
    const double m = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - m);
    return m + std::log(sum);
}

Eigen::VectorXd Target::score(const Eigen::VectorXd& x) const {
    check_finite(x);
    if (components_.size() == 1) {
        const auto& c = components_.front();
        return -((x - c.mean).array() / c.cov_diag.array()).matrix();
    }
    const std::vector<double> terms = component_log_terms(x);
    const double m = *std::max_element(terms.begin(), terms.end());
    double denom = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim_);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const double resp = std::exp(terms[i] - m);
        denom += resp;
        const auto& c = components_[i];
        grad -= resp * ((x - c.mean).array() / c.cov_diag.array()).matrix();
    }
    return grad / denom;
}

Eigen::VectorXd Target::iid_draw(RngStream& rng) const {
    std::size_t pick = 0;
    if (components_.size() > 1) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i < components_.size(); ++i) {
            acc += components_[i].weight;
            if (u < acc) {
                pick = i;
                break;
            }
            pick = i;
        }
    }
    const auto& c = components_[pick];
    return c.mean +
           (c.cov_diag.array().sqrt() * rng.gaussian_vector(dim_).array()).matrix();
}

}  // namespace ksdt
