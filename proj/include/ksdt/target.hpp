#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ksdt/rng.hpp"

namespace ksdt {

// Gaussian or diagonal-covariance Gaussian mixture target. Supplies the
// unnormalized log density, its score, and exact i.i.d. draws; constant
// normalization terms are dropped throughout.
class Target {
public:
    struct Component {
        double weight;
        Eigen::VectorXd mean;
        Eigen::VectorXd cov_diag;
    };

    static Target gaussian(Eigen::VectorXd mean, Eigen::VectorXd cov_diag);
    static Target mixture(std::vector<Component> components);

    // Equally weighted 2-D mixture with isotropic covariance, modes laid
    // out row-major on an integer grid scaled by `spacing`.
    static Target grid_mixture(int modes, double cov = 0.5, double spacing = 1.0);

    // Equally weighted two-mode 2-D mixture with means (0,0) and (1,1)
    // and covariance 0.5*I.
    static Target bimodal();

    Eigen::Index dim() const { return dim_; }
    const std::vector<Component>& components() const { return components_; }

    double log_density_unnormalized(const Eigen::VectorXd& x) const;
    Eigen::VectorXd score(const Eigen::VectorXd& x) const;
    Eigen::VectorXd iid_draw(RngStream& rng) const;

private:
    explicit Target(std::vector<Component> components);

    // Per-component log weight + log density, used by both the density
    // and the responsibility-weighted score.
    std::vector<double> component_log_terms(const Eigen::VectorXd& x) const;

    std::vector<Component> components_;
    Eigen::Index dim_;
};

}  // namespace ksdt
