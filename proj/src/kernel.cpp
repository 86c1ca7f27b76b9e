#include "ksdt/kernel.hpp"

#include <cmath>
#include <sstream>

#include "ksdt/errors.hpp"

namespace ksdt {

namespace {

void check_dims(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) {
        std::ostringstream msg;
        msg << "kernel dimension mismatch: " << x.size() << " vs " << y.size();
        throw ConfigError(msg.str());
    }
}

}  // namespace

void BaseKernelSpec::validate() const {
    if (family == KernelFamily::RBF && !(bandwidth > 0.0)) {
        throw ConfigError("RBF bandwidth must be positive");
    }
}

double base_eval(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y) {
    check_dims(x, y);
    const double r2 = (x - y).squaredNorm();
    switch (spec.family) {
        case KernelFamily::IMQ:
            return 1.0 / std::sqrt(1.0 + r2);
        case KernelFamily::RBF:
            return std::exp(-r2 / (2.0 * spec.bandwidth));
    }
    throw ConfigError("unknown kernel family");
}

Eigen::VectorXd base_grad_x(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
    check_dims(x, y);
    const Eigen::VectorXd diff = x - y;
    const double r2 = diff.squaredNorm();
    switch (spec.family) {
        case KernelFamily::IMQ:
            return -diff * std::pow(1.0 + r2, -1.5);
        case KernelFamily::RBF:
            return -(diff / spec.bandwidth) * std::exp(-r2 / (2.0 * spec.bandwidth));
    }
    throw ConfigError("unknown kernel family");
}

double base_cross_diag(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y) {
    check_dims(x, y);
    const double r2 = (x - y).squaredNorm();
    const double d = static_cast<double>(x.size());
    switch (spec.family) {
        case KernelFamily::IMQ:
            return d * std::pow(1.0 + r2, -1.5) - 3.0 * r2 * std::pow(1.0 + r2, -2.5);
        case KernelFamily::RBF: {
            const double h = spec.bandwidth;
            return std::exp(-r2 / (2.0 * h)) * (d / h - r2 / (h * h));
        }
    }
    throw ConfigError("unknown kernel family");
}

SteinKernel::SteinKernel(BaseKernelSpec base, ScoreFn score, Eigen::Index dim)
    : base_(base), score_(std::move(score)), dim_(dim) {
    base_.validate();
    if (dim_ < 1) throw ConfigError("Stein kernel dimension must be >= 1");
}

double SteinKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return eval_with_scores(x, score_(x), y, score_(y));
}

double SteinKernel::eval_with_scores(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& sx,
                                     const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& sy) const {
    check_dims(x, y);
    ++eval_count_;
    const double k = base_eval(base_, x, y);
    // For radial base kernels grad_y k = -grad_x k.
    const Eigen::VectorXd gx = base_grad_x(base_, x, y);
    const double value =
        sx.dot(sy) * k + sy.dot(gx) - sx.dot(gx) + base_cross_diag(base_, x, y);
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-finite Stein kernel value at x=[" << x.transpose()
            << "] y=[" << y.transpose() << "]";
        throw NumericError(msg.str());
    }
    return value;
}

}  // namespace ksdt
