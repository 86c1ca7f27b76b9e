#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace ksdt {

enum class KernelFamily { IMQ, RBF };

// Base kernel: IMQ (1+||x-y||^2)^{-1/2} with unit scale, or RBF
// exp(-||x-y||^2 / 2h). `bandwidth` is only meaningful for RBF.
struct BaseKernelSpec {
    KernelFamily family = KernelFamily::IMQ;
    double bandwidth = 1.0;

    static BaseKernelSpec imq() { return {KernelFamily::IMQ, 1.0}; }
    static BaseKernelSpec rbf(double h) { return {KernelFamily::RBF, h}; }

    void validate() const;
};

double base_eval(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y);

// Gradient of k(x, y) in the first argument.
Eigen::VectorXd base_grad_x(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

// Trace of the mixed second derivative, sum_i d^2 k / dx_i dy_i.
double base_cross_diag(const BaseKernelSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y);

// Stein kernel built from a base kernel and a score function. The score
// callback must return the gradient of the target's log unnormalized
// density. Evaluations are counted so callers can assert complexity
// budgets; the counter does not affect results.
class SteinKernel {
public:
    using ScoreFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    SteinKernel(BaseKernelSpec base, ScoreFn score, Eigen::Index dim);

    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    // Same kernel with caller-supplied scores, avoiding repeated score
    // evaluation when one argument is fixed across many calls.
    double eval_with_scores(const Eigen::VectorXd& x, const Eigen::VectorXd& sx,
                            const Eigen::VectorXd& y,
                            const Eigen::VectorXd& sy) const;

    Eigen::VectorXd score(const Eigen::VectorXd& x) const { return score_(x); }

    Eigen::Index dim() const { return dim_; }
    const BaseKernelSpec& base() const { return base_; }

    std::uint64_t eval_count() const { return eval_count_; }
    void reset_eval_count() const { eval_count_ = 0; }

private:
    BaseKernelSpec base_;
    ScoreFn score_;
    Eigen::Index dim_;
    mutable std::uint64_t eval_count_ = 0;
};

}  // namespace ksdt
