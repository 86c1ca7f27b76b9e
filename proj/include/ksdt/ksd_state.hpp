#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ksdt/kernel.hpp"

namespace ksdt {

// Incremental KSD bookkeeping over a dictionary of points. Maintains
// per-point kernel row sums and the total Gram sum so that insertion
// costs |D|+1 kernel evaluations, removal |D|-1, and the least
// influential point search costs none.
class KsdState {
public:
    enum class CacheMode {
        // Row sums only, O(n) memory; removal re-evaluates the dropped row.
        RowSums,
        // Full Gram matrix, O(n^2) memory; removal needs no kernel
        // evaluations. Intended for small-n debugging and cross-checks.
        FullMatrix,
    };

    explicit KsdState(std::shared_ptr<const SteinKernel> kernel,
                      CacheMode mode = CacheMode::RowSums);

    void insert(const Eigen::VectorXd& x);
    void remove(std::size_t index);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    // KSD of the empirical measure, sqrt(max(T,0))/|D|. Throws on an
    // empty dictionary.
    double ksd() const;
    double squared_ksd() const;

    double gram_sum() const { return total_; }
    double row_sum(std::size_t i) const { return row_sums_[i]; }
    double self_kernel(std::size_t i) const { return self_kernels_[i]; }
    const std::vector<Eigen::VectorXd>& points() const { return points_; }

    struct RemovalCandidate {
        std::size_t index;
        // Gram sum of the dictionary with that point removed.
        double post_gram_sum;
    };

    // Index whose removal minimizes the resulting KSD (ties to the
    // smallest index). O(|D|) arithmetic, no kernel evaluations.
    RemovalCandidate least_influential() const;

    // k0(y,y)/2 + sum_i k0(x_i, y). Minimizing this over candidates
    // minimizes the post-insertion KSD; post-insertion Gram sum is
    // gram_sum() + 2 * objective.
    double insertion_objective(const Eigen::VectorXd& y) const;

    // Rebuild all cached sums from scratch, O(n^2) kernel evaluations.
    void recompute();

    const SteinKernel& kernel() const { return *kernel_; }
    std::shared_ptr<const SteinKernel> kernel_ptr() const { return kernel_; }
    CacheMode cache_mode() const { return mode_; }

private:
    void check_integrity() const;

    std::shared_ptr<const SteinKernel> kernel_;
    CacheMode mode_;
    std::vector<Eigen::VectorXd> points_;
    std::vector<Eigen::VectorXd> scores_;
    std::vector<double> row_sums_;
    std::vector<double> self_kernels_;
    double total_ = 0.0;
    // Row-major Gram rows, FullMatrix mode only.
    std::vector<std::vector<double>> gram_;
};

}  // namespace ksdt
