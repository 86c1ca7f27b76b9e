#include "ksdt/ksd_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ksdt/errors.hpp"

namespace ksdt {

KsdState::KsdState(std::shared_ptr<const SteinKernel> kernel, CacheMode mode)
    : kernel_(std::move(kernel)), mode_(mode) {
    if (!kernel_) throw ConfigError("KsdState requires a kernel");
}

void KsdState::insert(const Eigen::VectorXd& x) {
    const std::size_t n = points_.size();
    const Eigen::VectorXd sx = kernel_->score(x);
    if (!sx.allFinite()) throw NumericError("non-finite score at inserted point");

    std::vector<double> new_row(n + 1);
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double k = kernel_->eval_with_scores(points_[i], scores_[i], x, sx);
        new_row[i] = k;
        row_sums_[i] += k;
        cross += k;
    }
    const double self = kernel_->eval_with_scores(x, sx, x, sx);
    new_row[n] = self;

    points_.push_back(x);
    scores_.push_back(sx);
    self_kernels_.push_back(self);
    row_sums_.push_back(cross + self);
    total_ += 2.0 * cross + self;

    if (mode_ == CacheMode::FullMatrix) {
        for (std::size_t i = 0; i < n; ++i) gram_[i].push_back(new_row[i]);
        gram_.push_back(std::move(new_row));
    }
    check_integrity();
}

void KsdState::remove(std::size_t index) {
    const std::size_t n = points_.size();
    if (index >= n) {
        std::ostringstream msg;
        msg << "remove index " << index << " out of range for size " << n;
        throw ConfigError(msg.str());
    }

    const double rj = row_sums_[index];
    const double kjj = self_kernels_[index];
    total_ -= 2.0 * rj - kjj;

    for (std::size_t i = 0; i < n; ++i) {
        if (i == index) continue;
        const double k = mode_ == CacheMode::FullMatrix
                             ? gram_[i][index]
                             : kernel_->eval_with_scores(points_[i], scores_[i],
                                                         points_[index], scores_[index]);
        row_sums_[i] -= k;
    }

    points_.erase(points_.begin() + index);
    scores_.erase(scores_.begin() + index);
    row_sums_.erase(row_sums_.begin() + index);
    self_kernels_.erase(self_kernels_.begin() + index);
    if (mode_ == CacheMode::FullMatrix) {
        gram_.erase(gram_.begin() + index);
        for (auto& row : gram_) row.erase(row.begin() + index);
    }
    check_integrity();
}

double KsdState::squared_ksd() const {
    if (points_.empty()) throw ConfigError("KSD of an empty dictionary is undefined");
    const double n = static_cast<double>(points_.size());
    return std::max(total_, 0.0) / (n * n);
}

double KsdState::ksd() const { return std::sqrt(squared_ksd()); }

KsdState::RemovalCandidate KsdState::least_influential() const {
    if (points_.size() < 2) {
        throw ConfigError("least_influential requires at least two points");
    }
    // Removing x_j leaves Gram sum T - 2 r_j + k_jj; all candidates share
    // the divisor (n-1)^2, so minimize that directly.
    std::size_t best = 0;
    double best_post = total_ - 2.0 * row_sums_[0] + self_kernels_[0];
    for (std::size_t j = 1; j < points_.size(); ++j) {
        const double post = total_ - 2.0 * row_sums_[j] + self_kernels_[j];
        if (post < best_post) {
            best = j;
            best_post = post;
        }
    }
    return {best, best_post};
}

double KsdState::insertion_objective(const Eigen::VectorXd& y) const {
    const Eigen::VectorXd sy = kernel_->score(y);
    if (!sy.allFinite()) throw NumericError("non-finite score at candidate point");
    double cross = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        cross += kernel_->eval_with_scores(points_[i], scores_[i], y, sy);
    }
    return 0.5 * kernel_->eval_with_scores(y, sy, y, sy) + cross;
}

void KsdState::recompute() {
    const std::size_t n = points_.size();
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double k =
                kernel_->eval_with_scores(points_[i], scores_[i], points_[j], scores_[j]);
            gram[i][j] = k;
            gram[j][i] = k;
        }
    }
    total_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        row_sums_[i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sums_[i] += gram[i][j];
        self_kernels_[i] = gram[i][i];
        total_ += row_sums_[i];
    }
    if (mode_ == CacheMode::FullMatrix) gram_ = std::move(gram);
}

void KsdState::check_integrity() const {
    double max_row = 1.0;
    for (double r : row_sums_) max_row = std::max(max_row, std::abs(r));
    if (total_ < -1e-8 * max_row) {
        std::ostringstream msg;
        msg << "Gram sum " << total_ << " is negative beyond roundoff (max row "
            << max_row << "); cached sums are inconsistent";
        throw NumericError(msg.str());
    }
}

}  // namespace ksdt
