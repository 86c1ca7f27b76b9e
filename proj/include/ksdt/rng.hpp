#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace ksdt {

// Deterministic seeded stream with labeled sub-streams. Sub-streams are
// derived by mixing the root seed with a label hash, so adding a new
// component never perturbs the draws of existing ones.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t mix(std::uint64_t seed, std::string_view label,
                             std::uint64_t index = 0) {
        // FNV-1a over the label, then splitmix64 finalization.
        std::uint64_t h = 14695981039346656037ull;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (h ^ (index + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static RngStream split(std::uint64_t seed, std::string_view label,
                           std::uint64_t index = 0) {
        return RngStream(mix(seed, label, index));
    }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double gaussian() {
        return std::normal_distribution<double>(0.0, 1.0)(engine_);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index dim) {
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace ksdt
