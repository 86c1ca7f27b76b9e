#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksdt/kernel.hpp"
#include "ksdt/sampler.hpp"
#include "ksdt/target.hpp"
#include "ksdt/thinner.hpp"

namespace ksdt {

// Minimal TOML-style value: string, number, bool, or (nested) array.
struct ConfigValue {
    enum class Type { String, Number, Bool, Array };
    Type type = Type::Number;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<ConfigValue> array;
};

// Flat table keyed by "section.key" (keys outside a section are bare).
using ConfigTable = std::map<std::string, ConfigValue>;

ConfigTable parse_config_text(const std::string& text);
ConfigTable parse_config_file(const std::string& path);

// Declarative target description, kept separate from the built Target so
// runs can be serialized and replayed.
struct TargetSpec {
    enum class Kind { Gaussian, Mixture, Grid, Bimodal };
    Kind kind = Kind::Gaussian;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::VectorXd> covs;
    std::vector<double> weights;
    int modes = 1;
    double mode_cov = 0.5;
    double mode_spacing = 1.0;

    Target build() const;
    Eigen::Index dim() const;
};

struct RunConfig {
    KernelFamily kernel = KernelFamily::IMQ;
    // RBF bandwidth; defaults to the problem dimension when unset.
    std::optional<double> bandwidth;
    TargetSpec target;
    SamplerConfig sampler;
    ThinnerConfig thinning;
    bool thinning_enabled = true;
    std::int64_t steps = 2000;
    std::uint64_t seed = 0;
    std::int64_t record_every = 10;
    std::vector<Eigen::VectorXd> initial_dictionary;

    static RunConfig from_table(const ConfigTable& table);
    static RunConfig from_file(const std::string& path);
    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    void validate() const;
    double resolved_bandwidth() const;
};

}  // namespace ksdt
