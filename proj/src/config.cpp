#include "ksdt/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ksdt/errors.hpp"

namespace ksdt {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Parse one value: quoted string, bool, number, or bracketed array.
ConfigValue parse_value(const std::string& raw, int line_no);

std::vector<ConfigValue> parse_array_items(const std::string& body, int line_no) {
    std::vector<ConfigValue> items;
    std::string current;
    int depth = 0;
    bool in_string = false;
    for (char ch : body) {
        if (ch == '"') in_string = !in_string;
        if (!in_string) {
            if (ch == '[') ++depth;
            if (ch == ']') --depth;
            if (ch == ',' && depth == 0) {
                if (!trim(current).empty()) items.push_back(parse_value(trim(current), line_no));
                current.clear();
                continue;
            }
        }
        current += ch;
    }
    if (!trim(current).empty()) items.push_back(parse_value(trim(current), line_no));
    return items;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
    ConfigValue v;
    if (raw.empty()) {
        throw ConfigError("empty value at line " + std::to_string(line_no));
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            throw ConfigError("unterminated string at line " + std::to_string(line_no));
        }
        v.type = ConfigValue::Type::String;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') {
            throw ConfigError("unterminated array at line " + std::to_string(line_no));
        }
        v.type = ConfigValue::Type::Array;
        v.array = parse_array_items(raw.substr(1, raw.size() - 2), line_no);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = ConfigValue::Type::Bool;
        v.boolean = raw == "true";
        return v;
    }
    try {
        std::size_t used = 0;
        v.num = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value '" + raw + "' at line " +
                          std::to_string(line_no));
    }
    v.type = ConfigValue::Type::Number;
    return v;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
    ConfigTable table;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments outside strings.
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("malformed section header at line " +
                                  std::to_string(line_no));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value' at line " + std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("empty key at line " + std::to_string(line_no));
        }
        const std::string full_key = section.empty() ? key : section + "." + key;
        table[full_key] = parse_value(trim(line.substr(eq + 1)), line_no);
    }
    return table;
}

ConfigTable parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

const ConfigValue* find(const ConfigTable& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

double get_number(const ConfigTable& t, const std::string& key, double fallback) {
    const ConfigValue* v = find(t, key);
    if (!v) return fallback;
    if (v->type != ConfigValue::Type::Number) fail(key, "expected a number");
    return v->num;
}

std::string get_string(const ConfigTable& t, const std::string& key,
                       const std::string& fallback) {
    const ConfigValue* v = find(t, key);
    if (!v) return fallback;
    if (v->type != ConfigValue::Type::String) fail(key, "expected a string");
    return v->str;
}

std::vector<double> as_number_list(const ConfigValue& v, const std::string& key) {
    if (v.type != ConfigValue::Type::Array) fail(key, "expected an array");
    std::vector<double> out;
    for (const auto& item : v.array) {
        if (item.type != ConfigValue::Type::Number) fail(key, "expected numbers");
        out.push_back(item.num);
    }
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

std::vector<Eigen::VectorXd> as_vector_list(const ConfigValue& v,
                                            const std::string& key) {
    if (v.type != ConfigValue::Type::Array) fail(key, "expected an array of arrays");
    std::vector<Eigen::VectorXd> out;
    for (const auto& item : v.array) {
        out.push_back(to_vector(as_number_list(item, key)));
    }
    return out;
}

TargetSpec parse_target(const ConfigTable& t) {
    TargetSpec spec;
    const std::string kind = get_string(t, "target.kind", "gaussian");
    if (kind == "gaussian") {
        spec.kind = TargetSpec::Kind::Gaussian;
    } else if (kind == "mixture") {
        spec.kind = TargetSpec::Kind::Mixture;
    } else if (kind == "grid") {
        spec.kind = TargetSpec::Kind::Grid;
    } else if (kind == "bimodal") {
        spec.kind = TargetSpec::Kind::Bimodal;
    } else {
        fail("target.kind", "must be gaussian, mixture, grid, or bimodal");
    }

    if (spec.kind == TargetSpec::Kind::Grid) {
        spec.modes = static_cast<int>(get_number(t, "target.modes", 1));
        spec.mode_cov = get_number(t, "target.cov_scale", 0.5);
        spec.mode_spacing = get_number(t, "target.spacing", 1.0);
        return spec;
    }
    if (spec.kind == TargetSpec::Kind::Bimodal) return spec;

    if (const ConfigValue* means = find(t, "target.means")) {
        spec.means = as_vector_list(*means, "target.means");
    } else if (spec.kind == TargetSpec::Kind::Gaussian) {
        spec.means = {Eigen::VectorXd::Zero(
            static_cast<Eigen::Index>(get_number(t, "target.dim", 2)))};
    } else {
        fail("target.means", "required for mixture targets");
    }

    if (const ConfigValue* covs = find(t, "target.covs")) {
        spec.covs = as_vector_list(*covs, "target.covs");
    } else if (const ConfigValue* cov = find(t, "target.cov")) {
        const Eigen::VectorXd shared = to_vector(as_number_list(*cov, "target.cov"));
        spec.covs.assign(spec.means.size(), shared);
    } else {
        for (const auto& m : spec.means) {
            spec.covs.push_back(Eigen::VectorXd::Ones(m.size()));
        }
    }

    if (const ConfigValue* w = find(t, "target.weights")) {
        spec.weights = as_number_list(*w, "target.weights");
    } else {
        spec.weights.assign(spec.means.size(), 1.0 / spec.means.size());
    }
    return spec;
}

SamplerConfig parse_sampler(const ConfigTable& t) {
    SamplerConfig cfg;
    const std::string kind = get_string(t, "sampler.kind", "rwm");
    if (kind == "rwm") {
        cfg.kind = SamplerKind::RWM;
    } else if (kind == "mala") {
        cfg.kind = SamplerKind::MALA;
    } else if (kind == "iid") {
        cfg.kind = SamplerKind::IID;
    } else {
        fail("sampler.kind", "must be rwm, mala, or iid");
    }
    cfg.step = get_number(t, "sampler.step", 1.0);
    cfg.batch = static_cast<int>(get_number(t, "sampler.m", 1));
    const std::string cont = get_string(t, "sampler.continue_from", "last");
    if (cont == "last") {
        cfg.continue_from = ContinueFrom::Last;
    } else if (cont == "selected") {
        cfg.continue_from = ContinueFrom::Selected;
    } else {
        fail("sampler.continue_from", "must be last or selected");
    }
    return cfg;
}

GrowthSchedule parse_growth(const ConfigTable& t) {
    const std::string kind = get_string(t, "thinning.growth", "linear");
    if (kind == "linear") {
        return GrowthSchedule::linear(get_number(t, "thinning.c", 0.5));
    }
    if (kind == "sqrtlog") return GrowthSchedule::sqrt_log();
    if (kind == "powerlog") {
        return GrowthSchedule::power_log(get_number(t, "thinning.alpha", 1.5),
                                         get_number(t, "thinning.c", 0.5));
    }
    if (kind == "fixed") {
        return GrowthSchedule::fixed(
            static_cast<int>(get_number(t, "thinning.floor", 10)));
    }
    fail("thinning.growth", "must be linear, sqrtlog, powerlog, or fixed");
}

}  // namespace

Target TargetSpec::build() const {
    switch (kind) {
        case Kind::Grid:
            return Target::grid_mixture(modes, mode_cov, mode_spacing);
        case Kind::Bimodal:
            return Target::bimodal();
        case Kind::Gaussian:
            if (means.size() != 1 || covs.size() != 1) {
                fail("target", "gaussian target needs exactly one mean/cov");
            }
            return Target::gaussian(means.front(), covs.front());
        case Kind::Mixture: {
            if (means.size() != covs.size() || means.size() != weights.size()) {
                fail("target", "means, covs, and weights must have equal lengths");
            }
            std::vector<Target::Component> comps;
            for (std::size_t i = 0; i < means.size(); ++i) {
                comps.push_back({weights[i], means[i], covs[i]});
            }
            return Target::mixture(std::move(comps));
        }
    }
    throw ConfigError("unknown target kind");
}

Eigen::Index TargetSpec::dim() const {
    if (kind == Kind::Grid || kind == Kind::Bimodal) return 2;
    return means.empty() ? 0 : means.front().size();
}

RunConfig RunConfig::from_table(const ConfigTable& t) {
    RunConfig cfg;
    const std::string kernel = get_string(t, "kernel", "imq");
    if (kernel == "imq") {
        cfg.kernel = KernelFamily::IMQ;
    } else if (kernel == "rbf") {
        cfg.kernel = KernelFamily::RBF;
    } else {
        fail("kernel", "must be imq or rbf");
    }
    if (const ConfigValue* bw = find(t, "bandwidth")) {
        if (bw->type != ConfigValue::Type::Number) fail("bandwidth", "expected a number");
        cfg.bandwidth = bw->num;
    }
    cfg.seed = static_cast<std::uint64_t>(get_number(t, "seed", 0));
    cfg.steps = static_cast<std::int64_t>(get_number(t, "steps", 2000));
    cfg.record_every = static_cast<std::int64_t>(get_number(t, "record_every", 10));
    cfg.target = parse_target(t);
    cfg.sampler = parse_sampler(t);

    const std::string budget = get_string(t, "thinning.budget", "constant");
    if (budget == "constant") {
        cfg.thinning.budget =
            BudgetSchedule::constant(get_number(t, "thinning.epsilon", 0.0));
    } else if (budget == "decaying") {
        cfg.thinning.budget = BudgetSchedule::decaying(parse_growth(t));
    } else {
        fail("thinning.budget", "must be constant or decaying");
    }
    cfg.thinning.growth = parse_growth(t);
    cfg.thinning.recompute_every =
        static_cast<int>(get_number(t, "thinning.recompute_every", 0));
    if (const ConfigValue* enabled = find(t, "thinning.enabled")) {
        if (enabled->type != ConfigValue::Type::Bool) {
            fail("thinning.enabled", "expected true or false");
        }
        cfg.thinning_enabled = enabled->boolean;
    }
    if (const ConfigValue* init = find(t, "thinning.initial_dictionary")) {
        cfg.initial_dictionary = as_vector_list(*init, "thinning.initial_dictionary");
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_table(parse_config_file(path));
}

void RunConfig::validate() const {
    if (steps < 1) fail("steps", "must be >= 1");
    if (record_every < 1) fail("record_every", "must be >= 1");
    if (record_every > steps) fail("record_every", "must not exceed steps");
    if (kernel == KernelFamily::RBF && bandwidth && !(*bandwidth > 0.0)) {
        fail("bandwidth", "must be positive");
    }
    sampler.validate();
    thinning.validate();
    target.build();  // surfaces target field errors
    for (const auto& p : initial_dictionary) {
        if (p.size() != target.dim()) {
            fail("thinning.initial_dictionary", "point dimension mismatch");
        }
    }
}

double RunConfig::resolved_bandwidth() const {
    if (bandwidth) return *bandwidth;
    return static_cast<double>(target.dim());
}

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i];
    return v;
}

nlohmann::json vecs_to_json(const std::vector<Eigen::VectorXd>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : vs) a.push_back(vec_to_json(v));
    return a;
}

std::vector<Eigen::VectorXd> vecs_from_json(const nlohmann::json& a) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& item : a) out.push_back(vec_from_json(item));
    return out;
}

std::string growth_kind_name(GrowthSchedule::Kind k) {
    switch (k) {
        case GrowthSchedule::Kind::Linear: return "linear";
        case GrowthSchedule::Kind::SqrtLog: return "sqrtlog";
        case GrowthSchedule::Kind::PowerLog: return "powerlog";
        case GrowthSchedule::Kind::Fixed: return "fixed";
    }
    return "linear";
}

GrowthSchedule::Kind growth_kind_from_name(const std::string& s) {
    if (s == "linear") return GrowthSchedule::Kind::Linear;
    if (s == "sqrtlog") return GrowthSchedule::Kind::SqrtLog;
    if (s == "powerlog") return GrowthSchedule::Kind::PowerLog;
    if (s == "fixed") return GrowthSchedule::Kind::Fixed;
    fail("thinning.growth", "unknown growth kind '" + s + "'");
}

nlohmann::json growth_to_json(const GrowthSchedule& g) {
    return {{"kind", growth_kind_name(g.kind)},
            {"c", g.c},
            {"alpha", g.alpha},
            {"floor", g.floor_size}};
}

GrowthSchedule growth_from_json(const nlohmann::json& j) {
    GrowthSchedule g;
    g.kind = growth_kind_from_name(j.at("kind"));
    g.c = j.value("c", 0.5);
    g.alpha = j.value("alpha", 1.5);
    g.floor_size = j.value("floor", 10);
    return g;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["kernel"] = kernel == KernelFamily::IMQ ? "imq" : "rbf";
    if (bandwidth) j["bandwidth"] = *bandwidth;
    j["seed"] = seed;
    j["steps"] = steps;
    j["record_every"] = record_every;

    nlohmann::json target_j;
    switch (target.kind) {
        case TargetSpec::Kind::Gaussian: target_j["kind"] = "gaussian"; break;
        case TargetSpec::Kind::Mixture: target_j["kind"] = "mixture"; break;
        case TargetSpec::Kind::Grid: target_j["kind"] = "grid"; break;
        case TargetSpec::Kind::Bimodal: target_j["kind"] = "bimodal"; break;
    }
    if (target.kind == TargetSpec::Kind::Grid) {
        target_j["modes"] = target.modes;
        target_j["cov_scale"] = target.mode_cov;
        target_j["spacing"] = target.mode_spacing;
    } else if (target.kind != TargetSpec::Kind::Bimodal) {
        target_j["means"] = vecs_to_json(target.means);
        target_j["covs"] = vecs_to_json(target.covs);
        target_j["weights"] = target.weights;
    }
    j["target"] = target_j;

    nlohmann::json sampler_j;
    switch (sampler.kind) {
        case SamplerKind::RWM: sampler_j["kind"] = "rwm"; break;
        case SamplerKind::MALA: sampler_j["kind"] = "mala"; break;
        case SamplerKind::IID: sampler_j["kind"] = "iid"; break;
    }
    sampler_j["step"] = sampler.step;
    sampler_j["m"] = sampler.batch;
    sampler_j["continue_from"] =
        sampler.continue_from == ContinueFrom::Last ? "last" : "selected";
    j["sampler"] = sampler_j;

    nlohmann::json thin_j;
    thin_j["enabled"] = thinning_enabled;
    thin_j["budget"] =
        thinning.budget.kind == BudgetSchedule::Kind::Constant ? "constant" : "decaying";
    thin_j["epsilon"] = thinning.budget.epsilon;
    if (thinning.budget.kind == BudgetSchedule::Kind::Decaying) {
        thin_j["budget_growth"] = growth_to_json(thinning.budget.growth);
    }
    thin_j["growth"] = growth_to_json(thinning.growth);
    thin_j["recompute_every"] = thinning.recompute_every;
    if (!initial_dictionary.empty()) {
        thin_j["initial_dictionary"] = vecs_to_json(initial_dictionary);
    }
    j["thinning"] = thin_j;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    const std::string kernel = j.value("kernel", "imq");
    if (kernel == "imq") {
        cfg.kernel = KernelFamily::IMQ;
    } else if (kernel == "rbf") {
        cfg.kernel = KernelFamily::RBF;
    } else {
        fail("kernel", "must be imq or rbf");
    }
    if (j.contains("bandwidth")) cfg.bandwidth = j["bandwidth"].get<double>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.steps = j.value("steps", std::int64_t{2000});
    cfg.record_every = j.value("record_every", std::int64_t{10});

    const auto& tj = j.at("target");
    const std::string tkind = tj.value("kind", "gaussian");
    if (tkind == "gaussian") {
        cfg.target.kind = TargetSpec::Kind::Gaussian;
    } else if (tkind == "mixture") {
        cfg.target.kind = TargetSpec::Kind::Mixture;
    } else if (tkind == "grid") {
        cfg.target.kind = TargetSpec::Kind::Grid;
    } else if (tkind == "bimodal") {
        cfg.target.kind = TargetSpec::Kind::Bimodal;
    } else {
        fail("target.kind", "unknown kind '" + tkind + "'");
    }
    if (cfg.target.kind == TargetSpec::Kind::Grid) {
        cfg.target.modes = tj.value("modes", 1);
        cfg.target.mode_cov = tj.value("cov_scale", 0.5);
        cfg.target.mode_spacing = tj.value("spacing", 1.0);
    } else if (cfg.target.kind != TargetSpec::Kind::Bimodal) {
        cfg.target.means = vecs_from_json(tj.at("means"));
        cfg.target.covs = vecs_from_json(tj.at("covs"));
        cfg.target.weights = tj.at("weights").get<std::vector<double>>();
    }

    const auto& sj = j.at("sampler");
    const std::string skind = sj.value("kind", "rwm");
    if (skind == "rwm") {
        cfg.sampler.kind = SamplerKind::RWM;
    } else if (skind == "mala") {
        cfg.sampler.kind = SamplerKind::MALA;
    } else if (skind == "iid") {
        cfg.sampler.kind = SamplerKind::IID;
    } else {
        fail("sampler.kind", "unknown kind '" + skind + "'");
    }
    cfg.sampler.step = sj.value("step", 1.0);
    cfg.sampler.batch = sj.value("m", 1);
    cfg.sampler.continue_from = sj.value("continue_from", "last") == std::string("selected")
                                    ? ContinueFrom::Selected
                                    : ContinueFrom::Last;

    const auto& thj = j.at("thinning");
    cfg.thinning_enabled = thj.value("enabled", true);
    if (thj.value("budget", "constant") == std::string("constant")) {
        cfg.thinning.budget = BudgetSchedule::constant(thj.value("epsilon", 0.0));
    } else {
        cfg.thinning.budget = BudgetSchedule::decaying(growth_from_json(thj.at("budget_growth")));
    }
    cfg.thinning.growth = growth_from_json(thj.at("growth"));
    cfg.thinning.recompute_every = thj.value("recompute_every", 0);
    if (thj.contains("initial_dictionary")) {
        cfg.initial_dictionary = vecs_from_json(thj["initial_dictionary"]);
    }
    cfg.validate();
    return cfg;
}

}  // namespace ksdt
