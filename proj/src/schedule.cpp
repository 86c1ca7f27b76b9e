#include "ksdt/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ksdt/errors.hpp"

namespace ksdt {

void GrowthSchedule::validate() const {
    switch (kind) {
        case Kind::Linear:
        case Kind::PowerLog:
            if (!(c > 0.0)) throw ConfigError("growth constant c must be positive");
            break;
        case Kind::SqrtLog:
            break;
        case Kind::Fixed:
            if (floor_size < 1) throw ConfigError("fixed growth floor must be >= 1");
            break;
    }
    if (kind == Kind::PowerLog && !(alpha > 1.0 && alpha < 2.0)) {
        throw ConfigError("power-log growth exponent alpha must lie in (1,2)");
    }
}

double GrowthSchedule::value_at(std::int64_t t) const {
    if (t < 1) throw ConfigError("growth schedule requires t >= 1");
    const double td = static_cast<double>(t);
    switch (kind) {
        case Kind::Linear:
            return c * td;
        case Kind::SqrtLog:
            return std::sqrt(td * std::log(td));
        case Kind::PowerLog:
            return c * std::sqrt(std::pow(td, alpha) * std::log(td));
        case Kind::Fixed:
            return static_cast<double>(floor_size);
    }
    throw ConfigError("unknown growth schedule kind");
}

std::int64_t GrowthSchedule::floor_at(std::int64_t t) const {
    return std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(value_at(t))));
}

void BudgetSchedule::validate() const {
    if (kind == Kind::Constant) {
        if (!(epsilon >= 0.0)) throw ConfigError("constant budget must be >= 0");
    } else {
        growth.validate();
        if (growth.kind == GrowthSchedule::Kind::Fixed && growth.floor_size < 1) {
            throw ConfigError("decaying budget growth floor must be >= 1");
        }
    }
}

double BudgetSchedule::at(std::int64_t t) const {
    if (t < 1) throw ConfigError("budget schedule requires t >= 1");
    if (kind == Kind::Constant) return epsilon;
    if (t == 1) return 0.0;  // log(1) = 0
    const double f = growth.value_at(t);
    return std::log(static_cast<double>(t)) / (f * f);
}

}  // namespace ksdt
