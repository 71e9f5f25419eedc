#include "multspec/mult_func.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "multspec/errors.hpp"
#include "multspec/numeric.hpp"

namespace multspec {

namespace {

constexpr double kBoundSlack = 1e-12;

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Hash of (seed, p, e) mapped into [-1, 1).
double hashed_value(uint64_t seed, uint64_t p, uint32_t e) {
    uint64_t h = splitmix64(seed ^ splitmix64(p ^ splitmix64(e)));
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

struct MultiplicativeFunction::Impl {
    Rule rule;
    Rule bound_rule;
    double uniform_bound = 1.0;
    bool cm = false;
    uint32_t support_k = 0;
    std::map<std::pair<uint64_t, uint32_t>, double> overrides;
};

MultiplicativeFunction::MultiplicativeFunction() {
    auto impl = std::make_shared<Impl>();
    impl->rule = [](uint64_t, uint32_t) { return 0.0; };
    impl->support_k = 2;  // vacuously: zero below any exponent
    impl_ = std::move(impl);
}

MultiplicativeFunction MultiplicativeFunction::from_rule(Rule rule) {
    return from_rule(std::move(rule), Traits{});
}

MultiplicativeFunction MultiplicativeFunction::from_rule(Rule rule, Traits traits) {
    if (!rule) throw std::invalid_argument("from_rule: empty rule");
    MultiplicativeFunction f;
    auto impl = std::make_shared<Impl>();
    impl->rule = std::move(rule);
    impl->bound_rule = std::move(traits.bound_rule);
    impl->uniform_bound = traits.uniform_bound;
    impl->cm = traits.completely_multiplicative;
    impl->support_k = traits.support_k;
    f.impl_ = std::move(impl);
    return f;
}

double MultiplicativeFunction::bound(uint64_t p, uint32_t e) const {
    if (e == 0) return 1.0;
    return impl_->bound_rule ? impl_->bound_rule(p, e) : impl_->uniform_bound;
}

double MultiplicativeFunction::at(uint64_t p, uint32_t e) const {
    if (e == 0) return 1.0;
    double v;
    if (!impl_->overrides.empty()) {
        auto it = impl_->overrides.find({p, e});
        v = it != impl_->overrides.end() ? it->second : impl_->rule(p, e);
    } else {
        v = impl_->rule(p, e);
    }
    if (std::abs(v) > bound(p, e) + kBoundSlack) {
        throw invariant_error("rule value " + std::to_string(v) + " at p=" + std::to_string(p) +
                              " e=" + std::to_string(e) + " exceeds bound " +
                              std::to_string(bound(p, e)));
    }
    return v;
}

double MultiplicativeFunction::evaluate(const FactoredInteger& n) const {
    uint32_t support = impl_->support_k;
    if (support >= 2 && impl_->overrides.empty()) {
        for (const auto& [p, e] : n.factors) {
            (void)p;
            if (e < support) return 0.0;
        }
    }
    double v = 1.0;
    for (const auto& [p, e] : n.factors) {
        v *= at(p, e);
        if (v == 0.0) return 0.0;
    }
    return v;
}

bool MultiplicativeFunction::completely_multiplicative() const { return impl_->cm; }
uint32_t MultiplicativeFunction::support_k() const { return impl_->support_k; }

const std::map<std::pair<uint64_t, uint32_t>, double>& MultiplicativeFunction::overrides() const {
    return impl_->overrides;
}

MultiplicativeFunction MultiplicativeFunction::with_override(uint64_t p, uint32_t e,
                                                             double value) const {
    if (e == 0) throw std::domain_error("with_override: exponent must be >= 1");
    if (std::abs(value) > bound(p, e) + kBoundSlack) {
        throw invariant_error("override exceeds the bound at p=" + std::to_string(p) +
                              " e=" + std::to_string(e));
    }
    if (impl_->support_k >= 2 && e < impl_->support_k && value != 0.0) {
        throw invariant_error("override breaks the support flag at p=" + std::to_string(p) +
                              " e=" + std::to_string(e));
    }
    MultiplicativeFunction f;
    auto impl = std::make_shared<Impl>(*impl_);
    impl->overrides[{p, e}] = value;
    f.impl_ = std::move(impl);
    return f;
}

MultiplicativeFunction delta_function() { return {}; }

MultiplicativeFunction one_function() {
    return MultiplicativeFunction::from_rule([](uint64_t, uint32_t) { return 1.0; },
                                             {.completely_multiplicative = true});
}

MultiplicativeFunction powerful_ones() {
    return MultiplicativeFunction::from_rule(
        [](uint64_t, uint32_t e) { return e >= 2 ? 1.0 : 0.0; }, {.support_k = 2});
}

MultiplicativeFunction extremal_minus_at_2() {
    return MultiplicativeFunction::from_rule(
        [](uint64_t p, uint32_t e) {
            if (e < 2) return 0.0;
            return p == 2 ? -1.0 : 1.0;
        },
        {.support_k = 2});
}

MultiplicativeFunction odd_powerful_ones() {
    return MultiplicativeFunction::from_rule(
        [](uint64_t p, uint32_t e) {
            if (e < 2 || p == 2) return 0.0;
            return 1.0;
        },
        {.support_k = 2});
}

MultiplicativeFunction convolve(const MultiplicativeFunction& f, const MultiplicativeFunction& g) {
    auto rule = [f, g](uint64_t p, uint32_t e) {
        double s = 0.0;
        for (uint32_t i = 0; i <= e; ++i) s += f.at(p, i) * g.at(p, e - i);
        return s;
    };
    auto bound_rule = [f, g](uint64_t p, uint32_t e) {
        double s = 0.0;
        for (uint32_t i = 0; i <= e; ++i) s += f.bound(p, i) * g.bound(p, e - i);
        return s;
    };
    MultiplicativeFunction::Traits traits;
    traits.support_k = std::min(f.support_k(), g.support_k());
    traits.bound_rule = bound_rule;
    return MultiplicativeFunction::from_rule(rule, traits);
}

MultiplicativeFunction cm_extension(const MultiplicativeFunction& f) {
    auto rule = [f](uint64_t p, uint32_t e) { return ipow(f.at(p, 1), e); };
    return MultiplicativeFunction::from_rule(rule, {.completely_multiplicative = true});
}

MultiplicativeFunction cm_residual(const MultiplicativeFunction& f) {
    auto rule = [f](uint64_t p, uint32_t e) {
        if (e < 2) return 0.0;
        return f.at(p, e) - f.at(p, e - 1) * f.at(p, 1);
    };
    return MultiplicativeFunction::from_rule(rule, {.support_k = 2, .uniform_bound = 2.0});
}

MultiplicativeFunction smooth_small_primes(const MultiplicativeFunction& f, double y) {
    if (y < 0) throw std::domain_error("smooth_small_primes: y must be >= 0");
    auto rule = [f, y](uint64_t p, uint32_t e) {
        double base = static_cast<double>(p) <= y ? 1.0 : f.at(p, 1);
        return ipow(base, e);
    };
    return MultiplicativeFunction::from_rule(rule, {.completely_multiplicative = true});
}

MultiplicativeFunction small_prime_residual(const MultiplicativeFunction& f, double y) {
    if (y < 0) throw std::domain_error("small_prime_residual: y must be >= 0");
    auto rule = [f, y](uint64_t p, uint32_t e) {
        if (static_cast<double>(p) > y) return 0.0;
        double base = f.at(p, 1);
        return ipow(base, e) - ipow(base, e - 1);
    };
    return MultiplicativeFunction::from_rule(rule, {.uniform_bound = 2.0});
}

MultiplicativeFunction combined_residual(const MultiplicativeFunction& f, double y) {
    if (y < 0) throw std::domain_error("combined_residual: y must be >= 0");
    auto rule = [f, y](uint64_t p, uint32_t e) {
        if (static_cast<double>(p) <= y) {
            return f.at(p, e) - f.at(p, e - 1);
        }
        if (e < 2) return 0.0;
        return f.at(p, e) - f.at(p, e - 1) * f.at(p, 1);
    };
    return MultiplicativeFunction::from_rule(rule, {.uniform_bound = 2.0});
}

MultiplicativeFunction square_cm_extension(const MultiplicativeFunction& f) {
    if (f.support_k() < 2) {
        throw std::domain_error("square_cm_extension: f must be flagged powerful-supported");
    }
    auto rule = [f](uint64_t p, uint32_t e) {
        if (e % 2 != 0) return 0.0;
        return ipow(f.at(p, 2), e / 2);
    };
    return MultiplicativeFunction::from_rule(rule, {.support_k = 2});
}

MultiplicativeFunction square_compression(const MultiplicativeFunction& f) {
    if (f.support_k() < 2) {
        throw std::domain_error("square_compression: f must be flagged powerful-supported");
    }
    auto rule = [f](uint64_t p, uint32_t e) { return ipow(f.at(p, 2), e); };
    return MultiplicativeFunction::from_rule(rule, {.completely_multiplicative = true});
}

MultiplicativeFunction powerful_residual(const MultiplicativeFunction& f) {
    if (f.support_k() < 2) {
        throw std::domain_error("powerful_residual: f must be flagged powerful-supported");
    }
    auto rule = [f](uint64_t p, uint32_t e) {
        if (e < 2) return 0.0;
        // f(p^0) = 1 is hard-coded so that e = 2 cancels exactly.
        double lower = e == 2 ? 1.0 : f.at(p, e - 2);
        return f.at(p, e) - lower * f.at(p, 2);
    };
    return MultiplicativeFunction::from_rule(rule, {.support_k = 3, .uniform_bound = 2.0});
}

MultiplicativeFunction random_function(uint64_t seed, Profile profile, uint64_t p_max,
                                       uint32_t k_max) {
    if (k_max < 1) throw std::domain_error("random_function: k_max must be >= 1");
    switch (profile) {
        case Profile::general: {
            auto rule = [seed, p_max, k_max](uint64_t p, uint32_t e) {
                if (p > p_max) return 1.0;
                return hashed_value(seed, p, std::min(e, k_max));
            };
            return MultiplicativeFunction::from_rule(rule);
        }
        case Profile::completely_multiplicative: {
            auto rule = [seed, p_max](uint64_t p, uint32_t e) {
                double base = p > p_max ? 1.0 : hashed_value(seed, p, 1);
                return ipow(base, e);
            };
            return MultiplicativeFunction::from_rule(rule, {.completely_multiplicative = true});
        }
        case Profile::powerful_support: {
            auto rule = [seed, p_max, k_max](uint64_t p, uint32_t e) {
                if (e < 2) return 0.0;
                if (p > p_max) return 1.0;
                return hashed_value(seed, p, std::min(e, k_max));
            };
            return MultiplicativeFunction::from_rule(rule, {.support_k = 2});
        }
        case Profile::odd_powerful: {
            auto rule = [seed, p_max, k_max](uint64_t p, uint32_t e) {
                if (e < 2 || p == 2) return 0.0;
                if (p > p_max) return 1.0;
                return hashed_value(seed, p, std::min(e, k_max));
            };
            return MultiplicativeFunction::from_rule(rule, {.support_k = 2});
        }
    }
    throw std::domain_error("random_function: unknown profile");
}

MultiplicativeFunction build_function(const FunctionSpec& spec) {
    MultiplicativeFunction f;
    if (spec.profile == "delta") {
        f = delta_function();
    } else if (spec.profile == "one") {
        f = one_function();
    } else if (spec.profile == "all-ones") {
        f = powerful_ones();
    } else if (spec.profile == "minus-at-2") {
        f = extremal_minus_at_2();
    } else if (spec.profile == "odd-powerful") {
        f = odd_powerful_ones();
    } else if (spec.profile == "random-general") {
        f = random_function(spec.seed, Profile::general, spec.p_max, spec.k_max);
    } else if (spec.profile == "random-cm") {
        f = random_function(spec.seed, Profile::completely_multiplicative, spec.p_max, spec.k_max);
    } else if (spec.profile == "random-powerful") {
        f = random_function(spec.seed, Profile::powerful_support, spec.p_max, spec.k_max);
    } else if (spec.profile == "random-odd-powerful") {
        f = random_function(spec.seed, Profile::odd_powerful, spec.p_max, spec.k_max);
    } else {
        throw std::invalid_argument("unknown profile: " + spec.profile);
    }
    for (const auto& [p, e, v] : spec.overrides) {
        f = f.with_override(p, e, v);
    }
    return f;
}

FunctionSpec parse_function_spec(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::invalid_argument(std::string("function spec is not valid JSON: ") + err.what());
    }
    if (!doc.is_object() || !doc.contains("profile")) {
        throw std::invalid_argument("function spec must be an object with a \"profile\" key");
    }
    FunctionSpec spec;
    spec.profile = doc.at("profile").get<std::string>();
    const auto& defaults = doc.contains("defaults") ? doc.at("defaults") : doc;
    if (defaults.contains("seed")) spec.seed = defaults.at("seed").get<uint64_t>();
    if (defaults.contains("p_max")) spec.p_max = defaults.at("p_max").get<uint64_t>();
    if (defaults.contains("k_max")) spec.k_max = defaults.at("k_max").get<uint32_t>();
    if (doc.contains("overrides")) {
        for (const auto& row : doc.at("overrides")) {
            if (!row.is_array() || row.size() != 3) {
                throw std::invalid_argument("overrides entries must be [p, k, value] triples");
            }
            spec.overrides.emplace_back(row[0].get<uint64_t>(), row[1].get<uint32_t>(),
                                        row[2].get<double>());
        }
    }
    return spec;
}

std::string to_json(const FunctionSpec& spec) {
    nlohmann::ordered_json doc;
    doc["profile"] = spec.profile;
    doc["defaults"] = {{"seed", spec.seed}, {"p_max", spec.p_max}, {"k_max", spec.k_max}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [p, e, v] : spec.overrides) {
        rows.push_back({p, e, v});
    }
    doc["overrides"] = std::move(rows);
    return doc.dump(2);
}

}  // namespace multspec
