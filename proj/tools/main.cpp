// multspec: command-line front end for the powerful-number mean value and
// spectrum toolkit.  Emits CSV or JSON tables; every numeric row carries an
// error or tolerance column.  Exit codes: 0 success, 1 verification failure,
// 2 usage error, 3 resource limit.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multspec/arith.hpp"
#include "multspec/errors.hpp"
#include "multspec/euler.hpp"
#include "multspec/mean_values.hpp"
#include "multspec/mult_func.hpp"
#include "multspec/volterra.hpp"

using json = nlohmann::ordered_json;
using namespace multspec;

namespace {

// ---- output plumbing ----

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_cell(const json& cell) {
    std::string text;
    if (cell.is_string()) {
        text = cell.get<std::string>();
    } else if (cell.is_number_float()) {
        return fmt_double(cell.get<double>());
    } else {
        return cell.dump();
    }
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

void emit_table(const Table& table, const std::string& command, const json& config,
                const std::string& format, const std::string& out_path) {
    std::ostringstream body;
    if (format == "csv") {
        for (size_t c = 0; c < table.columns.size(); ++c) {
            if (c) body << ',';
            body << table.columns[c];
        }
        body << '\n';
        for (const auto& row : table.rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                if (c) body << ',';
                body << csv_cell(row[c]);
            }
            body << '\n';
        }
    } else {
        json doc;
        doc["command"] = command;
        doc["config"] = config;
        json rows = json::array();
        for (const auto& row : table.rows) {
            json obj;
            for (size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = row[c];
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
        body << doc.dump(2) << '\n';
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
        out << body.str();
    }
}

// ---- shared parsing ----

// Comma-separated grid of bounds.  Values are floored to integers; anything
// past the 10^15 enumeration cap is a resource refusal, not a usage error.
std::vector<uint64_t> parse_x_grid(const std::string& text) {
    std::vector<uint64_t> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--x: cannot parse '" + item + "'");
        }
        if (used != item.size() || !std::isfinite(v) || v < 1.0)
            throw std::invalid_argument("--x: cannot parse '" + item + "'");
        if (v > static_cast<double>(kMaxBound))
            throw resource_error("--x: " + item + " is past the 10^15 enumeration cap");
        grid.push_back(static_cast<uint64_t>(v));
    }
    if (grid.empty()) throw std::invalid_argument("--x: empty grid");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read function file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MultiplicativeFunction function_from_flags(const std::string& profile,
                                           const std::string& function_file, uint64_t seed) {
    if (!function_file.empty()) return build_function(parse_function_spec(slurp(function_file)));
    FunctionSpec spec;
    spec.profile = profile;
    spec.seed = seed;
    return build_function(spec);
}

std::string fmt_factors(const FactoredInteger& n) {
    if (n.factors.empty()) return "1";
    std::string s;
    for (const auto& pp : n.factors) {
        if (!s.empty()) s += '*';
        s += std::to_string(pp.p);
        if (pp.e > 1) {
            s += '^';
            s += std::to_string(pp.e);
        }
    }
    return s;
}

// ---- constants ----

int cmd_constants(uint64_t prime_limit, double tol, const std::string& format,
                  const std::string& out) {
    Table t;
    t.columns = {"name", "value", "error_bound", "method"};
    for (uint32_t k : {2u, 3u}) {
        auto c = kfull_constant(k, prime_limit);
        t.rows.push_back({"C" + std::to_string(k), c.value,
                          std::abs(c.value) * std::expm1(c.tail_bound),
                          "truncated Euler product, primes <= " + std::to_string(prime_limit)});
    }
    double d1 = delta1_quadrature(tol);
    t.rows.push_back({"delta1", d1, tol, "adaptive Simpson quadrature"});
    t.rows.push_back({"delta1_log2", d1 * std::log(2.0), tol * std::log(2.0),
                      "delta1 times log 2"});
    t.rows.push_back({"delta2", delta2(), 1e-15, "closed form -sqrt(2)/(4+sqrt(2))"});
    json config{{"prime_limit", prime_limit}, {"tol", tol}};
    emit_table(t, "constants", config, format, out);
    return 0;
}

// ---- powerful count / list ----

int cmd_powerful_count(const std::string& x_text, uint32_t k, const std::string& format,
                       const std::string& out) {
    Table t;
    t.columns = {"x", "count", "error_bound"};
    for (uint64_t x : parse_x_grid(x_text)) {
        t.rows.push_back({x, count_kfull(x, k), 0.0});
    }
    json config{{"x", x_text}, {"k", k}};
    emit_table(t, "powerful count", config, format, out);
    return 0;
}

int cmd_powerful_list(double x, uint32_t k, const std::string& format, const std::string& out) {
    if (!(x >= 1.0)) throw std::invalid_argument("--x must be >= 1");
    if (x > 1e10) throw resource_error("powerful list caps at x = 10^10; use count above that");
    Table t;
    t.columns = {"n", "factorization", "error_bound"};
    KfullStream stream(static_cast<uint64_t>(x), k);
    while (auto n = stream.next()) {
        t.rows.push_back({n->value, fmt_factors(*n), 0.0});
    }
    json config{{"x", x}, {"k", k}};
    emit_table(t, "powerful list", config, format, out);
    return 0;
}

// ---- endpoint-run ----

int cmd_endpoint_run(const std::string& profile, const std::string& function_file,
                     uint64_t seed, const std::string& x_text, double epsilon,
                     const std::string& format, const std::string& out) {
    auto f = function_from_flags(profile, function_file, seed);
    bool odd = function_file.empty() && profile == "odd-powerful";
    Table t;
    t.columns = {"x", "terms", "ratio", "ratio_minus_delta2", "float_err"};
    if (odd) t.columns.push_back("loglog_floor");
    double d2 = delta2();
    for (uint64_t x : parse_x_grid(x_text)) {
        auto report = normalized_log_mean(f, x);
        std::vector<json> row{x, report.terms, report.ratio, report.ratio - d2, 1e-12};
        if (odd) {
            double ll = std::log(std::log(static_cast<double>(x)));
            row.push_back(-std::pow(ll, -(1.0 - epsilon)));
        }
        t.rows.push_back(std::move(row));
    }
    json config{{"profile", function_file.empty() ? profile : function_file},
                {"x", x_text},
                {"seed", seed},
                {"epsilon", epsilon}};
    emit_table(t, "endpoint-run", config, format, out);
    return 0;
}

// ---- volterra ----

int cmd_volterra(const std::string& chi_text, double u_max, double step, uint64_t stride,
                 const std::string& format, const std::string& out) {
    if (stride == 0) throw std::invalid_argument("--stride must be >= 1");
    auto chi = ChiSpec::parse(chi_text);
    auto sol = solve_sigma(chi, u_max, step);
    auto fine = solve_sigma(chi, u_max, step / 2.0);
    if (sol.warned)
        std::cerr << "note: kernel breakpoints were snapped to the solver grid\n";

    Table t;
    t.columns = {"kind", "u", "sigma", "average", "err_est"};
    auto err_at = [&](double u) { return 4.0 / 3.0 * std::abs(sol.at(u) - fine.at(u)); };
    size_t last = sol.values.size() - 1;
    for (size_t j = 0; j <= last; j += stride) {
        double u = static_cast<double>(j) * sol.step;
        double avg = j == 0 ? 1.0 : sigma_average(sol, u);
        t.rows.push_back({"trace", u, sol.values[j], avg, err_at(u)});
    }
    if (last % stride != 0) {
        double u = sol.u_max();
        t.rows.push_back({"trace", u, sol.values[last], sigma_average(sol, u), err_at(u)});
    }
    auto m = sigma_min(sol);
    auto mf = sigma_min(fine);
    t.rows.push_back({"min", m.argmin, m.value,
                      sigma_average(sol, std::max(m.argmin, sol.step)),
                      4.0 / 3.0 * std::abs(m.value - mf.value)});

    json config{{"chi", chi.to_string()}, {"umax", u_max}, {"step", step},
                {"stride", stride}, {"snapped", sol.warned}};
    emit_table(t, "volterra", config, format, out);
    return 0;
}

// ---- verify suites ----

struct CheckSink {
    Table table;
    bool failed = false;

    CheckSink() { table.columns = {"check", "observed", "threshold", "status", "detail"}; }

    void row(const std::string& name, double observed, double threshold, bool pass,
             const std::string& detail = "") {
        table.rows.push_back({name, observed, threshold, pass ? "pass" : "fail", detail});
        if (!pass) failed = true;
    }
};

Profile rotation_profile(uint64_t i) {
    switch (i % 4) {
        case 0: return Profile::general;
        case 1: return Profile::completely_multiplicative;
        case 2: return Profile::powerful_support;
        default: return Profile::odd_powerful;
    }
}

void suite_identities(CheckSink& sink, uint64_t seed0, uint64_t trials, uint64_t n_max) {
    // Reconstruction identities checked on every n <= n_max and on prime
    // powers up to exponent 8; the residual-vs-two-step closed form rides
    // along on the same prime powers.
    std::vector<FactoredInteger> table;
    table.reserve(n_max);
    for (uint64_t n = 1; n <= n_max; ++n) table.push_back(factorize(n));
    const std::vector<uint64_t> probe_primes{2, 3, 5, 13, 97};
    const double y = 10.0;

    double worst = 0.0;
    uint64_t worst_n = 0, worst_seed = 0;
    std::string worst_name;
    auto record = [&](double diff, const std::string& name, uint64_t n, uint64_t seed) {
        if (diff > worst) {
            worst = diff;
            worst_name = name;
            worst_n = n;
            worst_seed = seed;
        }
    };

    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t seed = seed0 + i;
        auto f = random_function(seed, rotation_profile(i));
        auto lhs1 = convolve(cm_residual(f), cm_extension(f));
        auto ext = cm_extension(f);
        auto lhs2 = convolve(small_prime_residual(f, y), smooth_small_primes(f, y));
        auto lhs3 = convolve(cm_residual(f), small_prime_residual(f, y));
        auto closed = combined_residual(f, y);
        for (const auto& n : table) {
            record(std::abs(lhs1.evaluate(n) - f.evaluate(n)), "f = residual*extension",
                   n.value, seed);
            record(std::abs(lhs2.evaluate(n) - ext.evaluate(n)),
                   "extension = small-prime split", n.value, seed);
        }
        for (uint64_t p : probe_primes) {
            for (uint32_t e = 1; e <= 8; ++e) {
                record(std::abs(lhs1.at(p, e) - f.at(p, e)), "f = residual*extension (p^e)",
                       p, seed);
                record(std::abs(lhs3.at(p, e) - closed.at(p, e)), "combined residual closed form",
                       p, seed);
            }
        }
    }
    std::string detail = worst_name.empty()
                             ? ""
                             : worst_name + " at n=" + std::to_string(worst_n) +
                                   " seed=" + std::to_string(worst_seed);
    sink.row("convolution identities, n <= " + std::to_string(n_max), worst, 1e-12,
             worst <= 1e-12, detail);

    // Square-root weighted rearrangement over powerful numbers.
    double worst_id = 0.0;
    uint64_t worst_id_seed = 0, worst_id_x = 0;
    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t seed = seed0 + i;
        auto f = random_function(seed, i % 2 ? Profile::odd_powerful : Profile::powerful_support);
        for (uint64_t x : {1000ULL, 10'000ULL, 100'000ULL}) {
            auto rep = check_sqrt_identity(f, x);
            if (rep.relative > worst_id) {
                worst_id = rep.relative;
                worst_id_seed = seed;
                worst_id_x = x;
            }
            auto mean = check_mean_identity(f, x);
            if (mean.relative > worst_id) {
                worst_id = mean.relative;
                worst_id_seed = seed;
                worst_id_x = x;
            }
        }
    }
    sink.row("weighted-sum rearrangement", worst_id, 1e-9, worst_id <= 1e-9,
             worst_id > 0 ? "seed=" + std::to_string(worst_id_seed) +
                                " x=" + std::to_string(worst_id_x)
                          : "");
}

void suite_counterexample(CheckSink& sink) {
    // f(p) = 1, f(p^2) = -1.  A residual cut off above y = 10 reconstructs
    // +1 at p^2 for the first prime past the cutoff (p = 11), where f is -1.
    // The combined closed form restores the identity at the same spot.
    auto f = MultiplicativeFunction::from_rule(
        [](uint64_t, uint32_t e) { return e == 2 ? -1.0 : 1.0; });
    const double y = 10.0;
    auto truncated = MultiplicativeFunction::from_rule(
        [f, y](uint64_t p, uint32_t e) {
            if (static_cast<double>(p) > y) return 0.0;
            return f.at(p, e) - f.at(p, e - 1);
        },
        {.uniform_bound = 2.0});
    auto g = smooth_small_primes(f, y);
    const uint64_t p = 11;

    double wrong = convolve(truncated, g).at(p, 2);
    double right = convolve(combined_residual(f, y), g).at(p, 2);
    sink.row("truncated residual reconstructs +1 at 121", wrong, 1.0, wrong == 1.0,
             "expected f(121) = -1");
    sink.row("target value is -1", f.at(p, 2), -1.0, f.at(p, 2) == -1.0, "n=121");
    sink.row("corrected residual restores -1", std::abs(right + 1.0), 1e-12,
             std::abs(right + 1.0) <= 1e-12, "n=121");
}

void suite_factor_bounds(CheckSink& sink, uint64_t seed0, uint64_t trials) {
    auto primes = sieve_primes(97);
    double max_mf_odd = -2.0, min_factor_odd = 2.0, min_mf_2 = 2.0;
    uint64_t bad_seed = 0, bad_p = 0;
    uint64_t violations = 0;
    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t seed = seed0 + i;
        auto f = random_function(seed, i % 2 ? Profile::odd_powerful : Profile::powerful_support);
        for (uint64_t p : primes) {
            auto b = per_prime_bounds(f, p);
            if (!b.within_bounds || (p >= 3 && !b.factor_positive)) {
                ++violations;
                if (bad_seed == 0) {
                    bad_seed = seed;
                    bad_p = p;
                }
            }
            if (p == 2) {
                min_mf_2 = std::min(min_mf_2, b.modified_factor);
            } else {
                max_mf_odd = std::max(max_mf_odd, b.modified_factor);
                min_factor_odd = std::min(min_factor_odd, b.residual_factor);
            }
        }
    }
    std::string detail =
        violations ? "seed=" + std::to_string(bad_seed) + " p=" + std::to_string(bad_p) : "";
    sink.row("bound violations", static_cast<double>(violations), 0.0, violations == 0, detail);
    sink.row("max modified factor, p odd", max_mf_odd, 1.0, max_mf_odd <= 1.0);
    sink.row("min residual factor, p odd", min_factor_odd, 0.0, min_factor_odd > 0.0);
    sink.row("min modified factor at p = 2", min_mf_2, delta2(), min_mf_2 >= delta2(),
             "lower endpoint " + fmt_double(delta2()));
}

void suite_volterra(CheckSink& sink) {
    const double step = 1.0 / 1024.0;
    auto flat = solve_sigma(ChiSpec::constant_one(), 4.0, step);
    double worst = 0.0;
    for (double v : flat.values) worst = std::max(worst, std::abs(v - 1.0));
    sink.row("constant kernel stays at 1", worst, 1e-10, worst <= 1e-10);

    auto dickman = solve_sigma(ChiSpec::parse("step:1:0"), 3.0, step);
    double d_err = std::abs(dickman.at(2.0) - (1.0 - std::log(2.0)));
    sink.row("cutoff kernel value at u = 2", d_err, 1e-4, d_err <= 1e-4,
             "reference 1 - log 2");

    auto extremal = solve_sigma(ChiSpec::parse("step:1:-1"), 6.0, step);
    auto m = sigma_min(extremal);
    double d1 = delta1_quadrature(1e-10);
    sink.row("extremal kernel minimum", std::abs(m.value - d1), 1e-3,
             std::abs(m.value - d1) <= 1e-3, "quadrature reference " + fmt_double(d1));
    double arg_ref = 1.0 + std::sqrt(std::exp(1.0));
    sink.row("extremal kernel argmin", std::abs(m.argmin - arg_ref), 0.01,
             std::abs(m.argmin - arg_ref) <= 0.01, "reference 1 + sqrt(e)");
}

void suite_separation(CheckSink& sink, uint64_t seed0, uint64_t trials, uint64_t x,
                      double epsilon) {
    const double alarm = 100.0;
    double max_ratio = 0.0, max_log_ratio = 0.0;
    uint64_t worst_seed = 0, worst_log_seed = 0;
    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t seed = seed0 + i;
        auto profile =
            i % 2 ? Profile::completely_multiplicative : Profile::general;
        auto f = random_function(seed, profile);
        auto s = separation_check(f, x, epsilon);
        if (s.ratio > max_ratio) {
            max_ratio = s.ratio;
            worst_seed = seed;
        }
        auto ls = log_separation_check(f, x, 50.0);
        if (ls.ratio > max_log_ratio) {
            max_log_ratio = ls.ratio;
            worst_log_seed = seed;
        }
    }
    sink.row("max separation ratio", max_ratio, alarm, max_ratio < alarm,
             "seed=" + std::to_string(worst_seed));
    sink.row("max log-separation ratio", max_log_ratio, alarm, max_log_ratio < alarm,
             "seed=" + std::to_string(worst_log_seed));
}

int cmd_verify(const std::string& suite, uint64_t seed, uint64_t trials, uint64_t n_max,
               uint64_t x, double epsilon, const std::string& format, const std::string& out) {
    CheckSink sink;
    if (suite == "identities") {
        suite_identities(sink, seed, trials ? trials : 50, n_max);
    } else if (suite == "counterexample") {
        suite_counterexample(sink);
    } else if (suite == "factor-bounds") {
        suite_factor_bounds(sink, seed, trials ? trials : 200);
    } else if (suite == "volterra") {
        suite_volterra(sink);
    } else if (suite == "separation") {
        suite_separation(sink, seed, trials ? trials : 20, x, epsilon);
    } else {
        throw std::invalid_argument(
            "--suite must be one of identities, counterexample, factor-bounds, volterra, "
            "separation");
    }
    json config{{"suite", suite}, {"seed", seed}, {"trials", trials},
                {"nmax", n_max}, {"x", x}, {"epsilon", epsilon}};
    emit_table(sink.table, "verify", config, format, out);
    return sink.failed ? 1 : 0;
}

// ---- separation experiment ----

int cmd_separation(uint64_t seed0, uint64_t trials, uint64_t x, double epsilon,
                   const std::string& format, const std::string& out) {
    Table t;
    t.columns = {"kind", "seed", "profile", "lhs", "main_term", "residual", "scale",
                 "ratio", "alarm"};
    const double alarm = 100.0;
    double max_general = 0.0, max_cm = 0.0;
    for (uint64_t i = 0; i < trials; ++i) {
        uint64_t seed = seed0 + i;
        bool cm = i % 2;
        auto f = random_function(seed, cm ? Profile::completely_multiplicative
                                          : Profile::general);
        auto s = separation_check(f, x, epsilon);
        (cm ? max_cm : max_general) = std::max(cm ? max_cm : max_general, s.ratio);
        t.rows.push_back({"trial", seed, cm ? "cm" : "general", s.lhs, s.main_term,
                          s.residual, s.scale, s.ratio, alarm});
    }
    t.rows.push_back({"max", "", "general", "", "", "", "", max_general, alarm});
    t.rows.push_back({"max", "", "cm", "", "", "", "", max_cm, alarm});
    json config{{"seed", seed0}, {"trials", trials}, {"x", x}, {"epsilon", epsilon}};
    emit_table(t, "separation", config, format, out);
    return std::max(max_general, max_cm) < alarm ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean values and spectrum factors of multiplicative functions on "
                 "powerful numbers"};
    app.require_subcommand(1);

    std::string format = "csv", out_path;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "write output to this file instead of stdout");

    std::function<int()> run;

    // constants
    {
        auto* c = app.add_subcommand("constants", "counting constants and spectrum endpoints");
        c->fallthrough();
        auto prime_limit = std::make_shared<uint64_t>(1'000'000);
        auto tol = std::make_shared<double>(1e-10);
        c->add_option("--prime-limit", *prime_limit, "Euler product truncation")
            ->capture_default_str();
        c->add_option("--tol", *tol, "quadrature tolerance")->capture_default_str();
        c->callback([&, prime_limit, tol] {
            run = [&, prime_limit, tol] {
                return cmd_constants(*prime_limit, *tol, format, out_path);
            };
        });
    }

    // powerful count | list
    {
        auto* p = app.add_subcommand("powerful", "k-full integer counting and enumeration");
        p->fallthrough();
        p->require_subcommand(1);
        auto k = std::make_shared<uint32_t>(2);
        p->add_option("--k", *k, "fullness threshold")->check(CLI::Range(2u, 10u))
            ->capture_default_str();

        auto* pc = p->add_subcommand("count", "exact counts over an x grid");
        pc->fallthrough();
        auto x_text = std::make_shared<std::string>("100,10000,1000000,100000000");
        pc->add_option("--x", *x_text, "comma-separated bounds")->capture_default_str();
        pc->callback([&, k, x_text] {
            run = [&, k, x_text] { return cmd_powerful_count(*x_text, *k, format, out_path); };
        });

        auto* pl = p->add_subcommand("list", "enumerate with factorizations");
        pl->fallthrough();
        auto x_single = std::make_shared<double>(200.0);
        pl->add_option("--x", *x_single, "upper bound")->capture_default_str();
        pl->callback([&, k, x_single] {
            run = [&, k, x_single] { return cmd_powerful_list(*x_single, *k, format, out_path); };
        });
    }

    // endpoint-run
    {
        auto* e = app.add_subcommand("endpoint-run",
                                     "normalized log mean along an x grid, against delta2");
        e->fallthrough();
        auto profile = std::make_shared<std::string>("minus-at-2");
        auto file = std::make_shared<std::string>();
        auto seed = std::make_shared<uint64_t>(1);
        auto x_text = std::make_shared<std::string>("1000000,100000000,10000000000,1000000000000");
        auto eps = std::make_shared<double>(0.1);
        auto* po = e->add_option("--profile", *profile, "minus-at-2 | all-ones | odd-powerful")
                       ->check(CLI::IsMember({"minus-at-2", "all-ones", "odd-powerful"}))
                       ->capture_default_str();
        e->add_option("--function-file", *file, "JSON function document")->excludes(po);
        e->add_option("--seed", *seed, "seed for random function files")->capture_default_str();
        e->add_option("--x", *x_text, "comma-separated bounds")->capture_default_str();
        e->add_option("--epsilon", *eps, "exponent slack in the odd-powerful floor")
            ->capture_default_str();
        e->callback([&, profile, file, seed, x_text, eps] {
            run = [&, profile, file, seed, x_text, eps] {
                return cmd_endpoint_run(*profile, *file, *seed, *x_text, *eps, format, out_path);
            };
        });
    }

    // verify
    {
        auto* v = app.add_subcommand("verify", "property suites with pass/fail rows");
        v->fallthrough();
        auto suite = std::make_shared<std::string>();
        auto seed = std::make_shared<uint64_t>(1);
        auto trials = std::make_shared<uint64_t>(0);
        auto n_max = std::make_shared<uint64_t>(2000);
        auto x = std::make_shared<uint64_t>(1'000'000);
        auto eps = std::make_shared<double>(0.1);
        v->add_option("--suite", *suite,
                      "identities | counterexample | factor-bounds | volterra | separation")
            ->required();
        v->add_option("--seed", *seed, "base seed")->capture_default_str();
        v->add_option("--trials", *trials, "trial count (0 = suite default)")
            ->capture_default_str();
        v->add_option("--nmax", *n_max, "identity check range")->capture_default_str();
        v->add_option("--x", *x, "separation bound")->capture_default_str();
        v->add_option("--epsilon", *eps, "separation threshold exponent")->capture_default_str();
        v->callback([&, suite, seed, trials, n_max, x, eps] {
            run = [&, suite, seed, trials, n_max, x, eps] {
                return cmd_verify(*suite, *seed, *trials, *n_max, *x, *eps, format, out_path);
            };
        });
    }

    // volterra
    {
        auto* s = app.add_subcommand("volterra", "delay equation trace and minimum");
        s->fallthrough();
        auto chi = std::make_shared<std::string>();
        auto umax = std::make_shared<double>(8.0);
        auto step = std::make_shared<double>(1.0 / 1024.0);
        auto stride = std::make_shared<uint64_t>(64);
        s->add_option("--chi", *chi, "kernel: const:1 or step:<b>:<v>[,<b>:<v>...]")->required();
        s->add_option("--umax", *umax, "solve up to this u")->capture_default_str();
        s->add_option("--step", *step, "grid step, 1/step integral, <= 1/64")
            ->capture_default_str();
        s->add_option("--stride", *stride, "emit every this many grid nodes")
            ->capture_default_str();
        s->callback([&, chi, umax, step, stride] {
            run = [&, chi, umax, step, stride] {
                return cmd_volterra(*chi, *umax, *step, *stride, format, out_path);
            };
        });
    }

    // separation
    {
        auto* s = app.add_subcommand("separation", "per-seed separation ratios at one x");
        s->fallthrough();
        auto seed = std::make_shared<uint64_t>(1);
        auto trials = std::make_shared<uint64_t>(50);
        auto x = std::make_shared<uint64_t>(1'000'000);
        auto eps = std::make_shared<double>(0.1);
        s->add_option("--seed", *seed, "base seed")->capture_default_str();
        s->add_option("--trials", *trials, "trial count")->capture_default_str();
        s->add_option("--x", *x, "bound")->capture_default_str();
        s->add_option("--epsilon", *eps, "threshold exponent")->capture_default_str();
        s->callback([&, seed, trials, x, eps] {
            run = [&, seed, trials, x, eps] {
                return cmd_separation(*seed, *trials, *x, *eps, format, out_path);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run ? run() : 2;
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
}
