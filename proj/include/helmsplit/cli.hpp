#pragma once

// Command-line front end. Every command produces one table written as CSV
// (comment lines, header row, data rows) or JSON with the same columns.
//
//   eval3d         r, then one column per --what item (g_n, q_n, real, imag)
//   eval2d         r, then one column per --what item (h_n, v_n, real, imag)
//   taylor         d=3: power, coefficient, value
//                  d=2: power, a, gamma, log2, log_kr   (times 1/pi)
//   gauss-build    index, weight, exponent
//   gauss-errors   curve, r, log10_error  (e0 relative, e1 absolute)
//   support-sweep  k, eps, r_eps
//   multiplier     p, truncated, truncated_exact, oscillatory, nonoscillatory
//   apply, oracle  quantity, value  (the field itself goes to --output)
//
// Exit codes: 0 success, 2 invalid input, 3 numerical accuracy/range failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "helmsplit/helmsplit.hpp"

namespace helmsplit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return fmt(*d);
    }
    if (const auto* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(c);
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out + "\"";
}

inline std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? fmt(*d) : "null";
    }
    if (const auto* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return json_string(std::get<std::string>(c));
}

}  // namespace detail

inline std::string param_line(const Table& t) {
    std::string s = "# command=" + t.command;
    for (const auto& [key, value] : t.params) {
        s += " " + key + "=" + value;
    }
    return s;
}

inline std::string to_csv(const Table& t) {
    std::string s = param_line(t) + "\n";
    for (const auto& note : t.notes) {
        s += "# " + note + "\n";
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? "," : "") + t.columns[i];
    }
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            s += (i ? "," : "") + detail::csv_cell(row[i]);
        }
        s += "\n";
    }
    return s;
}

inline std::string to_json(const Table& t) {
    std::string s = "{\n  \"command\": " + detail::json_string(t.command) + ",\n  \"params\": {";
    for (std::size_t i = 0; i < t.params.size(); ++i) {
        s += (i ? ", " : "") + detail::json_string(t.params[i].first) + ": " + detail::json_string(t.params[i].second);
    }
    s += "},\n  \"notes\": [";
    for (std::size_t i = 0; i < t.notes.size(); ++i) {
        s += (i ? ", " : "") + detail::json_string(t.notes[i]);
    }
    s += "],\n  \"columns\": [";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? ", " : "") + detail::json_string(t.columns[i]);
    }
    s += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        s += r ? ",\n    [" : "\n    [";
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            s += (i ? ", " : "") + detail::json_cell(t.rows[r][i]);
        }
        s += "]";
    }
    s += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return s;
}

/// Write via a temporary sibling and rename; "-" means the given stream.
inline void write_atomic(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw ConfigError("cannot open output file: " + tmp);
        }
        os << text;
        if (!os.flush()) {
            throw ConfigError("failed writing output file: " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

inline void write_field_atomic(const std::string& path, const grid::Field& f) {
    const std::string tmp = path + ".tmp";
    grid::write_field(tmp, f);
    std::filesystem::rename(grid::header_path(tmp), grid::header_path(path));
    std::filesystem::rename(tmp, path);
}

/// Worker count: HELMSPLIT_THREADS when set (positive integer), else hardware.
inline unsigned thread_count() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("HELMSPLIT_THREADS");
    if (env == nullptr || *env == '\0') {
        return hw;
    }
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
        throw ConfigError("HELMSPLIT_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(v);
}

/// Run fn(i) for i in [0, count) on up to thread_count() threads. Results are
/// stored by index by the caller; the first failing index rethrows.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1));
    std::vector<std::exception_ptr> errors(count);
    auto body = [&](std::size_t w) {
        for (std::size_t i = w; i < count; i += workers) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// "lo:hi" with lo < hi.
inline Range parse_range(const std::string& text, const char* what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(std::string(what) + ": expected lo:hi, got '" + text + "'");
    }
    Range r;
    try {
        std::size_t used = 0;
        r.lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) {
            throw std::invalid_argument("trailing");
        }
        const std::string rest = text.substr(colon + 1);
        r.hi = std::stod(rest, &used);
        if (used != rest.size()) {
            throw std::invalid_argument("trailing");
        }
    } catch (const std::logic_error&) {
        throw ConfigError(std::string(what) + ": malformed range '" + text + "'");
    }
    if (!(r.lo < r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
        throw ConfigError(std::string(what) + ": need finite lo < hi");
    }
    return r;
}

inline std::vector<double> samples(const Range& r, int count, bool logarithmic) {
    if (count < 2) {
        throw ConfigError("--samples must be at least 2");
    }
    if (logarithmic && !(r.lo > 0.0)) {
        throw ConfigError("logarithmic spacing needs a positive range");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out[i] = logarithmic ? r.lo * std::pow(r.hi / r.lo, f) : r.lo + (r.hi - r.lo) * f;
    }
    out.back() = r.hi;
    return out;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

struct Common {
    double k = 1.0;
    int n = 1;
    int d = 3;
    std::string out = "-";
    std::string format = "csv";

    KernelParams params() const {
        auto p = make_params(k, n, d);
        return p;
    }
};

inline void add_common(CLI::App* sub, Common& c, bool with_d) {
    sub->add_option("--k", c.k, "wavenumber")->capture_default_str();
    sub->add_option("--n", c.n, "split order")->capture_default_str();
    if (with_d) {
        sub->add_option("--d", c.d, "dimension (2 or 3)")->capture_default_str();
    }
    sub->add_option("--out,-o", c.out, "output path, - for stdout")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

inline void record_params(Table& t, const Common& c, bool with_d) {
    t.params.emplace_back("k", fmt(c.k));
    t.params.emplace_back("n", std::to_string(c.n));
    if (with_d) {
        t.params.emplace_back("d", std::to_string(c.d));
    }
}

struct EvalOptions {
    Common common;
    std::string r_range = "0.1:60";
    int count = 240;
    bool log_spacing = false;
    std::string what;
};

inline Table eval_table(const EvalOptions& o, int d) {
    Common c = o.common;
    c.d = d;
    const auto params = c.params();
    const auto range = parse_range(o.r_range, "--r-range");
    if (!(range.lo > 0.0)) {
        throw ConfigError("--r-range must be positive");
    }
    const std::vector<std::string> allowed =
        d == 3 ? std::vector<std::string>{"g_n", "q_n", "real", "imag"} : std::vector<std::string>{"h_n", "v_n", "real", "imag"};
    auto what = split_list(o.what);
    for (const auto& w : what) {
        if (std::find(allowed.begin(), allowed.end(), w) == allowed.end()) {
            throw ConfigError("--what: unknown item '" + w + "'");
        }
    }
    if (what.empty()) {
        throw ConfigError("--what: empty list");
    }
    const auto rs = samples(range, o.count, o.log_spacing);
    Table t;
    t.command = d == 3 ? "eval3d" : "eval2d";
    record_params(t, c, false);
    t.params.emplace_back("r_range", o.r_range);
    t.params.emplace_back("samples", std::to_string(o.count));
    t.params.emplace_back("spacing", o.log_spacing ? "log" : "linear");
    t.params.emplace_back("what", o.what);
    t.columns.push_back("r");
    t.columns.insert(t.columns.end(), what.begin(), what.end());
    t.rows.resize(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
        const double r = rs[i];
        std::vector<Cell> row{r};
        for (const auto& w : what) {
            double v = 0.0;
            if (w == "g_n") {
                v = spatial3d::g_n_3d(r, params);
            } else if (w == "q_n") {
                v = spatial3d::q_n_3d(r, params);
            } else if (w == "h_n") {
                v = spatial2d::h_n_2d(r, params);
            } else if (w == "v_n") {
                v = spatial2d::v_n_2d(r, params);
            } else if (w == "real") {
                v = grid::detail::real_kernel(params, r);
            } else {
                v = grid::detail::imag_kernel(params, r);
            }
            row.emplace_back(v);
        }
        t.rows[i] = std::move(row);
    });
    return t;
}

struct TaylorOptions {
    Common common;
    int order = -1;
};

inline Table taylor_table(const TaylorOptions& o) {
    const auto params = o.common.params();
    const int order = o.order < 0 ? 2 * params.n + 2 : o.order;
    Table t;
    t.command = "taylor";
    record_params(t, o.common, true);
    t.params.emplace_back("order", std::to_string(order));
    if (params.d == 3) {
        if (order < 2 * params.n) {
            throw ConfigError("--order must be at least 2n in 3D");
        }
        const auto s = spatial3d::taylor_q_n(params.n, order);
        t.notes.push_back("q_n(r) = k/(4 pi) * sum coefficient * (kr)^power");
        t.columns = {"power", "coefficient", "value"};
        for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
            t.rows.push_back({static_cast<long long>(j), s.coeffs[j].str(), s.coeffs[j].convert_to<double>()});
        }
    } else {
        if (order < 0) {
            throw ConfigError("--order must be non-negative");
        }
        const auto s = spatial2d::taylor_v_n(params.n, order);
        t.notes.push_back("v_n(r) = (1/pi) * sum (a + gamma*g + log2*c + log(kr)*L) * (kr)^power");
        t.columns = {"power", "a", "gamma", "log2", "log_kr"};
        for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
            const auto& c = s.coeffs[j];
            t.rows.push_back({static_cast<long long>(j), c.a.str(), c.b.str(), c.c.str(), c.L.str()});
        }
    }
    return t;
}

struct GaussBuildOptions {
    Common common;
    double delta = 0.25;
    int m_lo = 20;
    int m_hi = 200;
    double eps = 0.0;
    double r_min = 1e-3;
    double r_max = 1.0;
    double merge_at = 0.0;
};

inline Table gauss_build_table(const GaussBuildOptions& o) {
    const auto params = o.common.params();
    Table t;
    t.command = "gauss-build";
    record_params(t, o.common, true);
    gauss::GaussianSum sum;
    if (o.eps > 0.0) {
        if (!(o.eps < 1.0) || !(o.r_min > 0.0) || !(o.r_max > o.r_min)) {
            throw ConfigError("gauss-build: need 0 < eps < 1 and 0 < r_min < r_max");
        }
        sum = gauss::build_sum(params, o.eps, o.r_min, o.r_max);
        t.params.emplace_back("eps", fmt(o.eps));
        t.params.emplace_back("r_min", fmt(o.r_min));
        t.params.emplace_back("r_max", fmt(o.r_max));
    } else {
        gauss::LogQuadrature q{o.delta, o.m_lo, o.m_hi};
        q.validate();
        sum = gauss::discretize(params, q);
        t.params.emplace_back("delta", fmt(o.delta));
        t.params.emplace_back("m_lo", std::to_string(o.m_lo));
        t.params.emplace_back("m_hi", std::to_string(o.m_hi));
    }
    if (o.merge_at > 0.0) {
        sum = gauss::merge_sharp_terms(sum, o.merge_at);
        t.params.emplace_back("merge_at", fmt(o.merge_at));
    }
    t.notes.push_back("delta=" + fmt(sum.quad.step) + " m_lo=" + std::to_string(sum.quad.m_lo) +
                      " m_hi=" + std::to_string(sum.quad.m_hi) + " r_min=" + fmt(sum.r_min) +
                      " r_max=" + fmt(sum.r_max));
    t.columns = {"index", "weight", "exponent"};
    for (std::size_t i = 0; i < sum.terms.size(); ++i) {
        t.rows.push_back({static_cast<long long>(i), sum.terms[i].weight, sum.terms[i].exponent});
    }
    return t;
}

struct GaussErrorsOptions {
    Common common;
    double delta = 0.25;
    int m_lo = 20;
    int m_hi = 200;
    std::string e0_range = "1e-10:1e-3";
    std::string e1_range = "1e-3:0.44";
    int per_decade = 40;
};

inline Table gauss_errors_table(const GaussErrorsOptions& o) {
    const auto params = o.common.params();
    gauss::LogQuadrature q{o.delta, o.m_lo, o.m_hi};
    q.validate();
    if (o.per_decade < 1) {
        throw ConfigError("--per-decade must be positive");
    }
    const auto r0 = parse_range(o.e0_range, "--e0-range");
    const auto r1 = parse_range(o.e1_range, "--e1-range");
    if (!(r0.lo > 0.0) || !(r1.lo > 0.0)) {
        throw ConfigError("error ranges must be positive");
    }
    const auto sum = gauss::discretize(params, q);
    Table t;
    t.command = "gauss-errors";
    record_params(t, o.common, true);
    t.params.emplace_back("delta", fmt(o.delta));
    t.params.emplace_back("m_lo", std::to_string(o.m_lo));
    t.params.emplace_back("m_hi", std::to_string(o.m_hi));
    t.params.emplace_back("e0_range", o.e0_range);
    t.params.emplace_back("e1_range", o.e1_range);
    t.params.emplace_back("per_decade", std::to_string(o.per_decade));
    t.notes.push_back("e0 = log10 relative error, e1 = log10 absolute error");
    t.columns = {"curve", "r", "log10_error"};
    for (const auto& [r, e] : gauss::relative_error_curve(sum, params, gauss::log_samples(r0.lo, r0.hi, o.per_decade))) {
        t.rows.push_back({std::string("e0"), r, e});
    }
    for (const auto& [r, e] : gauss::absolute_error_curve(sum, params, gauss::log_samples(r1.lo, r1.hi, o.per_decade))) {
        t.rows.push_back({std::string("e1"), r, e});
    }
    return t;
}

struct SupportOptions {
    Common common;
    std::string eps = "1e-16,1e-9,1e-2";
    std::string k_range = "1:1e5";
    int per_decade = 1;
};

inline Table support_table(const SupportOptions& o) {
    if (o.common.n < 1 || o.common.n > KernelParams::kMaxN) {
        throw ConfigError("--n out of range");
    }
    const auto range = parse_range(o.k_range, "--k-range");
    if (!(range.lo > 0.0) || o.per_decade < 1) {
        throw ConfigError("--k-range must be positive and --per-decade >= 1");
    }
    std::vector<double> eps;
    for (const auto& item : split_list(o.eps)) {
        double v = 0.0;
        try {
            v = std::stod(item);
        } catch (const std::logic_error&) {
            throw ConfigError("--eps: malformed value '" + item + "'");
        }
        if (!(v > 0.0 && v < 1.0)) {
            throw ConfigError("--eps values must lie in (0, 1)");
        }
        eps.push_back(v);
    }
    if (eps.empty()) {
        throw ConfigError("--eps: empty list");
    }
    const auto ks = gauss::log_samples(range.lo, range.hi, o.per_decade);
    std::vector<double> radii(eps.size() * ks.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        const auto p = make_params(ks[i % ks.size()], o.common.n, 3);
        radii[i] = spatial3d::support_radius(p, eps[i / ks.size()]);
    });
    Table t;
    t.command = "support-sweep";
    t.params.emplace_back("n", std::to_string(o.common.n));
    t.params.emplace_back("eps", o.eps);
    t.params.emplace_back("k_range", o.k_range);
    t.params.emplace_back("per_decade", std::to_string(o.per_decade));
    t.columns = {"k", "eps", "r_eps"};
    for (std::size_t e = 0; e < eps.size(); ++e) {
        std::vector<std::pair<double, double>> est;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const double r = radii[e * ks.size() + j];
            t.rows.push_back({ks[j], eps[e], r});
            est.emplace_back(ks[j], r);
        }
        if (est.size() >= 3) {
            const auto fit = spatial3d::support_fit(est);
            t.notes.push_back("fit eps=" + fmt(eps[e]) + " r*k = c1 + c2*log10(k): c1=" + fmt(fit.c1) +
                              " c2=" + fmt(fit.c2) + " max_rel_residual=" + fmt(fit.max_rel_residual));
        }
    }
    return t;
}

struct MultiplierOptions {
    Common common;
    std::string p_range = "0:4";
    int count = 401;
    double t_min = -40.0;
    double t_max = 10.0;
    double step = 0.25;
};

inline Table multiplier_table(const MultiplierOptions& o) {
    const auto params = o.common.params();
    const fourier::TruncatedScaleRange scales{o.t_min, o.t_max, o.step};
    scales.validate();
    const auto range = parse_range(o.p_range, "--p-range");
    if (range.lo < 0.0) {
        throw ConfigError("--p-range must be non-negative");
    }
    const auto ps = samples(range, o.count, false);
    Table t;
    t.command = "multiplier";
    record_params(t, o.common, false);
    t.params.emplace_back("p_range", o.p_range);
    t.params.emplace_back("samples", std::to_string(o.count));
    t.params.emplace_back("t_min", fmt(o.t_min));
    t.params.emplace_back("t_max", fmt(o.t_max));
    t.params.emplace_back("step", fmt(o.step));
    t.notes.push_back("oscillatory is blank at the pole p = k");
    t.columns = {"p", "truncated", "truncated_exact", "oscillatory", "nonoscillatory"};
    t.rows.resize(ps.size());
    parallel_for(ps.size(), [&](std::size_t i) {
        const double p = ps[i];
        double osc = std::numeric_limits<double>::quiet_NaN();
        try {
            osc = fourier::symbol_oscillatory(p, params);
        } catch (const PoleError&) {
        }
        t.rows[i] = {p, fourier::multiplier_truncated(p, params, scales),
                     fourier::multiplier_truncated_exact(p, params, scales.t_min, scales.t_max),
                     std::isnan(osc) ? Cell{std::string()} : Cell{osc}, fourier::symbol_nonoscillatory(p, params)};
    });
    return t;
}

struct ApplyOptions {
    Common common;
    std::string input;
    std::string output;
    std::string part = "full";
    double eps = 1e-10;
    int grid = 0;
    double half_width = 1.0;
    double radius = 0.7;
};

inline grid::Field apply_source(const ApplyOptions& o) {
    if (!o.input.empty()) {
        return grid::read_field(o.input);
    }
    if (o.grid < 8) {
        throw ConfigError("give --input or --grid >= 8 for the built-in smooth source");
    }
    return grid::smooth_bump(o.common.d, static_cast<std::size_t>(o.grid), o.half_width, o.radius);
}

inline Table apply_table(const ApplyOptions& o, bool oracle) {
    const auto params = o.common.params();
    const auto f = apply_source(o);
    if (f.dims != params.d) {
        throw ConfigError("field dimension does not match --d");
    }
    grid::Field u;
    if (oracle) {
        u = grid::oracle_convolution(f, params);
    } else if (o.part == "imag") {
        u = grid::apply_imaginary(f, params);
    } else {
        if (!(o.eps > 0.0 && o.eps < 1.0)) {
            throw ConfigError("--eps must lie in (0, 1)");
        }
        const auto plan = grid::make_plan(params, f, o.eps);
        if (o.part == "full") {
            u = grid::apply_full(f, plan);
        } else if (o.part == "nonosc") {
            u = grid::apply_nonoscillatory(f, plan);
        } else {
            u = grid::apply_oscillatory_real(f, plan);
        }
    }
    if (!o.output.empty()) {
        write_field_atomic(o.output, u);
    }
    double l2 = 0.0;
    double peak = 0.0;
    for (const auto& v : u.values) {
        l2 += std::norm(v);
        peak = std::max(peak, std::abs(v));
    }
    l2 = std::sqrt(l2 * grid::detail::cell_volume(u.dims, u.spacing));
    Table t;
    t.command = oracle ? "oracle" : "apply";
    record_params(t, o.common, true);
    if (!oracle) {
        t.params.emplace_back("part", o.part);
        t.params.emplace_back("eps", fmt(o.eps));
    }
    t.params.emplace_back("input", o.input.empty() ? "bump" : o.input);
    if (o.input.empty()) {
        t.params.emplace_back("grid", std::to_string(o.grid));
        t.params.emplace_back("half_width", fmt(o.half_width));
        t.params.emplace_back("radius", fmt(o.radius));
    }
    t.params.emplace_back("output", o.output.empty() ? "none" : o.output);
    t.columns = {"quantity", "value"};
    t.rows.push_back({std::string("samples"), static_cast<long long>(u.size())});
    t.rows.push_back({std::string("spacing"), u.spacing});
    t.rows.push_back({std::string("l2_norm"), l2});
    t.rows.push_back({std::string("max_abs"), peak});
    if (oracle || o.part == "full") {
        t.rows.push_back({std::string("helmholtz_residual"), grid::helmholtz_residual(u, f, params.k)});
    }
    return t;
}

inline void emit(const Table& t, const Common& c, std::ostream& out) {
    write_atomic(c.out, c.format == "json" ? to_json(t) : to_csv(t), out);
}

/// Parse and execute one command; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Split Helmholtz Green's function toolkit", "helmsplit"};
    app.require_subcommand(1);

    EvalOptions e3;
    e3.what = "q_n,imag";
    auto* s_e3 = app.add_subcommand("eval3d", "tabulate 3D kernels over r");
    add_common(s_e3, e3.common, false);
    s_e3->add_option("--r-range", e3.r_range, "lo:hi")->capture_default_str();
    s_e3->add_option("--samples", e3.count)->capture_default_str();
    s_e3->add_flag("--log", e3.log_spacing, "logarithmic r spacing");
    s_e3->add_option("--what", e3.what, "comma list of g_n,q_n,real,imag")->capture_default_str();

    EvalOptions e2;
    e2.what = "v_n,imag";
    auto* s_e2 = app.add_subcommand("eval2d", "tabulate 2D kernels over r");
    add_common(s_e2, e2.common, false);
    s_e2->add_option("--r-range", e2.r_range, "lo:hi")->capture_default_str();
    s_e2->add_option("--samples", e2.count)->capture_default_str();
    s_e2->add_flag("--log", e2.log_spacing, "logarithmic r spacing");
    s_e2->add_option("--what", e2.what, "comma list of h_n,v_n,real,imag")->capture_default_str();

    TaylorOptions ty;
    auto* s_ty = app.add_subcommand("taylor", "exact Taylor coefficients of the oscillatory kernel");
    add_common(s_ty, ty.common, true);
    s_ty->add_option("--order", ty.order, "highest power (default 2n+2)");

    GaussBuildOptions gb;
    auto* s_gb = app.add_subcommand("gauss-build", "Gaussian-sum terms");
    add_common(s_gb, gb.common, true);
    s_gb->add_option("--delta", gb.delta)->capture_default_str();
    s_gb->add_option("--m-lo", gb.m_lo)->capture_default_str();
    s_gb->add_option("--m-hi", gb.m_hi)->capture_default_str();
    s_gb->add_option("--eps", gb.eps, "choose the quadrature for this accuracy instead");
    s_gb->add_option("--r-min", gb.r_min)->capture_default_str();
    s_gb->add_option("--r-max", gb.r_max)->capture_default_str();
    s_gb->add_option("--merge-at", gb.merge_at, "merge terms unresolved at this radius");

    GaussErrorsOptions ge;
    ge.common.k = 100.0;
    ge.common.n = 4;
    auto* s_ge = app.add_subcommand("gauss-errors", "error curves of a Gaussian sum");
    add_common(s_ge, ge.common, true);
    s_ge->add_option("--delta", ge.delta)->capture_default_str();
    s_ge->add_option("--m-lo", ge.m_lo)->capture_default_str();
    s_ge->add_option("--m-hi", ge.m_hi)->capture_default_str();
    s_ge->add_option("--e0-range", ge.e0_range)->capture_default_str();
    s_ge->add_option("--e1-range", ge.e1_range)->capture_default_str();
    s_ge->add_option("--per-decade", ge.per_decade)->capture_default_str();

    SupportOptions sp;
    sp.common.n = 8;
    auto* s_sp = app.add_subcommand("support-sweep", "support radius of g_n over k");
    s_sp->add_option("--n", sp.common.n)->capture_default_str();
    s_sp->add_option("--eps", sp.eps, "comma list")->capture_default_str();
    s_sp->add_option("--k-range", sp.k_range, "lo:hi")->capture_default_str();
    s_sp->add_option("--per-decade", sp.per_decade)->capture_default_str();
    s_sp->add_option("--out,-o", sp.common.out)->capture_default_str();
    s_sp->add_option("--format", sp.common.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    MultiplierOptions mu;
    auto* s_mu = app.add_subcommand("multiplier", "truncated Fourier multiplier of the oscillatory part");
    add_common(s_mu, mu.common, false);
    s_mu->add_option("--p-range", mu.p_range, "lo:hi")->capture_default_str();
    s_mu->add_option("--samples", mu.count)->capture_default_str();
    s_mu->add_option("--t-min", mu.t_min)->capture_default_str();
    s_mu->add_option("--t-max", mu.t_max)->capture_default_str();
    s_mu->add_option("--step", mu.step)->capture_default_str();

    ApplyOptions ap;
    auto* s_ap = app.add_subcommand("apply", "apply the split Green's function to a grid field");
    ApplyOptions orc;
    auto* s_or = app.add_subcommand("oracle", "brute-force convolution with the full kernel");
    for (auto [sub, opt] : {std::pair{s_ap, &ap}, std::pair{s_or, &orc}}) {
        add_common(sub, opt->common, true);
        sub->add_option("--input", opt->input, "field file (binary + .hdr)");
        sub->add_option("--output", opt->output, "field file to write");
        sub->add_option("--grid", opt->grid, "samples per axis of the built-in source");
        sub->add_option("--half-width", opt->half_width)->capture_default_str();
        sub->add_option("--radius", opt->radius)->capture_default_str();
    }
    s_ap->add_option("--part", ap.part)->check(CLI::IsMember({"full", "nonosc", "osc", "imag"}))->capture_default_str();
    s_ap->add_option("--eps", ap.eps)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitInvalid;
    }

    try {
        if (s_e3->parsed()) {
            emit(eval_table(e3, 3), e3.common, out);
        } else if (s_e2->parsed()) {
            emit(eval_table(e2, 2), e2.common, out);
        } else if (s_ty->parsed()) {
            emit(taylor_table(ty), ty.common, out);
        } else if (s_gb->parsed()) {
            emit(gauss_build_table(gb), gb.common, out);
        } else if (s_ge->parsed()) {
            emit(gauss_errors_table(ge), ge.common, out);
        } else if (s_sp->parsed()) {
            emit(support_table(sp), sp.common, out);
        } else if (s_mu->parsed()) {
            emit(multiplier_table(mu), mu.common, out);
        } else if (s_ap->parsed()) {
            emit(apply_table(ap, false), ap.common, out);
        } else if (s_or->parsed()) {
            emit(apply_table(orc, true), orc.common, out);
        }
    } catch (const AccuracyError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const RangeError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace helmsplit::cli
