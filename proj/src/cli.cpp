#include "hartogs/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hartogs/epsilon.hpp"
#include "hartogs/geometry.hpp"
#include "hartogs/kernel.hpp"
#include "hartogs/moments.hpp"
#include "hartogs/profile.hpp"
#include "hartogs/report.hpp"

namespace hartogs::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchema = "balanced-lab/1";

struct FileConfig {
    std::optional<std::string> builtin;
    std::optional<std::string> expr;
    std::optional<double> x0;
    std::optional<int> n, m, m_from, m_to, k_max, samples, grid_size, grid, points;
    std::optional<long long> budget;
    std::optional<double> tol, h;
    std::optional<unsigned long long> seed;
    std::optional<std::vector<int>> m_set;
    std::optional<std::vector<double>> t_grid;
    std::optional<std::string> method, out, format, at;
};

double parse_x0_value(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw InputError("config field 'x0' must be a number or the string \"inf\"");
    }
    if (!v.is_number()) throw InputError("config field 'x0' must be a number or \"inf\"");
    return v.get<double>();
}

template <typename T>
void read_field(const json& j, const char* key, std::optional<T>& into) {
    if (!j.contains(key)) return;
    try {
        into = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("config field '") + key + "': " + e.what());
    }
}

FileConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InputError("config file must contain a JSON object");

    FileConfig cfg;
    if (j.contains("profile")) {
        const json& p = j.at("profile");
        if (!p.is_object()) throw InputError("config field 'profile' must be an object");
        if (p.contains("builtin")) cfg.builtin = p.at("builtin").get<std::string>();
        if (p.contains("expr")) cfg.expr = p.at("expr").get<std::string>();
        if (p.contains("x0")) cfg.x0 = parse_x0_value(p.at("x0"));
    }
    read_field(j, "n", cfg.n);
    read_field(j, "m", cfg.m);
    read_field(j, "m_from", cfg.m_from);
    read_field(j, "m_to", cfg.m_to);
    read_field(j, "k_max", cfg.k_max);
    read_field(j, "samples", cfg.samples);
    read_field(j, "grid_size", cfg.grid_size);
    read_field(j, "grid", cfg.grid);
    read_field(j, "points", cfg.points);
    read_field(j, "budget", cfg.budget);
    read_field(j, "tol", cfg.tol);
    read_field(j, "h", cfg.h);
    read_field(j, "seed", cfg.seed);
    read_field(j, "m_set", cfg.m_set);
    read_field(j, "t_grid", cfg.t_grid);
    read_field(j, "method", cfg.method);
    read_field(j, "out", cfg.out);
    read_field(j, "format", cfg.format);
    read_field(j, "at", cfg.at);
    return cfg;
}

std::complex<double> parse_complex(std::string text) {
    auto fail = [&]() -> std::complex<double> {
        throw InputError("malformed complex component '" + text + "'");
    };
    std::erase(text, ' ');
    if (text.empty()) return fail();

    auto to_double = [&](std::string s) {
        if (s.empty() || s == "+" || s == "-") s += "1"; // bare sign means +-i
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) fail();
            return v;
        } catch (const InputError&) {
            throw;
        } catch (...) {
            fail();
            return 0.0;
        }
    };

    if (text.back() != 'i') return {to_double(text), 0.0};

    std::string body = text.substr(0, text.size() - 1);
    // find a '+'/'-' separating real and imaginary parts (not a leading sign,
    // not an exponent sign)
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < body.size(); ++k) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
            split = k;
    }
    if (split == std::string::npos) return {0.0, to_double(body)};
    return {to_double(body.substr(0, split)), to_double(body.substr(split))};
}

DomainPoint parse_point(const std::string& text) {
    std::vector<std::complex<double>> coords;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(parse_complex(part));
    if (coords.empty()) throw InputError("--at needs at least one coordinate");
    return DomainPoint(std::move(coords));
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            out.push_back(std::stoi(part));
        } catch (...) {
            throw InputError("malformed integer list entry '" + part + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            out.push_back(std::stod(part));
        } catch (...) {
            throw InputError("malformed number list entry '" + part + "'");
        }
    }
    return out;
}

KernelMethod parse_method(const std::string& text) {
    if (text == "closed") return KernelMethod::ClosedForm;
    if (text == "series") return KernelMethod::Series;
    throw InputError("--method must be 'closed' or 'series'");
}

/// Everything a subcommand may need, after merging config file and flags
/// (flags win field by field).
struct Options {
    std::string config_path;
    std::string builtin;
    std::string expr_text;
    double x0 = std::numeric_limits<double>::quiet_NaN();
    std::string x0_text;
    int n = 2;
    bool n_explicit = false;
    int m = 0;
    int m_from = 0, m_to = -1;
    std::string m_set = "2,3,4";
    std::string t_grid;
    int k_max = 64;
    int samples = 200;
    int grid_size = 256;
    int grid = 25;
    int points = 200;
    long long budget = 1'000'000;
    double tol = -1.0; // resolved per command
    double h = 1.0e-4;
    unsigned long long seed = 0;
    std::string method = "closed";
    std::string at;
    std::string out_path = "-";
    std::string format; // resolved per command

    Profile resolve_profile() const {
        const bool has_builtin = !builtin.empty();
        const bool has_expr = !expr_text.empty();
        if (has_builtin == has_expr)
            throw InputError("exactly one profile source is required: --profile NAME or "
                             "--profile-expr TEXT --x0 BOUND");
        if (has_builtin) return make_builtin_profile(builtin);
        double bound = x0;
        if (!x0_text.empty()) {
            if (x0_text == "inf") {
                bound = std::numeric_limits<double>::infinity();
            } else {
                try {
                    std::size_t used = 0;
                    bound = std::stod(x0_text, &used);
                    if (used != x0_text.size()) throw InputError("");
                } catch (...) {
                    throw InputError("--x0 must be a number or 'inf', got '" + x0_text + "'");
                }
            }
        }
        if (std::isnan(bound)) throw InputError("--profile-expr requires --x0 (number or 'inf')");
        return make_expression_profile(expr_text, bound);
    }
};

void attach_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "JSON config file; flags override its fields");
    sub->add_option("--profile", o.builtin, "builtin profile name");
    sub->add_option("--profile-expr", o.expr_text, "profile as an expression in x");
    sub->add_option("--x0", o.x0_text, "domain bound for --profile-expr (number or 'inf')");
    sub->add_option("--out", o.out_path, "output path, '-' for stdout");
    sub->add_option("--format", o.format, "json or csv");
    sub->add_option("--seed", o.seed, "sampling seed");
}

void merge_config(const CLI::App* sub, Options& o) {
    if (o.config_path.empty()) return;
    const FileConfig cfg = load_config(o.config_path);

    auto absent = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt == nullptr || opt->count() == 0;
    };
    if (absent("--profile") && cfg.builtin) o.builtin = *cfg.builtin;
    if (absent("--profile-expr") && cfg.expr) o.expr_text = *cfg.expr;
    if (absent("--x0") && cfg.x0) o.x0 = *cfg.x0;
    auto merge_int = [&](const char* flag, const std::optional<int>& v, int& into) {
        if (absent(flag) && v) into = *v;
    };
    merge_int("--n", cfg.n, o.n);
    if (cfg.n) o.n_explicit = true;
    merge_int("--m", cfg.m, o.m);
    merge_int("--m-from", cfg.m_from, o.m_from);
    merge_int("--m-to", cfg.m_to, o.m_to);
    merge_int("--k-max", cfg.k_max, o.k_max);
    merge_int("--samples", cfg.samples, o.samples);
    merge_int("--grid-size", cfg.grid_size, o.grid_size);
    merge_int("--grid", cfg.grid, o.grid);
    merge_int("--points", cfg.points, o.points);
    if (absent("--budget") && cfg.budget) o.budget = *cfg.budget;
    if (absent("--tol") && cfg.tol) o.tol = *cfg.tol;
    if (absent("--h") && cfg.h) o.h = *cfg.h;
    if (absent("--seed") && cfg.seed) o.seed = *cfg.seed;
    if (absent("--m-set") && cfg.m_set) {
        std::string joined;
        for (int v : *cfg.m_set) joined += (joined.empty() ? "" : ",") + std::to_string(v);
        o.m_set = joined;
    }
    if (absent("--t-grid") && cfg.t_grid) {
        std::string joined;
        for (double v : *cfg.t_grid)
            joined += (joined.empty() ? "" : ",") + report::format_double(v);
        o.t_grid = joined;
    }
    if (absent("--method") && cfg.method) o.method = *cfg.method;
    if (absent("--at") && cfg.at) o.at = *cfg.at;
    if (absent("--out") && cfg.out) o.out_path = *cfg.out;
    if (absent("--format") && cfg.format) o.format = *cfg.format;
}

void write_output(const std::string& text, const Options& o, std::ostream& out) {
    if (o.out_path == "-" || o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw InputError("cannot write to '" + o.out_path + "'");
    file << text;
}

report::Value profile_block(const Profile& profile) {
    report::Value block = report::Value::object();
    block.set("label", report::Value::string(profile.label()));
    switch (profile.source()) {
        case Profile::Source::Builtin:
            block.set("source", report::Value::string("builtin"));
            break;
        case Profile::Source::Expression:
            block.set("source", report::Value::string("expression"));
            break;
        case Profile::Source::ParametricFamily:
            block.set("source", report::Value::string("parametric-family"));
            break;
    }
    block.set("x0", report::Value::number(profile.x0()));
    return block;
}

report::Value report_header(const char* command, const Profile& profile) {
    report::Value root = report::Value::object();
    root.set("schema", report::Value::string(kSchema));
    root.set("command", report::Value::string(command));
    root.set("profile", profile_block(profile));
    return root;
}

std::string resolved_format(const Options& o, const char* fallback) {
    const std::string f = o.format.empty() ? fallback : o.format;
    if (f != "json" && f != "csv") throw InputError("--format must be 'json' or 'csv'");
    return f;
}

// commands without a tabular form only emit JSON
void require_json(const Options& o) {
    if (!o.format.empty() && o.format != "json")
        throw InputError("csv output is only available for tabular reports "
                         "(moments, epsilon sweeps, balanced samples)");
}

report::Value sample_value(const EpsilonSample& s) {
    report::Value v = report::Value::object();
    v.set("x", report::Value::number(s.x));
    v.set("w", report::Value::number(s.w));
    v.set("epsilon", report::Value::number(s.epsilon));
    v.set("error_budget", report::Value::number(s.error_budget));
    return v;
}

report::Value verdict_value(const BalancedVerdict& v, bool with_samples) {
    report::Value res = report::Value::object();
    res.set("m", report::Value::integer(v.m));
    res.set("verdict", report::Value::string(to_string(v.verdict)));
    res.set("reason", report::Value::string(v.reason));
    res.set("relative_spread", report::Value::number(v.relative_spread));
    res.set("constant_estimate", report::Value::number(v.constant_estimate));
    res.set("gamma_hat", report::Value::number(v.gamma_hat));
    res.set("gamma_residual", report::Value::number(v.gamma_residual));
    if (with_samples) {
        report::Value arr = report::Value::array();
        for (const EpsilonSample& s : v.samples) arr.push(sample_value(s));
        res.set("samples", std::move(arr));
    }
    return res;
}

int cmd_check_kahler(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    const KahlerCheck check = kahler_check(profile, o.grid_size);

    report::Value root = report_header("check-kahler", profile);
    root.set("grid_size", report::Value::integer(o.grid_size));
    root.set("min_G", report::Value::number(check.min_g));
    root.set("argmin_t", report::Value::number(check.argmin_t));
    root.set("pass", report::Value::boolean(check.pass));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_check_complete(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    CompletenessOptions copts;
    copts.budget = o.budget;
    const CompletenessResult result = completeness_check(profile, copts);

    report::Value root = report_header("check-complete", profile);
    const char* verdict = result.verdict == Completeness::Complete     ? "complete"
                          : result.verdict == Completeness::Incomplete ? "incomplete"
                                                                       : "inconclusive";
    root.set("verdict", report::Value::string(verdict));
    root.set("reason", report::Value::string(result.reason));
    root.set("partial_integral", report::Value::number(result.partial_integral));
    root.set("evaluations", report::Value::integer(result.evaluations));
    report::Value trace = report::Value::array();
    for (const CompletenessTrace& t : result.trace) {
        report::Value row = report::Value::object();
        row.set("cutoff", report::Value::number(t.cutoff));
        row.set("partial_integral", report::Value::number(t.partial_integral));
        row.set("increment", report::Value::number(t.increment));
        trace.push(std::move(row));
    }
    root.set("trace", std::move(trace));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_moments(const Options& o, std::ostream& out) {
    const Profile profile = o.resolve_profile();
    if (o.m == 0) throw InputError("moments requires --m");
    const MomentTable table = moment_table(profile, o.k_max, o.m);

    if (resolved_format(o, "csv") == "csv") {
        report::Csv csv({"k", "c_k", "err"});
        for (std::size_t k = 0; k < table.entries.size(); ++k) {
            const MomentResult& e = table.entries[k];
            csv.row({report::Csv::cell(static_cast<long long>(k)), report::Csv::cell(e.value),
                     report::Csv::cell(e.rel_error * e.value)});
        }
        write_output(csv.str(), o, out);
        return 0;
    }

    report::Value root = report_header("moments", profile);
    root.set("m", report::Value::integer(o.m));
    root.set("k_max", report::Value::integer(o.k_max));
    report::Value entries = report::Value::array();
    for (std::size_t k = 0; k < table.entries.size(); ++k) {
        const MomentResult& e = table.entries[k];
        report::Value row = report::Value::object();
        row.set("k", report::Value::integer(static_cast<long long>(k)));
        row.set("value", report::Value::number(e.value));
        row.set("log_value", report::Value::number(e.log_value));
        row.set("rel_error", report::Value::number(e.rel_error));
        row.set("evaluations", report::Value::integer(e.evaluations));
        entries.push(std::move(row));
    }
    root.set("entries", std::move(entries));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_gamma(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    MomentCache cache(profile);

    std::vector<double> t_grid;
    if (!o.t_grid.empty()) {
        t_grid = parse_double_list(o.t_grid);
    } else if (std::isfinite(profile.x0())) {
        t_grid = {0.1 * profile.x0(), 0.3 * profile.x0(), 0.5 * profile.x0()};
    } else {
        t_grid = {0.25, 0.5, 1.0};
    }
    const GammaEstimate est = estimate_gamma(cache, parse_int_list(o.m_set), t_grid, o.k_max);

    report::Value root = report_header("gamma", profile);
    root.set("k_max", report::Value::integer(o.k_max));
    root.set("gamma_hat", report::Value::number(est.gamma_hat));
    root.set("residual", report::Value::number(est.residual));
    report::Value probes = report::Value::array();
    for (const GammaProbe& p : est.probes) {
        report::Value row = report::Value::object();
        row.set("m", report::Value::integer(p.m));
        row.set("t", report::Value::number(p.t));
        row.set("gamma_probe", report::Value::number(p.gamma_probe));
        probes.push(std::move(row));
    }
    root.set("probes", std::move(probes));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_kernel(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    if (o.at.empty()) throw InputError("kernel requires --at z0,z1,...");
    if (o.m == 0) throw InputError("kernel requires --m");
    const DomainPoint p = parse_point(o.at);
    const KernelMethod method = parse_method(o.method);

    report::Value root = report_header("kernel", profile);
    root.set("m", report::Value::integer(o.m));
    root.set("n", report::Value::integer(p.n()));
    root.set("x", report::Value::number(p.x()));
    root.set("s", report::Value::number(p.s()));
    root.set("w", report::Value::number(p.w(profile)));
    root.set("method", report::Value::string(o.method));

    if (method == KernelMethod::Series) {
        MomentCache cache(profile);
        const KernelEvaluation eval = kernel_series(cache, p, o.m);
        root.set("value", report::Value::number(eval.value));
        root.set("truncation_bound", report::Value::number(eval.truncation_bound));
        root.set("quadrature_bound", report::Value::number(eval.quadrature_bound));
        root.set("error_budget", report::Value::number(eval.error_budget()));
        root.set("shells", report::Value::integer(eval.shells));
    } else {
        MomentCache cache(profile);
        const GammaEstimate est = estimate_gamma_default(cache);
        const double value = kernel_closed(profile, p, o.m, est.gamma_hat);
        root.set("value", report::Value::number(value));
        root.set("gamma_hat", report::Value::number(est.gamma_hat));
        root.set("gamma_residual", report::Value::number(est.residual));
        // the closed form is exact up to the gamma estimate
        root.set("error_budget", report::Value::number(value * est.residual));
    }
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_epsilon(const Options& o, std::ostream& out) {
    const Profile profile = o.resolve_profile();
    if (o.m == 0) throw InputError("epsilon requires --m");
    const KernelMethod method = parse_method(o.method);

    if (!o.at.empty()) {
        const DomainPoint p = parse_point(o.at);
        if (o.n_explicit && o.n != p.n())
            throw InputError("--n disagrees with the dimension of --at");
        const EpsilonEvaluator evaluator(profile, p.n(), o.m, method);
        const EpsilonSample s = evaluator.at(p);

        report::Value root = report_header("epsilon", profile);
        root.set("n", report::Value::integer(p.n()));
        root.set("m", report::Value::integer(o.m));
        root.set("method", report::Value::string(o.method));
        root.set("gamma_hat", report::Value::number(evaluator.gamma_hat()));
        root.set("sample", sample_value(s));
        write_output(root.dump(), o, out);
        return 0;
    }

    // sweep mode
    const EpsilonEvaluator evaluator(profile, o.n, o.m, method);
    const SampleBox box = default_sample_box(profile, method);
    const std::vector<DomainPoint> pts = sample_points(profile, o.n, o.samples, o.seed, box);
    std::vector<EpsilonSample> samples(pts.size());
    par::for_each_index(pts.size(), par::Exec::Parallel,
                        [&](std::size_t i) { samples[i] = evaluator.at(pts[i]); });

    if (resolved_format(o, "json") == "csv") {
        report::Csv csv({"x", "w", "epsilon", "error_budget"});
        for (const EpsilonSample& s : samples)
            csv.row({report::Csv::cell(s.x), report::Csv::cell(s.w), report::Csv::cell(s.epsilon),
                     report::Csv::cell(s.error_budget)});
        write_output(csv.str(), o, out);
        return 0;
    }

    report::Value root = report_header("epsilon", profile);
    root.set("n", report::Value::integer(o.n));
    root.set("m", report::Value::integer(o.m));
    root.set("method", report::Value::string(o.method));
    root.set("gamma_hat", report::Value::number(evaluator.gamma_hat()));
    root.set("seed", report::Value::integer(static_cast<long long>(o.seed)));
    report::Value arr = report::Value::array();
    for (const EpsilonSample& s : samples) arr.push(sample_value(s));
    root.set("samples", std::move(arr));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_balanced(const Options& o, std::ostream& out) {
    const Profile profile = o.resolve_profile();
    if (o.m == 0) throw InputError("balanced requires --m");
    const KernelMethod method = parse_method(o.method);

    BalancedOptions bopts;
    bopts.sample_count = o.samples;
    bopts.tol = o.tol > 0.0 ? o.tol : (method == KernelMethod::ClosedForm ? 1.0e-6 : 1.0e-4);
    bopts.seed = o.seed;
    bopts.method = method;
    const BalancedVerdict verdict = balanced_verdict(profile, o.n, o.m, bopts);

    if (resolved_format(o, "json") == "csv") {
        report::Csv csv({"x", "w", "epsilon", "error_budget"});
        for (const EpsilonSample& s : verdict.samples)
            csv.row({report::Csv::cell(s.x), report::Csv::cell(s.w), report::Csv::cell(s.epsilon),
                     report::Csv::cell(s.error_budget)});
        write_output(csv.str(), o, out);
        return 0;
    }

    report::Value root = report_header("balanced", profile);
    root.set("n", report::Value::integer(o.n));
    root.set("m", report::Value::integer(o.m));
    root.set("method", report::Value::string(o.method));
    root.set("tol", report::Value::number(bopts.tol));
    root.set("sample_count", report::Value::integer(o.samples));
    root.set("seed", report::Value::integer(static_cast<long long>(o.seed)));
    root.set("certification", report::Value::string("numerical, non-certifying"));
    report::Value v = verdict_value(verdict, true);
    root.set("verdict", std::move(v));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_quantization_scan(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    const KernelMethod method = parse_method(o.method);

    BalancedOptions bopts;
    bopts.sample_count = o.samples;
    bopts.tol = o.tol > 0.0 ? o.tol : (method == KernelMethod::ClosedForm ? 1.0e-6 : 1.0e-4);
    bopts.seed = o.seed;
    bopts.method = method;
    bopts.keep_samples = false;
    const QuantizationScan scan =
        regular_quantization_scan(profile, o.n, o.m_from, o.m_to, bopts);

    report::Value root = report_header("quantization-scan", profile);
    root.set("n", report::Value::integer(o.n));
    root.set("m_from", report::Value::integer(o.m_from));
    root.set("m_to", report::Value::integer(o.m_to));
    root.set("all_balanced", report::Value::boolean(scan.all_balanced));
    report::Value arr = report::Value::array();
    for (const BalancedVerdict& v : scan.verdicts) arr.push(verdict_value(v, false));
    root.set("verdicts", std::move(arr));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_curvature(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    const double tol = o.tol > 0.0 ? o.tol : 1.0e-3;

    SampleBox box;
    box.x_hi = 0.7 * std::min(profile.x_cap(), profile.x0());
    box.x_lo = std::min(0.05 * box.x_hi, box.x_hi / 2.0) + 2.0 * o.h;
    box.w_hi = 0.7;
    const std::vector<DomainPoint> grid = sample_points(profile, o.n, o.grid, o.seed, box);
    const CurvatureScan scan = curvature_scan(profile, grid, o.h, tol);

    report::Value root = report_header("curvature", profile);
    root.set("n", report::Value::integer(o.n));
    root.set("grid", report::Value::integer(o.grid));
    root.set("h", report::Value::number(o.h));
    root.set("tol", report::Value::number(tol));
    root.set("mean", report::Value::number(scan.mean));
    root.set("spread", report::Value::number(scan.spread));
    root.set("constant", report::Value::boolean(scan.constant));
    root.set("dropped", report::Value::integer(scan.dropped));
    report::Value arr = report::Value::array();
    for (const CurvaturePoint& p : scan.points) {
        report::Value row = report::Value::object();
        row.set("x", report::Value::number(p.x));
        row.set("s", report::Value::number(p.s));
        row.set("ok", report::Value::boolean(p.ok));
        row.set("S", report::Value::number(p.ok ? p.value : std::nan("")));
        arr.push(std::move(row));
    }
    root.set("points", std::move(arr));
    write_output(root.dump(), o, out);
    return 0;
}

int cmd_volume_check(const Options& o, std::ostream& out) {
    require_json(o);
    const Profile profile = o.resolve_profile();
    SampleBox box = default_sample_box(profile, KernelMethod::ClosedForm);
    const std::vector<DomainPoint> pts = sample_points(profile, o.n, o.points, o.seed, box);

    std::vector<VolumeDensity> densities(pts.size());
    par::for_each_index(pts.size(), par::Exec::Parallel,
                        [&](std::size_t i) { densities[i] = volume_density(profile, pts[i]); });

    double max_defect = 0.0, sum_defect = 0.0;
    for (const VolumeDensity& d : densities) {
        max_defect = std::max(max_defect, d.defect);
        sum_defect += d.defect;
    }

    report::Value root = report_header("volume-check", profile);
    root.set("n", report::Value::integer(o.n));
    root.set("points", report::Value::integer(o.points));
    root.set("seed", report::Value::integer(static_cast<long long>(o.seed)));
    root.set("max_defect", report::Value::number(max_defect));
    root.set("mean_defect", report::Value::number(sum_defect / densities.size()));
    report::Value arr = report::Value::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        report::Value row = report::Value::object();
        row.set("x", report::Value::number(pts[i].x()));
        row.set("s", report::Value::number(pts[i].s()));
        row.set("det_g", report::Value::number(densities[i].det_g));
        row.set("closed_form", report::Value::number(densities[i].closed_form));
        row.set("defect", report::Value::number(densities[i].defect));
        arr.push(std::move(row));
    }
    root.set("points_detail", std::move(arr));
    write_output(root.dump(), o, out);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"balanced-lab: weighted Bergman kernels, epsilon functions and balanced-metric "
                 "diagnostics on Hartogs domains"};
    app.require_subcommand(1);
    // long-form flags only; frees -h for the curvature step flag --h
    app.set_help_flag("--help", "print help");

    Options o;

    CLI::App* kahler = app.add_subcommand("check-kahler", "sample G(t) and test positivity");
    kahler->add_option("--grid-size", o.grid_size, "grid resolution");

    CLI::App* complete = app.add_subcommand("check-complete", "geodesic completeness probe");
    complete->add_option("--budget", o.budget, "integrand evaluation budget");

    CLI::App* moments = app.add_subcommand("moments", "moment table c_k(F^m)");
    moments->add_option("--k-max", o.k_max, "largest k");
    moments->add_option("--m", o.m, "weight exponent");

    CLI::App* gamma = app.add_subcommand("gamma", "estimate the moment-identity parameter gamma");
    gamma->add_option("--m-set", o.m_set, "comma list of weights");
    gamma->add_option("--t-grid", o.t_grid, "comma list of radial probes");
    gamma->add_option("--k-max", o.k_max, "series truncation");

    CLI::App* kernel = app.add_subcommand("kernel", "diagonal reproducing kernel at a point");
    kernel->add_option("--at", o.at, "point z0,z1,... (components like 0.5 or 0.1+0.2i)");
    kernel->add_option("--m", o.m, "weight exponent");
    kernel->add_option("--method", o.method, "closed or series");

    CLI::App* epsilon = app.add_subcommand("epsilon", "epsilon function at a point or on a sweep");
    epsilon->add_option("--at", o.at, "point z0,z1,...");
    epsilon->add_option("--n", o.n, "dimension (sweep mode)");
    epsilon->add_option("--m", o.m, "weight exponent");
    epsilon->add_option("--samples", o.samples, "sweep sample count");
    epsilon->add_option("--method", o.method, "closed or series");

    CLI::App* balanced = app.add_subcommand("balanced", "balanced-metric verdict at weight m");
    balanced->add_option("--n", o.n, "dimension");
    balanced->add_option("--m", o.m, "weight exponent");
    balanced->add_option("--samples", o.samples, "sample count");
    balanced->add_option("--tol", o.tol, "relative spread tolerance");
    balanced->add_option("--method", o.method, "closed or series");

    CLI::App* scan = app.add_subcommand("quantization-scan", "balanced verdicts over a weight range");
    scan->add_option("--n", o.n, "dimension");
    scan->add_option("--m-from", o.m_from, "first weight");
    scan->add_option("--m-to", o.m_to, "last weight");
    scan->add_option("--samples", o.samples, "sample count per weight");
    scan->add_option("--tol", o.tol, "relative spread tolerance");
    scan->add_option("--method", o.method, "closed or series");

    CLI::App* curvature = app.add_subcommand("curvature", "scalar curvature scan");
    curvature->set_help_flag("--help", "print help"); // vacate -h before adding --h
    curvature->add_option("--n", o.n, "dimension");
    curvature->add_option("--grid", o.grid, "number of grid points");
    curvature->add_option("--h", o.h, "finite-difference step");
    curvature->add_option("--tol", o.tol, "constancy tolerance");

    CLI::App* volume = app.add_subcommand("volume-check", "volume density identity check");
    volume->add_option("--n", o.n, "dimension");
    volume->add_option("--points", o.points, "sample count");

    for (CLI::App* sub : {kahler, complete, moments, gamma, kernel, epsilon, balanced, scan,
                          curvature, volume}) {
        sub->set_help_flag("--help", "print help");
        attach_common(sub, o);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const CLI::Option* n_opt = sub->get_option_no_throw("--n");
        o.n_explicit = n_opt != nullptr && n_opt->count() > 0;
        merge_config(sub, o);
        const CLI::Option* tol_opt = sub->get_option_no_throw("--tol");
        const bool tol_given = (tol_opt != nullptr && tol_opt->count() > 0) || o.tol != -1.0;
        if (tol_given && !(o.tol > 0.0)) throw InputError("--tol must be positive");
        const std::string& name = sub->get_name();
        if (name == "check-kahler") return cmd_check_kahler(o, out);
        if (name == "check-complete") return cmd_check_complete(o, out);
        if (name == "moments") return cmd_moments(o, out);
        if (name == "gamma") return cmd_gamma(o, out);
        if (name == "kernel") return cmd_kernel(o, out);
        if (name == "epsilon") return cmd_epsilon(o, out);
        if (name == "balanced") return cmd_balanced(o, out);
        if (name == "quantization-scan") return cmd_quantization_scan(o, out);
        if (name == "curvature") return cmd_curvature(o, out);
        if (name == "volume-check") return cmd_volume_check(o, out);
        throw InputError("unknown subcommand '" + name + "'");
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const TrivialSpaceError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace hartogs::cli
