// Command-line front end: distribution DSL in, JSON or CSV out.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "busyvar/bounds.hpp"
#include "busyvar/core.hpp"
#include "busyvar/cv.hpp"
#include "busyvar/errors.hpp"
#include "busyvar/ordering.hpp"
#include "busyvar/sim.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace busyvar;

namespace {

constexpr int kSchemaVersion = 1;

const char* kWarnSeriesCorrection =
    "series route: the tail sum carries the (1+gamma_s^2) correction factor; "
    "the historically printed form without it underestimates the variance";
const char* kWarn17Caveat =
    "improved upper bound: the as-printed variant reproduces the historically "
    "published table and is not a certified bound; only the corrected variant "
    "(factor 2 on the tail sum) bounds the exact value";
const char* kWarnTableHalfCell =
    "upper_1_3 at rho=0.5 evaluates to 0.55996040; the historically published "
    "0.55954328 does not match the defining formula";
const char* kWarnTable17Cells =
    "upper_1_7_printed at rho=10 and rho=20 evaluates to 5.4943109e8 and "
    "2.5261041e17; the historically published 5.6362048e8 and 2.5325047e17 do "
    "not match the printed formula";

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double relative_gap(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

// ----------------------------------------------------------------------
// report plumbing

struct Report {
    json j;
    std::vector<std::string> warnings;

    explicit Report(const std::string& command) {
        j["schema_version"] = kSchemaVersion;
        j["command"] = command;
        j["inputs"] = json::object();
        j["results"] = json::object();
    }

    void warn(const std::string& w) { warnings.push_back(w); }

    void finish(const std::string& format) {
        j["warnings"] = warnings;
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        if (format == "csv") {
            std::cout << "key,value\n";
            flatten("", j);
        } else {
            std::cout << j.dump(2) << "\n";
        }
    }

private:
    void flatten(const std::string& prefix, const json& node) {
        if (node.is_object()) {
            for (const auto& [k, v] : node.items()) {
                flatten(prefix.empty() ? k : prefix + "." + k, v);
            }
        } else if (node.is_array()) {
            for (std::size_t i = 0; i < node.size(); ++i) {
                flatten(prefix + "." + std::to_string(i), node[i]);
            }
        } else {
            std::cout << prefix << "," << node.dump() << "\n";
        }
    }
};

json variance_json(const VarianceResult& v) {
    json out;
    if (v.is_infinite()) {
        out["value"] = "infinite";
    } else {
        out["value"] = v.value;
    }
    out["method"] = std::string(method_name(v.method));
    out["err_est"] = v.err_est;
    if (v.terms_used > 0) out["terms_used"] = v.terms_used;
    if (v.evaluations > 0) out["evaluations"] = v.evaluations;
    return out;
}

// ----------------------------------------------------------------------
// optional JSON config file mirroring the long flags

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    json cfg = json::parse(in, nullptr, true);
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    return cfg;
}

struct Overlay {
    CLI::App* cmd = nullptr;
    json cfg = json::object();

    template <class T>
    void apply(const std::string& key, T& var) const {
        if (!cfg.contains(key)) return;
        if (cmd->count("--" + key) > 0) return;  // command line wins
        var = cfg.at(key).get<T>();
    }
    template <class T>
    void apply(const std::string& key, std::optional<T>& var) const {
        if (!cfg.contains(key)) return;
        if (cmd->count("--" + key) > 0) return;
        var = cfg.at(key).get<T>();
    }
};

[[noreturn]] void usage_error(const std::string& msg) {
    throw CLI::ValidationError(msg);
}

// ----------------------------------------------------------------------
// shared option bundle

struct DistOpts {
    std::string dist;
    double lambda = 0.0;
    double tol = 1e-10;
    std::string format = "json";
    std::string config;
};

void echo_queue_inputs(Report& r, const QueueInput& q, double tol) {
    r.j["inputs"]["dist"] = q.model.format();
    r.j["inputs"]["lambda"] = q.lambda;
    r.j["inputs"]["rho"] = q.rho;
    r.j["inputs"]["alpha"] = q.model.moments().alpha;
    const double g2 = q.model.moments().gamma_s2;
    if (std::isfinite(g2)) r.j["inputs"]["gamma_s2"] = g2;
    r.j["inputs"]["tol"] = tol;
    if (q.rho > 250.0) {
        r.warn("rho=" + fmt(q.rho) + " is close to the overflow guard at 300");
    }
}

// ----------------------------------------------------------------------
// compute

int cmd_compute(const DistOpts& o, const std::string& method,
                const std::string& series_variant, std::int64_t max_terms) {
    const ServiceTimeModel model = ServiceTimeModel::parse(o.dist);
    if (!std::isfinite(model.moments().mu2)) {
        std::cerr << "error: infinite second moment (mu2 is infinite for " << o.dist
                  << "); the busy-period variance is infinite\n";
        return 3;
    }
    const QueueInput q{o.lambda, model};
    Report r("compute");
    echo_queue_inputs(r, q, o.tol);
    r.j["inputs"]["method"] = method;

    const SeriesVariant variant = series_variant == "as-printed"
                                      ? SeriesVariant::as_printed
                                      : SeriesVariant::corrected;
    std::optional<VarianceResult> integral, series, mm;
    if (method == "integral" || method == "all") {
        integral = variance_integral(q, o.tol);
        r.j["results"]["integral"] = variance_json(*integral);
    }
    if (method == "series" || method == "all") {
        series = variance_series(q, std::min(o.tol, 1e-12), max_terms, variant);
        r.j["results"]["series"] = variance_json(*series);
        if (variant == SeriesVariant::as_printed) {
            r.j["results"]["series"]["variant"] = "as_printed";
        }
        r.warn(kWarnSeriesCorrection);
    }
    if (method == "mm-exact" || method == "all") {
        mm = variance_mm_exact(q.lambda, q.rho, std::min(o.tol, 1e-12));
        r.j["results"]["mm_exact"] = variance_json(*mm);
    }
    if (method == "all") {
        json dev;
        dev["integral_vs_series"] = relative_gap(integral->value, series->value);
        dev["integral_vs_mm_exact"] = relative_gap(integral->value, mm->value);
        dev["series_vs_mm_exact"] = relative_gap(series->value, mm->value);
        r.j["results"]["deviations"] = dev;
    }
    r.finish(o.format);
    return 0;
}

// ----------------------------------------------------------------------
// bounds

int cmd_bounds(double lambda, std::optional<double> rho, std::optional<double> gamma_s2,
               std::optional<double> alpha, std::optional<double> mu2,
               std::optional<double> mu3, std::optional<int> improved_m,
               const std::vector<std::string>& classes, double tol,
               const std::string& format) {
    Report r("bounds");
    if (!rho && alpha) rho = lambda * *alpha;
    if (!gamma_s2 && alpha && mu2) gamma_s2 = *mu2 / (*alpha * *alpha) - 1.0;
    if (!rho) usage_error("need --rho (or --alpha to derive it)");

    r.j["inputs"]["lambda"] = lambda;
    r.j["inputs"]["rho"] = *rho;
    if (gamma_s2) r.j["inputs"]["gamma_s2"] = *gamma_s2;
    if (alpha) r.j["inputs"]["alpha"] = *alpha;
    if (mu2) r.j["inputs"]["mu2"] = *mu2;
    if (mu3) r.j["inputs"]["mu3"] = *mu3;
    if (improved_m) r.j["inputs"]["improved_M"] = *improved_m;
    if (*rho > 250.0) r.warn("rho=" + fmt(*rho) + " is close to the overflow guard at 300");

    if (gamma_s2) {
        const BoundsReport g = general_bounds(lambda, *rho, *gamma_s2);
        r.j["results"]["general_1_3"] = {{"lower", g.lower}, {"upper", *g.upper}};
    }
    if (improved_m) {
        const BoundsReport printed =
            improved_upper_mm(lambda, *rho, *improved_m, Improved17Variant::as_printed, tol);
        const BoundsReport corrected =
            improved_upper_mm(lambda, *rho, *improved_m, Improved17Variant::corrected, tol);
        r.j["results"]["improved_1_7_as_printed"] = {{"upper", *printed.upper},
                                                     {"M", *improved_m}};
        r.j["results"]["improved_1_7_corrected"] = {{"upper", *corrected.upper},
                                                    {"M", *improved_m}};
        r.warn(kWarn17Caveat);
    }
    for (const std::string& c : classes) {
        if (c == "nbue" || c == "nwue") {
            const ClassComparison cc = class_comparison(
                c == "nbue" ? ReliabilityClass::nbue : ReliabilityClass::nwue, lambda, *rho);
            r.j["results"]["class_" + c] = {{"relation", cc.relation},
                                            {"mm_reference", cc.mm_reference}};
        } else if (c == "dfr") {
            if (!gamma_s2) usage_error("--class dfr needs --gamma-s2");
            const BoundsReport b = dfr_lower(lambda, *rho, *gamma_s2, tol);
            r.j["results"]["dfr_1_10"] = {{"lower", b.lower}};
        } else if (c == "imrl") {
            if (!alpha || !mu2 || !mu3) usage_error("--class imrl needs --alpha, --mu2, --mu3");
            const BoundsReport b = imrl_lower(lambda, *alpha, *mu2, *mu3, tol);
            r.j["results"]["imrl_1_11"] = {{"lower", b.lower}};
        } else {
            usage_error("unknown --class " + c);
        }
    }
    if (r.j["results"].empty()) {
        usage_error("nothing to do: give --gamma-s2, --improved-M or --class");
    }
    r.finish(format);
    return 0;
}

// ----------------------------------------------------------------------
// table1

int cmd_table1(double lambda, std::vector<double> rho_list, int m, bool extended) {
    if (rho_list.empty()) {
        rho_list.assign(std::begin(kTable1DefaultRho), std::end(kTable1DefaultRho));
    }
    const auto rows = table1(lambda, rho_list, m);
    std::cout << "# schema: table1.v1\n";
    std::cout << (extended
                      ? "rho,upper_1_3,upper_1_7_printed,lower_1_3,upper_1_7_corrected,exact_1_4"
                      : "rho,upper_1_3,upper_1_7_printed,lower_1_3")
              << "\n";
    bool has_half = false;
    for (const auto& row : rows) {
        std::cout << fmt(row.rho) << "," << fmt(row.upper_1_3) << ","
                  << fmt(row.upper_1_7_printed) << "," << fmt(row.lower_1_3);
        if (extended) {
            std::cout << "," << fmt(row.upper_1_7_corrected) << "," << fmt(row.exact_1_4);
        }
        std::cout << "\n";
        if (row.rho == 0.5) has_half = true;
    }
    if (has_half) std::cout << "# note: " << kWarnTableHalfCell << "\n";
    std::cout << "# note: " << kWarn17Caveat << "\n";
    std::cout << "# note: " << kWarnTable17Cells << "\n";
    return 0;
}

// ----------------------------------------------------------------------
// simulate

int cmd_simulate(const DistOpts& o, std::uint64_t n, std::uint64_t seed,
                 unsigned streams, const std::string& emit_samples) {
    const ServiceTimeModel model = ServiceTimeModel::parse(o.dist);
    SimConfig cfg{o.lambda, model, n, seed, streams};
    const SimStats s = simulate_busy_periods(cfg);

    Report r("simulate");
    r.j["inputs"]["dist"] = model.format();
    r.j["inputs"]["lambda"] = o.lambda;
    r.j["inputs"]["n"] = n;
    r.j["inputs"]["seed"] = seed;
    r.j["inputs"]["streams"] = streams;
    r.j["results"]["n"] = s.n;
    r.j["results"]["mean"] = s.mean;
    r.j["results"]["variance"] = s.variance;
    r.j["results"]["ci95_mean"] = {s.ci95_mean.lo, s.ci95_mean.hi};
    r.j["results"]["ci95_variance"] = {s.ci95_variance.lo, s.ci95_variance.hi};
    r.j["results"]["events"] = s.events;

    if (!emit_samples.empty()) {
        const std::vector<double> samples = busy_period_samples(cfg);
        std::ofstream out(emit_samples);
        if (!out) throw std::invalid_argument("cannot write samples to " + emit_samples);
        for (double x : samples) out << fmt(x) << "\n";
        r.j["results"]["samples_path"] = emit_samples;
    }
    r.finish(o.format);
    return 0;
}

// ----------------------------------------------------------------------
// order

json verdict_json(const OrderVerdict& v) {
    json out;
    out["outcome"] = std::string(order_outcome_name(v.outcome));
    out["mean1"] = v.mean1;
    out["mean2"] = v.mean2;
    out["mean_check"] = v.mean_check;
    out["gap"] = v.gap;
    if (v.witness_t) out["witness_t"] = *v.witness_t;
    return out;
}

int cmd_order(const std::string& dist1, const std::string& dist2,
              std::optional<double> lambda, bool empirical, std::uint64_t n,
              std::uint64_t seed, double tol, const std::string& format) {
    const ServiceTimeModel m1 = ServiceTimeModel::parse(dist1);
    const ServiceTimeModel m2 = ServiceTimeModel::parse(dist2);
    Report r("order");
    r.j["inputs"]["dist1"] = m1.format();
    r.j["inputs"]["dist2"] = m2.format();
    if (lambda) r.j["inputs"]["lambda"] = *lambda;

    const OrderVerdict v = check_variability_order(m1, m2);
    r.j["results"]["variability_order"] = verdict_json(v);

    if (lambda && v.outcome == OrderOutcome::holds) {
        const VarianceConsequence c = variance_consequence(m1, m2, *lambda, tol);
        json cj;
        if (std::isinf(c.var1) || std::isinf(c.var2)) {
            cj["var1"] = std::isinf(c.var1) ? json("infinite") : json(c.var1);
            cj["var2"] = std::isinf(c.var2) ? json("infinite") : json(c.var2);
        } else {
            cj["var1"] = c.var1;
            cj["var2"] = c.var2;
            cj["margin"] = c.margin;
            cj["violation"] = c.violation;
        }
        r.j["results"]["variance_consequence"] = cj;
    }
    if (empirical) {
        if (!lambda) usage_error("--empirical needs --lambda");
        const auto s1 = busy_period_samples({*lambda, m1, n, seed, 1});
        const auto s2 = busy_period_samples({*lambda, m2, n, seed + 1, 1});
        const OrderVerdict ev = empirical_busy_order(s1, s2);
        json ej = verdict_json(ev);
        ej["n1"] = s1.size();
        ej["n2"] = s2.size();
        ej["note"] = "statistical evidence, not proof";
        r.j["results"]["empirical"] = ej;
    }
    r.finish(format);
    return 0;
}

// ----------------------------------------------------------------------
// cv

int cmd_cv(const DistOpts& o, double threshold) {
    const ServiceTimeModel model = ServiceTimeModel::parse(o.dist);
    if (!std::isfinite(model.moments().mu2)) {
        std::cerr << "error: infinite second moment (mu2 is infinite for " << o.dist
                  << "); the busy-period coefficient of variation is infinite\n";
        return 3;
    }
    const QueueInput q{o.lambda, model};
    Report r("cv");
    echo_queue_inputs(r, q, o.tol);
    const CvResult cv = cv_squared(q, o.tol);
    const ExponentialityVerdict verdict = exponentiality_diagnostic(q, o.tol, threshold);
    r.j["results"]["beta"] = cv.beta;
    r.j["results"]["gamma_B2"] = cv.gamma_B2;
    r.j["results"]["err_est"] = cv.err_est;
    r.j["results"]["gap"] = cv.exponentiality_gap;
    r.j["results"]["threshold"] = threshold;
    r.j["results"]["verdict"] =
        verdict.approximately_exponential ? "approximately-exponential" : "not-exponential";
    r.finish(o.format);
    return 0;
}

// ----------------------------------------------------------------------
// sweep

struct RhoRange {
    double lo = 0.0, hi = 0.0, step = 0.0;
};

RhoRange parse_rho_range(const std::string& text) {
    RhoRange r;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        usage_error("--rho-range wants a:b:step");
    }
    try {
        r.lo = std::stod(text.substr(0, c1));
        r.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        r.step = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        usage_error("--rho-range wants numeric a:b:step");
    }
    if (!(r.step > 0) || r.hi < r.lo) usage_error("--rho-range wants a <= b and step > 0");
    return r;
}

int cmd_sweep(const DistOpts& o, const std::string& range_text,
              std::vector<std::string> methods, bool with_bounds, bool with_cv) {
    const ServiceTimeModel base = ServiceTimeModel::parse(o.dist);
    const RhoRange range = parse_rho_range(range_text);
    if (methods.empty() && !with_bounds && !with_cv) methods = {"mm-exact"};

    std::string header = "rho,alpha";
    for (const auto& m : methods) {
        if (m != "integral" && m != "series" && m != "mm-exact" && m != "md-exact") {
            usage_error("unknown --method " + m);
        }
        std::string tag = m;
        for (char& ch : tag) {
            if (ch == '-') ch = '_';
        }
        header += "," + tag + "," + tag + "_err";
    }
    if (with_bounds) header += ",lower_1_3,upper_1_3";
    if (with_cv) header += ",gamma_B2,cv_gap";

    std::cout << "# schema: sweep.v1\n" << header << "\n";
    for (double rho = range.lo; rho <= range.hi + range.step * 0.5; rho += range.step) {
        const ServiceTimeModel model = base.scaled_to_mean(rho / o.lambda);
        const QueueInput q{o.lambda, model};
        std::string line = fmt(q.rho) + "," + fmt(rho / o.lambda);
        for (const auto& m : methods) {
            VarianceResult v;
            if (m == "integral") {
                v = variance_integral(q, o.tol);
            } else if (m == "series") {
                v = variance_series(q, std::min(o.tol, 1e-12));
            } else if (m == "mm-exact") {
                v = variance_mm_exact(q.lambda, q.rho, std::min(o.tol, 1e-12));
            } else {
                v = variance_md_exact(q.lambda, q.rho);
            }
            line += "," + (v.is_infinite() ? std::string("infinite") : fmt(v.value));
            line += "," + fmt(v.err_est);
        }
        if (with_bounds) {
            const BoundsReport g = general_bounds(q.lambda, q.rho, model.moments().gamma_s2);
            line += "," + fmt(g.lower) + "," + fmt(*g.upper);
        }
        if (with_cv) {
            const CvResult cv = cv_squared(q, o.tol);
            line += "," + fmt(cv.gamma_B2) + "," + fmt(cv.exponentiality_gap);
        }
        std::cout << line << "\n";
    }
    return 0;
}

}  // namespace

// ----------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"busy-period moments, bounds, ordering and simulation for "
                 "infinite-server queues"};
    app.require_subcommand(1);

    auto* compute = app.add_subcommand("compute", "busy-period variance by one or all methods");
    DistOpts c_opts;
    std::string c_method = "all";
    std::string c_series_variant = "corrected";
    std::int64_t c_max_terms = 500;
    compute->add_option("--dist", c_opts.dist, "service-time model DSL");
    compute->add_option("--lambda", c_opts.lambda, "arrival rate");
    compute->add_option("--method", c_method)
        ->check(CLI::IsMember({"integral", "series", "mm-exact", "all"}));
    compute->add_option("--series-variant", c_series_variant)
        ->check(CLI::IsMember({"corrected", "as-printed"}));
    compute->add_option("--max-terms", c_max_terms);
    compute->add_option("--tol", c_opts.tol)->envname("BUSYVAR_TOL");
    compute->add_option("--format", c_opts.format)->check(CLI::IsMember({"json", "csv"}));
    compute->add_option("--config", c_opts.config, "JSON file mirroring the flags");

    auto* bounds = app.add_subcommand("bounds", "variance bounds from load and dispersion");
    double b_lambda = 0.0, b_tol = 1e-12;
    std::optional<double> b_rho, b_g2, b_alpha, b_mu2, b_mu3;
    std::optional<int> b_m;
    std::vector<std::string> b_classes;
    std::string b_format = "json", b_config;
    bounds->add_option("--lambda", b_lambda);
    bounds->add_option("--rho", b_rho);
    bounds->add_option("--gamma-s2", b_g2);
    bounds->add_option("--alpha", b_alpha);
    bounds->add_option("--mu2", b_mu2);
    bounds->add_option("--mu3", b_mu3);
    bounds->add_option("--improved-M", b_m);
    bounds->add_option("--class", b_classes)->delimiter(',');
    bounds->add_option("--tol", b_tol)->envname("BUSYVAR_TOL");
    bounds->add_option("--format", b_format)->check(CLI::IsMember({"json", "csv"}));
    bounds->add_option("--config", b_config, "JSON file mirroring the flags");

    auto* table = app.add_subcommand("table1", "reference bound table (CSV)");
    double t_lambda = 1.0;
    std::vector<double> t_rho;
    int t_m = 14;
    bool t_extended = false;
    table->add_option("--lambda", t_lambda);
    table->add_option("--rho-list", t_rho)->delimiter(',');
    table->add_option("--M", t_m);
    table->add_flag("--extended", t_extended, "append corrected and exact columns");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo busy periods");
    DistOpts s_opts;
    std::uint64_t s_n = 0, s_seed = 0;
    unsigned s_streams = 1;
    std::string s_emit;
    simulate->add_option("--dist", s_opts.dist);
    simulate->add_option("--lambda", s_opts.lambda);
    simulate->add_option("--n", s_n, "number of busy periods");
    simulate->add_option("--seed", s_seed);
    simulate->add_option("--streams", s_streams);
    simulate->add_option("--emit-samples", s_emit, "write one length per line");
    simulate->add_option("--format", s_opts.format)->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--config", s_opts.config, "JSON file mirroring the flags");

    auto* order = app.add_subcommand("order", "variability ordering checks");
    std::string o_dist1, o_dist2, o_format = "json", o_config;
    std::optional<double> o_lambda;
    bool o_empirical = false;
    std::uint64_t o_n = 100000, o_seed = 1;
    double o_tol = 1e-10;
    order->add_option("--dist1", o_dist1);
    order->add_option("--dist2", o_dist2);
    order->add_option("--lambda", o_lambda);
    order->add_flag("--empirical", o_empirical, "also compare simulated busy periods");
    order->add_option("--n", o_n);
    order->add_option("--seed", o_seed);
    order->add_option("--tol", o_tol)->envname("BUSYVAR_TOL");
    order->add_option("--format", o_format)->check(CLI::IsMember({"json", "csv"}));
    order->add_option("--config", o_config, "JSON file mirroring the flags");

    auto* cv = app.add_subcommand("cv", "busy-period coefficient of variation");
    DistOpts v_opts;
    double v_threshold = 0.01;
    cv->add_option("--dist", v_opts.dist);
    cv->add_option("--lambda", v_opts.lambda);
    cv->add_option("--threshold", v_threshold);
    cv->add_option("--tol", v_opts.tol)->envname("BUSYVAR_TOL");
    cv->add_option("--format", v_opts.format)->check(CLI::IsMember({"json", "csv"}));
    cv->add_option("--config", v_opts.config, "JSON file mirroring the flags");

    auto* sweep = app.add_subcommand("sweep", "CSV sweep over a load range");
    DistOpts w_opts;
    std::string w_range;
    std::vector<std::string> w_methods;
    bool w_bounds = false, w_cv = false;
    sweep->add_option("--dist", w_opts.dist);
    sweep->add_option("--lambda", w_opts.lambda);
    sweep->add_option("--rho-range", w_range, "a:b:step");
    sweep->add_option("--method", w_methods)->delimiter(',');
    sweep->add_flag("--bounds", w_bounds);
    sweep->add_flag("--cv", w_cv);
    sweep->add_option("--tol", w_opts.tol)->envname("BUSYVAR_TOL");
    sweep->add_option("--config", w_opts.config, "JSON file mirroring the flags");

    try {
        app.parse(argc, argv);

        auto overlay_for = [](CLI::App* cmd, const std::string& path) {
            Overlay ov;
            ov.cmd = cmd;
            if (!path.empty()) ov.cfg = load_config(path);
            return ov;
        };

        if (*compute) {
            const Overlay ov = overlay_for(compute, c_opts.config);
            ov.apply("dist", c_opts.dist);
            ov.apply("lambda", c_opts.lambda);
            ov.apply("method", c_method);
            ov.apply("series-variant", c_series_variant);
            ov.apply("tol", c_opts.tol);
            ov.apply("format", c_opts.format);
            if (c_opts.dist.empty()) usage_error("compute needs --dist");
            if (!(c_opts.lambda > 0)) usage_error("compute needs --lambda > 0");
            return cmd_compute(c_opts, c_method, c_series_variant, c_max_terms);
        }
        if (*bounds) {
            const Overlay ov = overlay_for(bounds, b_config);
            ov.apply("lambda", b_lambda);
            ov.apply("rho", b_rho);
            ov.apply("gamma-s2", b_g2);
            ov.apply("alpha", b_alpha);
            ov.apply("mu2", b_mu2);
            ov.apply("mu3", b_mu3);
            ov.apply("improved-M", b_m);
            if (!(b_lambda > 0)) usage_error("bounds needs --lambda > 0");
            return cmd_bounds(b_lambda, b_rho, b_g2, b_alpha, b_mu2, b_mu3, b_m,
                              b_classes, b_tol, b_format);
        }
        if (*table) return cmd_table1(t_lambda, t_rho, t_m, t_extended);
        if (*simulate) {
            const Overlay ov = overlay_for(simulate, s_opts.config);
            ov.apply("dist", s_opts.dist);
            ov.apply("lambda", s_opts.lambda);
            ov.apply("n", s_n);
            ov.apply("seed", s_seed);
            ov.apply("streams", s_streams);
            if (s_opts.dist.empty()) usage_error("simulate needs --dist");
            if (!(s_opts.lambda > 0)) usage_error("simulate needs --lambda > 0");
            if (s_n == 0) usage_error("simulate needs --n >= 1");
            return cmd_simulate(s_opts, s_n, s_seed, s_streams, s_emit);
        }
        if (*order) {
            const Overlay ov = overlay_for(order, o_config);
            ov.apply("dist1", o_dist1);
            ov.apply("dist2", o_dist2);
            ov.apply("lambda", o_lambda);
            if (o_dist1.empty() || o_dist2.empty()) {
                usage_error("order needs --dist1 and --dist2");
            }
            return cmd_order(o_dist1, o_dist2, o_lambda, o_empirical, o_n, o_seed,
                             o_tol, o_format);
        }
        if (*cv) {
            const Overlay ov = overlay_for(cv, v_opts.config);
            ov.apply("dist", v_opts.dist);
            ov.apply("lambda", v_opts.lambda);
            ov.apply("threshold", v_threshold);
            if (v_opts.dist.empty()) usage_error("cv needs --dist");
            if (!(v_opts.lambda > 0)) usage_error("cv needs --lambda > 0");
            return cmd_cv(v_opts, v_threshold);
        }
        if (*sweep) {
            const Overlay ov = overlay_for(sweep, w_opts.config);
            ov.apply("dist", w_opts.dist);
            ov.apply("lambda", w_opts.lambda);
            ov.apply("rho-range", w_range);
            if (w_opts.dist.empty()) usage_error("sweep needs --dist");
            if (!(w_opts.lambda > 0)) usage_error("sweep needs --lambda > 0");
            if (w_range.empty()) usage_error("sweep needs --rho-range");
            return cmd_sweep(w_opts, w_range, w_methods, w_bounds, w_cv);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InfiniteMomentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << " (best estimate "
                  << fmt(e.best_estimate()) << ")\n";
        return 2;
    } catch (const std::range_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
