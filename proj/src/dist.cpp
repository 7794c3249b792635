#include "busyvar/dist.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "busyvar/errors.hpp"
#include "busyvar/numerics.hpp"

namespace busyvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Poisson-weight sum e^{-x} * sum_{j<k} c_j x^j/j!, iterating the weights so
// large x never overflows the power.
template <class Coef>
double poisson_weighted_sum(double x, int k, Coef coef) {
    double term = std::exp(-x);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
        sum += coef(j) * term;
        term *= x / (j + 1);
    }
    return sum;
}

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::deterministic: return "det";
        case Family::exponential: return "exp";
        case Family::erlang: return "erlang";
        case Family::gamma: return "gamma";
        case Family::hyperexponential: return "hyperexp";
        case Family::uniform: return "uniform";
        case Family::weibull: return "weibull";
        case Family::lomax: return "lomax";
    }
    return "?";
}

ServiceTimeModel ServiceTimeModel::deterministic(double mean) {
    require(mean > 0 && std::isfinite(mean), "deterministic: mean must be positive");
    return {Family::deterministic, mean, 0.0};
}

ServiceTimeModel ServiceTimeModel::exponential(double mean) {
    require(mean > 0 && std::isfinite(mean), "exponential: mean must be positive");
    return {Family::exponential, mean, 0.0};
}

ServiceTimeModel ServiceTimeModel::erlang(int shape, double mean) {
    require(shape >= 1, "erlang: shape k must be a positive integer");
    require(mean > 0 && std::isfinite(mean), "erlang: mean must be positive");
    return {Family::erlang, static_cast<double>(shape), mean};
}

ServiceTimeModel ServiceTimeModel::gamma(double shape, double mean) {
    require(shape > 0 && std::isfinite(shape), "gamma: shape must be positive");
    require(mean > 0 && std::isfinite(mean), "gamma: mean must be positive");
    return {Family::gamma, shape, mean};
}

ServiceTimeModel ServiceTimeModel::hyperexponential(std::vector<double> probs,
                                                    std::vector<double> means) {
    require(!probs.empty() && probs.size() == means.size(),
            "hyperexponential: p and mean lists must be non-empty and equally sized");
    double psum = 0.0;
    for (double p : probs) {
        require(p > 0 && p <= 1.0, "hyperexponential: probabilities must lie in (0,1]");
        psum += p;
    }
    require(std::fabs(psum - 1.0) <= 1e-12,
            "hyperexponential: probabilities must sum to 1");
    for (double m : means) {
        require(m > 0 && std::isfinite(m), "hyperexponential: branch means must be positive");
    }
    return {Family::hyperexponential, 0.0, 0.0, std::move(probs), std::move(means)};
}

ServiceTimeModel ServiceTimeModel::uniform(double lo, double hi) {
    require(lo >= 0 && std::isfinite(hi) && lo < hi,
            "uniform: requires 0 <= a < b");
    return {Family::uniform, lo, hi};
}

ServiceTimeModel ServiceTimeModel::weibull(double shape, double scale) {
    require(shape > 0 && std::isfinite(shape), "weibull: shape must be positive");
    require(scale > 0 && std::isfinite(scale), "weibull: scale must be positive");
    return {Family::weibull, shape, scale};
}

ServiceTimeModel ServiceTimeModel::weibull_with_mean(double shape, double mean) {
    require(shape > 0 && std::isfinite(shape), "weibull: shape must be positive");
    require(mean > 0 && std::isfinite(mean), "weibull: mean must be positive");
    return weibull(shape, mean / std::tgamma(1.0 + 1.0 / shape));
}

ServiceTimeModel ServiceTimeModel::lomax(double shape, double scale) {
    require(shape > 0 && std::isfinite(shape), "lomax: shape must be positive");
    require(scale > 0 && std::isfinite(scale), "lomax: scale must be positive");
    return {Family::lomax, shape, scale};
}

double ServiceTimeModel::hyperexp_survival(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        s += probs_[i] * std::exp(-t / means_[i]);
    }
    return s;
}

double ServiceTimeModel::survival(double t) const {
    if (!(t >= 0)) throw std::invalid_argument("survival: t must be >= 0");
    switch (family_) {
        case Family::deterministic:
            return t < a_ ? 1.0 : 0.0;
        case Family::exponential:
            return std::exp(-t / a_);
        case Family::erlang: {
            const int k = static_cast<int>(a_);
            const double x = t * k / b_;
            return poisson_weighted_sum(x, k, [](int) { return 1.0; });
        }
        case Family::gamma:
            return boost::math::gamma_q(a_, t * a_ / b_);
        case Family::hyperexponential:
            return hyperexp_survival(t);
        case Family::uniform:
            if (t <= a_) return 1.0;
            if (t >= b_) return 0.0;
            return (b_ - t) / (b_ - a_);
        case Family::weibull:
            return std::exp(-std::pow(t / b_, a_));
        case Family::lomax:
            return std::pow(1.0 + t / b_, -a_);
    }
    return 0.0;
}

double ServiceTimeModel::integrated_tail(double t) const {
    if (!(t >= 0)) throw std::invalid_argument("integrated_tail: t must be >= 0");
    const double alpha = moments().alpha;
    if (!std::isfinite(alpha)) {
        throw InfiniteMomentError("integrated_tail: mean service time is infinite");
    }
    switch (family_) {
        case Family::deterministic:
            return std::max(a_ - t, 0.0);
        case Family::exponential:
            return a_ * std::exp(-t / a_);
        case Family::erlang: {
            const int k = static_cast<int>(a_);
            const double theta = b_ / k;
            const double x = t / theta;
            return theta * poisson_weighted_sum(x, k, [k](int j) { return double(k - j); });
        }
        case Family::hyperexponential: {
            double h = 0.0;
            for (std::size_t i = 0; i < probs_.size(); ++i) {
                h += probs_[i] * means_[i] * std::exp(-t / means_[i]);
            }
            return h;
        }
        case Family::uniform:
            if (t <= a_) return 0.5 * (a_ + b_) - t;
            if (t >= b_) return 0.0;
            return (b_ - t) * (b_ - t) / (2.0 * (b_ - a_));
        case Family::lomax:
            return b_ / (a_ - 1.0) * std::pow(1.0 + t / b_, 1.0 - a_);
        case Family::gamma:
        case Family::weibull: {
            // Quadrature fallback over the shifted survival curve.
            QuadOptions opt;
            opt.abs_tol = 1e-13 * alpha;
            opt.rel_tol = 1e-12;
            opt.scale = alpha;
            return integrate_semi_infinite(
                       [this, t](double u) { return survival(t + u); }, opt)
                .value;
        }
    }
    return 0.0;
}

double ServiceTimeModel::partial_integrated_tail(double t) const {
    if (!(t >= 0)) throw std::invalid_argument("partial_integrated_tail: t must be >= 0");
    const double alpha = moments().alpha;
    if (!std::isfinite(alpha)) {
        throw InfiniteMomentError("partial_integrated_tail: mean service time is infinite");
    }
    return std::clamp(alpha - integrated_tail(t), 0.0, alpha);
}

MomentSet ServiceTimeModel::moments() const {
    switch (family_) {
        case Family::deterministic:
            return {a_, a_ * a_, a_ * a_ * a_, 0.0, 0.0};
        case Family::exponential:
            return {a_, 2 * a_ * a_, 6 * a_ * a_ * a_, a_ * a_, 1.0};
        case Family::erlang:
        case Family::gamma: {
            const double k = a_;
            const double theta = b_ / k;
            const double mu2 = theta * theta * k * (k + 1);
            const double mu3 = theta * theta * theta * k * (k + 1) * (k + 2);
            return {b_, mu2, mu3, k * theta * theta, 1.0 / k};
        }
        case Family::hyperexponential: {
            double a = 0.0, mu2 = 0.0, mu3 = 0.0;
            for (std::size_t i = 0; i < probs_.size(); ++i) {
                const double m = means_[i];
                a += probs_[i] * m;
                mu2 += probs_[i] * 2 * m * m;
                mu3 += probs_[i] * 6 * m * m * m;
            }
            const double s2 = mu2 - a * a;
            return {a, mu2, mu3, s2, s2 / (a * a)};
        }
        case Family::uniform: {
            const double a = a_, b = b_;
            const double mean = 0.5 * (a + b);
            const double mu2 = (a * a + a * b + b * b) / 3.0;
            const double mu3 = (a * a * a + a * a * b + a * b * b + b * b * b) / 4.0;
            const double s2 = (b - a) * (b - a) / 12.0;
            return {mean, mu2, mu3, s2, s2 / (mean * mean)};
        }
        case Family::weibull: {
            const double k = a_, s = b_;
            const double m1 = s * std::tgamma(1 + 1 / k);
            const double mu2 = s * s * std::tgamma(1 + 2 / k);
            const double mu3 = s * s * s * std::tgamma(1 + 3 / k);
            const double s2 = mu2 - m1 * m1;
            return {m1, mu2, mu3, s2, s2 / (m1 * m1)};
        }
        case Family::lomax: {
            const double c = a_, s = b_;
            const double m1 = c > 1 ? s / (c - 1) : kInf;
            const double mu2 = c > 2 ? 2 * s * s / ((c - 1) * (c - 2)) : kInf;
            const double mu3 = c > 3 ? 6 * s * s * s / ((c - 1) * (c - 2) * (c - 3)) : kInf;
            const double s2 = c > 2 ? mu2 - m1 * m1 : kInf;
            const double g2 = c > 2 ? s2 / (m1 * m1) : kInf;
            return {m1, mu2, mu3, s2, g2};
        }
    }
    return {};
}

ReliabilityTags ServiceTimeModel::tags() const {
    const ReliabilityTags exponential_like{Tri::yes, Tri::yes, Tri::yes, Tri::yes};
    const ReliabilityTags ifr_like{Tri::yes, Tri::no, Tri::no, Tri::no};
    const ReliabilityTags dfr_like{Tri::no, Tri::yes, Tri::yes, Tri::yes};
    switch (family_) {
        case Family::deterministic:
            return ifr_like;
        case Family::exponential:
            return exponential_like;
        case Family::erlang:
            return a_ == 1.0 ? exponential_like : ifr_like;
        case Family::gamma:
        case Family::weibull:
            if (a_ == 1.0) return exponential_like;
            return a_ > 1.0 ? ifr_like : dfr_like;
        case Family::uniform:
            return ifr_like;
        case Family::lomax:
            return dfr_like;
        case Family::hyperexponential: {
            const bool degenerate = std::all_of(
                means_.begin(), means_.end(),
                [this](double m) { return m == means_.front(); });
            // A strict mixture has strictly increasing mean residual life, so
            // it cannot be NBUE; the degenerate all-equal case collapses to an
            // exponential and is left unknown rather than double-tagged.
            return {degenerate ? Tri::unknown : Tri::no, Tri::yes, Tri::yes, Tri::yes};
        }
    }
    return {};
}

double ServiceTimeModel::quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("quantile: u must be in [0,1)");
    switch (family_) {
        case Family::deterministic:
            return a_;
        case Family::exponential:
            return -a_ * std::log1p(-u);
        case Family::erlang:
        case Family::gamma: {
            if (u == 0.0) return 0.0;
            const double theta = b_ / a_;
            return theta * boost::math::gamma_p_inv(a_, u);
        }
        case Family::uniform:
            return a_ + (b_ - a_) * u;
        case Family::weibull:
            return b_ * std::pow(-std::log1p(-u), 1.0 / a_);
        case Family::lomax:
            return b_ * (std::pow(1.0 - u, -1.0 / a_) - 1.0);
        case Family::hyperexponential: {
            // Solve survival(t) = 1-u with a bracketed Newton iteration.
            const double target = 1.0 - u;
            if (u == 0.0) return 0.0;
            double lo = 0.0;
            double hi = *std::max_element(means_.begin(), means_.end());
            while (hyperexp_survival(hi) > target) hi *= 2.0;
            double t = std::min(hi, -std::log(target) * moments().alpha);
            for (int it = 0; it < 200; ++it) {
                const double f = hyperexp_survival(t) - target;
                if (f > 0) lo = t; else hi = t;
                double density = 0.0;
                for (std::size_t i = 0; i < probs_.size(); ++i) {
                    density += probs_[i] / means_[i] * std::exp(-t / means_[i]);
                }
                double next = t + f / density;  // survival' = -density
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::fabs(next - t) <= 1e-15 * (1.0 + t)) return next;
                t = next;
            }
            return t;
        }
    }
    return 0.0;
}

ServiceTimeModel ServiceTimeModel::scaled_to_mean(double new_mean) const {
    require(new_mean > 0 && std::isfinite(new_mean), "scaled_to_mean: mean must be positive");
    const double old_mean = moments().alpha;
    if (!std::isfinite(old_mean)) {
        throw InfiniteMomentError("scaled_to_mean: current mean is infinite");
    }
    const double f = new_mean / old_mean;
    switch (family_) {
        case Family::deterministic: return deterministic(new_mean);
        case Family::exponential: return exponential(new_mean);
        case Family::erlang: return erlang(static_cast<int>(a_), new_mean);
        case Family::gamma: return gamma(a_, new_mean);
        case Family::uniform: return uniform(a_ * f, b_ * f);
        case Family::weibull: return weibull(a_, b_ * f);
        case Family::lomax: return lomax(a_, b_ * f);
        case Family::hyperexponential: {
            std::vector<double> m = means_;
            for (double& x : m) x *= f;
            return hyperexponential(probs_, std::move(m));
        }
    }
    throw std::logic_error("unreachable");
}

std::string ServiceTimeModel::format() const {
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += '|';
            s += fmt_double(v[i]);
        }
        return s;
    };
    switch (family_) {
        case Family::deterministic: return "det:mean=" + fmt_double(a_);
        case Family::exponential: return "exp:mean=" + fmt_double(a_);
        case Family::erlang:
            return "erlang:k=" + std::to_string(static_cast<int>(a_)) +
                   ",mean=" + fmt_double(b_);
        case Family::gamma:
            return "gamma:shape=" + fmt_double(a_) + ",mean=" + fmt_double(b_);
        case Family::hyperexponential:
            return "hyperexp:p=" + list(probs_) + ",mean=" + list(means_);
        case Family::uniform:
            return "uniform:a=" + fmt_double(a_) + ",b=" + fmt_double(b_);
        case Family::weibull:
            return "weibull:shape=" + fmt_double(a_) + ",scale=" + fmt_double(b_);
        case Family::lomax:
            return "lomax:shape=" + fmt_double(a_) + ",scale=" + fmt_double(b_);
    }
    return {};
}

namespace {

struct ParamValue {
    std::vector<double> values;
    std::size_t position;
};

double parse_number(std::string_view tok, std::size_t at) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || tok.empty()) {
        throw ParseError("invalid number '" + std::string(tok) + "'", at);
    }
    return v;
}

}  // namespace

ServiceTimeModel ServiceTimeModel::parse(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("expected 'family:key=value[,...]'", 0);
    }
    const std::string fam(text.substr(0, colon));

    std::map<std::string, ParamValue, std::less<>> params;
    std::size_t pos = colon + 1;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view kv = text.substr(pos, comma - pos);
        const std::size_t eq = kv.find('=');
        if (kv.empty() || eq == std::string_view::npos || eq == 0) {
            throw ParseError("expected 'key=value'", pos);
        }
        const std::string key(kv.substr(0, eq));
        if (params.count(key)) throw ParseError("duplicate parameter '" + key + "'", pos);
        ParamValue pv;
        pv.position = pos;
        std::size_t vstart = eq + 1;
        while (vstart <= kv.size()) {
            std::size_t bar = kv.find('|', vstart);
            if (bar == std::string_view::npos) bar = kv.size();
            pv.values.push_back(parse_number(kv.substr(vstart, bar - vstart), pos + vstart));
            vstart = bar + 1;
        }
        params.emplace(key, std::move(pv));
        pos = comma + 1;
    }

    auto take_scalar = [&](const char* key) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw ParseError(std::string("missing parameter '") + key + "' for family '" + fam + "'",
                             text.size());
        }
        if (it->second.values.size() != 1) {
            throw ParseError(std::string("expected a single value for '") + key + "'",
                             it->second.position);
        }
        const double v = it->second.values.front();
        params.erase(it);
        return v;
    };
    auto take_list = [&](const char* key) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw ParseError(std::string("missing parameter '") + key + "' for family '" + fam + "'",
                             text.size());
        }
        ParamValue pv = std::move(it->second);
        params.erase(it);
        return pv;
    };
    auto finish = [&](ServiceTimeModel m) {
        if (!params.empty()) {
            const auto& extra = *params.begin();
            throw ParseError("unexpected parameter '" + extra.first + "' for family '" + fam + "'",
                             extra.second.position);
        }
        return m;
    };
    auto build = [&](auto&& ctor, std::size_t blame_pos) {
        try {
            return ctor();
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), blame_pos);
        }
    };

    const std::size_t body = colon + 1;
    if (fam == "det" || fam == "deterministic") {
        const double m = take_scalar("mean");
        return finish(build([&] { return deterministic(m); }, body));
    }
    if (fam == "exp" || fam == "exponential") {
        const double m = take_scalar("mean");
        return finish(build([&] { return exponential(m); }, body));
    }
    if (fam == "erlang") {
        const double k = take_scalar("k");
        const double m = take_scalar("mean");
        if (k != std::floor(k) || k < 1) {
            throw ParseError("erlang: k must be a positive integer", body);
        }
        return finish(build([&] { return erlang(static_cast<int>(k), m); }, body));
    }
    if (fam == "gamma") {
        const double k = take_scalar("shape");
        const double m = take_scalar("mean");
        return finish(build([&] { return gamma(k, m); }, body));
    }
    if (fam == "hyperexp" || fam == "hyperexponential") {
        ParamValue p = take_list("p");
        ParamValue m = take_list("mean");
        if (p.values.size() != m.values.size()) {
            throw ParseError("hyperexp: p and mean lists must have equal length", m.position);
        }
        return finish(build([&] { return hyperexponential(p.values, m.values); }, p.position));
    }
    if (fam == "uniform") {
        const double a = take_scalar("a");
        const double b = take_scalar("b");
        return finish(build([&] { return uniform(a, b); }, body));
    }
    if (fam == "weibull") {
        const double k = take_scalar("shape");
        const bool has_scale = params.count("scale") > 0;
        const bool has_mean = params.count("mean") > 0;
        if (has_scale == has_mean) {
            throw ParseError("weibull: give exactly one of 'scale' or 'mean'", body);
        }
        const double v = take_scalar(has_scale ? "scale" : "mean");
        return finish(build(
            [&] { return has_scale ? weibull(k, v) : weibull_with_mean(k, v); }, body));
    }
    if (fam == "lomax") {
        const double c = take_scalar("shape");
        const double s = take_scalar("scale");
        return finish(build([&] { return lomax(c, s); }, body));
    }
    throw ParseError("unknown family '" + fam + "'", 0);
}

}  // namespace busyvar
