#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "busyvar/rng.hpp"

namespace busyvar {

enum class Family {
    deterministic,
    exponential,
    erlang,
    gamma,
    hyperexponential,
    uniform,
    weibull,
    lomax
};

// Canonical DSL spelling ("det", "exp", "erlang", ...).
std::string_view family_name(Family f);

// Raw moments of the service time; entries are +infinity where the family
// dictates (heavy lomax tails).
struct MomentSet {
    double alpha;     // mean service time
    double mu2;       // second raw moment
    double mu3;       // third raw moment
    double sigma2;    // variance = mu2 - alpha^2
    double gamma_s2;  // squared coefficient of variation = sigma2/alpha^2
};

enum class Tri { yes, no, unknown };

// Reliability-class membership, set only where it is textbook-certain for
// the family and parameter range; everything else stays unknown.
struct ReliabilityTags {
    Tri nbue = Tri::unknown;
    Tri nwue = Tri::unknown;
    Tri dfr = Tri::unknown;
    Tri imrl = Tri::unknown;
};

// Parametric service-time distribution. Immutable after construction and
// safe to share across threads; sampler state is owned by the caller.
class ServiceTimeModel {
public:
    static ServiceTimeModel deterministic(double mean);
    static ServiceTimeModel exponential(double mean);
    static ServiceTimeModel erlang(int shape, double mean);
    static ServiceTimeModel gamma(double shape, double mean);
    static ServiceTimeModel hyperexponential(std::vector<double> probs,
                                             std::vector<double> means);
    static ServiceTimeModel uniform(double lo, double hi);
    static ServiceTimeModel weibull(double shape, double scale);
    static ServiceTimeModel weibull_with_mean(double shape, double mean);
    static ServiceTimeModel lomax(double shape, double scale);

    Family family() const noexcept { return family_; }

    // P(S > t); t >= 0 required.
    double survival(double t) const;

    // h(t) = int_t^inf survival(v) dv. Closed form where the family admits
    // one; adaptive quadrature fallback (weibull, gamma) with absolute error
    // below 1e-12 * mean. Throws InfiniteMomentError when the mean is
    // infinite (lomax shape <= 1).
    double integrated_tail(double t) const;

    // int_0^t survival(v) dv = mean - h(t).
    double partial_integrated_tail(double t) const;

    MomentSet moments() const;
    ReliabilityTags tags() const;

    // Inverse CDF at u in [0,1); strictly monotone families use the closed
    // form, erlang/gamma/hyperexponential invert numerically.
    double quantile(double u) const;

    // One service-time draw; consumes exactly one uniform for every family
    // so distinct families seeded alike walk the same underlying stream.
    double sample(Rng& rng) const { return quantile(rng.u01()); }

    // Same family and shape, rescaled to a new mean (requires a finite mean).
    ServiceTimeModel scaled_to_mean(double new_mean) const;

    // Canonical mini-DSL text; parse(format()) reproduces the model exactly.
    std::string format() const;

    // Parse the mini-DSL `family:key=value[,key=value...]`; list-valued
    // parameters use `|` separators. Throws ParseError with the offending
    // position.
    static ServiceTimeModel parse(std::string_view text);

    bool operator==(const ServiceTimeModel&) const = default;

private:
    ServiceTimeModel(Family f, double a, double b,
                     std::vector<double> probs = {}, std::vector<double> means = {})
        : family_(f), a_(a), b_(b), probs_(std::move(probs)), means_(std::move(means)) {}

    double hyperexp_survival(double t) const;

    Family family_;
    // Family-specific layout:
    //   deterministic: a = mean            exponential: a = mean
    //   erlang:        a = shape, b = mean gamma:       a = shape, b = mean
    //   uniform:       a = lo, b = hi      weibull:     a = shape, b = scale
    //   lomax:         a = shape, b = scale
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> probs_;  // hyperexponential branch probabilities
    std::vector<double> means_;  // hyperexponential branch means
};

}  // namespace busyvar
