#include "busyvar/ordering.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "busyvar/errors.hpp"

namespace busyvar {

namespace {

std::vector<double> geometric_grid(double t_max, int n) {
    const double t_min = t_max * 1e-6;
    std::vector<double> g(n);
    const double ratio = std::log(t_max / t_min);
    for (int j = 0; j < n; ++j) {
        g[j] = t_min * std::exp(ratio * j / double(n - 1));
    }
    return g;
}

// Local maximum of f over [lo, hi] by golden-section search.
template <class F>
std::pair<double, double> refine_max(F&& f, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + b); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace

std::string_view order_outcome_name(OrderOutcome o) {
    switch (o) {
        case OrderOutcome::holds: return "holds";
        case OrderOutcome::fails: return "fails";
        case OrderOutcome::inconclusive: return "inconclusive";
    }
    return "?";
}

OrderVerdict check_variability_order(const ServiceTimeModel& m1,
                                     const ServiceTimeModel& m2,
                                     const OrderOptions& opt) {
    const double a1 = m1.moments().alpha;
    const double a2 = m2.moments().alpha;
    if (!std::isfinite(a1) || !std::isfinite(a2)) {
        throw InfiniteMomentError("variability order requires finite means");
    }
    OrderVerdict v;
    v.mean1 = a1;
    v.mean2 = a2;
    const double a_max = std::max(a1, a2);
    const double tol = opt.tol_factor * a_max;
    v.mean_check = std::fabs(a1 - a2) <= tol;
    if (!v.mean_check) {
        v.outcome = OrderOutcome::inconclusive;
        return v;
    }

    auto diff = [&](double t) { return m1.integrated_tail(t) - m2.integrated_tail(t); };

    const std::vector<double> grid = geometric_grid(opt.t_max_factor * a_max, opt.n_grid);
    double worst = -std::numeric_limits<double>::infinity();
    int worst_idx = 0;
    for (int j = 0; j < static_cast<int>(grid.size()); ++j) {
        const double d = diff(grid[j]);
        if (d > worst) {
            worst = d;
            worst_idx = j;
        }
    }
    // One refinement pass around the tightest grid point: dominance failures
    // for these families are single-crossing, so a local search suffices.
    const double lo = grid[std::max(worst_idx - 1, 0)];
    const double hi = grid[std::min<int>(worst_idx + 1, grid.size() - 1)];
    const auto [t_star, d_star] = refine_max(diff, lo, hi);
    if (d_star > worst) {
        worst = d_star;
    }
    v.gap = worst;
    if (worst > tol) {
        v.outcome = OrderOutcome::fails;
        v.witness_t = d_star >= worst ? t_star : grid[worst_idx];
    } else {
        v.outcome = OrderOutcome::holds;
    }
    return v;
}

VarianceConsequence variance_consequence(const ServiceTimeModel& m1,
                                         const ServiceTimeModel& m2,
                                         double lambda, double tol) {
    const OrderVerdict order = check_variability_order(m1, m2);
    if (order.outcome != OrderOutcome::holds) {
        throw std::invalid_argument(
            "variance_consequence requires the variability order to hold");
    }
    const VarianceResult v1 = variance_integral(QueueInput(lambda, m1), tol);
    const VarianceResult v2 = variance_integral(QueueInput(lambda, m2), tol);
    VarianceConsequence out;
    out.var1 = v1.value;
    out.var2 = v2.value;
    out.margin = v2.value - v1.value;
    const double slack = 1e-8 * std::max(v1.value, v2.value) + v1.err_est + v2.err_est;
    out.violation = v1.value > v2.value + slack;
    return out;
}

OrderVerdict empirical_busy_order(std::span<const double> samples1,
                                  std::span<const double> samples2,
                                  const EmpiricalOrderOptions& opt) {
    constexpr std::size_t kMinSamples = 10'000;
    if (samples1.size() < kMinSamples || samples2.size() < kMinSamples) {
        throw std::invalid_argument("empirical_busy_order: need at least 1e4 samples per set");
    }

    struct TailStats {
        std::vector<double> sorted;
        std::vector<double> suffix_x;   // suffix sums of x
        std::vector<double> suffix_x2;  // suffix sums of x^2
        double mean = 0.0;
        double var = 0.0;

        explicit TailStats(std::span<const double> s)
            : sorted(s.begin(), s.end()) {
            std::sort(sorted.begin(), sorted.end());
            const std::size_t n = sorted.size();
            suffix_x.assign(n + 1, 0.0);
            suffix_x2.assign(n + 1, 0.0);
            for (std::size_t i = n; i-- > 0;) {
                suffix_x[i] = suffix_x[i + 1] + sorted[i];
                suffix_x2[i] = suffix_x2[i + 1] + sorted[i] * sorted[i];
            }
            mean = suffix_x[0] / double(n);
            double ss = 0.0;
            for (double x : sorted) ss += (x - mean) * (x - mean);
            var = ss / double(n - 1);
        }

        // Mean and variance of Y = max(X - t, 0).
        std::pair<double, double> excess(double t) const {
            const std::size_t n = sorted.size();
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
            const std::size_t i = std::size_t(it - sorted.begin());
            const double m = double(n - i);
            const double ey = (suffix_x[i] - m * t) / double(n);
            const double ey2 =
                (suffix_x2[i] - 2.0 * t * suffix_x[i] + m * t * t) / double(n);
            return {ey, std::max(ey2 - ey * ey, 0.0)};
        }
    };

    const TailStats s1(samples1), s2(samples2);
    const double n1 = double(samples1.size()), n2 = double(samples2.size());

    OrderVerdict v;
    v.mean1 = s1.mean;
    v.mean2 = s2.mean;

    // Welch two-sample test on the means.
    const double se2 = s1.var / n1 + s2.var / n2;
    const double se = std::sqrt(se2);
    const double df = se2 * se2 /
                      (s1.var * s1.var / (n1 * n1 * (n1 - 1)) +
                       s2.var * s2.var / (n2 * n2 * (n2 - 1)));
    boost::math::students_t_distribution<double> tdist(df);
    const double t_crit = boost::math::quantile(tdist, 1.0 - opt.alpha_level / 2.0);
    v.mean_check = std::fabs(s1.mean - s2.mean) <= t_crit * se;
    if (!v.mean_check) {
        v.outcome = OrderOutcome::inconclusive;
        return v;
    }

    // Pointwise one-sided comparison of the empirical integrated tails with a
    // Bonferroni correction across the grid.
    boost::math::normal_distribution<double> ndist;
    const double z_crit =
        boost::math::quantile(ndist, 1.0 - opt.alpha_level / opt.n_grid);
    const std::vector<double> grid =
        geometric_grid(40.0 * std::max(s1.mean, s2.mean), opt.n_grid);
    double worst_gap = -std::numeric_limits<double>::infinity();
    double worst_z = -std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    for (double t : grid) {
        const auto [h1, var1] = s1.excess(t);
        const auto [h2, var2] = s2.excess(t);
        const double d = h1 - h2;
        const double sd = std::sqrt(var1 / n1 + var2 / n2);
        worst_gap = std::max(worst_gap, d);
        if (sd > 0) {
            const double z = d / sd;
            if (z > worst_z) {
                worst_z = z;
                worst_t = t;
            }
        }
    }
    v.gap = worst_gap;
    if (worst_z > z_crit) {
        v.outcome = OrderOutcome::fails;
        v.witness_t = worst_t;
    } else {
        v.outcome = OrderOutcome::holds;
    }
    return v;
}

}  // namespace busyvar
