#include "busyvar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "busyvar/errors.hpp"

namespace busyvar {

namespace {

// Kronrod-15 abscissae on [-1,1] (positive half) and weights, with the
// embedded Gauss-7 weights on the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double err;
};

struct SegmentWorse {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a < y.a;  // deterministic tie break
    }
};

// One Gauss-Kronrod 7/15 application on [a,b]; QUADPACK-style error estimate.
Segment gk15(const std::function<double(double)>& f, double a, double b,
             std::int64_t& evals, double& best_total) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    auto eval = [&](double x) {
        double v = f(x);
        ++evals;
        if (!std::isfinite(v)) {
            throw NumericError(NumericError::Kind::integrand_invalid,
                               "integrand returned a non-finite value", best_total);
        }
        return v;
    };

    double fv1[8], fv2[8];
    const double fc = eval(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        fv1[j] = eval(centr - absc);
        fv2[j] = eval(centr + absc);
        const double fsum = fv1[j] + fv2[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }
    resasc *= std::fabs(hlgth);
    resabs *= std::fabs(hlgth);

    double err = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    err = std::max(err, resabs * 50.0 * eps);

    return Segment{a, b, resk * hlgth, err};
}

}  // namespace

QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadOptions& opt) {
    const double c = opt.scale > 0.0 ? opt.scale : 1.0;
    // g(u) du over [0,1) with t = c*u/(1-u), dt = c/(1-u)^2 du.
    auto g = [&f, c](double u) {
        const double om = 1.0 - u;
        const double t = c * u / om;
        return f(t) * c / (om * om);
    };

    std::int64_t evals = 0;
    double best_total = 0.0;

    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    double total_value = 0.0;
    double total_err = 0.0;
    constexpr int kInitial = 8;
    for (int i = 0; i < kInitial; ++i) {
        Segment s = gk15(g, i / double(kInitial), (i + 1) / double(kInitial), evals, best_total);
        total_value += s.value;
        total_err += s.err;
        heap.push(s);
    }

    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::fabs(total_value)); };

    while (total_err > tolerance()) {
        if (evals + 30 > opt.max_evals || heap.empty()) {
            throw NumericError(NumericError::Kind::budget_exhausted,
                               "quadrature did not converge within the evaluation budget",
                               total_value);
        }
        Segment worst = heap.top();
        heap.pop();
        total_value -= worst.value;
        total_err -= worst.err;
        best_total = total_value;
        const double mid = 0.5 * (worst.a + worst.b);
        for (Segment s : {gk15(g, worst.a, mid, evals, best_total),
                          gk15(g, mid, worst.b, evals, best_total)}) {
            total_value += s.value;
            total_err += s.err;
            heap.push(s);
        }
        // Interval too narrow to split further: accept what we have.
        if (mid <= worst.a || mid >= worst.b) break;
    }

    // Recompute the totals in interval order with compensated summation so a
    // repeated call is bit-identical and the estimate is not polluted by the
    // incremental add/subtract traffic above.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Segment& s : segs) {
        const double y = s.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += s.err;
    }
    return QuadResult{sum, err, evals};
}

SeriesResult sum_series(const std::function<double(std::int64_t)>& term,
                        double tol, std::int64_t max_terms) {
    double sum = 0.0, comp = 0.0;
    double prev = 0.0;
    for (std::int64_t n = 1; n <= max_terms; ++n) {
        const double t = term(n);
        if (!std::isfinite(t)) {
            throw NumericError(NumericError::Kind::integrand_invalid,
                               "series term is not finite", sum);
        }
        const double y = t - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;

        const double at = std::fabs(t);
        const double threshold = tol * std::fabs(sum);
        if (n >= 2) {
            if (at == 0.0 && std::fabs(prev) == 0.0) {
                return SeriesResult{sum, n, true, 0.0};
            }
            if (std::fabs(prev) > 0.0 && at < std::fabs(prev)) {
                const double r = at / std::fabs(prev);
                const double tail_bound = at * r / (1.0 - r);
                if (at <= threshold && tail_bound <= threshold) {
                    return SeriesResult{sum, n, true, tail_bound};
                }
            }
        }
        prev = t;
    }
    throw NumericError(NumericError::Kind::series_diverged,
                       "series did not converge within the term budget", sum);
}

}  // namespace busyvar
