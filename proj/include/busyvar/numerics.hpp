#pragma once

#include <cstdint>
#include <functional>

namespace busyvar {

struct QuadResult {
    double value = 0.0;
    double abs_err_est = 0.0;
    std::int64_t evaluations = 0;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    // Scale of the rational map t = scale*u/(1-u) that folds [0,inf) onto
    // [0,1); pick it near the decay scale of the integrand.
    double scale = 1.0;
    std::int64_t max_evals = 2'000'000;
};

// Integral of f over [0, inf). f must be finite on the domain and decay fast
// enough to be integrable. The half line is folded onto [0,1) by the rational
// substitution and refined adaptively with an embedded Gauss-Kronrod 7/15
// pair; abs_err_est is the accumulated Kronrod error estimate.
//
// Throws NumericError(budget_exhausted) when max_evals is reached before the
// tolerance is met, and NumericError(integrand_invalid) if f produces a
// non-finite value. Both carry the best estimate so far.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadOptions& opt = {});

struct SeriesResult {
    double value = 0.0;
    std::int64_t terms_used = 0;
    bool converged = false;
    double truncation_bound = 0.0;
};

// Sum of term(1) + term(2) + ...; term is invoked with n = 1, 2, ... in
// order. Terms must be eventually positive and decreasing with ratio < 1.
// Stops once the current term and the geometric tail bound term*r/(1-r)
// (r estimated from consecutive terms) both fall below tol*|partial sum|.
//
// Throws NumericError(series_diverged) carrying the partial sum when
// max_terms is exceeded.
SeriesResult sum_series(const std::function<double(std::int64_t)>& term,
                        double tol = 1e-12, std::int64_t max_terms = 500);

}  // namespace busyvar
