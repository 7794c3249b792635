#include "busyvar/core.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "busyvar/errors.hpp"

namespace busyvar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rho(double rho) {
    if (!(rho >= 0) || !std::isfinite(rho)) {
        throw std::invalid_argument("traffic intensity must be finite and non-negative");
    }
    if (rho > kMaxRho) {
        throw std::range_error("traffic intensity exceeds the overflow guard (rho <= 300)");
    }
}

// e^{2rho} - 2 rho e^rho - 1 evaluated as expm1(2rho) - 2rho - 2rho*expm1(rho)
// to keep the small-rho cancellation mild.
double md_core(double rho) {
    return std::expm1(2 * rho) - 2 * rho - 2 * rho * std::expm1(rho);
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::integral: return "integral";
        case Method::series: return "series";
        case Method::mm_exact: return "mm_exact";
        case Method::md_exact: return "md_exact";
    }
    return "?";
}

QueueInput::QueueInput(double lambda_in, ServiceTimeModel model_in)
    : lambda(lambda_in), model(std::move(model_in)), rho(0.0) {
    if (!(lambda > 0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("arrival rate lambda must be positive and finite");
    }
    const double alpha = model.moments().alpha;
    if (!std::isfinite(alpha)) {
        throw InfiniteMomentError("queue input requires a finite mean service time");
    }
    rho = lambda * alpha;
}

double traffic_intensity(const QueueInput& q) { return q.rho; }

double mean_busy_period(const QueueInput& q) {
    check_rho(q.rho);
    return std::expm1(q.rho) / q.lambda;
}

QuadResult busy_period_integral(const QueueInput& q, double tol) {
    check_rho(q.rho);
    const double alpha = q.model.moments().alpha;
    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-14 * alpha;
    opt.scale = alpha;
    const double lambda = q.lambda;
    const ServiceTimeModel& model = q.model;
    return integrate_semi_infinite(
        [lambda, &model](double t) { return std::expm1(lambda * model.integrated_tail(t)); },
        opt);
}

VarianceResult variance_integral(const QueueInput& q, double tol) {
    check_rho(q.rho);
    if (!std::isfinite(q.model.moments().mu2)) {
        return {kInf, Method::integral, 0.0, 0, 0};
    }
    const QuadResult I = busy_period_integral(q, tol);
    const double factor = 2.0 * std::exp(q.rho) / q.lambda;
    const double mean = std::expm1(q.rho) / q.lambda;
    return {factor * I.value - mean * mean, Method::integral,
            factor * I.abs_err_est, 0, I.evaluations};
}

namespace {

struct BWithError {
    double value;
    double err;
};

BWithError b_coefficient_impl(const ServiceTimeModel& model, int n, double tol) {
    if (n < 0) throw std::invalid_argument("b_coefficient: n must be >= 0");
    const MomentSet m = model.moments();
    if (!std::isfinite(m.mu2)) {
        throw InfiniteMomentError("b_coefficient requires a finite second moment");
    }
    switch (model.family()) {
        case Family::exponential:
            return {(n + 2.0) / (n + 1.0), 0.0};
        case Family::deterministic:
            return {2.0, 0.0};
        default:
            break;
    }
    // 2 (n+2)/(alpha (1+g2)) * int_0^inf (h(v)/alpha)^{n+1} dv, with the
    // integrand normalized so large n cannot overflow.
    const double alpha = m.alpha;
    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-14 * alpha;
    opt.scale = alpha / (n + 1.0);
    const QuadResult J = integrate_semi_infinite(
        [&model, alpha, n](double v) {
            return std::pow(model.integrated_tail(v) / alpha, n + 1);
        },
        opt);
    const double c = 2.0 * (n + 2.0) / (alpha * (1.0 + m.gamma_s2));
    return {c * J.value, c * J.abs_err_est};
}

}  // namespace

double b_coefficient(const ServiceTimeModel& model, int n, double tol) {
    return b_coefficient_impl(model, n, tol).value;
}

VarianceResult variance_series(const QueueInput& q, double tol,
                               std::int64_t max_terms, SeriesVariant variant) {
    check_rho(q.rho);
    const MomentSet m = q.model.moments();
    if (!std::isfinite(m.mu2)) {
        return {kInf, Method::series, 0.0, 0, 0};
    }
    const double rho = q.rho;
    const double lambda = q.lambda;
    const double g2 = m.gamma_s2;
    const double c0 = 2.0 / (1.0 + g2);
    const double factor =
        (variant == SeriesVariant::corrected ? 1.0 + g2 : 1.0) * std::exp(rho) /
        (lambda * lambda);

    std::vector<BWithError> bcache;
    auto b_at = [&](int idx) -> const BWithError& {
        while (static_cast<int>(bcache.size()) <= idx) {
            bcache.push_back(
                b_coefficient_impl(q.model, static_cast<int>(bcache.size()), tol));
        }
        return bcache[static_cast<std::size_t>(idx)];
    };

    // term(j) covers series index n = j + 2 so the sum starts at n = 3.
    double pow_term = rho * rho / 2.0;  // rho^n/n! at n = 2
    double b_err_acc = 0.0;
    const SeriesResult s = sum_series(
        [&](std::int64_t j) {
            const std::int64_t n = j + 2;
            pow_term *= rho / static_cast<double>(n);
            const BWithError& b = b_at(static_cast<int>(n - 2));
            b_err_acc += pow_term * b.err;
            return pow_term * (b.value - c0);
        },
        tol, max_terms);

    const double base = md_core(rho) / (lambda * lambda);
    const double value = base + std::exp(rho) * m.sigma2 + factor * s.value;
    const double err = factor * (s.truncation_bound + b_err_acc);
    return {value, Method::series, err, s.terms_used, 0};
}

VarianceResult variance_mm_exact(double lambda, double rho, double tol) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    check_rho(rho);
    if (rho == 0.0) return {0.0, Method::mm_exact, 0.0, 0, 0};
    double pow_term = 1.0;  // rho^n/n!
    const SeriesResult s = sum_series(
        [&](std::int64_t n) {
            pow_term *= rho / static_cast<double>(n);
            return pow_term / static_cast<double>(n);
        },
        tol, 2000);
    const double e = std::exp(rho);
    const double value =
        (2.0 * e * (1.0 + rho * s.value) - e * e - 1.0) / (lambda * lambda);
    const double err = 2.0 * e * rho * s.truncation_bound / (lambda * lambda);
    return {value, Method::mm_exact, err, s.terms_used, 0};
}

VarianceResult variance_md_exact(double lambda, double rho) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    check_rho(rho);
    return {md_core(rho) / (lambda * lambda), Method::md_exact, 0.0, 0, 0};
}

}  // namespace busyvar
