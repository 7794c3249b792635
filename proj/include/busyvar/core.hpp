#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "busyvar/dist.hpp"
#include "busyvar/numerics.hpp"

namespace busyvar {

// Beyond this load the squared exponential e^{2 rho} leaves double range
// soon after; operations fail fast with std::range_error instead of
// returning infinities.
inline constexpr double kMaxRho = 300.0;

struct QueueInput {
    QueueInput(double lambda_in, ServiceTimeModel model_in);

    double lambda;
    ServiceTimeModel model;
    double rho;  // lambda * mean service time
};

enum class Method { integral, series, mm_exact, md_exact };
std::string_view method_name(Method m);

enum class SeriesVariant { corrected, as_printed };

struct VarianceResult {
    double value = 0.0;  // +infinity when the second service moment is infinite
    Method method = Method::integral;
    double err_est = 0.0;
    std::int64_t terms_used = 0;   // series diagnostics
    std::int64_t evaluations = 0;  // quadrature diagnostics

    bool is_infinite() const { return value == std::numeric_limits<double>::infinity(); }
};

double traffic_intensity(const QueueInput& q);

// (e^rho - 1)/lambda.
double mean_busy_period(const QueueInput& q);

// I(q) = int_0^inf (e^{lambda h(t)} - 1) dt with h the integrated service
// tail; the common kernel of the variance and the coefficient-of-variation
// routes.
QuadResult busy_period_integral(const QueueInput& q, double tol = 1e-10);

// Busy-period variance by direct quadrature:
//   (2 e^rho / lambda) * I(q) - ((e^rho - 1)/lambda)^2.
// Returns an infinite result immediately when mu2 is infinite.
VarianceResult variance_integral(const QueueInput& q, double tol = 1e-10);

// Normalized integral of the (n+1)-th power of the integrated tail:
//   b_n = 2 (n+2) int_0^inf h(v)^{n+1} dv / (alpha^{n+2} (1 + gamma_s^2)),
// bracketed by 2/(1+gamma_s^2) and 2. Closed forms: exponential
// (n+2)/(n+1), deterministic exactly 2; quadrature otherwise.
double b_coefficient(const ServiceTimeModel& model, int n, double tol = 1e-10);

// Busy-period variance via the b_n series
//   (e^{2rho} - 2 rho e^rho - 1)/lambda^2 + e^rho sigma_s^2
//     + (e^rho/lambda^2) F sum_{n>=3} (rho^n/n!) (b_{n-2} - 2/(1+gamma_s^2)).
// The corrected variant carries F = 1 + gamma_s^2, which is what makes the
// series agree with the direct integral; as_printed (F = 1) reproduces the
// historically published form and is exposed for comparison only.
VarianceResult variance_series(const QueueInput& q, double tol = 1e-12,
                               std::int64_t max_terms = 500,
                               SeriesVariant variant = SeriesVariant::corrected);

// Exact exponential-service variance:
//   {2 e^rho (1 + rho sum_{n>=1} rho^n/(n n!)) - e^{2rho} - 1}/lambda^2.
VarianceResult variance_mm_exact(double lambda, double rho, double tol = 1e-12);

// Exact constant-service variance: (e^{2rho} - 2 rho e^rho - 1)/lambda^2.
VarianceResult variance_md_exact(double lambda, double rho);

}  // namespace busyvar
