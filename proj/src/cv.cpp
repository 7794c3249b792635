#include "busyvar/cv.hpp"

#include <cmath>
#include <limits>

namespace busyvar {

double beta_integral(const QueueInput& q, double tol) {
    return busy_period_integral(q, tol).value;
}

CvResult cv_squared(const QueueInput& q, double tol) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (!std::isfinite(q.model.moments().mu2)) {
        return {inf, inf, 0.0, inf};
    }
    const QuadResult I = busy_period_integral(q, tol);
    const double em1 = std::expm1(q.rho);
    const double scale = 2.0 * std::exp(q.rho) * q.lambda / (em1 * em1);
    const double g = scale * I.value - 1.0;
    return {I.value, g, scale * I.abs_err_est, std::fabs(g - 1.0)};
}

ExponentialityVerdict exponentiality_diagnostic(const QueueInput& q, double tol,
                                                double threshold) {
    const CvResult cv = cv_squared(q, tol);
    return {cv.gamma_B2, cv.exponentiality_gap, threshold,
            cv.exponentiality_gap < threshold};
}

}  // namespace busyvar
