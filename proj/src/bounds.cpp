#include "busyvar/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "busyvar/errors.hpp"

namespace busyvar {

namespace {

void check_rho(double rho) {
    if (!(rho >= 0) || !std::isfinite(rho)) {
        throw std::invalid_argument("traffic intensity must be finite and non-negative");
    }
    if (rho > kMaxRho) {
        throw std::range_error("traffic intensity exceeds the overflow guard (rho <= 300)");
    }
}

double md_core(double rho) {
    return std::expm1(2 * rho) - 2 * rho - 2 * rho * std::expm1(rho);
}

// sum_{n=M+1}^inf rho^n/n!, summed forward; exact to double precision and
// free of the e^rho - partial_sum cancellation.
double poisson_tail_sum(double rho, int M) {
    double term = 1.0;
    for (int i = 1; i <= M + 1; ++i) term *= rho / i;
    double sum = 0.0;
    for (int n = M + 1; n < M + 100000; ++n) {
        sum += term;
        term *= rho / (n + 1);
        if (n > rho && term < sum * 1e-18) break;
    }
    return sum;
}

}  // namespace

std::string_view bound_variant_name(BoundVariant v) {
    switch (v) {
        case BoundVariant::general_1_3: return "general_1_3";
        case BoundVariant::improved_1_7_as_printed: return "improved_1_7_as_printed";
        case BoundVariant::improved_1_7_corrected: return "improved_1_7_corrected";
        case BoundVariant::dfr_1_10: return "dfr_1_10";
        case BoundVariant::imrl_1_11: return "imrl_1_11";
    }
    return "?";
}

BoundsReport general_bounds(double lambda, double rho, double gamma_s2) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (!(gamma_s2 >= 0)) throw std::invalid_argument("gamma_s2 must be >= 0");
    check_rho(rho);
    const double l2 = lambda * lambda;
    const double e = std::exp(rho);
    const double lower = std::max(md_core(rho) + e * rho * rho * gamma_s2, 0.0) / l2;
    const double upper =
        (2.0 * e * (gamma_s2 + 1.0) * (std::expm1(rho) - rho) -
         std::expm1(rho) * std::expm1(rho)) /
        l2;
    BoundsReport r;
    r.lower = lower;
    r.upper = upper;
    r.variant = BoundVariant::general_1_3;
    r.lambda = lambda;
    r.rho = rho;
    r.gamma_s2 = gamma_s2;
    return r;
}

BoundsReport improved_upper_mm(double lambda, double rho, int truncation_m,
                               Improved17Variant variant, double /*tol*/) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (truncation_m < 3) throw std::invalid_argument("truncation index M must be >= 3");
    check_rho(rho);
    const double l2 = lambda * lambda;
    const double alpha = rho / lambda;
    const double e = std::exp(rho);

    double partial = 0.0;
    double term = rho * rho / 2.0;  // rho^n/n! at n = 2
    for (int n = 3; n <= truncation_m; ++n) {
        term *= rho / n;
        partial += term / (n - 1);
    }
    const double bracket = partial + poisson_tail_sum(rho, truncation_m) / truncation_m;
    const double factor = variant == Improved17Variant::corrected ? 2.0 : 1.0;

    BoundsReport r;
    r.lower = 0.0;
    r.upper = md_core(rho) / l2 + e * alpha * alpha + (e / l2) * factor * bracket;
    r.variant = variant == Improved17Variant::corrected
                    ? BoundVariant::improved_1_7_corrected
                    : BoundVariant::improved_1_7_as_printed;
    r.lambda = lambda;
    r.rho = rho;
    r.gamma_s2 = 1.0;
    r.truncation_m = truncation_m;
    return r;
}

BoundsReport dfr_lower(double lambda, double rho, double gamma_s2, double tol) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (!(gamma_s2 >= 0)) throw std::invalid_argument("gamma_s2 must be >= 0");
    check_rho(rho);
    const double damping = std::exp(-0.5 * (gamma_s2 - 1.0));
    double pow_term = 1.0;  // rho^n/n! * damping^n
    const SeriesResult s = sum_series(
        [&](std::int64_t n) {
            pow_term *= rho * damping / static_cast<double>(n);
            return pow_term / static_cast<double>(n);
        },
        tol, 2000);
    const double e = std::exp(rho);
    const double l2 = lambda * lambda;
    // e^rho (2 - e^rho - e^{-rho}) == -(e^rho - 1)^2
    const double value =
        (2.0 * e * rho * s.value - std::expm1(rho) * std::expm1(rho)) / l2;
    BoundsReport r;
    r.lower = std::max(value, 0.0);  // a variance bound never needs to go below 0
    r.variant = BoundVariant::dfr_1_10;
    r.lambda = lambda;
    r.rho = rho;
    r.gamma_s2 = gamma_s2;
    return r;
}

BoundsReport imrl_lower(double lambda, double alpha, double mu2, double mu3,
                        double tol) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (!(alpha > 0) || !(mu2 > 0)) {
        throw std::invalid_argument("alpha and mu2 must be positive");
    }
    if (!std::isfinite(mu3)) {
        throw InfiniteMomentError("imrl_lower requires a finite third moment");
    }
    const double rho = lambda * alpha;
    check_rho(rho);
    const double exponent = 2.0 * alpha * mu3 / (3.0 * mu2 * mu2) - 1.0;
    const double damping = std::exp(-exponent);
    double pow_term = 1.0;
    const SeriesResult s = sum_series(
        [&](std::int64_t n) {
            pow_term *= rho * damping / static_cast<double>(n);
            return pow_term / static_cast<double>(n);
        },
        tol, 2000);
    const double e = std::exp(rho);
    const double value = (e / rho) * mu2 * s.value -
                         std::expm1(rho) * std::expm1(rho) / (lambda * lambda);
    BoundsReport r;
    r.lower = std::max(value, 0.0);
    r.variant = BoundVariant::imrl_1_11;
    r.lambda = lambda;
    r.rho = rho;
    r.gamma_s2 = mu2 / (alpha * alpha) - 1.0;
    return r;
}

ClassComparison class_comparison(ReliabilityClass tag, double lambda, double rho) {
    const double ref = variance_mm_exact(lambda, rho).value;
    return {tag, tag == ReliabilityClass::nbue ? "<=" : ">=", ref};
}

std::vector<Table1Row> table1(double lambda, std::span<const double> rho_list,
                              int truncation_m) {
    if (rho_list.empty()) rho_list = kTable1DefaultRho;
    std::vector<Table1Row> rows;
    rows.reserve(rho_list.size());
    for (double rho : rho_list) {
        const BoundsReport g = general_bounds(lambda, rho, 1.0);
        Table1Row row;
        row.rho = rho;
        row.upper_1_3 = *g.upper;
        row.lower_1_3 = g.lower;
        row.upper_1_7_printed =
            *improved_upper_mm(lambda, rho, truncation_m, Improved17Variant::as_printed)
                 .upper;
        row.upper_1_7_corrected =
            *improved_upper_mm(lambda, rho, truncation_m, Improved17Variant::corrected)
                 .upper;
        row.exact_1_4 = variance_mm_exact(lambda, rho).value;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace busyvar
