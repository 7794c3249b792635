#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "busyvar/core.hpp"

namespace busyvar {

enum class BoundVariant {
    general_1_3,
    improved_1_7_as_printed,
    improved_1_7_corrected,
    dfr_1_10,
    imrl_1_11
};
std::string_view bound_variant_name(BoundVariant v);

struct BoundsReport {
    double lower = 0.0;
    std::optional<double> upper;
    BoundVariant variant = BoundVariant::general_1_3;
    // Inputs echoed for reporting.
    double lambda = 0.0;
    double rho = 0.0;
    std::optional<double> gamma_s2;
    std::optional<int> truncation_m;
};

// Two-sided bound depending only on (lambda, rho, gamma_s^2):
//   lower = max(e^{2rho} + e^rho rho^2 g2 - 2 rho e^rho - 1, 0)/lambda^2
//   upper = {2 e^rho (g2+1)(e^rho - 1 - rho) - (e^rho - 1)^2}/lambda^2.
// Coincident at g2 = 0, where both equal the constant-service variance.
BoundsReport general_bounds(double lambda, double rho, double gamma_s2);

enum class Improved17Variant { as_printed, corrected };

// Truncated-series upper bound for exponential service:
//   first + e^rho alpha^2
//     + (e^rho/lambda^2) F [sum_{n=3}^{M} rho^n/(n!(n-1))
//                            + (1/M) sum_{n>M} rho^n/n!].
// F = 1 (as_printed) reproduces the historically published table; only
// F = 2 (corrected) is a certified upper bound of variance_mm_exact.
BoundsReport improved_upper_mm(double lambda, double rho, int truncation_m,
                               Improved17Variant variant, double tol = 1e-12);

// Lower bound for decreasing-failure-rate service, parameterized by the
// squared service coefficient of variation; equals variance_mm_exact at
// gamma_s^2 = 1.
BoundsReport dfr_lower(double lambda, double rho, double gamma_s2,
                       double tol = 1e-12);

// Lower bound for increasing-mean-residual-life service, driven by the raw
// moments (alpha, mu2, mu3); equals variance_mm_exact for exponential input.
BoundsReport imrl_lower(double lambda, double alpha, double mu2, double mu3,
                        double tol = 1e-12);

enum class ReliabilityClass { nbue, nwue };

// The variance ordering implied by an NBUE/NWUE service-class claim against
// the exponential reference at the same load. Returned as a statement, not
// asserted: the library cannot verify a user-supplied class tag.
struct ClassComparison {
    ReliabilityClass tag;
    std::string relation;  // "<=" for nbue, ">=" for nwue
    double mm_reference;   // exact exponential-service variance
};
ClassComparison class_comparison(ReliabilityClass tag, double lambda, double rho);

struct Table1Row {
    double rho;
    double upper_1_3;
    double upper_1_7_printed;
    double lower_1_3;
    double upper_1_7_corrected;
    double exact_1_4;
};

inline constexpr double kTable1DefaultRho[] = {0.5, 1.0, 10.0, 20.0, 50.0, 100.0};

// Bound table for exponential service at unit squared coefficient of
// variation; empty rho_list selects the default loads above.
std::vector<Table1Row> table1(double lambda = 1.0,
                              std::span<const double> rho_list = {},
                              int truncation_m = 14);

}  // namespace busyvar
