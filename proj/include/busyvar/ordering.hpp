#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "busyvar/core.hpp"

namespace busyvar {

enum class OrderOutcome { holds, fails, inconclusive };
std::string_view order_outcome_name(OrderOutcome o);

struct OrderVerdict {
    OrderOutcome outcome = OrderOutcome::inconclusive;
    std::optional<double> witness_t;  // set when dominance fails
    double gap = 0.0;                 // max over t of (tail1 - tail2)
    bool mean_check = false;
    double mean1 = 0.0;
    double mean2 = 0.0;
};

struct OrderOptions {
    double t_max_factor = 40.0;
    int n_grid = 512;
    double tol_factor = 1e-9;  // tolerance = tol_factor * max(mean1, mean2)
};

// Variability order m1 <=_V m2: equal means plus pointwise dominance of the
// integrated tails. Checked on a geometric grid with one local refinement
// pass around the tightest point; a mean mismatch yields "inconclusive"
// because equal means are a precondition of the order, not a dominance
// failure.
OrderVerdict check_variability_order(const ServiceTimeModel& m1,
                                     const ServiceTimeModel& m2,
                                     const OrderOptions& opt = {});

struct VarianceConsequence {
    double var1 = 0.0;
    double var2 = 0.0;
    double margin = 0.0;   // var2 - var1
    bool violation = false;  // would indicate a numerics bug, not a math failure
};

// The variance ordering implied by the variability order; requires
// check_variability_order(m1, m2) to hold.
VarianceConsequence variance_consequence(const ServiceTimeModel& m1,
                                         const ServiceTimeModel& m2,
                                         double lambda, double tol = 1e-10);

struct EmpiricalOrderOptions {
    int n_grid = 256;
    double alpha_level = 0.01;
};

// Statistical version of the order check on two busy-period sample sets
// (sizes >= 1e4): a two-sample mean test plus pointwise comparison of the
// empirical integrated tails with a Bonferroni-adjusted significance level.
// "holds" means no statistically significant violation was found - evidence,
// not proof.
OrderVerdict empirical_busy_order(std::span<const double> samples1,
                                  std::span<const double> samples2,
                                  const EmpiricalOrderOptions& opt = {});

}  // namespace busyvar
