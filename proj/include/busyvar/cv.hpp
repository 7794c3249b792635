#pragma once

#include "busyvar/core.hpp"

namespace busyvar {

struct CvResult {
    double beta = 0.0;       // e^rho int_0^inf [e^{-lambda int_0^t surv} - e^{-rho}] dt
    double gamma_B2 = 0.0;   // squared busy-period coefficient of variation
    double err_est = 0.0;
    double exponentiality_gap = 0.0;  // |gamma_B2 - 1|
};

// The beta integral, computed in the stabilized equivalent form
// int_0^inf (e^{lambda h(t)} - 1) dt, which avoids subtracting two vanishing
// exponentials at large t.
double beta_integral(const QueueInput& q, double tol = 1e-10);

// gamma_B^2 = 2 e^rho lambda beta / (e^rho - 1)^2 - 1; infinite when the
// service second moment is infinite.
CvResult cv_squared(const QueueInput& q, double tol = 1e-10);

struct ExponentialityVerdict {
    double gamma_B2 = 0.0;
    double gap = 0.0;
    double threshold = 0.0;
    bool approximately_exponential = false;
};

// Reports how close the busy period is to unit squared coefficient of
// variation. The threshold is a reporting convention, not a statistical test.
ExponentialityVerdict exponentiality_diagnostic(const QueueInput& q,
                                                double tol = 1e-10,
                                                double threshold = 0.01);

}  // namespace busyvar
