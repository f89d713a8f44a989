#pragma once

#include "twogroup/interval.hpp"
#include "twogroup/sample.hpp"

namespace twogroup {

/// Difference of sample means with its Welch t-interval.
struct WelchResult {
  double delta_hat = 0.0;  // mean(y1) - mean(y0)
  double std_err = 0.0;
  double dof = 0.0;        // Welch-Satterthwaite effective degrees of freedom
  ConfidenceInterval interval;
  bool significant = false;
};

double student_t_pdf(double x, double dof);
double student_t_cdf(double x, double dof);

/// Inverse Student-t CDF, computed by bisection-safeguarded Newton
/// refinement of the incomplete-beta CDF; absolute error below 1e-8.
double t_quantile(double p, double dof);

/// Classic unequal-variance t-interval on the difference of means.
WelchResult welch_infer(const TwoGroupSample& sample, double alpha);

}  // namespace twogroup
