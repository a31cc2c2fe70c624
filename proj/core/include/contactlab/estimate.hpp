#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace contactlab {

struct EstimateWithError {
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

EstimateWithError mean_with_se(const std::vector<double>& xs);
EstimateWithError binomial_estimate(std::size_t hits, std::size_t n);

// y ~ intercept + slope * x with known per-point standard deviations
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double chi2 = 0.0;  // weighted residual sum, for goodness-of-fit scaling
  std::size_t n = 0;
};

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sigma);

// adaptive Simpson quadrature to the given absolute tolerance
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol);

}  // namespace contactlab
