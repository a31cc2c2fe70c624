#include "contactlab/estimate.hpp"

#include <cmath>

#include "contactlab/errors.hpp"

namespace contactlab {

EstimateWithError mean_with_se(const std::vector<double>& xs) {
  EstimateWithError e;
  e.n = xs.size();
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.value = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) {
    double d = x - e.value;
    ss += d * d;
  }
  double var = ss / static_cast<double>(xs.size() - 1);
  e.se = std::sqrt(var / static_cast<double>(xs.size()));
  return e;
}

EstimateWithError binomial_estimate(std::size_t hits, std::size_t n) {
  EstimateWithError e;
  e.n = n;
  if (n == 0) return e;
  double p = static_cast<double>(hits) / static_cast<double>(n);
  e.value = p;
  e.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
    throw DataError("weighted_line_fit needs at least two matched points");
  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = sigma[i] > 0 ? sigma[i] : 1e-12;
    double w = 1.0 / (s * s);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
  }
  double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = sigma[i] > 0 ? sigma[i] : 1e-12;
    double w = 1.0 / (s * s);
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0)) throw DataError("weighted_line_fit: degenerate abscissae");
  LineFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_se = std::sqrt(1.0 / sxx);
  fit.intercept_se = std::sqrt(1.0 / sw + xbar * xbar / sxx);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = sigma[i] > 0 ? sigma[i] : 1e-12;
    double r = (y[i] - fit.intercept - fit.slope * x[i]) / s;
    fit.chi2 += r * r;
  }
  return fit;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

}  // namespace contactlab
