#pragma once

// Log-log least squares for scaling exponents.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace discrelab {

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;   // log-space
  double residual = 0.0;    // max |log residual|
  int points_used = 0;
};

inline ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& table) {
  if (table.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 points");
  for (const auto& [n, v] : table)
    if (!(n > 0.0 && v > 0.0))
      throw std::invalid_argument("fit_exponent: values must be positive");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = double(table.size());
  for (const auto& [x, y] : table) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  ScalingFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points_used = int(table.size());
  for (const auto& [x, y] : table) {
    double pred = fit.intercept + fit.slope * std::log(x);
    fit.residual = std::max(fit.residual, std::abs(std::log(y) - pred));
  }
  return fit;
}

}  // namespace discrelab
