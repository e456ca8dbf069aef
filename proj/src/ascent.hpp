#pragma once

// Gradient ascent over objectives that are only ever evaluated; gradients
// come from finite differences.

#include <cmath>
#include <cstddef>
#include <vector>

#include "wcf/oracle.hpp"

namespace wcf::detail {

struct AscentOutcome {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

/// Central-difference gradient of problem.value at x.
template <class Problem>
std::vector<double> central_gradient(const Problem& problem, const std::vector<double>& x, double h) {
  std::vector<double> grad(x.size());
  std::vector<double> probe = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    probe[k] = x[k] + h;
    const double up = problem.value(probe);
    probe[k] = x[k] - h;
    const double down = problem.value(probe);
    probe[k] = x[k];
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

/// Problem needs:
///   double value(const std::vector<double>&) const;
///   std::vector<double> gradient(const std::vector<double>&, double h) const;
///   void accept(std::vector<double>& x);   // may re-center the chart
template <class Problem>
AscentOutcome ascend(Problem& problem, std::vector<double> x, const AscentOptions& options) {
  double f = problem.value(x);
  std::vector<double> history{f};
  double step = 1.0;
  int it = 0;
  for (; it < options.max_iterations && !x.empty(); ++it) {
    const std::vector<double> g = problem.gradient(x, options.fd_step);
    double g2 = 0.0;
    for (double gk : g) g2 += gk * gk;
    if (g2 < 1e-26) break;

    double alpha = std::min(step * 2.0, 1e4);
    std::vector<double> trial(x.size());
    bool accepted = false;
    while (alpha > 1e-14) {
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + alpha * g[k];
      const double ft = problem.value(trial);
      if (ft >= f + 1e-4 * alpha * g2) {
        f = ft;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    x = trial;
    problem.accept(x);
    step = alpha;

    history.push_back(f);
    const auto n = history.size();
    if (n > static_cast<std::size_t>(options.patience) &&
        f - history[n - 1 - static_cast<std::size_t>(options.patience)] < options.tolerance) {
      break;
    }
  }
  return AscentOutcome{std::move(x), f, it};
}

}  // namespace wcf::detail
