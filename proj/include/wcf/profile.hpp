#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace wcf {

/// Schmidt weights `a` and matching E0 eigenvalues `b` of an aligned
/// protocol, i.e. the diagonals of rho and E0 in their common eigenbasis.
class DiagonalProfile {
 public:
  /// Throws OutOfRange unless sizes match, sum(a) = 1 within 1e-9, a >= 0 and
  /// b in [0, 1] within 1e-9. Entries within tolerance are clamped.
  static DiagonalProfile make(std::vector<double> a, std::vector<double> b);

  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  std::size_t size() const { return a_.size(); }

  /// sum a_i b_i, the honest probability of outcome 0.
  double p0() const;

 private:
  DiagonalProfile(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {}

  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace wcf
