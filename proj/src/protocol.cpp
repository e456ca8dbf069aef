#include "wcf/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wcf/error.hpp"

namespace wcf {

DiagonalProfile DiagonalProfile::make(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorKind::OutOfRange, "profile vectors must be non-empty and of equal length (a has " +
                                           std::to_string(a.size()) + ", b has " +
                                           std::to_string(b.size()) + ")");
  }
  constexpr double tol = 1e-9;
  const double total = std::accumulate(a.begin(), a.end(), 0.0);
  if (!(std::abs(total - 1.0) <= tol)) {
    throw Error(ErrorKind::OutOfRange, "weights a sum to " + std::to_string(total));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= -tol)) throw Error(ErrorKind::OutOfRange, "negative weight a[" + std::to_string(i) + "]");
    if (!(b[i] >= -tol && b[i] <= 1.0 + tol)) {
      throw Error(ErrorKind::OutOfRange, "b[" + std::to_string(i) + "] outside [0, 1]");
    }
    a[i] = std::max(a[i], 0.0);
    b[i] = std::clamp(b[i], 0.0, 1.0);
  }
  return DiagonalProfile(std::move(a), std::move(b));
}

double DiagonalProfile::p0() const {
  return std::inner_product(a_.begin(), a_.end(), b_.begin(), 0.0);
}

Protocol Protocol::validate(int dim_a, int dim_b, const ComplexVector& psi, const ComplexMatrix& e0,
                            double fairness_tolerance) {
  if (dim_a <= 0 || dim_b <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions must be positive");
  }
  if (e0.rows() != dim_b || e0.cols() != dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "E0 is " + std::to_string(e0.rows()) + "x" +
                                                  std::to_string(e0.cols()) + ", expected " +
                                                  std::to_string(dim_b) + "x" + std::to_string(dim_b));
  }
  BipartiteState state = BipartiteState::make(dim_a, dim_b, psi);
  state.amplitudes /= state.amplitudes.norm();

  if (!qla::is_hermitian(e0)) throw Error(ErrorKind::NotHermitian, "E0 is not Hermitian");
  const qla::Spectrum spectrum = qla::herm_eig(e0);
  const double lo = spectrum.eigenvalues.minCoeff();
  const double hi = spectrum.eigenvalues.maxCoeff();
  if (lo < -1e-8 || hi > 1.0 + 1e-8) {
    throw Error(ErrorKind::NotPOVM, "E0 eigenvalues span [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "], outside [0, 1]");
  }

  ComplexMatrix rho = qla::reduced_density(state, qla::Side::A);
  const double p0 = std::clamp((rho * e0).trace().real(), 0.0, 1.0);
  return Protocol(std::move(state), e0, std::move(rho), p0, fairness_tolerance);
}

Protocol Protocol::from_profile(const DiagonalProfile& profile, double fairness_tolerance) {
  const int k = static_cast<int>(profile.size());
  ComplexVector psi = ComplexVector::Zero(k * k);
  ComplexMatrix e0 = ComplexMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    psi(i * k + i) = std::sqrt(profile.a()[static_cast<std::size_t>(i)]);
    e0(i, i) = profile.b()[static_cast<std::size_t>(i)];
  }
  Protocol p = validate(k, k, psi, e0, fairness_tolerance);
  p.source_profile_ = profile;
  return p;
}

ComplexMatrix Protocol::effect(Outcome b) const {
  if (b == Outcome::Zero) return e0_;
  return ComplexMatrix::Identity(dim_b(), dim_b()) - e0_;
}

FairnessVerdict Protocol::fairness() const {
  return FairnessVerdict{p0_, std::abs(p0_ - 0.5) <= fairness_tolerance_};
}

ComplexMatrix sqrt_effect(const Protocol& p, Outcome b) {
  // POVM eigenvalues are only checked to 1e-8, looser than psd_sqrt's clip
  const qla::Spectrum s = qla::herm_eig(p.effect(b));
  qla::RealVector roots(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) roots(k) = std::sqrt(std::clamp(s.eigenvalues(k), 0.0, 1.0));
  return qla::hermitian_part(s.eigenvectors * roots.asDiagonal() * s.eigenvectors.adjoint());
}

double outcome_prob(const Protocol& p, Outcome b) { return b == Outcome::Zero ? p.p0() : p.p1(); }

BipartiteState post_measurement_state(const Protocol& p, Outcome b) {
  const double pb = outcome_prob(p, b);
  if (pb < kDegenerateOutcome) {
    throw Error(ErrorKind::DegenerateOutcome,
                "outcome " + std::to_string(index(b)) + " has probability " + std::to_string(pb));
  }
  ComplexVector v = qla::apply_on_b(sqrt_effect(p, b), p.psi().amplitudes, p.dim_a(), p.dim_b());
  v /= v.norm();
  return BipartiteState{p.dim_a(), p.dim_b(), std::move(v)};
}

ComplexMatrix reduced_state(const Protocol& p) { return p.rho(); }

}  // namespace wcf
