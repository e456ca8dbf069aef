#include "wcf/cheating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wcf/error.hpp"

namespace wcf {

double paper_pa(const Protocol& p) {
  return 2.0 * (p.rho() * p.e0() * p.e0()).trace().real();
}

double paper_pb(const Protocol& p) {
  // Tr sqrt(rho E0 rho) = ||sqrt(E0) rho||_1
  const double t = qla::trace_norm(sqrt_effect(p, Outcome::Zero) * p.rho());
  return 2.0 * t * t;
}

namespace {

Eigen::Index dominant_index(const ComplexVector& v) {
  const double largest = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) return i;
  }
  return 0;
}

}  // namespace

AlignedBasis aligned_basis(const ComplexMatrix& e0, const ComplexMatrix& rho) {
  const qla::Spectrum spectrum = qla::herm_eig(e0);
  const Eigen::Index n = e0.rows();
  ComplexMatrix vectors = spectrum.eigenvectors;

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && spectrum.eigenvalues(stop) - spectrum.eigenvalues(stop - 1) < qla::kTieGap) ++stop;
    const Eigen::Index width = stop - start;
    if (width > 1) {
      const ComplexMatrix block = vectors.middleCols(start, width);
      const ComplexMatrix compressed = qla::hermitian_part(block.adjoint() * rho * block);
      const ComplexMatrix rotated = block * qla::herm_eig(compressed).eigenvectors;
      vectors.middleCols(start, width) = rotated;
      for (Eigen::Index k = start; k < stop; ++k) qla::canonicalize_phase(vectors.col(k));
    }
    start = stop;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<Eigen::Index> dominant(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) dominant[static_cast<std::size_t>(k)] = dominant_index(vectors.col(k));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return dominant[static_cast<std::size_t>(x)] < dominant[static_cast<std::size_t>(y)];
  });

  AlignedBasis out{ComplexMatrix(n, n), qla::RealVector(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    out.e0_eigenvalues(k) = spectrum.eigenvalues(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Protocol align(const Protocol& p) {
  const AlignedBasis basis = aligned_basis(p.e0(), p.rho());
  const ComplexMatrix psi = p.psi().coefficients();
  const int d = p.dim_b();
  ComplexVector aligned = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const ComplexVector phi = basis.vectors.col(i);
    const double lambda = (psi * phi.conjugate()).norm();
    aligned.segment(static_cast<Eigen::Index>(i) * d, d) = lambda * phi;
  }
  return Protocol::validate(d, d, aligned, p.e0(), p.fairness_tolerance());
}

bool is_aligned(const Protocol& p) {
  const ComplexMatrix commutator = p.rho() * p.e0() - p.e0() * p.rho();
  return commutator.norm() <= kAlignedTolerance;
}

DiagonalProfile diagonal_profile(const Protocol& p) {
  if (!is_aligned(p)) {
    const double gap = (p.rho() * p.e0() - p.e0() * p.rho()).norm();
    throw Error(ErrorKind::NotAligned, "||[rho, E0]||_F = " + std::to_string(gap));
  }
  const AlignedBasis basis = aligned_basis(p.e0(), p.rho());
  const auto n = static_cast<std::size_t>(p.dim_b());
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const ComplexVector phi = basis.vectors.col(k);
    a[i] = (phi.adjoint() * p.rho() * phi)(0, 0).real();
    b[i] = basis.e0_eigenvalues(k);
  }
  return DiagonalProfile::make(std::move(a), std::move(b));
}

double holder_floor(const DiagonalProfile& profile) {
  const double honest0 = profile.p0();
  return 4.0 * honest0 * honest0 * honest0;
}

double profile_pa(const DiagonalProfile& profile) {
  double sum = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) sum += profile.a()[i] * profile.b()[i] * profile.b()[i];
  return 2.0 * sum;
}

double profile_pb(const DiagonalProfile& profile) {
  double sum = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) sum += profile.a()[i] * std::sqrt(profile.b()[i]);
  return 2.0 * sum * sum;
}

CheatValue preparer_max(const Protocol& p, Outcome w) {
  const double pw = outcome_prob(p, w);
  if (pw < kDegenerateOutcome) return {0.0, true};
  const ComplexMatrix effect = p.effect(w);
  return {(p.rho() * effect * effect).trace().real() / pw, false};
}

CheatValue receiver_max(const Protocol& p, Outcome w) {
  const double pw = outcome_prob(p, w);
  if (pw < kDegenerateOutcome) return {0.0, true};
  // Uhlmann: F(Tr_B psi, Tr_B psi_w) = max_U |<psi|(I (x) U)|psi_w>|^2 = ||Psi^dagger Psi_w||_1^2
  const ComplexMatrix overlap = p.psi().coefficients().adjoint() * post_measurement_state(p, w).coefficients();
  const double t = qla::trace_norm(overlap);
  return {t * t, false};
}

std::string_view to_string(FrontierFamily family) {
  return family == FrontierFamily::Paper ? "paper" : "operational";
}

FrontierFamily frontier_family_from_string(std::string_view name) {
  if (name == "paper") return FrontierFamily::Paper;
  if (name == "operational") return FrontierFamily::Operational;
  throw Error(ErrorKind::OutOfRange, "unknown frontier family '" + std::string(name) + "'");
}

Protocol frontier(double target, FrontierFamily family) {
  if (!(target >= 0.5 && target <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "frontier target " + std::to_string(target) + " outside [0.5, 1]");
  }
  if (family == FrontierFamily::Paper) {
    const double a0 = 1.0 / (2.0 * target);
    const double a1 = 1.0 - a0;
    // at c = 1/2 the second weight vanishes and E0 collapses to I/2
    const double b1 = a1 == 0.0 ? 0.5 : 0.0;
    return Protocol::from_profile(DiagonalProfile::make({a0, a1}, {target, b1}));
  }
  const double t = 1.0 - target;
  return Protocol::from_profile(
      DiagonalProfile::make({(0.5 - t) / (1.0 - t), 0.5 / (1.0 - t)}, {1.0, t}));
}

std::string_view to_string(BoundVerdict verdict) {
  switch (verdict) {
    case BoundVerdict::Holds: return "holds";
    case BoundVerdict::Violated: return "violated";
    case BoundVerdict::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

CheatReport analyze(const Protocol& p) {
  CheatReport r;
  r.p0 = p.p0();
  r.fair = p.fair();
  r.paper_pa = paper_pa(p);
  r.paper_pb = paper_pb(p);
  for (Outcome w : {Outcome::Zero, Outcome::One}) {
    r.op_preparer[static_cast<std::size_t>(index(w))] = preparer_max(p, w).probability;
    r.op_receiver[static_cast<std::size_t>(index(w))] = receiver_max(p, w).probability;
  }
  r.holder_floor = holder_floor(diagonal_profile(align(p)));
  r.product = r.paper_pa * r.paper_pb;
  if (!r.fair) {
    r.fair_bound_holds = BoundVerdict::NotApplicable;
  } else {
    r.fair_bound_holds = r.product >= 0.5 - kBoundSlack ? BoundVerdict::Holds : BoundVerdict::Violated;
  }
  return r;
}

nlohmann::json to_json(const CheatReport& report) {
  return nlohmann::json{
      {"schema", kCheatReportSchema},
      {"p0", report.p0},
      {"fair", report.fair},
      {"paper_pa", report.paper_pa},
      {"paper_pb", report.paper_pb},
      {"op_preparer_0", report.op_preparer[0]},
      {"op_preparer_1", report.op_preparer[1]},
      {"op_receiver_0", report.op_receiver[0]},
      {"op_receiver_1", report.op_receiver[1]},
      {"holder_floor", report.holder_floor},
      {"product", report.product},
      {"fair_bound_holds", to_string(report.fair_bound_holds)},
  };
}

}  // namespace wcf
