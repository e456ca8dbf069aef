#include "wcf/sampling.hpp"

#include <algorithm>

namespace wcf::sampling {

ComplexVector random_unit_vector(Eigen::Index dim, Rng& rng) {
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = {re, im};
  }
  return v / v.norm();
}

ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  ComplexMatrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = {re, im};
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix random_effect(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix u = random_unitary(dim, rng);
  qla::RealVector b(dim);
  for (Eigen::Index i = 0; i < dim; ++i) b(i) = rng.uniform();
  return qla::hermitian_part(u * b.asDiagonal() * u.adjoint());
}

Protocol random_protocol(int dim_a, int dim_b, Rng& rng) {
  const ComplexVector psi = random_unit_vector(static_cast<Eigen::Index>(dim_a) * dim_b, rng);
  return Protocol::validate(dim_a, dim_b, psi, random_effect(dim_b, rng));
}

Protocol random_fair_protocol(int dim_a, int dim_b, Rng& rng) {
  const ComplexVector psi = random_unit_vector(static_cast<Eigen::Index>(dim_a) * dim_b, rng);
  const ComplexMatrix rho = qla::reduced_density(BipartiteState{dim_a, dim_b, psi}, qla::Side::A);
  const ComplexMatrix u = random_unitary(dim_b, rng);
  qla::RealVector b(dim_b);
  for (int i = 0; i < dim_b; ++i) b(i) = rng.uniform();

  double p0 = 0.0;
  for (int i = 0; i < dim_b; ++i) {
    const ComplexVector ui = u.col(i);
    p0 += b(i) * (ui.adjoint() * rho * ui)(0, 0).real();
  }
  if (p0 > 0.5) {
    b *= 0.5 / p0;
  } else {
    // rescale E1 = I - E0 instead so p1 becomes 1/2
    const double scale = 0.5 / (1.0 - p0);
    for (int i = 0; i < dim_b; ++i) b(i) = 1.0 - (1.0 - b(i)) * scale;
  }
  const ComplexMatrix e0 = qla::hermitian_part(u * b.asDiagonal() * u.adjoint());
  return Protocol::validate(dim_a, dim_b, psi, e0);
}

std::optional<DiagonalProfile> try_fair_profile(int dim, Rng& rng) {
  std::vector<double> a(static_cast<std::size_t>(dim));
  std::vector<double> b(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (double& x : a) total += (x = rng.exponential());
  for (double& x : a) x /= total;
  double honest0 = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) honest0 += a[i] * (b[i] = rng.uniform());
  if (honest0 <= 0.0) return std::nullopt;
  for (double& x : b) x *= 0.5 / honest0;
  if (*std::max_element(b.begin(), b.end()) > 1.0) return std::nullopt;
  return DiagonalProfile::make(std::move(a), std::move(b));
}

DiagonalProfile random_fair_profile(int dim, Rng& rng) {
  for (;;) {
    if (auto profile = try_fair_profile(dim, rng)) return *profile;
  }
}

}  // namespace wcf::sampling
