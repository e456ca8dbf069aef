#include "wcf/qla.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wcf/error.hpp"

namespace wcf::qla {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

std::vector<long long> rounded_components(const ComplexVector& v) {
  std::vector<long long> key;
  key.reserve(2 * static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    key.push_back(std::llround(v(i).real() * 1e9));
    key.push_back(std::llround(v(i).imag() * 1e9));
  }
  return key;
}

bool is_exactly_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

double clip_threshold(const ComplexMatrix& h) { return -kEigenClip * std::max(1.0, h.norm()); }

RealVector checked_psd_eigenvalues(const ComplexMatrix& h) {
  const Spectrum s = herm_eig(h);
  const double floor = clip_threshold(h);
  if (s.eigenvalues.size() > 0 && s.eigenvalues.minCoeff() < floor) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(s.eigenvalues.minCoeff()) +
                                       " below clip threshold " + std::to_string(floor));
  }
  return s.eigenvalues;
}

}  // namespace

BipartiteState BipartiteState::make(int dim_a, int dim_b, ComplexVector amplitudes) {
  if (dim_a <= 0 || dim_b <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions must be positive");
  }
  if (amplitudes.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw Error(ErrorKind::DimensionMismatch,
                "state has " + std::to_string(amplitudes.size()) + " amplitudes, expected " +
                    std::to_string(dim_a * dim_b));
  }
  const double norm = amplitudes.norm();
  if (!(std::abs(norm - 1.0) <= 1e-8)) {
    throw Error(ErrorKind::BadNorm, "state norm is " + std::to_string(norm));
  }
  return BipartiteState{dim_a, dim_b, std::move(amplitudes)};
}

ComplexMatrix BipartiteState::coefficients() const {
  ComplexMatrix psi(dim_a, dim_b);
  for (int i = 0; i < dim_a; ++i) {
    for (int j = 0; j < dim_b; ++j) psi(i, j) = at(i, j);
  }
  return psi;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return skew <= tolerance * std::max(1.0, max_abs(m));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  double largest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v(i)));
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // first component within rounding of the maximum wins, so (1,1)/sqrt2 is stable
    if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) {
      const Complex phase = v(i) / std::abs(v(i));
      v *= std::conj(phase);
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

Spectrum herm_eig(const ComplexMatrix& h) {
  require_square(h, "herm_eig input");
  if (!is_hermitian(h)) {
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
  }
  const Eigen::Index n = h.rows();
  const ComplexMatrix sym = hermitian_part(h);

  RealVector values(n);
  ComplexMatrix vectors(n, n);
  if (is_exactly_diagonal(sym)) {
    values = sym.diagonal().real();
    vectors.setIdentity();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }
  for (Eigen::Index k = 0; k < n; ++k) canonicalize_phase(vectors.col(k));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return values(x) < values(y); });

  // reorder inside each tie group
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && values(order[stop]) - values(order[stop - 1]) < kTieGap) ++stop;
    if (stop - start > 1) {
      std::vector<std::pair<std::vector<long long>, Eigen::Index>> keyed;
      for (std::size_t k = start; k < stop; ++k) {
        keyed.emplace_back(rounded_components(vectors.col(order[k])), order[k]);
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& x, const auto& y) { return x.first > y.first; });
      for (std::size_t k = start; k < stop; ++k) order[k] = keyed[k - start].second;
    }
    start = stop;
  }

  Spectrum out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
  const Spectrum s = herm_eig(h);
  const double floor = clip_threshold(h);
  RealVector roots(s.eigenvalues.size());
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    const double lambda = s.eigenvalues(k);
    if (lambda < floor) {
      throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(lambda) +
                                         " below clip threshold " + std::to_string(floor));
    }
    roots(k) = std::sqrt(std::max(lambda, 0.0));
  }
  const ComplexMatrix r = s.eigenvectors * roots.asDiagonal() * s.eigenvectors.adjoint();
  return hermitian_part(r);
}

double trace_sqrt_psd(const ComplexMatrix& h) {
  const RealVector values = checked_psd_eigenvalues(h);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) sum += std::sqrt(std::max(values(k), 0.0));
  return sum;
}

double trace_norm(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Side traced) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw Error(ErrorKind::DimensionMismatch,
                "operator of size " + std::to_string(m.rows()) + " does not live on a " +
                    std::to_string(dim_a) + "x" + std::to_string(dim_b) + " composite space");
  }
  if (traced == Side::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_a; ++i) out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
    return out;
  }
  ComplexMatrix out(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i) {
    for (int k = 0; k < dim_a; ++k) {
      out(i, k) = m.block(i * dim_b, k * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

ComplexMatrix reduced_density(const BipartiteState& v, Side traced) {
  const ComplexMatrix psi = v.coefficients();
  if (traced == Side::A) return psi.transpose() * psi.conjugate();
  return psi * psi.adjoint();
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

SchmidtForm schmidt_decompose(const BipartiteState& v) {
  const ComplexVector& amps = v.amplitudes;
  if (!(std::abs(amps.norm() - 1.0) <= 1e-8)) {
    throw Error(ErrorKind::BadNorm, "Schmidt decomposition needs a normalized state");
  }
  const ComplexMatrix psi = v.coefficients();
  const Spectrum s = herm_eig(reduced_density(v, Side::A));

  // descending eigenvalue order, tie groups keep their canonical internal order
  std::vector<Eigen::Index> order;
  Eigen::Index stop = s.eigenvalues.size();
  while (stop > 0) {
    Eigen::Index start = stop - 1;
    while (start > 0 && s.eigenvalues(start) - s.eigenvalues(start - 1) < kTieGap) --start;
    for (Eigen::Index k = start; k < stop; ++k) order.push_back(k);
    stop = start;
  }

  std::vector<double> coeffs;
  std::vector<ComplexVector> lefts;
  std::vector<ComplexVector> rights;
  for (Eigen::Index k : order) {
    const ComplexVector phi = s.eigenvectors.col(k);
    const ComplexVector w = psi * phi.conjugate();
    const double lambda = w.norm();
    if (lambda <= 1e-10) continue;
    coeffs.push_back(lambda);
    lefts.push_back(w / lambda);
    rights.push_back(phi);
  }

  const auto rank = static_cast<Eigen::Index>(coeffs.size());
  SchmidtForm out{RealVector(rank), ComplexMatrix(v.dim_a, rank), ComplexMatrix(v.dim_b, rank)};
  for (Eigen::Index k = 0; k < rank; ++k) {
    out.coefficients(k) = coeffs[static_cast<std::size_t>(k)];
    out.left_vectors.col(k) = lefts[static_cast<std::size_t>(k)];
    out.right_vectors.col(k) = rights[static_cast<std::size_t>(k)];
  }
  return out;
}

namespace {

void require_density(const ComplexMatrix& m, const char* name) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::NotDensity, std::string(name) + " is not square");
  }
  if (!is_hermitian(m)) throw Error(ErrorKind::NotDensity, std::string(name) + " is not Hermitian");
  const double tr = m.trace().real();
  if (!(std::abs(tr - 1.0) <= kDensityTolerance)) {
    throw Error(ErrorKind::NotDensity, std::string(name) + " has trace " + std::to_string(tr));
  }
  const Spectrum s = herm_eig(m);
  if (s.eigenvalues.minCoeff() < clip_threshold(m)) {
    throw Error(ErrorKind::NotDensity, std::string(name) + " is not positive semidefinite");
  }
}

}  // namespace

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_density(rho, "rho");
  require_density(sigma, "sigma");
  if (rho.rows() != sigma.rows()) {
    throw Error(ErrorKind::NotDensity, "density operators have different dimensions");
  }
  const ComplexMatrix root = psd_sqrt(rho);
  const double t = trace_sqrt_psd(hermitian_part(root * sigma * root));
  return t * t;
}

ComplexMatrix unitary_exp(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  const RealVector& values = solver.eigenvalues();
  Eigen::VectorXcd phases(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) phases(k) = std::polar(1.0, values(k));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

ComplexVector apply_on_b(const ComplexMatrix& op, const ComplexVector& v, int dim_a, int dim_b) {
  if (op.rows() != dim_b || op.cols() != dim_b ||
      v.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not act on the B factor");
  }
  ComplexVector out(v.size());
  for (int i = 0; i < dim_a; ++i) {
    out.segment(i * dim_b, dim_b) = op * v.segment(i * dim_b, dim_b);
  }
  return out;
}

}  // namespace wcf::qla
