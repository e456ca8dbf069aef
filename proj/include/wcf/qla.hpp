#pragma once

// Dense complex linear algebra for small (d <= 64) quantum systems.
//
// Matrices are Eigen dynamic complex matrices. Composite-space indices follow
// the fixed convention i * dim_b + j <-> |i>_A |j>_B.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace wcf::qla {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues ascending; eigenvectors are the matching orthonormal columns.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Unit vector on H_A (x) H_B.
struct BipartiteState {
  int dim_a = 1;
  int dim_b = 1;
  ComplexVector amplitudes;

  /// Throws BadNorm unless | ||v|| - 1 | <= 1e-8, DimensionMismatch on size.
  static BipartiteState make(int dim_a, int dim_b, ComplexVector amplitudes);

  Complex at(int i, int j) const { return amplitudes(i * dim_b + j); }
  /// Amplitudes reshaped as a dim_a x dim_b coefficient matrix.
  ComplexMatrix coefficients() const;
};

/// Columns of left_vectors / right_vectors pair with coefficients (descending).
struct SchmidtForm {
  RealVector coefficients;
  ComplexMatrix left_vectors;
  ComplexMatrix right_vectors;
};

enum class Side { A, B };

inline constexpr double kHermitianTolerance = 1e-8;
inline constexpr double kEigenClip = 1e-10;
inline constexpr double kTieGap = 1e-10;
inline constexpr double kDensityTolerance = 1e-8;

double max_abs(const ComplexMatrix& m);

/// max|M_ij - conj(M_ji)| <= 1e-8 * max(1, maxabs(M)).
bool is_hermitian(const ComplexMatrix& m, double tolerance = kHermitianTolerance);

/// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Deterministic Hermitian eigendecomposition.
///
/// Eigenvalues come out ascending. Inside a tie (consecutive gap < 1e-10)
/// eigenvectors are ordered by descending lexicographic comparison of their
/// components rounded to 1e-9. Every eigenvector is rephased so that its
/// largest-magnitude component is real and positive. Exactly diagonal input
/// returns the standard basis.
Spectrum herm_eig(const ComplexMatrix& h);

/// Principal square root of a PSD matrix. Eigenvalues in
/// [-1e-10 max(1, ||H||_F), 0) are clipped to zero; anything lower is NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

/// Tr sqrt(H) = sum of sqrt(max(eig, 0)), same PSD check as psd_sqrt.
double trace_sqrt_psd(const ComplexMatrix& h);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// Traces out `traced` of an operator on the composite space.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Side traced);

/// Reduced density operators computed straight from a state vector.
ComplexMatrix reduced_density(const BipartiteState& v, Side traced);

ComplexMatrix projector(const ComplexVector& v);

/// Right vectors are the canonical eigenvectors of the B-side reduced
/// density matrix; left vectors follow from them. Terms with coefficient
/// below 1e-10 are dropped.
SchmidtForm schmidt_decompose(const BipartiteState& v);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// exp(i H) for Hermitian H.
ComplexMatrix unitary_exp(const ComplexMatrix& h);

/// (I_A (x) op) |v> for an operator acting on the B factor.
ComplexVector apply_on_b(const ComplexMatrix& op, const ComplexVector& v, int dim_a, int dim_b);

/// Rescales v so that its largest-magnitude component is real positive.
void canonicalize_phase(Eigen::Ref<ComplexVector> v);

}  // namespace wcf::qla
