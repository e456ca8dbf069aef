#pragma once

#include <optional>

#include "wcf/profile.hpp"
#include "wcf/protocol.hpp"
#include "wcf/rng.hpp"

namespace wcf::sampling {

/// Normalized complex Gaussian vector (Haar-distributed direction).
ComplexVector random_unit_vector(Eigen::Index dim, Rng& rng);

/// Haar-random unitary from the QR of a complex Gaussian matrix.
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Random POVM element U diag(b) U^dagger, b uniform in [0, 1].
ComplexMatrix random_effect(Eigen::Index dim, Rng& rng);

/// Random pure state and random E0, no fairness constraint.
Protocol random_protocol(int dim_a, int dim_b, Rng& rng);

/// Random protocol made fair by rescaling the spectrum of E0 (toward 0 when
/// p0 > 1/2, toward 1 otherwise); always feasible.
Protocol random_fair_protocol(int dim_a, int dim_b, Rng& rng);

/// a from normalized exponentials, b uniform in [0, 1] rescaled so that
/// sum a_i b_i = 1/2. Returns nothing when the rescaled b leaves [0, 1].
std::optional<DiagonalProfile> try_fair_profile(int dim, Rng& rng);

/// Repeats try_fair_profile until a draw is feasible.
DiagonalProfile random_fair_profile(int dim, Rng& rng);

}  // namespace wcf::sampling
