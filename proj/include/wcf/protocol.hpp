#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wcf/profile.hpp"
#include "wcf/qla.hpp"

namespace wcf {

using qla::BipartiteState;
using qla::ComplexMatrix;
using qla::ComplexVector;

enum class Outcome : int { Zero = 0, One = 1 };

inline int index(Outcome b) { return static_cast<int>(b); }
inline Outcome outcome_from_int(int b) { return b == 0 ? Outcome::Zero : Outcome::One; }
inline Outcome flip(Outcome b) { return b == Outcome::Zero ? Outcome::One : Outcome::Zero; }

inline constexpr double kDefaultFairnessTolerance = 1e-6;
inline constexpr double kDegenerateOutcome = 1e-12;

struct FairnessVerdict {
  double p0 = 0.0;
  bool fair = false;
};

/// A validated instance (psi, E0) of the two-message protocol: Alice prepares
/// psi on H_A (x) H_B, Bob measures {E0, I - E0} on his half and announces the
/// outcome, then the announced branch is checked against psi_b.
///
/// Immutable after construction. E1 is never stored.
class Protocol {
 public:
  /// Gatekeeper for every protocol instance. Errors: DimensionMismatch,
  /// BadNorm, NotHermitian, NotPOVM.
  static Protocol validate(int dim_a, int dim_b, const ComplexVector& psi, const ComplexMatrix& e0,
                           double fairness_tolerance = kDefaultFairnessTolerance);

  /// psi = sum_i sqrt(a_i) |i>|i>, E0 = diag(b).
  static Protocol from_profile(const DiagonalProfile& profile,
                               double fairness_tolerance = kDefaultFairnessTolerance);

  int dim_a() const { return psi_.dim_a; }
  int dim_b() const { return psi_.dim_b; }
  const BipartiteState& psi() const { return psi_; }
  const ComplexMatrix& e0() const { return e0_; }
  /// E_b, with E1 = I - E0 computed on demand.
  ComplexMatrix effect(Outcome b) const;
  const ComplexMatrix& rho() const { return rho_; }
  double p0() const { return p0_; }
  double p1() const { return 1.0 - p0_; }
  double fairness_tolerance() const { return fairness_tolerance_; }
  FairnessVerdict fairness() const;
  bool fair() const { return fairness().fair; }

  /// Set when the protocol was built from the aligned shorthand.
  const std::optional<DiagonalProfile>& source_profile() const { return source_profile_; }

 private:
  Protocol(BipartiteState psi, ComplexMatrix e0, ComplexMatrix rho, double p0, double tolerance)
      : psi_(std::move(psi)), e0_(std::move(e0)), rho_(std::move(rho)), p0_(p0),
        fairness_tolerance_(tolerance) {}

  BipartiteState psi_;
  ComplexMatrix e0_;
  ComplexMatrix rho_;
  double p0_;
  double fairness_tolerance_;
  std::optional<DiagonalProfile> source_profile_;
};

/// sqrt(E_b) with eigenvalues clamped into [0, 1].
ComplexMatrix sqrt_effect(const Protocol& p, Outcome b);

/// <psi| I (x) E_b |psi>
double outcome_prob(const Protocol& p, Outcome b);

/// psi_b = (I (x) sqrt(E_b)) psi / sqrt(p_b). DegenerateOutcome if p_b < 1e-12.
BipartiteState post_measurement_state(const Protocol& p, Outcome b);

/// Bob's reduced density operator Tr_A |psi><psi|.
ComplexMatrix reduced_state(const Protocol& p);

/// Protocol file codec. Accepts the explicit form
///   {"dims":{"A":dA,"B":dB},"psi":[[re,im],...],"E0":[[[re,im],...],...]}
/// or the aligned shorthand {"aligned":{"a":[...],"b":[...]}}.
/// Unknown keys are rejected; errors are ParseError naming the line and field.
Protocol parse_protocol(std::string_view text,
                        double fairness_tolerance = kDefaultFairnessTolerance);

/// Writes the form the protocol came from (aligned shorthand or explicit),
/// numbers with 17 significant digits.
std::string serialize_protocol(const Protocol& p);

/// Always the explicit form.
std::string serialize_explicit(const Protocol& p);

}  // namespace wcf
