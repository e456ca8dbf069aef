#pragma once

#include <array>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wcf/profile.hpp"
#include "wcf/protocol.hpp"

namespace wcf {

/// 2 Tr(rho E0^2), the preparer's optimal cheating probability as printed.
double paper_pa(const Protocol& p);

/// 2 (Tr sqrt(rho E0 rho))^2, the receiver's optimal cheating probability as
/// printed. Evaluated as 2 ||sqrt(E0) rho||_1^2.
double paper_pb(const Protocol& p);

/// Rebuilds the protocol so that Bob's Schmidt vectors are the eigenvectors
/// phi_i of E0: psi~ = sum_i lambda_i |i>|phi_i>, lambda_i = ||(I (x) <phi_i|) psi||.
/// The output has dim_a = dim_b. Keeps p0 and paper_pa, never raises paper_pb.
Protocol align(const Protocol& p);

/// Commutator threshold ||[rho, E0]||_F for a protocol to count as aligned.
inline constexpr double kAlignedTolerance = 1e-8;

bool is_aligned(const Protocol& p);

/// Common eigenbasis of rho and E0 (columns). Inside a degenerate E0
/// eigenspace the basis diagonalizes the compression of rho. Columns are
/// ordered by the index of their dominant component, so a protocol given in
/// the standard basis keeps its order.
struct AlignedBasis {
  ComplexMatrix vectors;
  qla::RealVector e0_eigenvalues;
};
AlignedBasis aligned_basis(const ComplexMatrix& e0, const ComplexMatrix& rho);

/// a = diag(rho), b = diag(E0) in the common eigenbasis. NotAligned when the
/// commutator exceeds kAlignedTolerance.
DiagonalProfile diagonal_profile(const Protocol& p);

/// 4 (sum_i a_i b_i)^3, the lower bound on paper_pa * paper_pb.
double holder_floor(const DiagonalProfile& profile);

/// Scalar forms of the printed formulas on a profile.
double profile_pa(const DiagonalProfile& profile);
double profile_pb(const DiagonalProfile& profile);

/// A cheat probability toward a target outcome. When the target has honest
/// probability below 1e-12 the value is 0 and `degenerate` is set.
struct CheatValue {
  double probability = 0.0;
  bool degenerate = false;
};

/// Best probability that a cheating preparer gets outcome w announced and the
/// check of psi_w passed: Tr(rho E_w^2) / p_w.
CheatValue preparer_max(const Protocol& p, Outcome w);

/// Best probability that a cheating receiver who announces w passes the check
/// of psi_w: the fidelity between Alice's reduced states of psi and psi_w.
CheatValue receiver_max(const Protocol& p, Outcome w);

enum class FrontierFamily { Paper, Operational };

std::string_view to_string(FrontierFamily family);
FrontierFamily frontier_family_from_string(std::string_view name);

/// Fair two-dimensional aligned protocol on the product-1/2 frontier.
///
/// Paper family: b = (c, 0), a = (1/(2c), 1 - 1/(2c)), so paper_pa = c and
/// paper_pb = 1/(2c). Operational family: b = (1, t), t = 1 - c,
/// a = ((1/2 - t)/(1 - t), (1/2)/(1 - t)), so preparer_max(., 0) = c and
/// receiver_max(., 1) = 1/(2c). OutOfRange unless 0.5 <= c <= 1.
Protocol frontier(double target, FrontierFamily family);

enum class BoundVerdict { Holds, Violated, NotApplicable };

std::string_view to_string(BoundVerdict verdict);

struct CheatReport {
  double p0 = 0.0;
  bool fair = false;
  double paper_pa = 0.0;
  double paper_pb = 0.0;
  std::array<double, 2> op_preparer{};
  std::array<double, 2> op_receiver{};
  double holder_floor = 0.0;
  double product = 0.0;
  BoundVerdict fair_bound_holds = BoundVerdict::NotApplicable;
};

inline constexpr double kBoundSlack = 1e-9;

CheatReport analyze(const Protocol& p);

inline constexpr std::string_view kCheatReportSchema = "wcflab.cheat_report/1";

nlohmann::json to_json(const CheatReport& report);

}  // namespace wcf
