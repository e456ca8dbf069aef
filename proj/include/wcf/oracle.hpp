#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wcf/profile.hpp"
#include "wcf/protocol.hpp"

namespace wcf {

/// Gradient ascent settings shared by both cheating oracles. Gradients are
/// central differences; steps use a backtracking (Armijo) line search. A run
/// stops once the objective gains less than `tolerance` over `patience`
/// iterations, or after `max_iterations`.
struct AscentOptions {
  double fd_step = 1e-5;
  double tolerance = 1e-10;
  int patience = 50;
  int max_iterations = 3000;
};

struct OracleResult {
  double value = 0.0;
  /// Best strategy found. Preparer: the cheating state psi' as interleaved
  /// (re, im) amplitudes. Receiver: the dilation unitary on H_B (x) H_anc,
  /// row-major, interleaved (re, im).
  std::vector<double> argmax_descriptor;
  int restarts_used = 0;
  /// The two best restarts agree within 1e-6.
  bool converged = false;
};

inline constexpr int kMaxPreparerDimension = 36;
inline constexpr int kMaxReceiverDimB = 4;

/// Maximizes |<psi_w| (I (x) sqrt(E_w)) |psi'>|^2 over unit vectors psi'
/// parameterized by 2 dA dB - 2 hyperspherical angles (global phase removed).
/// DimensionTooLarge when dA dB > 36.
OracleResult preparer_oracle(const Protocol& p, Outcome w, int restarts, std::uint64_t seed,
                             const AscentOptions& options = {});

/// Maximizes the probability that psi_w passes after Bob applies a channel to
/// his half, searching over unitaries U on H_B (x) H_anc (dim_anc = dB^2,
/// ancilla starting in |0>) as U = U0 exp(iG(theta)). DimensionTooLarge when
/// dB > 4.
OracleResult receiver_oracle(const Protocol& p, Outcome w, int restarts, std::uint64_t seed,
                             const AscentOptions& options = {});

/// Kraus operators K_k = (I (x) <k|_anc) U (I (x) |0>_anc) of a dilation
/// descriptor produced by receiver_oracle.
std::vector<ComplexMatrix> kraus_from_dilation(const std::vector<double>& descriptor, int dim_b);

struct AuditPairing {
  std::string formula;      // paper_pa | paper_pb
  std::string operational;  // preparer_0 | preparer_1 | receiver_0 | receiver_1
  double max_deviation = 0.0;
  bool matches = false;
};

struct AuditReport {
  int sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<AuditPairing> pairings;
  /// Smallest paper_pa * paper_pb over the (fair) samples, and how many fell
  /// below 1/2 - 1e-9.
  double min_product = 0.0;
  int bound_violations = 0;
};

inline constexpr double kAuditMatchTolerance = 1e-6;

/// Compares the printed formulas with the four operational cheat values on
/// `sample_count` random fair 2x2 protocols.
AuditReport audit_labels(int sample_count, std::uint64_t seed);

struct SearchResult {
  DiagonalProfile best_profile;
  double best_max = 0.0;
  /// (restart index, best objective so far) each time the best improves.
  std::vector<std::pair<int, double>> trace;
};

/// Minimizes max(2 sum a b^2, 2 (sum a sqrt b)^2) over fair profiles of the
/// given length by projected random-restart local search. BadDimension
/// unless 2 <= dim <= 8.
SearchResult search_fair_minimum(int dim, int restarts, std::uint64_t seed);

inline constexpr std::string_view kOracleSchema = "wcflab.oracle/1";
inline constexpr std::string_view kAuditSchema = "wcflab.audit/1";
inline constexpr std::string_view kSearchSchema = "wcflab.search/1";

nlohmann::json to_json(const OracleResult& result);
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const SearchResult& result);

}  // namespace wcf
