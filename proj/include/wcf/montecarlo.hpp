#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wcf/protocol.hpp"
#include "wcf/rng.hpp"

namespace wcf {

enum class Role { Preparer, Receiver };

/// How one party plays a round.
///
/// Preparer: honest sends psi; optimal cheat toward w sends
/// psi' ~ (I (x) sqrt(E_w)) psi_w; custom sends `state`.
/// Receiver: honest measures {E0, E1} and announces the result; optimal
/// cheat leaves the state alone and announces w (aligned protocols only);
/// custom applies the Kraus channel `kraus` and announces `target`.
struct Strategy {
  enum class Kind { Honest, OptimalCheat, Custom };

  Role role = Role::Preparer;
  Kind kind = Kind::Honest;
  Outcome target = Outcome::Zero;
  ComplexVector state;
  std::vector<ComplexMatrix> kraus;

  static Strategy honest(Role role) { return Strategy{role, Kind::Honest, Outcome::Zero, {}, {}}; }
  static Strategy optimal_cheat(Role role, Outcome w) { return Strategy{role, Kind::OptimalCheat, w, {}, {}}; }
  static Strategy custom_state(ComplexVector psi) {
    return Strategy{Role::Preparer, Kind::Custom, Outcome::Zero, std::move(psi), {}};
  }
  static Strategy custom_channel(std::vector<ComplexMatrix> kraus, Outcome announce) {
    return Strategy{Role::Receiver, Kind::Custom, announce, {}, std::move(kraus)};
  }
};

std::string describe(const Strategy& s);

/// Who is credited for each (outcome, check) pair. Printed: outcome 0 with a
/// passed check is Bob's win, outcome 1 with a passed check is Alice's win, a
/// failed check catches the party that outcome favours. Mirrored swaps the
/// two parties throughout, matching the labeling under which the closed-form
/// cheat expressions are keyed to outcome 0 for both parties.
enum class Labeling { Printed, Mirrored };

std::string_view to_string(Labeling labeling);
Labeling labeling_from_string(std::string_view name);

enum class Winner { A, B, CaughtA, CaughtB };

std::string_view to_string(Winner winner);

Winner winner_for(Outcome b, bool passed, Labeling labeling);

struct Transcript {
  Outcome outcome_bit = Outcome::Zero;
  bool verification_passed = false;
  Winner winner = Winner::A;
  std::uint64_t rng_draws = 0;
};

struct BatchStats {
  std::int64_t rounds = 0;
  double freq_outcome0 = 0.0;
  double freq_win_A = 0.0;
  double freq_win_B = 0.0;
  double freq_caught_A = 0.0;
  double freq_caught_B = 0.0;
  double freq_caught = 0.0;
  /// Largest binomial standard error sqrt(f (1 - f) / rounds) over the
  /// reported frequencies.
  double standard_error = 0.0;
};

/// Everything about a matchup that does not depend on the random draws:
/// announcement probabilities and the check pass probability per announced
/// outcome. Building it validates the strategies.
class RoundModel {
 public:
  /// UnsupportedStrategy for role mismatches, optimal receiver cheats on
  /// non-aligned protocols, unnormalized custom states and non trace
  /// preserving custom channels.
  RoundModel(const Protocol& p, const Strategy& alice, const Strategy& bob,
             Labeling labeling = Labeling::Printed);

  Transcript play(Rng& rng) const;

  /// Probability that outcome b is announced.
  double announce_prob(Outcome b) const { return announce_[static_cast<std::size_t>(index(b))]; }
  /// Probability that the check of psi_b passes given b was announced.
  double pass_prob(Outcome b) const { return pass_[static_cast<std::size_t>(index(b))]; }

 private:
  std::array<double, 2> announce_{};
  std::array<double, 2> pass_{};
  Labeling labeling_;
};

Transcript simulate_round(const Protocol& p, const Strategy& alice, const Strategy& bob, Rng& rng,
                          Labeling labeling = Labeling::Printed);

/// Round r draws from Rng::substream(seed, r), so any sharding of the round
/// range reproduces the same statistics.
BatchStats run_batch(const Protocol& p, const Strategy& alice, const Strategy& bob, std::int64_t rounds,
                     std::uint64_t seed, Labeling labeling = Labeling::Printed);

inline constexpr std::string_view kBatchSchema = "wcflab.batch/1";

nlohmann::json to_json(const BatchStats& stats);

}  // namespace wcf
