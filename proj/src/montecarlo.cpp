#include "wcf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wcf/cheating.hpp"
#include "wcf/error.hpp"

namespace wcf {

namespace {

[[noreturn]] void unsupported(const std::string& why) { throw Error(ErrorKind::UnsupportedStrategy, why); }

ComplexVector preparer_state(const Protocol& p, const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::Honest:
      return p.psi().amplitudes;
    case Strategy::Kind::OptimalCheat: {
      if (outcome_prob(p, s.target) < kDegenerateOutcome) {
        unsupported("cheat target " + std::to_string(index(s.target)) + " never occurs honestly");
      }
      const BipartiteState target = post_measurement_state(p, s.target);
      ComplexVector v = qla::apply_on_b(sqrt_effect(p, s.target), target.amplitudes, p.dim_a(), p.dim_b());
      return v / v.norm();
    }
    case Strategy::Kind::Custom:
      if (s.state.size() != static_cast<Eigen::Index>(p.dim_a()) * p.dim_b()) {
        unsupported("custom state has the wrong dimension");
      }
      if (!(std::abs(s.state.norm() - 1.0) <= 1e-8)) unsupported("custom state is not normalized");
      return s.state;
  }
  unsupported("unknown preparer strategy");
}

double clamp_probability(double x) {
  // rounding in <psi_b|psi_b> must not turn an honest check into a coin toss
  if (x > 1.0 - 1e-12) return 1.0;
  return std::max(x, 0.0);
}

}  // namespace

std::string describe(const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::Honest: return "honest";
    case Strategy::Kind::OptimalCheat: return "cheat(" + std::to_string(index(s.target)) + ")";
    case Strategy::Kind::Custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Labeling labeling) {
  return labeling == Labeling::Printed ? "printed" : "mirrored";
}

Labeling labeling_from_string(std::string_view name) {
  if (name == "printed") return Labeling::Printed;
  if (name == "mirrored") return Labeling::Mirrored;
  throw Error(ErrorKind::OutOfRange, "unknown labeling '" + std::string(name) + "'");
}

std::string_view to_string(Winner winner) {
  switch (winner) {
    case Winner::A: return "A";
    case Winner::B: return "B";
    case Winner::CaughtA: return "caught-A";
    case Winner::CaughtB: return "caught-B";
  }
  return "?";
}

Winner winner_for(Outcome b, bool passed, Labeling labeling) {
  Winner w;
  if (b == Outcome::Zero) {
    w = passed ? Winner::B : Winner::CaughtB;
  } else {
    w = passed ? Winner::A : Winner::CaughtA;
  }
  if (labeling == Labeling::Printed) return w;
  switch (w) {
    case Winner::A: return Winner::B;
    case Winner::B: return Winner::A;
    case Winner::CaughtA: return Winner::CaughtB;
    case Winner::CaughtB: return Winner::CaughtA;
  }
  return w;
}

RoundModel::RoundModel(const Protocol& p, const Strategy& alice, const Strategy& bob, Labeling labeling)
    : labeling_(labeling) {
  if (alice.role != Role::Preparer) unsupported("Alice's strategy must be a preparer strategy");
  if (bob.role != Role::Receiver) unsupported("Bob's strategy must be a receiver strategy");

  const ComplexVector sent = preparer_state(p, alice);
  std::array<std::optional<ComplexVector>, 2> targets;
  for (Outcome b : {Outcome::Zero, Outcome::One}) {
    if (outcome_prob(p, b) >= kDegenerateOutcome) {
      targets[static_cast<std::size_t>(index(b))] = post_measurement_state(p, b).amplitudes;
    }
  }
  auto overlap = [&](Outcome b, const ComplexVector& v) {
    const auto& t = targets[static_cast<std::size_t>(index(b))];
    return t ? std::norm(t->dot(v)) : 0.0;
  };

  switch (bob.kind) {
    case Strategy::Kind::Honest: {
      for (Outcome b : {Outcome::Zero, Outcome::One}) {
        const auto k = static_cast<std::size_t>(index(b));
        const ComplexVector branch = qla::apply_on_b(sqrt_effect(p, b), sent, p.dim_a(), p.dim_b());
        announce_[k] = branch.squaredNorm();
        pass_[k] = announce_[k] > 0.0 ? overlap(b, branch) / announce_[k] : 0.0;
      }
      const double total = announce_[0] + announce_[1];
      announce_[0] /= total;
      announce_[1] = 1.0 - announce_[0];
      break;
    }
    case Strategy::Kind::OptimalCheat: {
      if (!is_aligned(p)) {
        unsupported("optimal receiver cheat is only defined for aligned protocols; supply the "
                    "receiver oracle's channel as a custom strategy instead");
      }
      const auto k = static_cast<std::size_t>(index(bob.target));
      announce_[k] = 1.0;
      pass_[k] = overlap(bob.target, sent);
      break;
    }
    case Strategy::Kind::Custom: {
      if (bob.kraus.empty()) unsupported("custom channel has no Kraus operators");
      ComplexMatrix completeness = ComplexMatrix::Zero(p.dim_b(), p.dim_b());
      for (const ComplexMatrix& op : bob.kraus) {
        if (op.rows() != p.dim_b() || op.cols() != p.dim_b()) unsupported("Kraus operator has the wrong shape");
        completeness += op.adjoint() * op;
      }
      if ((completeness - ComplexMatrix::Identity(p.dim_b(), p.dim_b())).cwiseAbs().maxCoeff() > 1e-8) {
        unsupported("custom channel is not trace preserving");
      }
      const auto k = static_cast<std::size_t>(index(bob.target));
      announce_[k] = 1.0;
      for (const ComplexMatrix& op : bob.kraus) {
        pass_[k] += overlap(bob.target, qla::apply_on_b(op, sent, p.dim_a(), p.dim_b()));
      }
      break;
    }
  }
  for (double& x : pass_) x = clamp_probability(x);
}

Transcript RoundModel::play(Rng& rng) const {
  const std::uint64_t before = rng.draws();
  Transcript t;
  t.outcome_bit = rng.uniform() < announce_[0] ? Outcome::Zero : Outcome::One;
  t.verification_passed = rng.uniform() < pass_[static_cast<std::size_t>(index(t.outcome_bit))];
  t.winner = winner_for(t.outcome_bit, t.verification_passed, labeling_);
  t.rng_draws = rng.draws() - before;
  return t;
}

Transcript simulate_round(const Protocol& p, const Strategy& alice, const Strategy& bob, Rng& rng,
                          Labeling labeling) {
  return RoundModel(p, alice, bob, labeling).play(rng);
}

BatchStats run_batch(const Protocol& p, const Strategy& alice, const Strategy& bob, std::int64_t rounds,
                     std::uint64_t seed, Labeling labeling) {
  if (rounds < 1) throw Error(ErrorKind::OutOfRange, "rounds must be at least 1");
  const RoundModel model(p, alice, bob, labeling);
  std::int64_t zeros = 0;
  std::array<std::int64_t, 4> tally{};
  for (std::int64_t r = 0; r < rounds; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    const Transcript t = model.play(rng);
    if (t.outcome_bit == Outcome::Zero) ++zeros;
    ++tally[static_cast<std::size_t>(t.winner)];
  }
  const auto n = static_cast<double>(rounds);
  BatchStats s;
  s.rounds = rounds;
  s.freq_outcome0 = static_cast<double>(zeros) / n;
  s.freq_win_A = static_cast<double>(tally[static_cast<std::size_t>(Winner::A)]) / n;
  s.freq_win_B = static_cast<double>(tally[static_cast<std::size_t>(Winner::B)]) / n;
  s.freq_caught_A = static_cast<double>(tally[static_cast<std::size_t>(Winner::CaughtA)]) / n;
  s.freq_caught_B = static_cast<double>(tally[static_cast<std::size_t>(Winner::CaughtB)]) / n;
  s.freq_caught = static_cast<double>(tally[2] + tally[3]) / n;
  for (double f : {s.freq_outcome0, s.freq_win_A, s.freq_win_B, s.freq_caught}) {
    s.standard_error = std::max(s.standard_error, std::sqrt(f * (1.0 - f) / n));
  }
  return s;
}

nlohmann::json to_json(const BatchStats& stats) {
  return nlohmann::json{{"schema", kBatchSchema},
                        {"rounds", stats.rounds},
                        {"freq_outcome0", stats.freq_outcome0},
                        {"freq_win_A", stats.freq_win_A},
                        {"freq_win_B", stats.freq_win_B},
                        {"freq_caught_A", stats.freq_caught_A},
                        {"freq_caught_B", stats.freq_caught_B},
                        {"freq_caught", stats.freq_caught},
                        {"standard_error", stats.standard_error}};
}

}  // namespace wcf
