#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wcf/cheating.hpp"
#include "wcf/error.hpp"
#include "wcf/montecarlo.hpp"
#include "wcf/oracle.hpp"
#include "wcf/sampling.hpp"

using namespace wcf;
using namespace wcf::testing;

namespace {

Protocol profile(std::vector<double> a, std::vector<double> b) {
  return Protocol::from_profile(DiagonalProfile::make(std::move(a), std::move(b)));
}

const Strategy kHonestA = Strategy::honest(Role::Preparer);
const Strategy kHonestB = Strategy::honest(Role::Receiver);

bool within_4se(double observed, double expected, std::int64_t rounds) {
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(rounds));
  return std::abs(observed - expected) <= 4.0 * std::max(se, 1e-12);
}

}  // namespace

TEST_CASE("winner table") {
  CHECK(winner_for(Outcome::Zero, true, Labeling::Printed) == Winner::B);
  CHECK(winner_for(Outcome::One, true, Labeling::Printed) == Winner::A);
  CHECK(winner_for(Outcome::Zero, false, Labeling::Printed) == Winner::CaughtB);
  CHECK(winner_for(Outcome::One, false, Labeling::Printed) == Winner::CaughtA);
  CHECK(winner_for(Outcome::Zero, true, Labeling::Mirrored) == Winner::A);
  CHECK(winner_for(Outcome::One, false, Labeling::Mirrored) == Winner::CaughtB);
  CHECK(labeling_from_string(to_string(Labeling::Mirrored)) == Labeling::Mirrored);
  CHECK_THROWS_AS(labeling_from_string("sideways"), Error);
}

TEST_CASE("simulate_round") {
  SUBCASE("honest rounds on Bell with I/2 always pass") {
    const Protocol p = Protocol::validate(2, 2, bell(), diag({0.5, 0.5}));
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const Transcript t = simulate_round(p, kHonestA, kHonestB, rng);
      REQUIRE(t.verification_passed);
      REQUIRE((t.winner == Winner::A || t.winner == Winner::B));
      REQUIRE(t.rng_draws == 2);
    }
  }
  SUBCASE("cheating receiver toward 0 on the projective profile") {
    const Protocol p = profile({0.5, 0.5}, {1, 0});
    const RoundModel model(p, kHonestA, Strategy::optimal_cheat(Role::Receiver, Outcome::Zero));
    CHECK(model.announce_prob(Outcome::Zero) == 1.0);
    CHECK(model.pass_prob(Outcome::Zero) == doctest::Approx(0.5).epsilon(1e-14));
    Rng rng(4);
    for (int i = 0; i < 100; ++i) REQUIRE(model.play(rng).outcome_bit == Outcome::Zero);
  }
  SUBCASE("cheating preparer on the symmetric frontier point") {
    const Protocol p = frontier(1.0 / std::sqrt(2.0), FrontierFamily::Paper);
    const RoundModel model(p, Strategy::optimal_cheat(Role::Preparer, Outcome::Zero), kHonestB);
    const double win = model.announce_prob(Outcome::Zero) * model.pass_prob(Outcome::Zero);
    CHECK(std::abs(win - preparer_max(p, Outcome::Zero).probability) <= 1e-12);
    CHECK(std::abs(win - 1.0 / std::sqrt(2.0)) <= 1e-12);
  }
}

TEST_CASE("RoundModel probabilities match the closed forms") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    const Protocol p = Protocol::from_profile(sampling::random_fair_profile(std::max(d, 2), rng));
    const RoundModel honest(p, kHonestA, kHonestB);
    REQUIRE(std::abs(honest.announce_prob(Outcome::Zero) - p.p0()) <= 1e-12);
    REQUIRE(honest.pass_prob(Outcome::Zero) == 1.0);
    REQUIRE(honest.pass_prob(Outcome::One) == 1.0);
    for (Outcome w : {Outcome::Zero, Outcome::One}) {
      const RoundModel prep(p, Strategy::optimal_cheat(Role::Preparer, w), kHonestB);
      REQUIRE(std::abs(prep.announce_prob(w) * prep.pass_prob(w) - preparer_max(p, w).probability) <= 1e-9);
      const RoundModel recv(p, kHonestA, Strategy::optimal_cheat(Role::Receiver, w));
      REQUIRE(std::abs(recv.pass_prob(w) - receiver_max(p, w).probability) <= 1e-9);
    }
  }
}

TEST_CASE("run_batch") {
  SUBCASE("honest play on frontier(0.75)") {
    const BatchStats s = run_batch(frontier(0.75, FrontierFamily::Paper), kHonestA, kHonestB, 100000, 7);
    CHECK(within_4se(s.freq_outcome0, 0.5, s.rounds));
    CHECK(s.freq_caught == 0.0);
    CHECK(std::abs(s.freq_win_A + s.freq_win_B + s.freq_caught_A + s.freq_caught_B - 1.0) <= 1e-12);
  }
  SUBCASE("cheating receiver on the projective profile") {
    const BatchStats s = run_batch(profile({0.5, 0.5}, {1, 0}), kHonestA,
                                   Strategy::optimal_cheat(Role::Receiver, Outcome::Zero), 100000, 8);
    CHECK(within_4se(s.freq_win_B, 0.5, s.rounds));
    CHECK(s.freq_outcome0 == 1.0);
  }
  SUBCASE("single round") {
    const BatchStats s = run_batch(profile({0.5, 0.5}, {0.9, 0.1}), kHonestA, kHonestB, 1, 1);
    for (double f : {s.freq_outcome0, s.freq_win_A, s.freq_win_B, s.freq_caught}) {
      CHECK((f == 0.0 || f == 1.0));
    }
  }
  SUBCASE("rounds must be positive") {
    CHECK_THROWS_AS(run_batch(profile({1.0}, {0.5}), kHonestA, kHonestB, 0, 1), Error);
  }
}

TEST_CASE("determinism and sharding") {
  const Protocol p = frontier(0.8, FrontierFamily::Operational);
  const Strategy cheat = Strategy::optimal_cheat(Role::Preparer, Outcome::Zero);
  const BatchStats a = run_batch(p, cheat, kHonestB, 5000, 42);
  const BatchStats b = run_batch(p, cheat, kHonestB, 5000, 42);
  CHECK(to_json(a).dump() == to_json(b).dump());

  // Rounds [0, 5000) split into two shards with the per-round substreams.
  const RoundModel model(p, cheat, kHonestB);
  std::array<std::int64_t, 4> tally{};
  for (std::int64_t start : {0, 2500}) {
    for (std::int64_t r = start; r < start + 2500; ++r) {
      Rng rng = Rng::substream(42, static_cast<std::uint64_t>(r));
      ++tally[static_cast<std::size_t>(model.play(rng).winner)];
    }
  }
  CHECK(static_cast<double>(tally[static_cast<std::size_t>(Winner::A)]) / 5000.0 == a.freq_win_A);
  CHECK(static_cast<double>(tally[static_cast<std::size_t>(Winner::B)]) / 5000.0 == a.freq_win_B);
}

TEST_CASE("cheat win frequencies within 4 SE of the closed forms") {
  Rng rng(62);
  for (int trial = 0; trial < 5; ++trial) {
    const Protocol p = Protocol::from_profile(sampling::random_fair_profile(3, rng));
    const double expected_prep = preparer_max(p, Outcome::One).probability;
    const BatchStats prep =
        run_batch(p, Strategy::optimal_cheat(Role::Preparer, Outcome::One), kHonestB, 20000, 300 + trial);
    CHECK(within_4se(prep.freq_win_A, expected_prep, prep.rounds));
    const double expected_recv = receiver_max(p, Outcome::Zero).probability;
    const BatchStats recv =
        run_batch(p, kHonestA, Strategy::optimal_cheat(Role::Receiver, Outcome::Zero), 20000, 400 + trial);
    CHECK(within_4se(recv.freq_win_B, expected_recv, recv.rounds));
  }
}

TEST_CASE("UnsupportedStrategy") {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ParseError;
  };
  const double s = 1.0 / std::sqrt(2.0);
  const Protocol unaligned = Protocol::validate(2, 2, vec({s, s, 0, 0}), diag({1, 0}));
  CHECK(kind_of([&] { (void)RoundModel(unaligned, kHonestA, Strategy::optimal_cheat(Role::Receiver, Outcome::Zero)); }) ==
        ErrorKind::UnsupportedStrategy);
  CHECK(kind_of([&] { (void)RoundModel(unaligned, kHonestB, kHonestB); }) == ErrorKind::UnsupportedStrategy);
  CHECK(kind_of([&] { (void)RoundModel(unaligned, Strategy::custom_state(vec({1, 1, 0, 0})), kHonestB); }) ==
        ErrorKind::UnsupportedStrategy);
  CHECK(kind_of([&] {
          (void)RoundModel(unaligned, kHonestA, Strategy::custom_channel({diag({0.5, 0.5})}, Outcome::Zero));
        }) == ErrorKind::UnsupportedStrategy);
  SUBCASE("the receiver oracle's channel is accepted as a custom strategy") {
    const OracleResult r = receiver_oracle(unaligned, Outcome::Zero, 2, 1);
    const RoundModel model(unaligned, kHonestA,
                           Strategy::custom_channel(kraus_from_dilation(r.argmax_descriptor, 2), Outcome::Zero));
    CHECK(std::abs(model.pass_prob(Outcome::Zero) - r.value) <= 1e-9);
    CHECK(model.pass_prob(Outcome::Zero) <= receiver_max(unaligned, Outcome::Zero).probability + 1e-6);
  }
}
