#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wcf/cheating.hpp"
#include "wcf/error.hpp"
#include "wcf/oracle.hpp"
#include "wcf/sampling.hpp"

using namespace wcf;
using namespace wcf::testing;

namespace {

Protocol profile(std::vector<double> a, std::vector<double> b) {
  return Protocol::from_profile(DiagonalProfile::make(std::move(a), std::move(b)));
}

ComplexVector descriptor_state(const std::vector<double>& d) {
  ComplexVector v(static_cast<Eigen::Index>(d.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = {d[static_cast<std::size_t>(2 * i)], d[static_cast<std::size_t>(2 * i + 1)]};
  }
  return v;
}

// Pass probability of psi_w after a Kraus channel on B, by summing branch overlaps.
double channel_pass(const Protocol& p, Outcome w, const std::vector<ComplexMatrix>& kraus) {
  const ComplexVector target = post_measurement_state(p, w).amplitudes;
  double total = 0.0;
  for (const ComplexMatrix& k : kraus) {
    total += std::norm(target.dot(qla::apply_on_b(k, p.psi().amplitudes, p.dim_a(), p.dim_b())));
  }
  return total;
}

}  // namespace

TEST_CASE("preparer_oracle") {
  SUBCASE("E0 = I/2") {
    const OracleResult r = preparer_oracle(Protocol::validate(2, 2, bell(), diag({0.5, 0.5})), Outcome::Zero, 4, 1);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("projective profile, both targets") {
    const Protocol p = profile({0.5, 0.5}, {1, 0});
    const OracleResult zero = preparer_oracle(p, Outcome::Zero, 4, 2);
    const OracleResult one = preparer_oracle(p, Outcome::One, 4, 2);
    CHECK(std::abs(zero.value - 1.0) <= 1e-3);
    CHECK(std::abs(one.value - 1.0) <= 1e-3);
    CHECK(zero.restarts_used == 4);
  }
  SUBCASE("descriptor reproduces the value") {
    const Protocol p = profile({0.3, 0.7}, {0.8, 0.4});
    const OracleResult r = preparer_oracle(p, Outcome::One, 3, 9);
    const ComplexVector sent = descriptor_state(r.argmax_descriptor);
    REQUIRE(sent.size() == 4);
    CHECK(std::abs(sent.norm() - 1.0) <= 1e-12);
    const ComplexVector target = post_measurement_state(p, Outcome::One).amplitudes;
    const ComplexVector filtered = qla::apply_on_b(eigen_sqrt(p.effect(Outcome::One)), sent, 2, 2);
    CHECK(std::abs(std::norm(target.dot(filtered)) - r.value) <= 1e-12);
  }
  SUBCASE("never exceeds the closed form on random protocols") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
      const Protocol p = sampling::random_protocol(2, 2, rng);
      for (Outcome w : {Outcome::Zero, Outcome::One}) {
        const OracleResult r = preparer_oracle(p, w, 3, 100 + trial);
        const double closed = preparer_max(p, w).probability;
        REQUIRE(r.value <= closed + 1e-6);
        if (r.converged) REQUIRE(r.value >= closed - 1e-3);
      }
    }
  }
  SUBCASE("degenerate target") {
    const OracleResult r = preparer_oracle(profile({1.0}, {1.0}), Outcome::One, 4, 1);
    CHECK(r.value == 0.0);
  }
  SUBCASE("errors") {
    Rng rng(1);
    const Protocol big = sampling::random_protocol(6, 7, rng);
    CHECK_THROWS_AS(preparer_oracle(big, Outcome::Zero, 1, 1), Error);
    try {
      preparer_oracle(big, Outcome::Zero, 1, 1);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionTooLarge);
    }
    CHECK_THROWS_AS(preparer_oracle(profile({1.0}, {0.5}), Outcome::Zero, 0, 1), Error);
  }
}

TEST_CASE("preparer_oracle determinism and monotonicity in restarts") {
  Rng rng(52);
  const Protocol p = sampling::random_protocol(2, 3, rng);
  const OracleResult a = preparer_oracle(p, Outcome::Zero, 3, 77);
  const OracleResult b = preparer_oracle(p, Outcome::Zero, 3, 77);
  CHECK(a.value == b.value);
  CHECK(a.argmax_descriptor == b.argmax_descriptor);
  CHECK(to_json(a).dump() == to_json(b).dump());
  double previous = -1.0;
  for (int restarts = 1; restarts <= 4; ++restarts) {
    const double v = preparer_oracle(p, Outcome::Zero, restarts, 77).value;
    CHECK(v >= previous);
    previous = v;
  }
}

TEST_CASE("receiver_oracle") {
  SUBCASE("E0 = I/2, identity is optimal") {
    const OracleResult r = receiver_oracle(Protocol::validate(2, 2, bell(), diag({0.5, 0.5})), Outcome::Zero, 2, 1);
    CHECK(std::abs(r.value - 1.0) <= 1e-2);
  }
  SUBCASE("projective profile") {
    const OracleResult r = receiver_oracle(profile({0.5, 0.5}, {1, 0}), Outcome::Zero, 2, 3);
    CHECK(std::abs(r.value - 0.5) <= 1e-2);
  }
  SUBCASE("unequal profile") {
    const Protocol p = profile({0.5, 0.5}, {0.9, 0.1});
    const OracleResult r = receiver_oracle(p, Outcome::Zero, 2, 4);
    CHECK(std::abs(r.value - 0.8) <= 1e-2);
    SUBCASE("dilation gives a trace-preserving channel that attains the value") {
      const std::vector<ComplexMatrix> kraus = kraus_from_dilation(r.argmax_descriptor, 2);
      REQUIRE(kraus.size() == 4);
      ComplexMatrix completeness = ComplexMatrix::Zero(2, 2);
      for (const ComplexMatrix& k : kraus) completeness += k.adjoint() * k;
      CHECK((completeness - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(std::abs(channel_pass(p, Outcome::Zero, kraus) - r.value) <= 1e-10);
    }
  }
  SUBCASE("never exceeds the fidelity bound") {
    Rng rng(53);
    for (int trial = 0; trial < 4; ++trial) {
      const Protocol p = sampling::random_fair_protocol(2, 2, rng);
      const OracleResult r = receiver_oracle(p, Outcome::One, 2, 200 + trial);
      REQUIRE(r.value <= receiver_max(p, Outcome::One).probability + 1e-6);
    }
  }
  SUBCASE("errors") {
    Rng rng(2);
    CHECK_THROWS_AS(receiver_oracle(sampling::random_protocol(1, 5, rng), Outcome::Zero, 1, 1), Error);
  }
}

TEST_CASE("audit_labels") {
  SUBCASE("expected pairings on 100 samples") {
    const AuditReport r = audit_labels(100, 5);
    CHECK(r.sample_count == 100);
    REQUIRE(r.pairings.size() == 8);
    for (const AuditPairing& pair : r.pairings) {
      // Tr(rho E1^2) = 1 - 2 p0 + Tr(rho E0^2), so at p0 = 1/2 both preparer targets coincide
      const bool expected = (pair.formula == "paper_pa" && pair.operational.rfind("preparer", 0) == 0) ||
                            (pair.formula == "paper_pb" && pair.operational == "receiver_0");
      CHECK_MESSAGE(pair.matches == expected, pair.formula << " vs " << pair.operational);
      if (expected) CHECK(pair.max_deviation < 1e-6);
    }
    CHECK(r.min_product >= 0.5 - 1e-9);
    CHECK(r.bound_violations == 0);
  }
  SUBCASE("zero samples") {
    const AuditReport r = audit_labels(0, 5);
    CHECK(r.pairings.empty());
    CHECK(to_json(r).at("matches").is_null());
  }
  SUBCASE("determinism") { CHECK(to_json(audit_labels(20, 9)).dump() == to_json(audit_labels(20, 9)).dump()); }
}

TEST_CASE("search_fair_minimum") {
  const double floor = 1.0 / std::sqrt(2.0);
  SUBCASE("dim 2 finds the symmetric point") {
    const SearchResult r = search_fair_minimum(2, 100, 1);
    CHECK(std::abs(r.best_max - floor) <= 1e-3);
    CHECK(r.best_max >= floor - 1e-9);
    CHECK(std::abs(r.best_profile.p0() - 0.5) <= 1e-6);
    CHECK(!r.trace.empty());
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].second <= r.trace[i - 1].second);
  }
  SUBCASE("dim 4 does no better") {
    const SearchResult r = search_fair_minimum(4, 100, 1);
    CHECK(std::abs(r.best_max - floor) <= 1e-3);
    CHECK(r.best_max >= floor - 1e-9);
  }
  SUBCASE("single restart is deterministic") {
    const SearchResult a = search_fair_minimum(2, 1, 3);
    const SearchResult b = search_fair_minimum(2, 1, 3);
    CHECK(a.best_max == b.best_max);
    CHECK(a.best_max >= floor - 1e-9);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
  SUBCASE("bad dimensions") {
    CHECK_THROWS_AS(search_fair_minimum(1, 1, 1), Error);
    CHECK_THROWS_AS(search_fair_minimum(9, 1, 1), Error);
  }
}
