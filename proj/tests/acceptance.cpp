// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "wcf/cheating.hpp"
#include "wcf/montecarlo.hpp"
#include "wcf/oracle.hpp"
#include "wcf/sampling.hpp"

using namespace wcf;

namespace {

const double kRootHalf = 1.0 / std::sqrt(2.0);

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, pattern, x);
  return buffer;
}

// Sum forms on a profile by plain loops, independent of the matrix route.
double loop_pa(const DiagonalProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p.a()[i] * p.b()[i] * p.b()[i];
  return 2.0 * s;
}

double loop_pb(const DiagonalProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p.a()[i] * std::sqrt(p.b()[i]);
  return 2.0 * s * s;
}

int random_dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

Verdict theorem_floor() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 1.0;
  double worst_route_gap = 0.0;
  int rejected = 0;
  for (int n = 0; n < 10000;) {
    const int d = random_dim(rng, 2, 8);
    const auto prof = sampling::try_fair_profile(d, rng);
    if (!prof) {
      ++rejected;
      continue;
    }
    ++n;
    const Protocol p = Protocol::from_profile(*prof);
    const double product = paper_pa(p) * paper_pb(p);
    worst = std::min(worst, product);
    worst_route_gap = std::max(worst_route_gap, std::abs(product - loop_pa(*prof) * loop_pb(*prof)));
  }
  const double elapsed = seconds_since(start);
  Verdict r;
  r.pass = worst >= 0.5 - 1e-9 && worst_route_gap <= 1e-12 && elapsed < 10.0;
  r.detail = "min P_A*P_B " + fmt("%.12f", worst) + ", matrix vs sum gap " + fmt("%.1e", worst_route_gap) +
             ", rejected draws " + std::to_string(rejected) + ", " + fmt("%.2f", elapsed) + " s";
  return r;
}

Protocol mixed_protocol(Rng& rng, int kind) {
  const int da = random_dim(rng, 1, 4);
  const int db = random_dim(rng, 1, 4);
  switch (kind % 4) {
    case 0: return sampling::random_protocol(da, db, rng);
    case 1: return sampling::random_fair_protocol(da, db, rng);
    case 2: {
      const int d = random_dim(rng, 1, 4);
      std::vector<double> a(static_cast<std::size_t>(d)), b(a.size());
      double total = 0.0;
      for (double& x : a) total += (x = rng.exponential());
      for (double& x : a) x /= total;
      for (double& x : b) x = rng.uniform();
      return Protocol::from_profile(DiagonalProfile::make(a, b));
    }
    default: return Protocol::from_profile(sampling::random_fair_profile(random_dim(rng, 2, 4), rng));
  }
}

Verdict holder_chain() {
  Rng rng(1002);
  double worst = 1.0;
  for (int n = 0; n < 10000; ++n) {
    const Protocol p = mixed_protocol(rng, n);
    const double slack = paper_pa(p) * paper_pb(p) - holder_floor(diagonal_profile(align(p)));
    worst = std::min(worst, slack);
  }
  return {worst >= -1e-9, "min (P_A*P_B - 4(sum ab)^3) " + fmt("%.3e", worst)};
}

Verdict alignment_monotonicity() {
  Rng rng(1003);
  double p0_drift = 0.0, pa_drift = 0.0, pb_rise = -1.0;
  int strict = 0, n = 0;
  while (n < 1000) {
    const Protocol p = sampling::random_protocol(random_dim(rng, 1, 4), random_dim(rng, 2, 4), rng);
    if (is_aligned(p)) continue;
    ++n;
    const Protocol q = align(p);
    p0_drift = std::max(p0_drift, std::abs(q.p0() - p.p0()));
    pa_drift = std::max(pa_drift, std::abs(paper_pa(q) - paper_pa(p)));
    const double rise = paper_pb(q) - paper_pb(p);
    pb_rise = std::max(pb_rise, rise);
    if (rise < -1e-3) ++strict;
  }
  Verdict r;
  r.pass = p0_drift <= 1e-9 && pa_drift <= 1e-9 && pb_rise <= 1e-9 && strict >= 50;
  r.detail = "p0 drift " + fmt("%.1e", p0_drift) + ", P_A drift " + fmt("%.1e", pa_drift) + ", max P_B change " +
             fmt("%.1e", pb_rise) + ", strict decreases " + std::to_string(strict) + "/1000";
  return r;
}

Verdict frontier_tightness() {
  double pa_gap = 0.0, product_gap = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double c = 0.5 + 0.05 * k;
    const Protocol p = frontier(c, FrontierFamily::Paper);
    pa_gap = std::max(pa_gap, std::abs(paper_pa(p) - c));
    product_gap = std::max(product_gap, std::abs(paper_pa(p) * paper_pb(p) - 0.5));
  }
  const Protocol sym = frontier(kRootHalf, FrontierFamily::Paper);
  const double pa = paper_pa(sym), pb = paper_pb(sym);
  const bool sym_ok = std::abs(pa - 0.70710678) <= 1e-8 && std::abs(pb - 0.70710678) <= 1e-8;
  return {pa_gap <= 1e-12 && product_gap <= 1e-12 && sym_ok,
          "max |P_A - c| " + fmt("%.1e", pa_gap) + ", max |product - 1/2| " + fmt("%.1e", product_gap) +
              ", symmetric point (" + fmt("%.10f", pa) + ", " + fmt("%.10f", pb) + ")"};
}

Verdict search_floor() {
  Verdict r;
  for (int dim : {2, 3, 4}) {
    const auto start = Clock::now();
    const SearchResult s = search_fair_minimum(dim, 200, 1);
    const double elapsed = seconds_since(start);
    const bool ok = s.best_max >= kRootHalf - 1e-9 && s.best_max <= kRootHalf + 1e-3 && elapsed < 60.0;
    r.pass = r.pass && ok;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("dim ") + std::to_string(dim) + " best " +
                fmt("%.9f", s.best_max) + " in " + fmt("%.2f", elapsed) + " s";
  }
  return r;
}

Verdict oracle_agreement() {
  const auto start = Clock::now();
  Rng rng(1006);
  double prep_gap = 0.0, recv_gap = 0.0;
  for (int n = 0; n < 50; ++n) {
    const Protocol p = sampling::random_fair_protocol(2, 2, rng);
    for (Outcome w : {Outcome::Zero, Outcome::One}) {
      const auto seed = static_cast<std::uint64_t>(10 * n + index(w));
      prep_gap = std::max(prep_gap, std::abs(preparer_oracle(p, w, 4, seed).value - preparer_max(p, w).probability));
      recv_gap = std::max(recv_gap, std::abs(receiver_oracle(p, w, 4, seed).value - receiver_max(p, w).probability));
    }
  }
  const AuditReport audit = audit_labels(100, 1006);
  double pa_dev = 1.0, pb_dev = 1.0, pa_toward_one = 0.0;
  for (const AuditPairing& pair : audit.pairings) {
    if (pair.formula == "paper_pa" && pair.operational == "preparer_0") pa_dev = pair.max_deviation;
    if (pair.formula == "paper_pb" && pair.operational == "receiver_0") pb_dev = pair.max_deviation;
    if (pair.formula == "paper_pa" && pair.operational == "preparer_1") pa_toward_one = pair.max_deviation;
  }
  const double elapsed = seconds_since(start);
  Verdict r;
  r.pass = prep_gap <= 1e-3 && recv_gap <= 1e-2 && pa_dev < 1e-6 && pb_dev < 1e-6 && elapsed < 600.0;
  r.detail = "preparer gap " + fmt("%.1e", prep_gap) + ", receiver gap " + fmt("%.1e", recv_gap) +
             ", audit P_A~prep0 " + fmt("%.1e", pa_dev) + ", P_B~recv0 " + fmt("%.1e", pb_dev) +
             ", P_A vs prep1 " + fmt("%.3f", pa_toward_one) + ", " + fmt("%.1f", elapsed) + " s";
  return r;
}

Verdict operational_floor() {
  Rng rng(1007);
  double worst = 1.0;
  for (int n = 0; n < 10000; ++n) {
    const Protocol p = sampling::random_fair_protocol(random_dim(rng, 1, 4), random_dim(rng, 1, 4), rng);
    worst = std::min(worst, preparer_max(p, Outcome::Zero).probability * receiver_max(p, Outcome::One).probability);
  }
  return {worst >= 0.5 - 1e-6, "min preparer_0 * receiver_1 " + fmt("%.9f", worst)};
}

Verdict monte_carlo() {
  const Protocol p = frontier(0.75, FrontierFamily::Paper);
  const Strategy honest_a = Strategy::honest(Role::Preparer);
  const Strategy honest_b = Strategy::honest(Role::Receiver);
  const Strategy cheat_b = Strategy::optimal_cheat(Role::Receiver, Outcome::Zero);
  const BatchStats honest = run_batch(p, honest_a, honest_b, 100000, 8);
  const BatchStats cheat = run_batch(p, honest_a, cheat_b, 100000, 8);
  const double expected = receiver_max(p, Outcome::Zero).probability;
  const double se_honest = std::sqrt(0.25 / 1e5);
  const double se_cheat = std::sqrt(expected * (1.0 - expected) / 1e5);
  const bool honest_ok = std::abs(honest.freq_outcome0 - 0.5) <= 4.0 * se_honest && honest.freq_caught == 0.0;
  const bool cheat_ok = std::abs(cheat.freq_win_B - expected) <= 4.0 * se_cheat;
  const bool same = to_json(run_batch(p, honest_a, cheat_b, 100000, 8)).dump() == to_json(cheat).dump();
  return {honest_ok && cheat_ok && same,
          "honest outcome0 " + fmt("%.5f", honest.freq_outcome0) + " caught " + fmt("%.0f", honest.freq_caught) +
              ", cheat win " + fmt("%.5f", cheat.freq_win_B) + " vs " + fmt("%.5f", expected) +
              (same ? ", JSON reproducible" : ", JSON differs")};
}

Verdict round_trip() {
  Rng rng(1009);
  double drift = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Protocol p = sampling::random_protocol(random_dim(rng, 1, 4), random_dim(rng, 1, 4), rng);
    const Protocol q = parse_protocol(serialize_protocol(p));
    drift = std::max(drift, (q.psi().amplitudes - p.psi().amplitudes).cwiseAbs().maxCoeff());
    drift = std::max(drift, (q.e0() - p.e0()).cwiseAbs().maxCoeff());
  }
  return {drift <= 1e-12, "max entry drift " + fmt("%.1e", drift)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"theorem floor", theorem_floor},
      {"Holder chain", holder_chain},
      {"alignment monotonicity", alignment_monotonicity},
      {"frontier tightness", frontier_tightness},
      {"search attains the floor", search_floor},
      {"oracle/closed-form agreement", oracle_agreement},
      {"operational floor", operational_floor},
      {"Monte Carlo consistency", monte_carlo},
      {"format round trip", round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    if (!r.pass) ++failures;
    std::printf("%s  %zu  %-30s %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
