#include "wcf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcf/cheating.hpp"
#include "wcf/error.hpp"
#include "wcf/montecarlo.hpp"
#include "wcf/oracle.hpp"
#include "wcf/protocol.hpp"

namespace wcf {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  out << text;
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string list(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fixed(v[i]);
  return out + ")";
}

class Table {
 public:
  explicit Table(std::ostream& os) : os_(os) {}
  Table& row(const std::string& label, const std::string& value) {
    os_ << std::left << std::setw(20) << label << value << "\n";
    return *this;
  }

 private:
  std::ostream& os_;
};

void render_report(std::ostream& out, const std::string& source, const Protocol& p, const CheatReport& r) {
  Table(out)
      .row("protocol", source + "  (dA=" + std::to_string(p.dim_a()) + ", dB=" + std::to_string(p.dim_b()) + ")")
      .row("p0", fixed(r.p0))
      .row("fair", r.fair ? "yes" : "no")
      .row("P_A", fixed(r.paper_pa))
      .row("P_B", fixed(r.paper_pb))
      .row("product", fixed(r.product))
      .row("holder floor", fixed(r.holder_floor))
      .row("preparer cheat", "w=0: " + fixed(r.op_preparer[0]) + "  w=1: " + fixed(r.op_preparer[1]))
      .row("receiver cheat", "w=0: " + fixed(r.op_receiver[0]) + "  w=1: " + fixed(r.op_receiver[1]))
      .row("bound", std::string(to_string(r.fair_bound_holds)));
}

json summary(const Protocol& p) {
  return json{{"p0", p.p0()}, {"paper_pa", paper_pa(p)}, {"paper_pb", paper_pb(p)}};
}

// --- verbs ------------------------------------------------------------------

struct AnalyzeArgs {
  std::string file;
  double fairness_tol = kDefaultFairnessTolerance;
};

int do_analyze(const AnalyzeArgs& args, bool as_json, std::ostream& out) {
  const Protocol p = parse_protocol(read_file(args.file), args.fairness_tol);
  const CheatReport report = analyze(p);
  if (as_json) {
    out << to_json(report).dump(2) << "\n";
  } else {
    render_report(out, args.file, p, report);
  }
  return kExitOk;
}

struct AlignArgs {
  std::string file;
  std::string output;
};

int do_align(const AlignArgs& args, bool as_json, std::ostream& out) {
  const Protocol p = parse_protocol(read_file(args.file));
  const Protocol aligned = align(p);
  const DiagonalProfile profile = diagonal_profile(aligned);
  const std::string text = serialize_explicit(aligned);
  if (!args.output.empty()) write_file(args.output, text);

  if (as_json) {
    json doc{{"schema", "wcflab.align/1"},
             {"before", summary(p)},
             {"after", summary(aligned)},
             {"profile", {{"a", profile.a()}, {"b", profile.b()}}}};
    if (args.output.empty()) doc["protocol"] = json::parse(text);
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  Table(out)
      .row("", "before      after")
      .row("p0", fixed(p.p0()) + "    " + fixed(aligned.p0()))
      .row("P_A", fixed(paper_pa(p)) + "    " + fixed(paper_pa(aligned)))
      .row("P_B", fixed(paper_pb(p)) + "    " + fixed(paper_pb(aligned)))
      .row("profile a", list(profile.a()))
      .row("profile b", list(profile.b()));
  if (args.output.empty()) {
    out << "\n" << text;
  } else {
    out << "wrote " << args.output << "\n";
  }
  return kExitOk;
}

struct FrontierArgs {
  double target = 0.0;
  std::string family = "paper";
  std::string output;
};

int do_frontier(const FrontierArgs& args, bool as_json, std::ostream& out) {
  const Protocol p = frontier(args.target, frontier_family_from_string(args.family));
  const DiagonalProfile& profile = *p.source_profile();
  const std::string text = serialize_protocol(p);
  if (!args.output.empty()) write_file(args.output, text);

  const double prep0 = preparer_max(p, Outcome::Zero).probability;
  const double recv1 = receiver_max(p, Outcome::One).probability;
  if (as_json) {
    json doc{{"schema", "wcflab.frontier/1"},
             {"family", args.family},
             {"target", args.target},
             {"a", profile.a()},
             {"b", profile.b()},
             {"p0", p.p0()},
             {"paper_pa", paper_pa(p)},
             {"paper_pb", paper_pb(p)},
             {"preparer_0", prep0},
             {"receiver_1", recv1}};
    if (args.output.empty()) doc["protocol"] = json::parse(text);
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  const double pa = paper_pa(p);
  const double pb = paper_pb(p);
  Table(out)
      .row("family", args.family)
      .row("a", list(profile.a()))
      .row("b", list(profile.b()))
      .row("p0", fixed(p.p0()))
      .row("P_A, P_B", fixed(pa) + ", " + fixed(pb) + "  (product " + fixed(pa * pb) + ")")
      .row("operational", fixed(prep0) + ", " + fixed(recv1) + "  (product " + fixed(prep0 * recv1) + ")");
  if (args.output.empty()) {
    out << "\n" << text;
  } else {
    out << "wrote " << args.output << "\n";
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string file;
  int restarts = 64;
  std::uint64_t seed = kDefaultSeed;
  int samples = 100;
};

int do_verify(const VerifyArgs& args, bool as_json, std::ostream& out) {
  bool violated = false;
  json doc{{"schema", "wcflab.verify/1"}, {"seed", args.seed}, {"restarts", args.restarts}};

  if (!args.file.empty()) {
    const Protocol p = parse_protocol(read_file(args.file));
    const CheatReport report = analyze(p);
    violated = report.fair_bound_holds == BoundVerdict::Violated;
    json checks = json::array();
    for (Outcome w : {Outcome::Zero, Outcome::One}) {
      const double closed_prep = preparer_max(p, w).probability;
      if (p.dim_a() * p.dim_b() <= kMaxPreparerDimension) {
        const OracleResult found = preparer_oracle(p, w, args.restarts, args.seed);
        checks.push_back({{"strategy", "preparer_" + std::to_string(index(w))},
                          {"closed_form", closed_prep},
                          {"oracle", found.value},
                          {"gap", closed_prep - found.value},
                          {"converged", found.converged}});
      }
      const double closed_recv = receiver_max(p, w).probability;
      if (p.dim_b() <= kMaxReceiverDimB) {
        const OracleResult found = receiver_oracle(p, w, args.restarts, args.seed);
        checks.push_back({{"strategy", "receiver_" + std::to_string(index(w))},
                          {"closed_form", closed_recv},
                          {"oracle", found.value},
                          {"gap", closed_recv - found.value},
                          {"converged", found.converged}});
      }
    }
    doc["protocol"] = {{"file", args.file}, {"report", to_json(report)}, {"oracle", checks}};
  }

  const AuditReport audit = audit_labels(args.samples, args.seed);
  violated = violated || audit.bound_violations > 0;
  doc["audit"] = to_json(audit);
  doc["bound_violation"] = violated;

  if (as_json) {
    out << doc.dump(2) << "\n";
  } else {
    out << "seed " << args.seed << ", restarts " << args.restarts << "\n";
    if (doc.contains("protocol")) {
      const json& report = doc["protocol"]["report"];
      out << "\n" << args.file << ": P_A*P_B = " << fixed(report["product"].get<double>())
          << ", bound " << report["fair_bound_holds"].get<std::string>() << "\n";
      out << std::left << std::setw(14) << "strategy" << std::setw(14) << "closed form" << std::setw(14)
          << "oracle" << "converged\n";
      for (const json& c : doc["protocol"]["oracle"]) {
        out << std::setw(14) << c["strategy"].get<std::string>() << std::setw(14)
            << fixed(c["closed_form"].get<double>()) << std::setw(14) << fixed(c["oracle"].get<double>())
            << (c["converged"].get<bool>() ? "yes" : "no") << "\n";
      }
    }
    out << "\nlabel audit over " << audit.sample_count << " random fair 2x2 protocols\n";
    for (const AuditPairing& pair : audit.pairings) {
      out << "  " << std::left << std::setw(10) << pair.formula << " vs " << std::setw(12) << pair.operational
          << " max deviation " << std::scientific << std::setprecision(3) << pair.max_deviation
          << std::defaultfloat << (pair.matches ? "  MATCH" : "") << "\n";
    }
    if (audit.sample_count > 0) {
      out << "  smallest P_A*P_B " << fixed(audit.min_product) << ", violations " << audit.bound_violations << "\n";
    }
    out << "\nbound " << (violated ? "VIOLATED" : "holds") << "\n";
  }
  return violated ? kExitBoundViolation : kExitOk;
}

struct SimulateArgs {
  std::string file;
  std::int64_t rounds = 100000;
  std::string alice = "honest";
  std::string bob = "honest";
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> target;
  std::string labeling = "printed";
};

int do_simulate(const SimulateArgs& args, bool as_json, std::ostream& out) {
  const Protocol p = parse_protocol(read_file(args.file));
  const Labeling labeling = labeling_from_string(args.labeling);
  // by default each cheater aims at the outcome credited to them
  const Outcome alice_goal = labeling == Labeling::Printed ? Outcome::One : Outcome::Zero;
  auto make = [&](const std::string& kind, Role role, Outcome goal) {
    if (kind == "honest") return Strategy::honest(role);
    if (kind == "cheat") return Strategy::optimal_cheat(role, args.target ? outcome_from_int(*args.target) : goal);
    throw Error(ErrorKind::OutOfRange, "strategy must be 'honest' or 'cheat', got '" + kind + "'");
  };
  const Strategy alice = make(args.alice, Role::Preparer, alice_goal);
  const Strategy bob = make(args.bob, Role::Receiver, flip(alice_goal));
  const BatchStats stats = run_batch(p, alice, bob, args.rounds, args.seed, labeling);

  if (as_json) {
    json doc{{"schema", "wcflab.simulate/1"},
             {"seed", args.seed},
             {"alice", describe(alice)},
             {"bob", describe(bob)},
             {"labeling", to_string(labeling)},
             {"stats", to_json(stats)}};
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  Table(out)
      .row("alice / bob", describe(alice) + " / " + describe(bob))
      .row("labeling", std::string(to_string(labeling)))
      .row("seed", std::to_string(args.seed))
      .row("rounds", std::to_string(stats.rounds))
      .row("outcome 0", fixed(stats.freq_outcome0))
      .row("A wins", fixed(stats.freq_win_A))
      .row("B wins", fixed(stats.freq_win_B))
      .row("caught", fixed(stats.freq_caught) + "  (A " + fixed(stats.freq_caught_A) + ", B " +
                         fixed(stats.freq_caught_B) + ")")
      .row("standard error", fixed(stats.standard_error));
  return kExitOk;
}

struct SearchArgs {
  int dim = 2;
  int restarts = 200;
  std::uint64_t seed = kDefaultSeed;
};

int do_search(const SearchArgs& args, bool as_json, std::ostream& out) {
  const SearchResult result = search_fair_minimum(args.dim, args.restarts, args.seed);
  if (as_json) {
    json doc = to_json(result);
    doc["dim"] = args.dim;
    doc["restarts"] = args.restarts;
    doc["seed"] = args.seed;
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  Table(out)
      .row("dim", std::to_string(args.dim))
      .row("restarts", std::to_string(args.restarts))
      .row("seed", std::to_string(args.seed))
      .row("best max(P_A,P_B)", fixed(result.best_max, 9))
      .row("1/sqrt(2)", fixed(1.0 / std::sqrt(2.0), 9))
      .row("a", list(result.best_profile.a()))
      .row("b", list(result.best_profile.b()));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wcflab: analysis laboratory for two-message weak coin flipping protocols", "wcflab"};
  app.require_subcommand(1, 1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable JSON output");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form cheat analysis of a protocol file");
  analyze_cmd->add_option("protocol", analyze_args.file, "Protocol JSON file")->required();
  analyze_cmd->add_option("--fairness-tol", analyze_args.fairness_tol, "Tolerance on |p0 - 1/2|");
  analyze_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  AlignArgs align_args;
  auto* align_cmd = app.add_subcommand("align", "Rewrite a protocol in the eigenbasis of E0");
  align_cmd->add_option("protocol", align_args.file, "Protocol JSON file")->required();
  align_cmd->add_option("-o,--output", align_args.output, "Write the aligned protocol here");
  align_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  FrontierArgs frontier_args;
  auto* frontier_cmd = app.add_subcommand("frontier", "Construct a fair protocol with P_A * P_B = 1/2");
  frontier_cmd->add_option("--pa", frontier_args.target, "Target cheat probability in [0.5, 1]")->required();
  frontier_cmd->add_option("--family", frontier_args.family, "paper | operational")
      ->check(CLI::IsMember({"paper", "operational"}));
  frontier_cmd->add_option("-o,--output", frontier_args.output, "Write the protocol here");
  frontier_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Brute-force oracles and label audit");
  verify_cmd->add_option("protocol", verify_args.file, "Optional protocol JSON file");
  verify_cmd->add_option("--restarts", verify_args.restarts, "Oracle restarts")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_args.seed, "Random seed");
  verify_cmd->add_option("--samples", verify_args.samples, "Audit sample count")->check(CLI::NonNegativeNumber);
  verify_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rounds of the protocol");
  simulate_cmd->add_option("protocol", simulate_args.file, "Protocol JSON file")->required();
  simulate_cmd->add_option("--rounds", simulate_args.rounds, "Number of rounds")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--alice", simulate_args.alice, "honest | cheat")
      ->check(CLI::IsMember({"honest", "cheat"}));
  simulate_cmd->add_option("--bob", simulate_args.bob, "honest | cheat")->check(CLI::IsMember({"honest", "cheat"}));
  simulate_cmd->add_option("--seed", simulate_args.seed, "Random seed");
  simulate_cmd->add_option("--target", simulate_args.target, "Outcome the cheater aims for")->check(CLI::Range(0, 1));
  simulate_cmd->add_option("--labeling", simulate_args.labeling, "printed | mirrored")
      ->check(CLI::IsMember({"printed", "mirrored"}));
  simulate_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Search fair profiles for the smallest max(P_A, P_B)");
  search_cmd->add_option("--dim", search_args.dim, "Profile length in [2, 8]");
  search_cmd->add_option("--restarts", search_args.restarts, "Random restarts")->check(CLI::PositiveNumber);
  search_cmd->add_option("--seed", search_args.seed, "Random seed");
  search_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (*analyze_cmd) return do_analyze(analyze_args, as_json, out);
    if (*align_cmd) return do_align(align_args, as_json, out);
    if (*frontier_cmd) return do_frontier(frontier_args, as_json, out);
    if (*verify_cmd) return do_verify(verify_args, as_json, out);
    if (*simulate_cmd) return do_simulate(simulate_args, as_json, out);
    if (*search_cmd) return do_search(search_args, as_json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace wcf
