#include "wcf/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ascent.hpp"
#include "wcf/cheating.hpp"
#include "wcf/error.hpp"
#include "wcf/rng.hpp"
#include "wcf/sampling.hpp"

namespace wcf {

namespace {

using qla::Complex;

std::vector<double> interleave(const ComplexMatrix& m, bool row_major) {
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(m.size()));
  const Eigen::Index outer = row_major ? m.rows() : m.cols();
  const Eigen::Index inner = row_major ? m.cols() : m.rows();
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index i = 0; i < inner; ++i) {
      const Complex z = row_major ? m(o, i) : m(i, o);
      out.push_back(z.real());
      out.push_back(z.imag());
    }
  }
  return out;
}

// Unit vector on C^n with the global phase removed, as 2n - 2 hyperspherical
// angles over the real coordinates (Re v0, Re v1, Im v1, ..., Re v_{n-1}, Im v_{n-1}).
class PreparerProblem {
 public:
  explicit PreparerProblem(ComplexVector target) : target_(std::move(target)) {}

  std::size_t coordinates() const { return 2 * static_cast<std::size_t>(target_.size()) - 1; }

  ComplexVector state(const std::vector<double>& theta) const {
    const std::size_t m = coordinates();
    std::vector<double> y(m);
    double s = 1.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      y[k] = s * std::cos(theta[k]);
      s *= std::sin(theta[k]);
    }
    y[m - 1] = s;
    ComplexVector v(target_.size());
    v(0) = y[0];
    for (Eigen::Index k = 1; k < v.size(); ++k) {
      v(k) = Complex(y[static_cast<std::size_t>(2 * k - 1)], y[static_cast<std::size_t>(2 * k)]);
    }
    return v;
  }

  std::vector<double> angles(ComplexVector v) const {
    if (std::abs(v(0)) > 0.0) v *= std::conj(v(0)) / std::abs(v(0));
    const std::size_t m = coordinates();
    std::vector<double> y(m);
    y[0] = v(0).real();
    for (Eigen::Index k = 1; k < v.size(); ++k) {
      y[static_cast<std::size_t>(2 * k - 1)] = v(k).real();
      y[static_cast<std::size_t>(2 * k)] = v(k).imag();
    }
    std::vector<double> theta(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      if (k + 2 == m) {
        theta[k] = std::atan2(y[m - 1], y[m - 2]);
      } else {
        double tail = 0.0;
        for (std::size_t j = k + 1; j < m; ++j) tail += y[j] * y[j];
        theta[k] = std::atan2(std::sqrt(tail), y[k]);
      }
    }
    return theta;
  }

  double value(const std::vector<double>& theta) const {
    return std::norm(target_.dot(state(theta)));
  }

  std::vector<double> gradient(const std::vector<double>& x, double h) const {
    return detail::central_gradient(*this, x, h);
  }

  void accept(std::vector<double>&) {}

 private:
  ComplexVector target_;
};

// Hermitian generator from D^2 reals: D diagonal entries, then (re, im) of
// each strictly upper entry in row order.
ComplexMatrix generator(const std::vector<double>& theta, Eigen::Index d) {
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) g(i, i) = theta[k++];
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = r + 1; c < d; ++c) {
      g(r, c) = Complex(theta[k], theta[k + 1]);
      g(c, r) = std::conj(g(r, c));
      k += 2;
    }
  }
  return g;
}

// Columns of exp(+-i h G_k) that act on the ancilla's |0>, for every basis
// generator G_k. Independent of where the chart is centered.
struct ProbeSteps {
  std::vector<ComplexMatrix> plus;
  std::vector<ComplexMatrix> minus;
};

ProbeSteps probe_steps(int dim_b, double h) {
  const int anc = dim_b * dim_b;
  const Eigen::Index d = static_cast<Eigen::Index>(dim_b) * anc;
  const auto params = static_cast<std::size_t>(d * d);
  ProbeSteps steps;
  std::vector<double> theta(params, 0.0);
  for (std::size_t k = 0; k < params; ++k) {
    for (double sign : {1.0, -1.0}) {
      theta[k] = sign * h;
      const ComplexMatrix u = qla::unitary_exp(generator(theta, d));
      ComplexMatrix cols(d, dim_b);
      for (int j = 0; j < dim_b; ++j) cols.col(j) = u.col(static_cast<Eigen::Index>(j) * anc);
      (sign > 0 ? steps.plus : steps.minus).push_back(std::move(cols));
    }
    theta[k] = 0.0;
  }
  return steps;
}

class ReceiverProblem {
 public:
  ReceiverProblem(ComplexMatrix overlap, int dim_b, ComplexMatrix base, const ProbeSteps& steps, double h)
      : overlap_(std::move(overlap)), dim_b_(dim_b), anc_(dim_b * dim_b), base_(std::move(base)),
        steps_(steps), h_(h) {}

  std::size_t parameters() const { return static_cast<std::size_t>(base_.size()); }
  const ComplexMatrix& base() const { return base_; }

  double value(const std::vector<double>& theta) const {
    const ComplexMatrix u = base_ * qla::unitary_exp(generator(theta, base_.rows()));
    ComplexMatrix cols(u.rows(), dim_b_);
    for (int j = 0; j < dim_b_; ++j) cols.col(j) = u.col(static_cast<Eigen::Index>(j) * anc_);
    return score(cols);
  }

  std::vector<double> gradient(const std::vector<double>& x, double h) const {
    const bool centered = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
    if (!centered || h != h_) return detail::central_gradient(*this, x, h);
    std::vector<double> grad(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      grad[k] = (score(base_ * steps_.plus[k]) - score(base_ * steps_.minus[k])) / (2.0 * h);
    }
    return grad;
  }

  void accept(std::vector<double>& x) {
    base_ = base_ * qla::unitary_exp(generator(x, base_.rows()));
    std::fill(x.begin(), x.end(), 0.0);
  }

 private:
  // sum_k |<psi_w| (I (x) K_k) |psi>|^2 with K_k(j', j) = cols(j' anc + k, j)
  double score(const ComplexMatrix& cols) const {
    double total = 0.0;
    for (int k = 0; k < anc_; ++k) {
      Complex amp = 0.0;
      for (int jp = 0; jp < dim_b_; ++jp) {
        for (int j = 0; j < dim_b_; ++j) {
          amp += cols(static_cast<Eigen::Index>(jp) * anc_ + k, j) * overlap_(jp, j);
        }
      }
      total += std::norm(amp);
    }
    return total;
  }

  ComplexMatrix overlap_;
  int dim_b_;
  int anc_;
  ComplexMatrix base_;
  const ProbeSteps& steps_;
  double h_;
};

void check_restarts(int restarts) {
  if (restarts < 1) throw Error(ErrorKind::OutOfRange, "restarts must be at least 1");
}

struct RestartOutcome {
  double value;
  std::vector<double> descriptor;
};

OracleResult summarize(std::vector<RestartOutcome> outcomes) {
  OracleResult result;
  result.restarts_used = static_cast<int>(outcomes.size());
  double second = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (r != best) second = std::max(second, outcomes[r].value);
  }
  result.value = outcomes[best].value;
  result.argmax_descriptor = std::move(outcomes[best].descriptor);
  result.converged = outcomes.size() >= 2 && result.value - second <= 1e-6;
  return result;
}

}  // namespace

OracleResult preparer_oracle(const Protocol& p, Outcome w, int restarts, std::uint64_t seed,
                             const AscentOptions& options) {
  check_restarts(restarts);
  const int n = p.dim_a() * p.dim_b();
  if (n > kMaxPreparerDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "preparer oracle supports dA*dB <= 36, got " + std::to_string(n));
  }
  if (outcome_prob(p, w) < kDegenerateOutcome) return OracleResult{0.0, {}, 0, true};

  const BipartiteState target = post_measurement_state(p, w);
  // overlap <psi_w| (I (x) sqrt(E_w)) |psi'> = <chi|psi'>
  const ComplexVector chi = qla::apply_on_b(sqrt_effect(p, w), target.amplitudes, p.dim_a(), p.dim_b());

  std::vector<RestartOutcome> outcomes;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    PreparerProblem problem(chi);
    const auto start = problem.angles(sampling::random_unit_vector(n, rng));
    detail::AscentOutcome run = detail::ascend(problem, start, options);
    ComplexVector best = problem.state(run.x);
    outcomes.push_back({run.value, interleave(best, true)});
  }
  return summarize(std::move(outcomes));
}

OracleResult receiver_oracle(const Protocol& p, Outcome w, int restarts, std::uint64_t seed,
                             const AscentOptions& options) {
  check_restarts(restarts);
  if (p.dim_b() > kMaxReceiverDimB) {
    throw Error(ErrorKind::DimensionTooLarge,
                "receiver oracle supports dB <= 4, got " + std::to_string(p.dim_b()));
  }
  if (outcome_prob(p, w) < kDegenerateOutcome) return OracleResult{0.0, {}, 0, true};

  const int dim_b = p.dim_b();
  const Eigen::Index d = static_cast<Eigen::Index>(dim_b) * dim_b * dim_b;
  const ComplexMatrix overlap =
      post_measurement_state(p, w).coefficients().adjoint() * p.psi().coefficients();
  const ProbeSteps steps = probe_steps(dim_b, options.fd_step);

  std::vector<RestartOutcome> outcomes;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    ReceiverProblem problem(overlap, dim_b, sampling::random_unitary(d, rng), steps, options.fd_step);
    detail::AscentOutcome run =
        detail::ascend(problem, std::vector<double>(problem.parameters(), 0.0), options);
    outcomes.push_back({run.value, interleave(problem.base(), true)});
  }
  return summarize(std::move(outcomes));
}

std::vector<ComplexMatrix> kraus_from_dilation(const std::vector<double>& descriptor, int dim_b) {
  const int anc = dim_b * dim_b;
  const int d = dim_b * anc;
  if (dim_b < 1 || descriptor.size() != 2 * static_cast<std::size_t>(d) * d) {
    throw Error(ErrorKind::DimensionMismatch, "dilation descriptor does not match dB = " + std::to_string(dim_b));
  }
  auto entry = [&](int row, int col) {
    const std::size_t at = 2 * (static_cast<std::size_t>(row) * d + col);
    return Complex(descriptor[at], descriptor[at + 1]);
  };
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < anc; ++k) {
    ComplexMatrix op(dim_b, dim_b);
    for (int jp = 0; jp < dim_b; ++jp) {
      for (int j = 0; j < dim_b; ++j) op(jp, j) = entry(jp * anc + k, j * anc);
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

AuditReport audit_labels(int sample_count, std::uint64_t seed) {
  AuditReport report;
  report.sample_count = std::max(sample_count, 0);
  report.seed = seed;
  if (report.sample_count == 0) return report;

  const std::array<const char*, 2> formulas{"paper_pa", "paper_pb"};
  const std::array<const char*, 4> operational{"preparer_0", "preparer_1", "receiver_0", "receiver_1"};
  std::array<std::array<double, 4>, 2> worst{};
  report.min_product = std::numeric_limits<double>::infinity();

  for (int s = 0; s < report.sample_count; ++s) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(s));
    const Protocol p = sampling::random_fair_protocol(2, 2, rng);
    const std::array<double, 2> printed{paper_pa(p), paper_pb(p)};
    const std::array<double, 4> ops{
        preparer_max(p, Outcome::Zero).probability, preparer_max(p, Outcome::One).probability,
        receiver_max(p, Outcome::Zero).probability, receiver_max(p, Outcome::One).probability};
    for (std::size_t f = 0; f < printed.size(); ++f) {
      for (std::size_t o = 0; o < ops.size(); ++o) {
        worst[f][o] = std::max(worst[f][o], std::abs(printed[f] - ops[o]));
      }
    }
    const double product = printed[0] * printed[1];
    report.min_product = std::min(report.min_product, product);
    if (p.fair() && product < 0.5 - kBoundSlack) ++report.bound_violations;
  }

  for (std::size_t f = 0; f < formulas.size(); ++f) {
    for (std::size_t o = 0; o < operational.size(); ++o) {
      report.pairings.push_back(
          {formulas[f], operational[o], worst[f][o], worst[f][o] < kAuditMatchTolerance});
    }
  }
  return report;
}

namespace {

double symmetric_objective(const std::vector<double>& a, const std::vector<double>& b) {
  double pa = 0.0;
  double root = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa += a[i] * b[i] * b[i];
    root += a[i] * std::sqrt(b[i]);
  }
  return std::max(2.0 * pa, 2.0 * root * root);
}

// Projects a proposal back to a fair profile; false when infeasible.
bool project_fair(std::vector<double>& a, std::vector<double>& b) {
  double total = 0.0;
  for (double& x : a) total += (x = std::max(x, 0.0));
  if (total <= 0.0) return false;
  for (double& x : a) x /= total;
  double honest0 = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) honest0 += a[i] * (b[i] = std::clamp(b[i], 0.0, 1.0));
  if (honest0 < 1e-12) return false;
  for (double& x : b) {
    x *= 0.5 / honest0;
    if (x > 1.0) return false;
  }
  return true;
}

}  // namespace

SearchResult search_fair_minimum(int dim, int restarts, std::uint64_t seed) {
  if (dim < 2 || dim > 8) {
    throw Error(ErrorKind::BadDimension, "search dimension must be in [2, 8], got " + std::to_string(dim));
  }
  check_restarts(restarts);

  std::vector<double> best_a;
  std::vector<double> best_b;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> trace;

  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
    const DiagonalProfile start = sampling::random_fair_profile(dim, rng);
    std::vector<double> a = start.a();
    std::vector<double> b = start.b();
    double f = symmetric_objective(a, b);

    // (1+1) evolution strategy with the one-fifth success rule
    double sigma = 0.1;
    for (int it = 0; it < 20000 && sigma > 1e-10; ++it) {
      std::vector<double> ta = a;
      std::vector<double> tb = b;
      for (double& x : ta) x += sigma * rng.normal();
      for (double& x : tb) x += sigma * rng.normal();
      if (!project_fair(ta, tb)) {
        sigma *= 0.9;
        continue;
      }
      const double ft = symmetric_objective(ta, tb);
      if (ft < f) {
        a = std::move(ta);
        b = std::move(tb);
        f = ft;
        sigma = std::min(sigma * 1.5, 0.5);
      } else {
        sigma *= 0.9;
      }
    }
    if (f < best) {
      best = f;
      best_a = a;
      best_b = b;
      trace.emplace_back(r, best);
    }
  }
  return SearchResult{DiagonalProfile::make(best_a, best_b), best, std::move(trace)};
}

nlohmann::json to_json(const OracleResult& result) {
  return nlohmann::json{{"schema", kOracleSchema},
                        {"value", result.value},
                        {"argmax_descriptor", result.argmax_descriptor},
                        {"restarts_used", result.restarts_used},
                        {"converged", result.converged}};
}

nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json pairings = nlohmann::json::array();
  nlohmann::json matches = nullptr;
  if (!report.pairings.empty()) {
    matches = nlohmann::json{{"paper_pa", nlohmann::json::array()}, {"paper_pb", nlohmann::json::array()}};
  }
  for (const AuditPairing& entry : report.pairings) {
    pairings.push_back({{"formula", entry.formula},
                        {"operational", entry.operational},
                        {"max_deviation", entry.max_deviation},
                        {"matches", entry.matches}});
    if (entry.matches) matches[entry.formula].push_back(entry.operational);
  }
  nlohmann::json out{{"schema", kAuditSchema},
                     {"samples", report.sample_count},
                     {"seed", report.seed},
                     {"pairings", pairings},
                     {"matches", matches}};
  if (report.sample_count > 0) {
    out["min_product"] = report.min_product;
    out["bound_violations"] = report.bound_violations;
  }
  return out;
}

nlohmann::json to_json(const SearchResult& result) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [restart, value] : result.trace) trace.push_back({restart, value});
  return nlohmann::json{{"schema", kSearchSchema},
                        {"best_max", result.best_max},
                        {"a", result.best_profile.a()},
                        {"b", result.best_profile.b()},
                        {"p0", result.best_profile.p0()},
                        {"trace", trace}};
}

}  // namespace wcf
