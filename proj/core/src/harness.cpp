#include "slfr/harness.hpp"

#include <algorithm>
#include <limits>

namespace slfr {

namespace {

std::string rational_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string describe(const Error& e) { return e.what(); }

}  // namespace

std::string to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Unique: return "unique";
    case OracleStatus::Underdetermined: return "underdetermined";
    case OracleStatus::Infeasible: return "infeasible";
  }
  return "?";
}

OracleResult oracle_beta(const IndexSet& A, const TransformedDemand& td, const EncodingCoefficients& alpha,
                         std::optional<FieldElement> root) {
  const FieldSpec& f = alpha.field();
  const FieldElement rho = root.value_or(f.minus_one());
  const IndexSet U = A | td.leaders;
  const int t = A.size() - 1;

  std::vector<IndexSet> unknowns;
  for (const IndexSet& S : enumerate_subsets(U, t + 1)) {
    if (S != A) unknowns.push_back(S);
  }
  std::map<IndexSet, std::size_t> col;
  for (std::size_t i = 0; i < unknowns.size(); ++i) col.emplace(unknowns[i], i);

  const auto Ts = enumerate_subsets(U, t);
  const std::size_t rows = Ts.size() * static_cast<std::size_t>(td.r);
  FqMatrix M(f, rows, unknowns.size());
  std::vector<FieldElement> rhs(rows, f.zero());
  std::size_t row = 0;
  for (const IndexSet& T : Ts) {
    for (int l : td.leaders) {
      for (int k : U - T) {
        const IndexSet S = T.with(k);
        const FieldElement coef = alpha.at(k, T) * td.entry(k, l);
        if (S == A) {
          rhs[row] -= rho * coef;
        } else {
          const std::size_t c = col.at(S);
          M.set(row, c, M.at(row, c) + coef);
        }
      }
      ++row;
    }
  }

  OracleResult out;
  if (unknowns.empty() || rows == 0) {
    const bool consistent = std::all_of(rhs.begin(), rhs.end(), [](const FieldElement& v) { return v.is_zero(); });
    if (!consistent) return out;
    out.nullity = unknowns.size();
    out.status = out.nullity == 0 ? OracleStatus::Unique : OracleStatus::Underdetermined;
    out.beta.emplace(A, rho);
    for (const IndexSet& S : unknowns) out.beta.emplace(S, f.zero());
    return out;
  }
  const auto sol = solve_general(M, FqMatrix::column(rhs));
  if (!sol) return out;
  out.nullity = sol->nullity;
  out.status = sol->nullity == 0 ? OracleStatus::Unique : OracleStatus::Underdetermined;
  out.beta.emplace(A, rho);
  for (std::size_t i = 0; i < unknowns.size(); ++i) out.beta.emplace(unknowns[i], sol->particular[i]);
  return out;
}

bool in_solution_set(const IndexSet& A, const TransformedDemand& td, const EncodingCoefficients& alpha,
                     const std::map<IndexSet, FieldElement>& beta, std::optional<FieldElement> root) {
  auto it = beta.find(A);
  if (it == beta.end() || it->second != root.value_or(alpha.field().minus_one())) return false;
  return check_reconstruction_identity(A, td, alpha, beta).empty();
}

FieldElement random_element(const FieldSpec& f, std::mt19937_64& rng) {
  return FieldElement(f, std::uniform_int_distribution<std::uint32_t>(0, f.q() - 1)(rng));
}

FieldElement random_nonzero(const FieldSpec& f, std::mt19937_64& rng) {
  return FieldElement(f, std::uniform_int_distribution<std::uint32_t>(1, f.q() - 1)(rng));
}

FqMatrix random_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, f.q() - 1);
  FqMatrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set_raw(r, c, pick(rng));
  }
  return m;
}

DemandMatrix random_demand_of_rank(const FieldSpec& f, int K, int N, int r, std::mt19937_64& rng) {
  if (r < 0 || r > std::min(K, N)) throw Error(ErrorCode::InvalidArguments, "rank must lie in [0, min(K, N)]");
  const auto k = static_cast<std::size_t>(K);
  const auto n = static_cast<std::size_t>(N);
  if (r == 0) return {FqMatrix(f, k, n)};
  const auto rr = static_cast<std::size_t>(r);
  FqMatrix left = random_matrix(f, k, rr, rng);
  while (rank(left) != rr) left = random_matrix(f, k, rr, rng);
  FqMatrix right = random_matrix(f, rr, n, rng);
  while (rank(right) != rr) right = random_matrix(f, rr, n, rng);
  return {left * right};
}

DemandMatrix random_demand(const FieldSpec& f, int K, int N, std::mt19937_64& rng) {
  return {random_matrix(f, static_cast<std::size_t>(K), static_cast<std::size_t>(N), rng)};
}

bool is_nondegenerate(const TransformedDemand& td, int t) {
  const int K = static_cast<int>(td.Dprime.rows());
  const IndexSet rest = IndexSet::range(1, K) - td.leaders;
  if (rest.size() < t + 1) return true;
  for (const IndexSet& A : enumerate_subsets(rest, t + 1)) {
    for (const IndexSet& S : enumerate_subsets(A | td.leaders, t + 1)) {
      if (td.minor_det(A - S, S - A).is_zero()) return false;
    }
  }
  return true;
}

std::optional<DemandMatrix> random_nondegenerate_demand(const FieldSpec& f, int K, int N, int r, int t,
                                                        std::mt19937_64& rng, int attempts) {
  for (int i = 0; i < attempts; ++i) {
    DemandMatrix D = random_demand_of_rank(f, K, N, r, rng);
    if (is_nondegenerate(select_leaders(D), t)) return D;
  }
  return std::nullopt;
}

void for_each_demand(const FieldSpec& f, int K, int N, const std::function<void(const DemandMatrix&)>& fn) {
  const std::size_t cells = static_cast<std::size_t>(K) * static_cast<std::size_t>(N);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    if (total > kExhaustiveBudget / f.q() + 1) {
      total = kExhaustiveBudget + 1;
      break;
    }
    total *= f.q();
  }
  if (total > kExhaustiveBudget) {
    throw Error(ErrorCode::BudgetExceeded, "q^(KN) exceeds the exhaustive budget of 2^20 matrices");
  }
  FqMatrix D(f, static_cast<std::size_t>(K), static_cast<std::size_t>(N));
  std::vector<std::uint32_t> digits(cells, 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < cells; ++i) D.set_raw(i / N, i % N, digits[i]);
    fn(DemandMatrix{D});
    for (std::size_t i = cells; i-- > 0;) {
      if (++digits[i] < f.q()) break;
      digits[i] = 0;
    }
  }
}

std::string AlphaChoice::name() const {
  switch (strategy) {
    case AlphaStrategy::Wan: return "wan";
    case AlphaStrategy::RandomFree: return "random-free";
    case AlphaStrategy::Fixed: return "fixed";
  }
  return "?";
}

EncodingCoefficients choose_alpha(const AlphaChoice& choice, const SchemeParams& params, const IndexSet& leaders,
                                  std::mt19937_64& rng) {
  switch (choice.strategy) {
    case AlphaStrategy::Wan: return wan_alpha(params, leaders);
    case AlphaStrategy::RandomFree: {
      const auto status = greedy_free_coefficients(build_graph(params, leaders));
      return random_feasible_alpha(status, params, rng);
    }
    case AlphaStrategy::Fixed:
      if (!choice.fixed) throw Error(ErrorCode::InvalidArguments, "fixed alpha strategy without coefficients");
      if (&choice.fixed->field() != params.field) {
        throw Error(ErrorCode::MismatchedField, "coefficients over " + choice.fixed->field().name());
      }
      return *choice.fixed;
  }
  throw Error(ErrorCode::InvalidArguments, "unknown alpha strategy");
}

bool TrialReport::success() const {
  if (!errors.empty() || !oracle_agrees || identity_violations != 0) return false;
  if (decoded.empty()) return false;
  return std::all_of(decoded.begin(), decoded.end(), [](bool b) { return b; });
}

nlohmann::json TrialReport::to_json() const {
  return {{"params", params},
          {"D", demand},
          {"seed", seed},
          {"alpha", alpha},
          {"leaders", leaders.to_json()},
          {"load",
           {{"measured", rational_string(measured_load)},
            {"theoretical", rational_string(theoretical_load)},
            {"for_rank", rational_string(rank_load)},
            {"header_symbols", header_symbols}}},
          {"decoded", decoded},
          {"oracle_agrees", oracle_agrees},
          {"identity_violations", identity_violations},
          {"reconstructed", reconstructed},
          {"errors", errors},
          {"success", success()}};
}

TrialReport simulate(const SchemeParams& params, const DemandMatrix& D, const AlphaChoice& choice, std::uint64_t seed) {
  TrialReport rep;
  rep.seed = seed;
  rep.alpha = choice.name();
  rep.demand = D.D.to_ints();
  std::mt19937_64 rng(seed);
  try {
    params.validate();
    rep.params = params.to_json();
    if (D.users() != params.K || D.files() != params.N || &D.D.field() != params.field) {
      throw Error(ErrorCode::InvalidDemand, "demand matrix does not match (K, N, q)");
    }
    const TransformedDemand td = select_leaders(D);
    rep.leaders = td.leaders;
    rep.theoretical_load = theoretical_load(params.K, params.t, params.N);
    rep.rank_load = theoretical_load(params.K, params.t, td.r);
    rep.header_symbols = header_symbols(params.K, td.r, params.field->q());

    const Library lib = Library::random(params, rng);
    const Placement placement = make_placement(params);
    const EncodingCoefficients alpha = choose_alpha(choice, params, td.leaders, rng);
    const Delivery delivery = build_messages(lib, placement, D, td, alpha);
    rep.measured_load = measured_load(delivery.sent, params.B);

    MessageMap sent;
    for (const auto& m : delivery.sent) sent.emplace(m.S, m);
    MessageMap all = sent;
    for (const IndexSet& A : delivery.unsent) {
      const MulticastMessage truth = make_message(lib, placement, D, alpha, A);
      const DecodingCoefficients dc = closed_form_decoding(A, td, alpha);
      const auto violations = check_reconstruction_identity(A, td, alpha, dc.beta);
      rep.identity_violations += violations.size();
      const OracleResult oracle = oracle_beta(A, td, alpha);
      const bool agrees = oracle.status != OracleStatus::Infeasible && violations.empty() &&
                          (oracle.status != OracleStatus::Unique || oracle.beta == dc.beta);
      rep.oracle_agrees = rep.oracle_agrees && agrees;
      try {
        all.emplace(A, reconstruct_unsent_checked(A, sent, dc.beta, truth));
        ++rep.reconstructed;
      } catch (const Error& e) {
        rep.errors.push_back(describe(e));
        all.emplace(A, reconstruct_unsent(A, sent, dc.beta, truth.payload.size()));
      }
    }

    rep.decoded.assign(static_cast<std::size_t>(params.K), false);
    for (int k = 1; k <= params.K; ++k) {
      try {
        const UserCache cache = fill_cache(lib, placement, k);
        rep.decoded[k - 1] = user_decode(cache, placement, D, all, alpha) == demand_vector(lib, D, k);
      } catch (const Error& e) {
        rep.errors.push_back("user " + std::to_string(k) + ": " + describe(e));
      }
    }
  } catch (const Error& e) {
    rep.errors.push_back(describe(e));
  }
  return rep;
}

nlohmann::json SweepSummary::to_json() const {
  nlohmann::json f = nlohmann::json::array();
  for (const auto& r : failures) f.push_back(r.to_json());
  return {{"trials", trials}, {"passed", passed}, {"ok", ok()}, {"failures", f}};
}

SweepSummary sweep(const SweepConfig& config, const std::function<void(const TrialReport&)>& on_trial) {
  constexpr std::size_t kKeptFailures = 20;
  const SchemeParams& p = config.params;
  p.validate();
  SweepSummary summary;
  auto run = [&](const DemandMatrix& D) {
    TrialReport rep = simulate(p, D, config.alpha, config.seed + summary.trials);
    ++summary.trials;
    if (rep.success()) {
      ++summary.passed;
    } else if (summary.failures.size() < kKeptFailures) {
      summary.failures.push_back(rep);
    }
    if (on_trial) on_trial(rep);
  };
  if (config.exhaustive) {
    for_each_demand(*p.field, p.K, p.N, run);
    return summary;
  }
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 0; i < config.samples; ++i) {
    run(config.rank ? random_demand_of_rank(*p.field, p.K, p.N, *config.rank, rng)
                    : random_demand(*p.field, p.K, p.N, rng));
  }
  return summary;
}

}  // namespace slfr
