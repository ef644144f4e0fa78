#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/codec.hpp"
#include "slfr/field.hpp"
#include "slfr/graph.hpp"
#include "slfr/scheme.hpp"

namespace slfr {

enum class OracleStatus { Unique, Underdetermined, Infeasible };

std::string to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::Infeasible;
  std::size_t nullity = 0;
  /// A particular solution (free unknowns zero) including β_A = root;
  /// empty when infeasible.
  std::map<IndexSet, FieldElement> beta;
};

/// Brute-force solve of the reconstruction identity over the unknowns
/// {β_S : S ∈ Ω_{A∪L}^{t+1}, S != A} with β_A fixed to `root` (default -1):
/// one equation per (T ∈ Ω_{A∪L}^t, leader ℓ).
OracleResult oracle_beta(const IndexSet& A, const TransformedDemand& td, const EncodingCoefficients& alpha,
                         std::optional<FieldElement> root = std::nullopt);

/// β satisfies every equation of that system and β_A = root.
bool in_solution_set(const IndexSet& A, const TransformedDemand& td, const EncodingCoefficients& alpha,
                     const std::map<IndexSet, FieldElement>& beta, std::optional<FieldElement> root = std::nullopt);

FieldElement random_element(const FieldSpec& f, std::mt19937_64& rng);
FieldElement random_nonzero(const FieldSpec& f, std::mt19937_64& rng);
FqMatrix random_matrix(const FieldSpec& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng);
/// Uniform K x N matrix of rank exactly r (r <= min(K, N)).
DemandMatrix random_demand_of_rank(const FieldSpec& f, int K, int N, int r, std::mt19937_64& rng);
/// Uniform over all q^{KN} matrices.
DemandMatrix random_demand(const FieldSpec& f, int K, int N, std::mt19937_64& rng);

/// Every D'[A\S, S\A] with A ∈ Ω_{[K]\L}^{t+1}, S ∈ Ω_{A∪L}^{t+1} is
/// nonsingular. These include every minor met by the hierarchy recursion.
bool is_nondegenerate(const TransformedDemand& td, int t);

/// Rank-r demand whose transformed matrix is nondegenerate, by rejection;
/// nullopt after `attempts` failures.
std::optional<DemandMatrix> random_nondegenerate_demand(const FieldSpec& f, int K, int N, int r, int t,
                                                        std::mt19937_64& rng, int attempts = 200);

inline constexpr std::uint64_t kExhaustiveBudget = std::uint64_t{1} << 20;

/// Calls `fn` on all q^{KN} demand matrices in lexicographic order of their
/// row-major entries. Throws BudgetExceeded above 2^20 matrices.
void for_each_demand(const FieldSpec& f, int K, int N, const std::function<void(const DemandMatrix&)>& fn);

enum class AlphaStrategy { Wan, RandomFree, Fixed };

struct AlphaChoice {
  AlphaStrategy strategy = AlphaStrategy::Wan;
  std::optional<EncodingCoefficients> fixed;

  static AlphaChoice wan() { return {}; }
  static AlphaChoice random_free() { return {AlphaStrategy::RandomFree, std::nullopt}; }
  static AlphaChoice from(EncodingCoefficients alpha) { return {AlphaStrategy::Fixed, std::move(alpha)}; }
  std::string name() const;
};

/// Picks α for a demand whose leaders are known. RandomFree draws the free
/// coefficients of the greedy status uniformly from F_q^*.
EncodingCoefficients choose_alpha(const AlphaChoice& choice, const SchemeParams& params, const IndexSet& leaders,
                                  std::mt19937_64& rng);

struct TrialReport {
  nlohmann::json params;
  nlohmann::json demand;
  std::uint64_t seed = 0;
  std::string alpha;
  IndexSet leaders;
  Rational measured_load;
  Rational theoretical_load;  // worst case, rank min(N, K)
  Rational rank_load;         // (C(K,t+1) - C(K-r,t+1)) / C(K,t)
  std::size_t header_symbols = 0;
  std::vector<bool> decoded;  // per user
  bool oracle_agrees = true;
  std::size_t identity_violations = 0;
  std::size_t reconstructed = 0;
  std::vector<std::string> errors;

  bool success() const;
  nlohmann::json to_json() const;
};

/// One placement -> delivery -> reconstruction -> decode run with a library
/// drawn from `seed`. Module errors end up in `errors`.
TrialReport simulate(const SchemeParams& params, const DemandMatrix& D, const AlphaChoice& alpha, std::uint64_t seed);

struct SweepConfig {
  SchemeParams params;
  AlphaChoice alpha;
  bool exhaustive = false;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  std::optional<int> rank;  // restrict random demands to this rank
};

struct SweepSummary {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::vector<TrialReport> failures;

  bool ok() const { return trials == passed; }
  nlohmann::json to_json() const;
};

/// Exhaustive over all demands (BudgetExceeded when q^{KN} > 2^20) or
/// `samples` random demands; trial i uses seed + i.
SweepSummary sweep(const SweepConfig& config, const std::function<void(const TrialReport&)>& on_trial = {});

}  // namespace slfr
