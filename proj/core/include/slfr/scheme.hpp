#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "slfr/combinat.hpp"
#include "slfr/field.hpp"
#include "slfr/linalg.hpp"

namespace slfr {

using Rational = boost::rational<std::int64_t>;
using SymbolVector = std::vector<FieldElement>;

/// (K, N, q, t, B): users, files, field, cache parameter, file length.
struct SchemeParams {
  int K = 1;
  int N = 1;
  int t = 0;
  std::size_t B = 1;
  const FieldSpec* field = nullptr;

  /// B = 0 selects B = C(K, t), one symbol per subfile. Throws InvalidParams
  /// or IndivisibleFileLength.
  static SchemeParams make(int K, int N, int t, const FieldSpec& field, std::size_t B = 0);

  void validate() const;
  std::size_t num_blocks() const { return binomial(K, t); }
  std::size_t block_length() const { return B / num_blocks(); }
  IndexSet users() const { return IndexSet::range(1, K); }
  /// Memory per user in files: N t / K.
  Rational memory() const { return Rational(static_cast<std::int64_t>(N) * t, K); }
  nlohmann::json to_json() const;
};

/// N files of B symbols each.
struct Library {
  SchemeParams params;
  std::vector<SymbolVector> files;

  static Library random(const SchemeParams& params, std::mt19937_64& rng);
  /// {"files": [[int,...],...]}; sizes are checked against params.
  static Library from_json(const SchemeParams& params, const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Positions I_T (0-based offset, contiguous) of the subfile indexed by T.
struct BlockRange {
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct Placement {
  SchemeParams params;
  std::map<IndexSet, BlockRange> partition;
  /// caches[k-1] lists the subsets T (k ∈ T) whose N subfiles user k stores.
  std::vector<std::vector<IndexSet>> caches;

  const BlockRange& block(const IndexSet& T) const;
  /// Symbols stored by one user.
  std::size_t cache_symbols(int user) const;
};

/// Blocks are assigned to the t-subsets in lexicographic order as
/// consecutive ranges. Throws IndivisibleFileLength.
Placement make_placement(const SchemeParams& params);

/// What user k keeps locally: F_{i,T} for every file i and every T ∋ k.
struct UserCache {
  int user = 0;
  std::map<IndexSet, std::vector<SymbolVector>> subfiles;  // T -> per-file block
};

UserCache fill_cache(const Library& lib, const Placement& placement, int user);

/// The K x N demand matrix; row k-1 holds d_k.
struct DemandMatrix {
  FqMatrix D;

  static DemandMatrix from_json(const FieldSpec& field, const nlohmann::json& j);
  nlohmann::json to_json() const;
  int users() const { return static_cast<int>(D.rows()); }
  int files() const { return static_cast<int>(D.cols()); }
  FieldElement demand(int user, int file) const { return D.at(user - 1, file - 1); }
};

/// Leader set L, its size r, and the K x r transformed demand matrix D'
/// whose columns are indexed by the leaders in increasing order.
struct TransformedDemand {
  IndexSet leaders;
  int r = 0;
  FqMatrix Dprime;

  /// [D']_{k,ℓ} for user k and leader ℓ.
  FieldElement entry(int k, int leader) const;
  /// x_{k,ℓ} for a non-leader k.
  FieldElement x(int k, int leader) const { return entry(k, leader); }
  /// det(D'[rows, cols]) with rows a set of users and cols a set of leaders.
  FieldElement minor_det(const IndexSet& rows, const IndexSet& cols) const;
  FqMatrix minor(const IndexSet& rows, const IndexSet& cols) const;
  nlohmann::json to_json() const;
};

/// Greedy over k = 1..K keeping each row that raises the rank, then solves
/// for the non-leader combination coefficients.
TransformedDemand select_leaders(const DemandMatrix& D);

/// Same with a caller-chosen leader set; throws InvalidDemand unless
/// rank(D) = rank(D[L,:]) = |L|.
TransformedDemand select_leaders(const DemandMatrix& D, const IndexSet& leaders);

/// B_k restricted to I_T: Σ_i d_{k,i} F_i(I_T). Throws InvalidSubset.
SymbolVector demand_block(const Library& lib, const Placement& placement, const DemandMatrix& D,
                          int k, const IndexSet& T);

/// The same block computed by a user that caches T (it needs k ∈ T or
/// the user itself in T). Throws InvalidSubset if T is not cached.
SymbolVector demand_block_from_cache(const UserCache& cache, const DemandMatrix& D, int k,
                                     const IndexSet& T);

/// B_k in full: Σ_i d_{k,i} F_i.
SymbolVector demand_vector(const Library& lib, const DemandMatrix& D, int k);

/// (C(K,t+1) - C(K - min(N,K), t+1)) / C(K,t).
Rational theoretical_load(int K, int t, int N);

/// Header symbols for announcing L and D': r ceil(log_q K) + K + r.
std::size_t header_symbols(int K, int r, std::uint32_t q);

/// transmitted / B, plus header / B when a header size is supplied.
Rational measured_load(std::size_t transmitted_symbols, std::size_t B,
                       std::optional<std::size_t> header = std::nullopt);

}  // namespace slfr
