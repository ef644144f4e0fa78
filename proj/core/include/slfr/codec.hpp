#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/combinat.hpp"
#include "slfr/field.hpp"
#include "slfr/scheme.hpp"

namespace slfr {

/// Identifies the encoding coefficient α_{k,T}: the weight of B_{k,T} inside
/// W_{{k} ∪ T}.
struct CoeffId {
  int k = 0;
  IndexSet T;

  IndexSet message() const { return T.with(k); }
  /// "k=3|T=4", "k=1|T=2,3", "k=2|T=" for t = 0.
  std::string key() const;
  static CoeffId parse_key(std::string_view text);
  /// "α_{3,{4}}"
  std::string label() const;

  friend bool operator==(const CoeffId&, const CoeffId&) = default;
  friend std::strong_ordering operator<=>(const CoeffId& a, const CoeffId& b) noexcept {
    if (auto c = a.k <=> b.k; c != 0) return c;
    return a.T <=> b.T;
  }
};

/// Nonzero weights α_{k,T} for every (k, S \ {k}), S ∈ Ω_{[K]}^{t+1}, k ∈ S.
class EncodingCoefficients {
 public:
  explicit EncodingCoefficients(const FieldSpec& field) : field_(&field) {}

  const FieldSpec& field() const noexcept { return *field_; }
  /// Throws ZeroCoefficient for zero and MismatchedField for foreign values.
  void set(const CoeffId& id, const FieldElement& value);
  /// Throws IncompleteCoefficients when absent.
  const FieldElement& at(const CoeffId& id) const;
  const FieldElement& at(int k, const IndexSet& T) const { return at(CoeffId{k, T}); }
  bool contains(const CoeffId& id) const { return values_.contains(id); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::map<CoeffId, FieldElement>& values() const noexcept { return values_; }

  /// Throws IncompleteCoefficients unless every (k, T) of the (K, t) scheme
  /// is present.
  void require_complete(int K, int t) const;

  /// {"field": {...}, "alpha": {"k=3|T=4": int, ...}}
  nlohmann::json to_json() const;
  static EncodingCoefficients from_json(const nlohmann::json& j);

 private:
  const FieldSpec* field_;
  std::map<CoeffId, FieldElement> values_;
};

/// Every coefficient id of the (K, t) scheme in (k, T) order.
std::vector<CoeffId> all_coefficient_ids(int K, int t);

/// α_{k,S\{k}} = (-1)^{Ind_{S∩L,k} + Ind_{S\L,k}}.
EncodingCoefficients wan_alpha(const SchemeParams& params, const IndexSet& leaders);

/// Every coefficient equal to `value` (1 gives the plain-sum delivery).
EncodingCoefficients constant_alpha(const SchemeParams& params, const FieldElement& value);

struct MulticastMessage {
  IndexSet S;
  SymbolVector payload;
};

using MessageMap = std::map<IndexSet, MulticastMessage>;

/// W_S = Σ_{k∈S} α_{k,S\{k}} B_{k,S\{k}}.
MulticastMessage make_message(const Library& lib, const Placement& placement, const DemandMatrix& D,
                              const EncodingCoefficients& alpha, const IndexSet& S);

struct Delivery {
  std::vector<MulticastMessage> sent;  // every S with |S ∩ L| > 0
  std::vector<IndexSet> unsent;        // Ω_{[K]\L}^{t+1}
};

/// Throws IncompleteCoefficients when α does not cover the scheme.
Delivery build_messages(const Library& lib, const Placement& placement, const DemandMatrix& D,
                        const TransformedDemand& td, const EncodingCoefficients& alpha);

std::size_t transmitted_symbols(std::span<const MulticastMessage> sent);

Rational measured_load(std::span<const MulticastMessage> sent, std::size_t B,
                       std::optional<std::size_t> header = std::nullopt);

/// Sign exponent φ^{(A)}_{k,T} of the edge between β̃_{{k}∪T} and c_T:
///   k ∈ L \ T : 1 + Ind_{({k}∪T)\A, k}
///   k ∈ A \ T : Ind_{A\T, k}
/// Throws InvalidArguments when T ⊄ A∪L or k ∉ (A∪L)\T.
int phi_sign(const IndexSet& A, int k, const IndexSet& T, const IndexSet& leaders);

/// Decoding coefficients for reconstructing W_A inside the reduced system on
/// A ∪ L. `beta`, `beta_tilde` are keyed by S ∈ Ω_{A∪L}^{t+1} and `c` by
/// T ∈ Ω_{A∪L}^{t}.
struct DecodingCoefficients {
  IndexSet A;
  IndexSet leaders;
  std::map<IndexSet, FieldElement> beta;
  std::map<IndexSet, FieldElement> beta_tilde;
  std::map<IndexSet, FieldElement> c;

  nlohmann::json to_json() const;
};

/// The demand-free factor β̃^{(A)}_S. With S∩L = {ℓ_1<…<ℓ_h}, A\S = {j_1<…<j_h}
/// and J = S∩A:
///   β̃_S = ρ (-1)^h ∏_{i=1..h} α_{j_i,X_i} / α_{ℓ_i,X_i},
///   X_i = {j_{i+1},…,j_h} ∪ {ℓ_1,…,ℓ_{i-1}} ∪ J,
/// where ρ = β^{(A)}_A is the root value (default -1).
FieldElement closed_form_beta_tilde(const IndexSet& A, const IndexSet& S, const EncodingCoefficients& alpha,
                                    const IndexSet& leaders, std::optional<FieldElement> root = std::nullopt);

/// β^{(A)}_S = β̃^{(A)}_S det(D'[A\S, S\A]).
FieldElement closed_form_beta(const IndexSet& A, const IndexSet& S, const TransformedDemand& td,
                              const EncodingCoefficients& alpha, std::optional<FieldElement> root = std::nullopt);

/// All β̃, β of the reduced system on A ∪ L, with c_T read off the edge of
/// the smallest k.
DecodingCoefficients closed_form_decoding(const IndexSet& A, const TransformedDemand& td,
                                          const EncodingCoefficients& alpha,
                                          std::optional<FieldElement> root = std::nullopt);

/// Edges (k, T) where β̃_{{k}∪T} α_{k,T} != (-1)^φ c_T.
std::vector<CoeffId> factorization_violations(const DecodingCoefficients& dc, const EncodingCoefficients& alpha);

/// β^{(A)} computed hierarchy by hierarchy: each S with h = |S∩L| >= 1 is
/// reached from T = S \ {max(S∩L)} by solving the Cramer system on
/// D'[(A\T) \ {j_max}, T∩L] and summing along the new leader's column.
/// Throws SingularIntermediate when one of those minors vanishes.
std::map<IndexSet, FieldElement> hierarchy_recursion_beta(const IndexSet& A, const TransformedDemand& td,
                                                          const EncodingCoefficients& alpha,
                                                          std::optional<FieldElement> root = std::nullopt);

struct IdentityViolation {
  IndexSet T;
  int leader = 0;
};

/// Coefficient-level check that Σ_S β_S W_S vanishes for every realization
/// of the leaders' blocks: for each T ∈ Ω_{A∪L}^t and leader ℓ,
///   Σ_{k ∈ (A∪L)\T} β_{{k}∪T} α_{k,T} [D']_{k,ℓ} = 0.
/// Missing β entries count as zero.
std::vector<IdentityViolation> check_reconstruction_identity(const IndexSet& A, const TransformedDemand& td,
                                                             const EncodingCoefficients& alpha,
                                                             const std::map<IndexSet, FieldElement>& beta);

/// W_A = -(1/β_A) Σ_{S≠A} β_S W_S over S ⊆ A∪L, `length` symbols long.
/// Throws MissingMessage.
MulticastMessage reconstruct_unsent(const IndexSet& A, const MessageMap& sent,
                                    const std::map<IndexSet, FieldElement>& beta, std::size_t length);

/// Same, then compares against the directly computed W_A; throws
/// ReconstructionMismatch on any differing symbol.
MulticastMessage reconstruct_unsent_checked(const IndexSet& A, const MessageMap& sent,
                                            const std::map<IndexSet, FieldElement>& beta,
                                            const MulticastMessage& truth);

/// Recovers B_k from user k's cache and the messages W_S with k ∈ S.
/// Throws MissingMessage if one of those is absent.
SymbolVector user_decode(const UserCache& cache, const Placement& placement, const DemandMatrix& D,
                         const MessageMap& messages, const EncodingCoefficients& alpha);

}  // namespace slfr
