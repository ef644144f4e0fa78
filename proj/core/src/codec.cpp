#include "slfr/codec.hpp"

#include <algorithm>
#include <string>

namespace slfr {

namespace {

void axpy(SymbolVector& acc, const FieldElement& a, const SymbolVector& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * x[i];
}

FieldElement root_or_default(const FieldSpec& f, const std::optional<FieldElement>& root) {
  if (!root) return f.minus_one();
  if (&root->spec() != &f) throw Error(ErrorCode::MismatchedField, "root value from another field");
  if (root->is_zero()) throw Error(ErrorCode::ZeroCoefficient, "root value must be nonzero");
  return *root;
}

void check_component(const IndexSet& A, const IndexSet& leaders) {
  if (A.empty()) throw Error(ErrorCode::InvalidArguments, "A must be non-empty");
  if (!(A & leaders).empty()) {
    throw Error(ErrorCode::InvalidArguments, A.to_string() + " intersects the leader set");
  }
}

void check_member(const IndexSet& A, const IndexSet& S, const IndexSet& leaders) {
  check_component(A, leaders);
  if (!S.is_subset_of(A | leaders) || S.size() != A.size()) {
    throw Error(ErrorCode::InvalidArguments,
                S.to_string() + " is not a (t+1)-subset of " + (A | leaders).to_string());
  }
}

std::string coeff_key(const IndexSet& A, const IndexSet& S) { return "A=" + A.key() + "|S=" + S.key(); }

}  // namespace

std::string CoeffId::key() const { return "k=" + std::to_string(k) + "|T=" + T.key(); }

CoeffId CoeffId::parse_key(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos || text.substr(0, 2) != "k=" || text.substr(bar + 1, 2) != "T=") {
    throw Error(ErrorCode::ParseError, "bad coefficient key '" + std::string(text) + "'");
  }
  const IndexSet k = IndexSet::parse_key(text.substr(2, bar - 2));
  if (k.size() != 1) throw Error(ErrorCode::ParseError, "bad coefficient key '" + std::string(text) + "'");
  CoeffId id{k.front(), IndexSet::parse_key(text.substr(bar + 3))};
  if (id.T.contains(id.k)) throw Error(ErrorCode::ParseError, "k must not lie in T: '" + std::string(text) + "'");
  return id;
}

std::string CoeffId::label() const { return "α_{" + std::to_string(k) + "," + T.to_string() + "}"; }

void EncodingCoefficients::set(const CoeffId& id, const FieldElement& value) {
  if (&value.spec() != field_) throw Error(ErrorCode::MismatchedField, "coefficient from another field");
  if (value.is_zero()) throw Error(ErrorCode::ZeroCoefficient, id.label() + " must be nonzero");
  if (id.T.contains(id.k)) throw Error(ErrorCode::InvalidArguments, id.label() + ": k must not lie in T");
  values_.insert_or_assign(id, value);
}

const FieldElement& EncodingCoefficients::at(const CoeffId& id) const {
  auto it = values_.find(id);
  if (it == values_.end()) throw Error(ErrorCode::IncompleteCoefficients, id.label() + " is not assigned");
  return it->second;
}

void EncodingCoefficients::require_complete(int K, int t) const {
  for (const CoeffId& id : all_coefficient_ids(K, t)) at(id);
}

nlohmann::json EncodingCoefficients::to_json() const {
  nlohmann::json a = nlohmann::json::object();
  for (const auto& [id, v] : values_) a[id.key()] = v.repr();
  return {{"field", field_->to_json()}, {"alpha", std::move(a)}};
}

EncodingCoefficients EncodingCoefficients::from_json(const nlohmann::json& j) {
  try {
    EncodingCoefficients out(FieldSpec::from_json(j.at("field")));
    for (const auto& [key, v] : j.at("alpha").items()) {
      out.set(CoeffId::parse_key(key), out.field().from_int(v.get<std::int64_t>()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::vector<CoeffId> all_coefficient_ids(int K, int t) {
  std::vector<CoeffId> ids;
  if (t + 1 > K) return ids;
  for (const IndexSet& S : enumerate_subsets(IndexSet::range(1, K), t + 1)) {
    for (int k : S) ids.push_back({k, S.without(k)});
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

EncodingCoefficients wan_alpha(const SchemeParams& params, const IndexSet& leaders) {
  const FieldSpec& f = *params.field;
  EncodingCoefficients alpha(f);
  for (const CoeffId& id : all_coefficient_ids(params.K, params.t)) {
    const IndexSet S = id.message();
    alpha.set(id, f.sign(ind(S & leaders, id.k) + ind(S - leaders, id.k)));
  }
  return alpha;
}

EncodingCoefficients constant_alpha(const SchemeParams& params, const FieldElement& value) {
  EncodingCoefficients alpha(*params.field);
  for (const CoeffId& id : all_coefficient_ids(params.K, params.t)) alpha.set(id, value);
  return alpha;
}

MulticastMessage make_message(const Library& lib, const Placement& placement, const DemandMatrix& D,
                              const EncodingCoefficients& alpha, const IndexSet& S) {
  const FieldSpec& f = *lib.params.field;
  if (S.size() != lib.params.t + 1 || S.back() > lib.params.K) {
    throw Error(ErrorCode::InvalidSubset, S.to_string() + " is not a (t+1)-subset of [K]");
  }
  MulticastMessage msg{S, SymbolVector(lib.params.block_length(), f.zero())};
  for (int k : S) {
    const IndexSet T = S.without(k);
    axpy(msg.payload, alpha.at(k, T), demand_block(lib, placement, D, k, T));
  }
  return msg;
}

Delivery build_messages(const Library& lib, const Placement& placement, const DemandMatrix& D,
                        const TransformedDemand& td, const EncodingCoefficients& alpha) {
  const SchemeParams& p = lib.params;
  alpha.require_complete(p.K, p.t);
  Delivery out;
  if (p.t + 1 > p.K) return out;
  for (const IndexSet& S : enumerate_subsets(p.users(), p.t + 1)) {
    if ((S & td.leaders).empty()) {
      out.unsent.push_back(S);
    } else {
      out.sent.push_back(make_message(lib, placement, D, alpha, S));
    }
  }
  return out;
}

std::size_t transmitted_symbols(std::span<const MulticastMessage> sent) {
  std::size_t n = 0;
  for (const auto& m : sent) n += m.payload.size();
  return n;
}

Rational measured_load(std::span<const MulticastMessage> sent, std::size_t B, std::optional<std::size_t> header) {
  return measured_load(transmitted_symbols(sent), B, header);
}

int phi_sign(const IndexSet& A, int k, const IndexSet& T, const IndexSet& leaders) {
  const IndexSet U = A | leaders;
  if (!T.is_subset_of(U) || !U.contains(k) || T.contains(k)) {
    throw Error(ErrorCode::InvalidArguments, "no edge (" + std::to_string(k) + ", " + T.to_string() + ")");
  }
  if (leaders.contains(k)) return 1 + ind(T.with(k) - A, k);
  return ind(A - T, k);
}

nlohmann::json DecodingCoefficients::to_json() const {
  auto dump = [this](const std::map<IndexSet, FieldElement>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [S, v] : m) j[coeff_key(A, S)] = v.repr();
    return j;
  };
  return {{"A", A.to_json()},
          {"leaders", leaders.to_json()},
          {"beta", dump(beta)},
          {"beta_tilde", dump(beta_tilde)},
          {"c", dump(c)}};
}

FieldElement closed_form_beta_tilde(const IndexSet& A, const IndexSet& S, const EncodingCoefficients& alpha,
                                    const IndexSet& leaders, std::optional<FieldElement> root) {
  check_member(A, S, leaders);
  const FieldSpec& f = alpha.field();
  const std::vector<int> ls = (S & leaders).members();
  const std::vector<int> js = (A - S).members();
  const IndexSet J = S & A;
  const int h = static_cast<int>(ls.size());

  FieldElement num = root_or_default(f, root) * f.sign(h);
  FieldElement den = f.one();
  for (int i = 0; i < h; ++i) {
    IndexSet X = J;
    for (int a = i + 1; a < h; ++a) X = X.with(js[a]);
    for (int a = 0; a < i; ++a) X = X.with(ls[a]);
    num *= alpha.at(js[i], X);
    den *= alpha.at(ls[i], X);
  }
  return num / den;
}

FieldElement closed_form_beta(const IndexSet& A, const IndexSet& S, const TransformedDemand& td,
                              const EncodingCoefficients& alpha, std::optional<FieldElement> root) {
  return closed_form_beta_tilde(A, S, alpha, td.leaders, root) * td.minor_det(A - S, S - A);
}

DecodingCoefficients closed_form_decoding(const IndexSet& A, const TransformedDemand& td,
                                          const EncodingCoefficients& alpha, std::optional<FieldElement> root) {
  check_component(A, td.leaders);
  const IndexSet U = A | td.leaders;
  const int t = A.size() - 1;
  DecodingCoefficients dc{A, td.leaders, {}, {}, {}};
  for (const IndexSet& S : enumerate_subsets(U, t + 1)) {
    const FieldElement bt = closed_form_beta_tilde(A, S, alpha, td.leaders, root);
    dc.beta.emplace(S, bt * td.minor_det(A - S, S - A));
    dc.beta_tilde.emplace(S, bt);
  }
  for (const IndexSet& T : enumerate_subsets(U, t)) {
    const int k = (U - T).front();
    const FieldElement c =
        alpha.field().sign(phi_sign(A, k, T, td.leaders)) * alpha.at(k, T) * dc.beta_tilde.at(T.with(k));
    dc.c.emplace(T, c);
  }
  return dc;
}

std::vector<CoeffId> factorization_violations(const DecodingCoefficients& dc, const EncodingCoefficients& alpha) {
  const FieldSpec& f = alpha.field();
  const IndexSet U = dc.A | dc.leaders;
  std::vector<CoeffId> bad;
  for (const auto& [T, c] : dc.c) {
    for (int k : U - T) {
      const FieldElement lhs = dc.beta_tilde.at(T.with(k)) * alpha.at(k, T);
      if (lhs != f.sign(phi_sign(dc.A, k, T, dc.leaders)) * c) bad.push_back({k, T});
    }
  }
  return bad;
}

std::map<IndexSet, FieldElement> hierarchy_recursion_beta(const IndexSet& A, const TransformedDemand& td,
                                                          const EncodingCoefficients& alpha,
                                                          std::optional<FieldElement> root) {
  check_component(A, td.leaders);
  const FieldSpec& f = alpha.field();
  const IndexSet& L = td.leaders;
  const IndexSet U = A | L;
  const int t = A.size() - 1;

  std::vector<std::vector<IndexSet>> by_level(static_cast<std::size_t>(std::min(t + 1, L.size())) + 1);
  for (const IndexSet& S : enumerate_subsets(U, t + 1)) by_level[hierarchy(S, L)].push_back(S);

  std::map<IndexSet, FieldElement> beta;
  beta.emplace(A, root_or_default(f, root));
  for (std::size_t g = 1; g < by_level.size(); ++g) {
    for (const IndexSet& S : by_level[g]) {
      const int leader = (S & L).back();
      const IndexSet T = S.without(leader);
      const IndexSet TL = T & L;
      const std::vector<int> js = (A - T).members();  // h+1 entries
      const int anchor = js.back();
      const IndexSet rest = (A - T).without(anchor);

      // y solves y D'[rest, T∩L] = -D'[{anchor}, T∩L]
      FieldElement sum = td.x(anchor, leader);
      if (!rest.empty()) {
        const FqMatrix Mt = td.minor(rest, TL).transpose();
        if (det(Mt).is_zero()) {
          throw Error(ErrorCode::SingularIntermediate,
                      "D'[" + rest.to_string() + ", " + TL.to_string() + "] is singular");
        }
        std::vector<FieldElement> rhs;
        for (int l : TL) rhs.push_back(-td.x(anchor, l));
        const FqMatrix b = FqMatrix::column(rhs);
        std::size_t i = 0;
        for (int j : rest) sum += cramer_component(Mt, b, i++) * td.x(j, leader);
      }
      const FieldElement anchor_term = beta.at(T.with(anchor)) * alpha.at(anchor, T);
      beta.emplace(S, -(anchor_term * sum) / alpha.at(leader, T));
    }
  }
  return beta;
}

std::vector<IdentityViolation> check_reconstruction_identity(const IndexSet& A, const TransformedDemand& td,
                                                             const EncodingCoefficients& alpha,
                                                             const std::map<IndexSet, FieldElement>& beta) {
  check_component(A, td.leaders);
  const FieldSpec& f = alpha.field();
  const IndexSet U = A | td.leaders;
  std::vector<IdentityViolation> bad;
  for (const IndexSet& T : enumerate_subsets(U, A.size() - 1)) {
    for (int l : td.leaders) {
      FieldElement acc = f.zero();
      for (int k : U - T) {
        auto it = beta.find(T.with(k));
        if (it == beta.end()) continue;
        acc += it->second * alpha.at(k, T) * td.entry(k, l);
      }
      if (!acc.is_zero()) bad.push_back({T, l});
    }
  }
  return bad;
}

MulticastMessage reconstruct_unsent(const IndexSet& A, const MessageMap& sent,
                                    const std::map<IndexSet, FieldElement>& beta, std::size_t length) {
  auto root = beta.find(A);
  if (root == beta.end() || root->second.is_zero()) {
    throw Error(ErrorCode::ZeroCoefficient, "beta_A must be nonzero");
  }
  const FieldSpec& f = root->second.spec();
  SymbolVector acc(length, f.zero());
  for (const auto& [S, b] : beta) {
    if (S == A) continue;
    auto it = sent.find(S);
    if (it == sent.end()) {
      throw Error(ErrorCode::MissingMessage, "W" + S.to_string() + " is needed to rebuild W" + A.to_string());
    }
    if (it->second.payload.size() != length) {
      throw Error(ErrorCode::DimensionMismatch, "W" + S.to_string() + " has the wrong length");
    }
    axpy(acc, b, it->second.payload);
  }
  MulticastMessage out{A, std::move(acc)};
  const FieldElement scale = -root->second.inv();
  for (auto& s : out.payload) s *= scale;
  return out;
}

MulticastMessage reconstruct_unsent_checked(const IndexSet& A, const MessageMap& sent,
                                            const std::map<IndexSet, FieldElement>& beta,
                                            const MulticastMessage& truth) {
  MulticastMessage out = reconstruct_unsent(A, sent, beta, truth.payload.size());
  if (out.payload != truth.payload) {
    std::size_t pos = 0;
    while (pos < out.payload.size() && pos < truth.payload.size() && out.payload[pos] == truth.payload[pos]) ++pos;
    throw Error(ErrorCode::ReconstructionMismatch,
                "W" + A.to_string() + " differs at symbol " + std::to_string(pos));
  }
  return out;
}

SymbolVector user_decode(const UserCache& cache, const Placement& placement, const DemandMatrix& D,
                         const MessageMap& messages, const EncodingCoefficients& alpha) {
  const SchemeParams& p = placement.params;
  const int k = cache.user;
  const FieldSpec& f = *p.field;
  SymbolVector out(p.B, f.zero());
  for (const auto& [T, br] : placement.partition) {
    SymbolVector block;
    if (T.contains(k)) {
      block = demand_block_from_cache(cache, D, k, T);
    } else {
      const IndexSet S = T.with(k);
      auto it = messages.find(S);
      if (it == messages.end()) {
        throw Error(ErrorCode::MissingMessage, "user " + std::to_string(k) + " needs W" + S.to_string());
      }
      block = it->second.payload;
      for (int j : T) {
        axpy(block, -alpha.at(j, S.without(j)), demand_block_from_cache(cache, D, j, S.without(j)));
      }
      const FieldElement scale = alpha.at(k, T).inv();
      for (auto& s : block) s *= scale;
    }
    std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(br.offset));
  }
  return out;
}

}  // namespace slfr
