#include "slfr/scheme.hpp"

#include <algorithm>
#include <string>

namespace slfr {

namespace {

std::vector<std::size_t> zero_based(const IndexSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.size());
  for (int k : s) out.push_back(static_cast<std::size_t>(k - 1));
  return out;
}

FqMatrix rows_of(const FqMatrix& D, const IndexSet& users) {
  std::vector<std::size_t> cols(D.cols());
  for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c;
  const auto rows = zero_based(users);
  return submatrix(D, rows, cols);
}

}  // namespace

SchemeParams SchemeParams::make(int K, int N, int t, const FieldSpec& field, std::size_t B) {
  SchemeParams p;
  p.K = K;
  p.N = N;
  p.t = t;
  p.field = &field;
  if (K < 1 || K > IndexSet::kMaxUser) throw Error(ErrorCode::InvalidParams, "K must be in [1, 64]");
  if (t < 0 || t > K) throw Error(ErrorCode::InvalidParams, "t must be in [0, K]");
  p.B = B == 0 ? binomial(K, t) : B;
  p.validate();
  return p;
}

void SchemeParams::validate() const {
  if (field == nullptr) throw Error(ErrorCode::InvalidParams, "no field");
  if (K < 1 || K > IndexSet::kMaxUser) throw Error(ErrorCode::InvalidParams, "K must be in [1, 64]");
  if (N < 1) throw Error(ErrorCode::InvalidParams, "N must be >= 1");
  if (t < 0 || t > K) throw Error(ErrorCode::InvalidParams, "t must be in [0, K]");
  if (B == 0 || B % binomial(K, t) != 0) {
    throw Error(ErrorCode::IndivisibleFileLength,
                "B = " + std::to_string(B) + " is not a positive multiple of C(K,t) = " +
                    std::to_string(binomial(K, t)));
  }
}

nlohmann::json SchemeParams::to_json() const {
  return {{"K", K}, {"N", N}, {"t", t}, {"B", B}, {"field", field->to_json()}};
}

Library Library::random(const SchemeParams& params, std::mt19937_64& rng) {
  params.validate();
  std::uniform_int_distribution<std::uint32_t> pick(0, params.field->q() - 1);
  Library lib{params, {}};
  lib.files.reserve(params.N);
  for (int i = 0; i < params.N; ++i) {
    SymbolVector file;
    file.reserve(params.B);
    for (std::size_t b = 0; b < params.B; ++b) file.emplace_back(*params.field, pick(rng));
    lib.files.push_back(std::move(file));
  }
  return lib;
}

Library Library::from_json(const SchemeParams& params, const nlohmann::json& j) {
  params.validate();
  Library lib{params, {}};
  try {
    const auto& files = j.at("files");
    if (files.size() != static_cast<std::size_t>(params.N)) {
      throw Error(ErrorCode::InvalidParams, "library must hold N files");
    }
    for (const auto& f : files) {
      if (f.size() != params.B) throw Error(ErrorCode::InvalidParams, "each file must hold B symbols");
      SymbolVector file;
      for (const auto& v : f) file.push_back(params.field->from_int(v.get<std::int64_t>()));
      lib.files.push_back(std::move(file));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return lib;
}

nlohmann::json Library::to_json() const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : this->files) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& s : f) row.push_back(s.repr());
    files.push_back(std::move(row));
  }
  return {{"files", std::move(files)}};
}

const BlockRange& Placement::block(const IndexSet& T) const {
  auto it = partition.find(T);
  if (it == partition.end()) {
    throw Error(ErrorCode::InvalidSubset, T.to_string() + " is not a placement subset");
  }
  return it->second;
}

std::size_t Placement::cache_symbols(int user) const {
  if (user < 1 || user > params.K) throw Error(ErrorCode::IndexOutOfRange, "user out of range");
  return caches[user - 1].size() * params.block_length() * params.N;
}

Placement make_placement(const SchemeParams& params) {
  params.validate();
  Placement pl{params, {}, std::vector<std::vector<IndexSet>>(params.K)};
  const std::size_t len = params.block_length();
  std::size_t offset = 0;
  for (const IndexSet& T : enumerate_subsets(params.users(), params.t)) {
    pl.partition.emplace(T, BlockRange{offset, len});
    offset += len;
    for (int k : T) pl.caches[k - 1].push_back(T);
  }
  return pl;
}

UserCache fill_cache(const Library& lib, const Placement& placement, int user) {
  if (user < 1 || user > placement.params.K) throw Error(ErrorCode::IndexOutOfRange, "user out of range");
  UserCache cache{user, {}};
  for (const IndexSet& T : placement.caches[user - 1]) {
    const BlockRange& br = placement.block(T);
    std::vector<SymbolVector> blocks;
    for (const auto& file : lib.files) {
      blocks.emplace_back(file.begin() + static_cast<std::ptrdiff_t>(br.offset),
                          file.begin() + static_cast<std::ptrdiff_t>(br.offset + br.length));
    }
    cache.subfiles.emplace(T, std::move(blocks));
  }
  return cache;
}

DemandMatrix DemandMatrix::from_json(const FieldSpec& field, const nlohmann::json& j) {
  try {
    return {FqMatrix::from_ints(field, j.at("D").get<std::vector<std::vector<std::int64_t>>>())};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json DemandMatrix::to_json() const { return {{"D", D.to_ints()}}; }

FieldElement TransformedDemand::entry(int k, int leader) const {
  if (!leaders.contains(leader)) {
    throw Error(ErrorCode::InvalidArguments, std::to_string(leader) + " is not a leader");
  }
  return Dprime.at(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(ind(leaders, leader) - 1));
}

FqMatrix TransformedDemand::minor(const IndexSet& rows, const IndexSet& cols) const {
  if (!cols.is_subset_of(leaders)) {
    throw Error(ErrorCode::InvalidArguments, "minor columns must be leaders");
  }
  std::vector<std::size_t> c;
  for (int l : cols) c.push_back(static_cast<std::size_t>(ind(leaders, l) - 1));
  return submatrix(Dprime, zero_based(rows), c);
}

FieldElement TransformedDemand::minor_det(const IndexSet& rows, const IndexSet& cols) const {
  return det(minor(rows, cols));
}

nlohmann::json TransformedDemand::to_json() const {
  return {{"leaders", leaders.to_json()}, {"r", r}, {"Dprime", Dprime.to_ints()}};
}

TransformedDemand select_leaders(const DemandMatrix& D) {
  IndexSet leaders;
  std::size_t current = 0;
  for (int k = 1; k <= D.users(); ++k) {
    const IndexSet trial = leaders.with(k);
    const std::size_t rk = rank(rows_of(D.D, trial));
    if (rk > current) {
      leaders = trial;
      current = rk;
    }
  }
  return select_leaders(D, leaders);
}

TransformedDemand select_leaders(const DemandMatrix& D, const IndexSet& leaders) {
  const FieldSpec& f = D.D.field();
  const int K = D.users();
  if (!leaders.empty() && leaders.back() > K) {
    throw Error(ErrorCode::InvalidDemand, "leader index exceeds K");
  }
  const int r = leaders.size();
  const FqMatrix lead_rows = rows_of(D.D, leaders);
  if (static_cast<int>(rank(lead_rows)) != r || static_cast<int>(rank(D.D)) != r) {
    throw Error(ErrorCode::InvalidDemand,
                leaders.to_string() + " is not a leader set: need rank(D) = rank(D[L,:]) = |L|");
  }
  TransformedDemand td{leaders, r, FqMatrix(f, static_cast<std::size_t>(K), static_cast<std::size_t>(r))};
  const FqMatrix basis_t = lead_rows.transpose();  // N x r
  for (int k = 1; k <= K; ++k) {
    if (leaders.contains(k)) {
      td.Dprime.set_raw(k - 1, ind(leaders, k) - 1, 1);
      continue;
    }
    FqMatrix target(f, D.D.cols(), 1);
    for (std::size_t c = 0; c < D.D.cols(); ++c) target.set_raw(c, 0, D.D.raw(k - 1, c));
    const auto sol = solve_general(basis_t, target);
    if (!sol || sol->nullity != 0) {
      throw Error(ErrorCode::InvalidDemand, "row " + std::to_string(k) + " outside the leader span");
    }
    for (int j = 0; j < r; ++j) td.Dprime.set(k - 1, j, sol->particular[j]);
  }
  return td;
}

SymbolVector demand_block(const Library& lib, const Placement& placement, const DemandMatrix& D,
                          int k, const IndexSet& T) {
  const BlockRange& br = placement.block(T);
  const FieldSpec& f = *lib.params.field;
  SymbolVector out(br.length, f.zero());
  for (int i = 1; i <= lib.params.N; ++i) {
    const FieldElement d = D.demand(k, i);
    if (d.is_zero()) continue;
    const auto& file = lib.files[i - 1];
    for (std::size_t b = 0; b < br.length; ++b) out[b] += d * file[br.offset + b];
  }
  return out;
}

SymbolVector demand_block_from_cache(const UserCache& cache, const DemandMatrix& D, int k,
                                     const IndexSet& T) {
  auto it = cache.subfiles.find(T);
  if (it == cache.subfiles.end()) {
    throw Error(ErrorCode::InvalidSubset,
                "user " + std::to_string(cache.user) + " does not cache " + T.to_string());
  }
  const auto& blocks = it->second;
  const FieldSpec& f = D.D.field();
  SymbolVector out(blocks.front().size(), f.zero());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const FieldElement d = D.D.at(static_cast<std::size_t>(k - 1), i);
    if (d.is_zero()) continue;
    for (std::size_t b = 0; b < out.size(); ++b) out[b] += d * blocks[i][b];
  }
  return out;
}

SymbolVector demand_vector(const Library& lib, const DemandMatrix& D, int k) {
  const FieldSpec& f = *lib.params.field;
  SymbolVector out(lib.params.B, f.zero());
  for (int i = 1; i <= lib.params.N; ++i) {
    const FieldElement d = D.demand(k, i);
    for (std::size_t b = 0; b < lib.params.B; ++b) out[b] += d * lib.files[i - 1][b];
  }
  return out;
}

Rational theoretical_load(int K, int t, int N) {
  const auto num = static_cast<std::int64_t>(binomial(K, t + 1)) -
                   static_cast<std::int64_t>(binomial(K - std::min(N, K), t + 1));
  return Rational(num, static_cast<std::int64_t>(binomial(K, t)));
}

std::size_t header_symbols(int K, int r, std::uint32_t q) {
  // ceil(log_q K) computed exactly: smallest e with q^e >= K
  std::size_t e = 0;
  std::uint64_t power = 1;
  while (power < static_cast<std::uint64_t>(K)) {
    power *= q;
    ++e;
  }
  return static_cast<std::size_t>(r) * e + static_cast<std::size_t>(K) + static_cast<std::size_t>(r);
}

Rational measured_load(std::size_t transmitted_symbols, std::size_t B, std::optional<std::size_t> header) {
  const std::size_t total = transmitted_symbols + header.value_or(0);
  return Rational(static_cast<std::int64_t>(total), static_cast<std::int64_t>(B));
}

}  // namespace slfr
