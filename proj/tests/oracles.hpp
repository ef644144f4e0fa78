#pragma once

// Independent reference computations used only by the tests. None of these
// call into the algorithm under test.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "slfr/codec.hpp"
#include "slfr/field.hpp"
#include "slfr/linalg.hpp"
#include "slfr/scheme.hpp"

namespace oracle {

using slfr::FieldElement;
using slfr::FieldSpec;
using slfr::FqMatrix;
using slfr::IndexSet;

inline std::vector<std::uint32_t> prime_powers_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t q = 2; q <= limit; ++q) {
    std::uint32_t p = 2;
    while (q % p) ++p;
    std::uint32_t r = q;
    while (r % p == 0) r /= p;
    if (r == 1) out.push_back(q);
  }
  return out;
}

inline std::vector<std::uint32_t> digits(std::uint32_t v, std::uint32_t p, std::uint32_t m) {
  std::vector<std::uint32_t> d(m, 0);
  for (std::uint32_t i = 0; i < m; ++i, v /= p) d[i] = v % p;
  return d;
}

inline std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
  return v;
}

inline std::uint32_t poly_add(const FieldSpec& f, std::uint32_t a, std::uint32_t b) {
  auto x = digits(a, f.p(), f.m());
  auto y = digits(b, f.p(), f.m());
  for (std::uint32_t i = 0; i < f.m(); ++i) x[i] = (x[i] + y[i]) % f.p();
  return undigits(x, f.p());
}

// Schoolbook product of the coefficient vectors, then long division by the
// field's monic reduction polynomial.
inline std::uint32_t poly_mul(const FieldSpec& f, std::uint32_t a, std::uint32_t b) {
  const std::uint32_t p = f.p();
  const std::uint32_t m = f.m();
  if (m == 1) return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
  const auto x = digits(a, p, m);
  const auto y = digits(b, p, m);
  std::vector<std::uint64_t> prod(2 * m - 1, 0);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  const auto& poly = f.poly();
  for (std::size_t deg = prod.size(); deg-- > m;) {
    const std::uint64_t c = prod[deg];
    if (!c) continue;
    for (std::uint32_t i = 0; i <= m; ++i) {
      prod[deg - m + i] = (prod[deg - m + i] + (p - c) * poly[i]) % p;
    }
  }
  std::vector<std::uint32_t> r(m);
  for (std::uint32_t i = 0; i < m; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
  return undigits(r, p);
}

inline FieldElement det_by_permutations(const FqMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  FieldElement total = a.field().zero();
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    FieldElement term = a.field().sign(inversions);
    for (std::size_t i = 0; i < n; ++i) term *= a.at(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline FieldElement det_by_laplace(const FqMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return a.field().one();
  FieldElement total = a.field().zero();
  for (std::size_t c = 0; c < n; ++c) {
    FqMatrix minor(a.field(), n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor.set(i - 1, jj++, a.at(i, j));
    total += a.field().sign(static_cast<int>(c)) * a.at(0, c) * det_by_laplace(minor);
  }
  return total;
}

inline std::uint64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c[n][k];
}

// All t-subsets of `ground` from a scan of bitmasks, sorted by their member
// sequences.
inline std::vector<std::vector<int>> subsets_by_mask(const std::vector<int>& ground, int t) {
  std::vector<std::vector<int>> out;
  const std::size_t n = ground.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) != t) continue;
    std::vector<int> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(ground[i]);
    std::sort(s.begin(), s.end());
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Number of (t+1)-subsets of [K] meeting {1..r}, over the number of t-subsets,
// counted by brute force.
inline slfr::Rational load_by_counting(int K, int t, int r) {
  std::int64_t sent = 0;
  std::int64_t blocks = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    const int size = std::popcount(mask);
    if (size == t) ++blocks;
    if (size == t + 1 && (mask & ((std::uint64_t{1} << r) - 1))) ++sent;
  }
  return slfr::Rational(sent, blocks);
}

// Σ_{k ∈ (A∪L)\T} β_{{k}∪T} α_{k,T} D'_{k,ℓ} for every (T, ℓ), written out
// directly from the definition.
inline bool satisfies_reconstruction(const IndexSet& A, const slfr::TransformedDemand& td,
                                     const slfr::EncodingCoefficients& alpha,
                                     const std::map<IndexSet, FieldElement>& beta) {
  const IndexSet U = A | td.leaders;
  const int t = A.size() - 1;
  const FieldSpec& f = alpha.field();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << U.back()); ++mask) {
    const IndexSet T = IndexSet::from_mask(mask);
    if (!T.is_subset_of(U) || T.size() != t) continue;
    for (int l : td.leaders) {
      FieldElement sum = f.zero();
      for (int k : U - T) {
        auto it = beta.find(T.with(k));
        if (it == beta.end()) continue;
        sum += it->second * alpha.at(k, T) * td.Dprime.at(k - 1, static_cast<std::size_t>(slfr::ind(td.leaders, l) - 1));
      }
      if (!sum.is_zero()) return false;
    }
  }
  return true;
}

inline FieldElement random_nonzero(const FieldSpec& f, std::mt19937_64& rng) {
  return {f, std::uniform_int_distribution<std::uint32_t>(1, f.q() - 1)(rng)};
}

}  // namespace oracle
