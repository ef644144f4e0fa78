#include "slfr/combinat.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace slfr {

namespace {

std::uint64_t bit_of(int k) {
  if (k < 1 || k > IndexSet::kMaxUser) {
    throw Error(ErrorCode::IndexOutOfRange, "user index " + std::to_string(k) + " outside [1, 64]");
  }
  return std::uint64_t{1} << (k - 1);
}

template <typename Range>
std::uint64_t mask_from(const Range& members) {
  std::uint64_t mask = 0;
  int prev = 0;
  for (int k : members) {
    if (k <= prev) throw Error(ErrorCode::InvalidArguments, "IndexSet members must be strictly increasing");
    mask |= bit_of(k);
    prev = k;
  }
  return mask;
}

}  // namespace

IndexSet::IndexSet(std::initializer_list<int> members) : mask_(mask_from(members)) {}

IndexSet::IndexSet(const std::vector<int>& members) : mask_(mask_from(members)) {}

IndexSet IndexSet::range(int lo, int hi) {
  std::uint64_t mask = 0;
  for (int k = lo; k <= hi; ++k) mask |= bit_of(k);
  return IndexSet(mask, 0);
}

IndexSet IndexSet::with(int k) const { return IndexSet(mask_ | bit_of(k), 0); }

IndexSet IndexSet::without(int k) const { return IndexSet(mask_ & ~bit_of(k), 0); }

std::vector<int> IndexSet::members() const { return {begin(), end()}; }

std::string IndexSet::to_string() const { return "{" + key() + "}"; }

std::string IndexSet::key() const {
  std::string out;
  for (int k : *this) {
    if (!out.empty()) out += ',';
    out += std::to_string(k);
  }
  return out;
}

IndexSet IndexSet::parse_key(std::string_view text) {
  std::vector<int> members;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    int v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorCode::ParseError, "bad index set '" + std::string(text) + "'");
    }
    members.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return IndexSet(members);
}

IndexSet IndexSet::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "index set must be a JSON array");
  return IndexSet(j.get<std::vector<int>>());
}

nlohmann::json IndexSet::to_json() const { return members(); }

std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) noexcept {
  std::uint64_t x = a.mask_;
  std::uint64_t y = b.mask_;
  while (x != 0 && y != 0) {
    const int lx = std::countr_zero(x);
    const int ly = std::countr_zero(y);
    if (lx != ly) return lx <=> ly;
    x &= x - 1;
    y &= y - 1;
  }
  return (x != 0) <=> (y != 0);
}

std::ostream& operator<<(std::ostream& os, const IndexSet& s) { return os << s.to_string(); }

std::vector<IndexSet> enumerate_subsets(const IndexSet& ground, int t) {
  const std::vector<int> g = ground.members();
  const int n = static_cast<int>(g.size());
  if (t < 0 || t > n) {
    throw Error(ErrorCode::InvalidSize, "subset size " + std::to_string(t) + " not in [0, " +
                                            std::to_string(n) + "]");
  }
  std::vector<IndexSet> out;
  out.reserve(binomial(n, t));
  std::vector<int> idx(t);
  for (int i = 0; i < t; ++i) idx[i] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int i : idx) mask |= std::uint64_t{1} << (g[i] - 1);
    out.push_back(IndexSet::from_mask(mask));
    int i = t - 1;
    while (i >= 0 && idx[i] == n - t + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

int ind(const IndexSet& s, int k) noexcept {
  if (!s.contains(k)) return 0;
  const std::uint64_t below = (std::uint64_t{1} << (k - 1)) - 1;
  return std::popcount(s.mask() & below) + 1;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      throw Error(ErrorCode::InvalidArguments, "binomial overflow");
    }
    r = r * num / i;
  }
  return r;
}

}  // namespace slfr
