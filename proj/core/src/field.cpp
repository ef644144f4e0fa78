#include "slfr/field.hpp"

#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

namespace slfr {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // Extended Euclid; a != 0 mod p.
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    std::tie(t, new_t) = std::make_tuple(new_t, t - quot * new_t);
    std::tie(r, new_r) = std::make_tuple(new_r, r - quot * new_r);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

// Remainder of a modulo monic-or-not b over GF(p). b must be nonzero after trim.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint32_t factor = static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a.back()) * lead_inv) % p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = (static_cast<std::uint64_t>(factor) * b[i]) % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly digits_of(std::uint32_t v, std::uint32_t p, std::uint32_t m) {
  Poly d(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

std::uint32_t ipow(std::uint32_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    r *= b;
    if (r > FieldSpec::kMaxOrder) return FieldSpec::kMaxOrder + 1;
  }
  return static_cast<std::uint32_t>(r);
}

Poly default_poly(std::uint32_t p, std::uint32_t m) {
  const std::uint32_t q = ipow(p, m);
  switch (q) {
    case 4: return {1, 1, 1};        // x^2 + x + 1
    case 8: return {1, 1, 0, 1};     // x^3 + x + 1
    case 9: return {2, 2, 1};        // x^2 + 2x + 2
    case 16: return {1, 1, 0, 0, 1}; // x^4 + x + 1
    default: break;
  }
  // Smallest monic irreducible in the base-p order of its low coefficients.
  for (std::uint32_t v = 0; v < q; ++v) {
    Poly cand = digits_of(v, p, m);
    cand.push_back(1);
    if (is_irreducible(p, cand)) return cand;
  }
  throw Error(ErrorCode::InvalidFieldSpec, "no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
  if (poly.size() < 2 || poly.back() == 0) return false;
  const std::uint32_t deg = static_cast<std::uint32_t>(poly.size() - 1);
  if (deg == 1) return true;
  for (std::uint32_t d = 1; d <= deg / 2; ++d) {
    const std::uint32_t count = ipow(p, d);
    for (std::uint32_t v = 0; v < count; ++v) {
      Poly divisor = digits_of(v, p, d);
      divisor.push_back(1);
      if (poly_mod(poly, divisor, p).empty()) return false;
    }
  }
  return true;
}

struct FieldRegistry {
  using Key = std::tuple<std::uint32_t, std::uint32_t, Poly>;
  std::mutex mutex;
  std::map<Key, std::unique_ptr<FieldSpec>> fields;

  static FieldRegistry& instance() {
    static FieldRegistry registry;
    return registry;
  }

  const FieldSpec& intern(std::uint32_t p, std::uint32_t m, Poly poly) {
    std::lock_guard lock(mutex);
    Key key{p, m, poly};
    auto it = fields.find(key);
    if (it == fields.end()) {
      it = fields.emplace(std::move(key),
                          std::unique_ptr<FieldSpec>(new FieldSpec(p, m, std::move(poly))))
               .first;
    }
    return *it->second;
  }
};

const FieldSpec& FieldSpec::get(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> poly) {
  if (!is_prime(p)) {
    throw Error(ErrorCode::InvalidFieldSpec, "characteristic " + std::to_string(p) + " is not prime");
  }
  if (m < 1) throw Error(ErrorCode::InvalidFieldSpec, "extension degree must be >= 1");
  if (ipow(p, m) > kMaxOrder) {
    throw Error(ErrorCode::InvalidFieldSpec, "field order exceeds 2^16");
  }
  if (m == 1) {
    if (!poly.empty()) {
      throw Error(ErrorCode::InvalidFieldSpec, "prime fields take no reduction polynomial");
    }
    return FieldRegistry::instance().intern(p, 1, {});
  }
  if (poly.empty()) poly = default_poly(p, m);
  if (poly.size() != m + 1) {
    throw Error(ErrorCode::InvalidFieldSpec, "reduction polynomial must have m+1 coefficients");
  }
  for (auto c : poly) {
    if (c >= p) throw Error(ErrorCode::InvalidFieldSpec, "polynomial coefficient out of range");
  }
  if (poly.back() != 1) throw Error(ErrorCode::InvalidFieldSpec, "reduction polynomial must be monic");
  if (!is_irreducible(p, poly)) {
    throw Error(ErrorCode::InvalidFieldSpec, "reduction polynomial is reducible over GF(" +
                                                 std::to_string(p) + ")");
  }
  return FieldRegistry::instance().intern(p, m, std::move(poly));
}

const FieldSpec& FieldSpec::of_order(std::uint32_t q) {
  if (q < 2 || q > kMaxOrder) {
    throw Error(ErrorCode::InvalidFieldSpec, "field order " + std::to_string(q) + " out of range");
  }
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t m = 0;
  std::uint32_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) {
    throw Error(ErrorCode::InvalidFieldSpec, std::to_string(q) + " is not a prime power");
  }
  return get(p, m);
}

const FieldSpec& FieldSpec::parse(std::string_view text) {
  auto parse_uint = [&](std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::ParseError, "bad field order '" + std::string(text) + "'");
    }
    return v;
  };
  if (auto caret = text.find('^'); caret != std::string_view::npos) {
    return get(parse_uint(text.substr(0, caret)), parse_uint(text.substr(caret + 1)));
  }
  return of_order(parse_uint(text));
}

const FieldSpec& FieldSpec::from_json(const nlohmann::json& j) {
  try {
    const auto p = j.at("p").get<std::uint32_t>();
    const auto m = j.value("m", 1u);
    Poly poly;
    if (j.contains("poly")) poly = j.at("poly").get<Poly>();
    return get(p, m, std::move(poly));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json FieldSpec::to_json() const {
  nlohmann::json j{{"p", p_}, {"m", m_}};
  if (m_ > 1) j["poly"] = poly_;
  return j;
}

std::string FieldSpec::name() const {
  if (m_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(" + std::to_string(p_) + "^" + std::to_string(m_) + ")";
}

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> poly)
    : p_(p), m_(m), q_(ipow(p, m)), poly_(std::move(poly)) {
  inv_.assign(q_, 0);
  if (m_ == 1) {
    for (std::uint32_t a = 1; a < q_; ++a) inv_[a] = inv_mod(a, p_);
    return;
  }
  if (q_ <= (1u << 12)) {
    // Find a generator of the multiplicative group and tabulate powers.
    for (std::uint32_t g = 2; g < q_; ++g) {
      std::vector<std::uint32_t> exp(q_ - 1);
      std::uint32_t x = 1;
      std::uint32_t order = 0;
      do {
        exp[order++] = x;
        x = poly_mul(x, g);
      } while (x != 1 && order < q_ - 1);
      if (x == 1 && order == q_ - 1) {
        exp_ = std::move(exp);
        log_.assign(q_, 0);
        for (std::uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;
        break;
      }
    }
  }
  for (std::uint32_t a = 1; a < q_; ++a) {
    if (!exp_.empty()) {
      inv_[a] = exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    } else {
      // a^(q-2) by square-and-multiply
      std::uint32_t result = 1, base = a, e = q_ - 2;
      while (e) {
        if (e & 1) result = poly_mul(result, base);
        base = poly_mul(base, base);
        e >>= 1;
      }
      inv_[a] = result;
    }
  }
}

std::uint32_t FieldSpec::poly_mul(std::uint32_t a, std::uint32_t b) const {
  const Poly da = digits_of(a, p_, m_);
  const Poly db = digits_of(b, p_, m_);
  Poly prod(2 * m_ - 1, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (da[i] == 0) continue;
    for (std::uint32_t j = 0; j < m_; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    }
  }
  Poly rem = poly_mod(std::move(prod), poly_, p_);
  std::uint32_t v = 0;
  for (std::size_t i = rem.size(); i-- > 0;) v = v * p_ + rem[i];
  return v;
}

std::uint32_t FieldSpec::add(std::uint32_t a, std::uint32_t b) const noexcept {
  if (m_ == 1) {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  if (p_ == 2) return a ^ b;
  std::uint32_t result = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    result += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return result;
}

std::uint32_t FieldSpec::neg(std::uint32_t a) const noexcept {
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  if (p_ == 2) return a;
  std::uint32_t result = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    result += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return result;
}

std::uint32_t FieldSpec::sub(std::uint32_t a, std::uint32_t b) const noexcept {
  return add(a, neg(b));
}

std::uint32_t FieldSpec::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  if (m_ == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
  if (!exp_.empty()) return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  return poly_mul(a, b);
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const noexcept { return inv_[a]; }

FieldElement FieldSpec::zero() const { return FieldElement(*this, 0); }
FieldElement FieldSpec::one() const { return FieldElement(*this, 1); }
FieldElement FieldSpec::minus_one() const { return FieldElement(*this, neg(1)); }

FieldElement FieldSpec::from_int(std::int64_t i) const {
  if (i < 0 || i >= static_cast<std::int64_t>(q_)) {
    throw Error(ErrorCode::OutOfRange,
                std::to_string(i) + " is not a canonical element of " + name());
  }
  return FieldElement(*this, static_cast<std::uint32_t>(i));
}

FieldElement FieldSpec::sign(int e) const { return (e % 2 == 0) ? one() : minus_one(); }

FieldElement::FieldElement(const FieldSpec& spec, std::uint32_t repr) : spec_(&spec), repr_(repr) {
  if (repr >= spec.q()) {
    throw Error(ErrorCode::OutOfRange,
                std::to_string(repr) + " is not a canonical element of " + spec.name());
  }
}

void FieldElement::require_same(const FieldElement& o) const {
  if (spec_ != o.spec_) {
    throw Error(ErrorCode::MismatchedField, spec_->name() + " vs " + o.spec_->name());
  }
}

FieldElement FieldElement::inv() const {
  if (repr_ == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in " + spec_->name());
  return {spec_, spec_->inv(repr_), Unchecked{}};
}

FieldElement FieldElement::pow(std::int64_t n) const {
  FieldElement base = *this;
  if (n < 0) {
    base = inv();
    n = -n;
  }
  std::uint32_t result = 1;
  std::uint32_t b = base.repr_;
  while (n > 0) {
    if (n & 1) result = spec_->mul(result, b);
    b = spec_->mul(b, b);
    n >>= 1;
  }
  return {spec_, result, Unchecked{}};
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  require_same(o);
  repr_ = spec_->add(repr_, o.repr_);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  require_same(o);
  repr_ = spec_->sub(repr_, o.repr_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  require_same(o);
  repr_ = spec_->mul(repr_, o.repr_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  require_same(o);
  if (o.repr_ == 0) throw Error(ErrorCode::DivisionByZero, "division by zero in " + spec_->name());
  repr_ = spec_->mul(repr_, spec_->inv(o.repr_));
  return *this;
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.repr(); }

}  // namespace slfr
