#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slfr/error.hpp"

namespace slfr {

class FieldElement;

/// A finite field GF(p^m) with q = p^m <= 2^16.
///
/// Elements are encoded canonically as integers in [0, q): the base-p digits
/// of the repr are the polynomial coefficients, lowest degree first. The
/// reduction polynomial is stored the same way (m+1 coefficients, monic).
///
/// Specs are interned: `get` returns a reference to a process-wide instance
/// that lives until exit, so two elements share a field iff their spec
/// addresses are equal. Instances are immutable and safe to share.
class FieldSpec {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  /// Throws InvalidFieldSpec if p is not prime, q exceeds 2^16, or the
  /// polynomial is not monic and irreducible of degree m. An empty `poly`
  /// for m > 1 selects the default polynomial for that order.
  static const FieldSpec& get(std::uint32_t p, std::uint32_t m = 1,
                              std::vector<std::uint32_t> poly = {});

  /// Field of order q with the default reduction polynomial.
  static const FieldSpec& of_order(std::uint32_t q);

  /// Accepts "7", "9", "3^2". Throws ParseError / InvalidFieldSpec.
  static const FieldSpec& parse(std::string_view text);

  static const FieldSpec& from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t m() const noexcept { return m_; }
  std::uint32_t q() const noexcept { return q_; }
  const std::vector<std::uint32_t>& poly() const noexcept { return poly_; }
  std::string name() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement minus_one() const;
  /// Throws OutOfRange unless 0 <= i < q.
  FieldElement from_int(std::int64_t i) const;
  /// (-1)^e, which is 1 for every e in characteristic 2.
  FieldElement sign(int e) const;

  // Raw arithmetic on canonical reprs; callers guarantee reprs are < q.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg(std::uint32_t a) const noexcept;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
  /// Precondition: a != 0.
  std::uint32_t inv(std::uint32_t a) const noexcept;

  FieldSpec(const FieldSpec&) = delete;
  FieldSpec& operator=(const FieldSpec&) = delete;

 private:
  FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> poly);

  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t q_;
  std::vector<std::uint32_t> poly_;
  std::vector<std::uint32_t> inv_;
  // log/antilog tables, only for extension fields with q <= 2^12
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;

  friend struct FieldRegistry;
};

/// Monic irreducibility test over GF(p) by exhaustive trial division with
/// every monic polynomial of degree 1..deg/2. Coefficients lowest first.
bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& poly);

bool is_prime(std::uint32_t n);

/// A value in some GF(q). Cheap to copy (pointer + repr).
class FieldElement {
 public:
  /// Throws OutOfRange if repr >= q.
  FieldElement(const FieldSpec& spec, std::uint32_t repr);

  const FieldSpec& spec() const noexcept { return *spec_; }
  std::uint32_t repr() const noexcept { return repr_; }
  bool is_zero() const noexcept { return repr_ == 0; }
  bool is_one() const noexcept { return repr_ == 1; }

  /// Throws DivisionByZero for zero.
  FieldElement inv() const;
  /// Square-and-multiply; negative exponents invert first.
  FieldElement pow(std::int64_t n) const;

  FieldElement operator-() const noexcept { return {spec_, spec_->neg(repr_), Unchecked{}}; }
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.spec_ == b.spec_ && a.repr_ == b.repr_;
  }

 private:
  struct Unchecked {};
  FieldElement(const FieldSpec* spec, std::uint32_t repr, Unchecked) noexcept
      : spec_(spec), repr_(repr) {}
  void require_same(const FieldElement& o) const;

  const FieldSpec* spec_;
  std::uint32_t repr_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

// Named forms of the field operations.
inline FieldElement fe_add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement fe_mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement fe_neg(const FieldElement& a) { return -a; }
inline FieldElement fe_inv(const FieldElement& a) { return a.inv(); }
inline FieldElement fe_pow(const FieldElement& a, std::int64_t n) { return a.pow(n); }
inline FieldElement fe_from_int(const FieldSpec& spec, std::int64_t i) { return spec.from_int(i); }

}  // namespace slfr
