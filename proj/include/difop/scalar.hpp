#pragma once

// Exact field elements: arbitrary-precision rationals or residues modulo a
// prime p < 2^31.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

namespace difop {

/// Residue class modulo a prime.
struct ModP {
  std::uint32_t value = 0;
  std::uint32_t prime = 0;
};

inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  if (a == 0) throw std::domain_error("division by zero in prime field");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

/// An element of Q or F_p.
///
/// Rationals are kept canonical (lowest terms, positive denominator) by GMP.
/// Arithmetic between a rational and a residue promotes the rational into
/// the prime field, so field-agnostic constants such as 0, 1 and -1 can be
/// written as plain integers.
class Scalar {
 public:
  Scalar() : rep_(mpq_class(0)) {}
  Scalar(long v) : rep_(mpq_class(v)) {}  // NOLINT: implicit on purpose
  Scalar(int v) : rep_(mpq_class(static_cast<long>(v))) {}  // NOLINT
  explicit Scalar(const mpq_class& q) : rep_(q) { std::get<mpq_class>(rep_).canonicalize(); }
  Scalar(ModP m) : rep_(m) {}  // NOLINT

  static Scalar modular(std::int64_t v, std::uint32_t p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return Scalar(ModP{static_cast<std::uint32_t>(r), p});
  }

  bool is_rational() const { return std::holds_alternative<mpq_class>(rep_); }
  bool is_modular() const { return !is_rational(); }
  const mpq_class& rational() const { return std::get<mpq_class>(rep_); }
  ModP residue() const { return std::get<ModP>(rep_); }

  bool is_zero() const {
    if (is_rational()) return sgn(rational()) == 0;
    return residue().value == 0;
  }
  bool is_one() const {
    if (is_rational()) return rational() == 1;
    return residue().value == 1;
  }

  /// Maps this value into F_p (rationals need a denominator prime to p).
  Scalar to_prime(std::uint32_t p) const {
    if (is_modular()) {
      if (residue().prime != p) throw std::domain_error("mixing different prime fields");
      return *this;
    }
    const mpq_class& q = rational();
    mpz_class num = q.get_num() % p;
    if (num < 0) num += p;
    mpz_class den = q.get_den() % p;
    if (den == 0) throw std::domain_error("denominator divisible by the field characteristic");
    auto n = static_cast<std::uint32_t>(num.get_ui());
    auto d = static_cast<std::uint32_t>(den.get_ui());
    return Scalar(ModP{static_cast<std::uint32_t>(
                           (static_cast<std::uint64_t>(n) * mod_inverse(d, p)) % p),
                       p});
  }

  Scalar operator-() const {
    if (is_rational()) return Scalar(mpq_class(-rational()));
    ModP m = residue();
    return Scalar(ModP{m.value == 0 ? 0 : m.prime - m.value, m.prime});
  }

  Scalar& operator+=(const Scalar& o) { return *this = combine(*this, o, Op::Add); }
  Scalar& operator-=(const Scalar& o) { return *this = combine(*this, o, Op::Sub); }
  Scalar& operator*=(const Scalar& o) { return *this = combine(*this, o, Op::Mul); }
  Scalar& operator/=(const Scalar& o) { return *this = combine(*this, o, Op::Div); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, Op::Add); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, Op::Sub); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return combine(a, b, Op::Mul); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return combine(a, b, Op::Div); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return a.rational() == b.rational();
    if (a.is_modular()) {
      ModP m = a.residue();
      return b.to_prime(m.prime).residue().value == m.value;
    }
    ModP m = b.residue();
    return a.to_prime(m.prime).residue().value == m.value;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// "p/q" or "n" for rationals; the residue for prime-field values.
  std::string str() const {
    if (is_rational()) return rational().get_str();
    return std::to_string(residue().value);
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  enum class Op { Add, Sub, Mul, Div };

  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    if (a.is_rational() && b.is_rational()) {
      const mpq_class& x = a.rational();
      const mpq_class& y = b.rational();
      switch (op) {
        case Op::Add: return Scalar(mpq_class(x + y));
        case Op::Sub: return Scalar(mpq_class(x - y));
        case Op::Mul: return Scalar(mpq_class(x * y));
        case Op::Div:
          if (sgn(y) == 0) throw std::domain_error("division by zero");
          return Scalar(mpq_class(x / y));
      }
    }
    std::uint32_t p = a.is_modular() ? a.residue().prime : b.residue().prime;
    std::uint64_t x = a.to_prime(p).residue().value;
    std::uint64_t y = b.to_prime(p).residue().value;
    switch (op) {
      case Op::Add: return Scalar(ModP{static_cast<std::uint32_t>((x + y) % p), p});
      case Op::Sub: return Scalar(ModP{static_cast<std::uint32_t>((x + p - y) % p), p});
      case Op::Mul: return Scalar(ModP{static_cast<std::uint32_t>((x * y) % p), p});
      case Op::Div:
        return Scalar(ModP{static_cast<std::uint32_t>(
                               (x * mod_inverse(static_cast<std::uint32_t>(y), p)) % p),
                           p});
    }
    return {};
  }

  std::variant<mpq_class, ModP> rep_;
};

inline Scalar sign_of(int exponent) { return (exponent % 2 == 0) ? Scalar(1) : Scalar(-1); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// The ground field k: Q, or F_p for a prime p < 2^31.
class Field {
 public:
  Field() = default;

  static Field rationals() { return Field(); }
  static Field prime(std::uint64_t p) {
    if (p >= (1ull << 31)) throw std::invalid_argument("prime must be below 2^31");
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    Field f;
    f.prime_ = static_cast<std::uint32_t>(p);
    return f;
  }

  /// Accepts "rationals" or "fp:<p>".
  static Field parse(const std::string& text) {
    if (text == "rationals" || text == "Q") return rationals();
    if (text.rfind("fp:", 0) == 0) {
      std::uint64_t p = 0;
      try {
        p = std::stoull(text.substr(3));
      } catch (const std::exception&) {
        throw std::invalid_argument("malformed prime in field '" + text + "'");
      }
      return prime(p);
    }
    throw std::invalid_argument("unknown field '" + text + "'");
  }

  bool is_rational() const { return prime_ == 0; }
  std::uint32_t characteristic() const { return prime_; }

  Scalar from_rational(const mpq_class& q) const {
    Scalar s(q);
    return is_rational() ? s : s.to_prime(prime_);
  }
  Scalar from_int(long v) const { return from_rational(mpq_class(v)); }
  Scalar coerce(const Scalar& s) const { return is_rational() ? s : s.to_prime(prime_); }

  /// Parses "n" or "p/q".
  Scalar parse_scalar(const std::string& text) const {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("malformed coefficient '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return from_rational(q);
  }

  std::string name() const { return is_rational() ? "rationals" : "fp:" + std::to_string(prime_); }

  friend bool operator==(const Field& a, const Field& b) { return a.prime_ == b.prime_; }

 private:
  std::uint32_t prime_ = 0;
};

}  // namespace difop
