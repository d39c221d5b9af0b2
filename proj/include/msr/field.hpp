#pragma once

#include <cstdint>
#include <compare>
#include <ostream>

namespace msr {

// Raw field symbol. Always a canonical representative in [0, p) of whichever
// PrimeField produced it.
using Symbol = std::uint64_t;

bool is_prime(std::uint64_t value);

// Smallest prime >= value.
std::uint64_t next_prime(std::uint64_t value);

// GF(p) for a prime p. Arithmetic is on raw Symbols; the field object carries
// the modulus so that matrices and codewords can stay plain integer arrays.
class PrimeField {
 public:
  // Throws InvalidParams when p is not prime.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }

  Symbol reduce(std::uint64_t v) const noexcept { return v % p_; }
  Symbol from_int(std::int64_t v) const noexcept;

  Symbol add(Symbol a, Symbol b) const noexcept {
    const Symbol s = a + b;
    return (s >= p_ || s < a) ? s - p_ : s;
  }
  Symbol sub(Symbol a, Symbol b) const noexcept { return a >= b ? a - b : p_ - (b - a); }
  Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Symbol mul(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  // a + b * c
  Symbol mul_add(Symbol a, Symbol b, Symbol c) const noexcept { return add(a, mul(b, c)); }
  Symbol pow(Symbol base, std::uint64_t exp) const noexcept;
  // Throws DivisionByZero on a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  // Number of bytes needed to store any symbol little-endian.
  unsigned symbol_width() const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

// Element tagged with its modulus. This is the checked, self-describing form
// used at API boundaries; hot loops use PrimeField on raw Symbols instead.
class FieldElement {
 public:
  FieldElement(Symbol value, const PrimeField& field) : value_(field.reduce(value)), p_(field.modulus()) {}

  Symbol value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return p_; }
  bool is_zero() const noexcept { return value_ == 0; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  struct Trusted {};
  FieldElement(Symbol value, std::uint64_t p, Trusted) : value_(value), p_(p) {}

  friend FieldElement add(const FieldElement&, const FieldElement&);
  friend FieldElement sub(const FieldElement&, const FieldElement&);
  friend FieldElement mul(const FieldElement&, const FieldElement&);
  friend FieldElement neg(const FieldElement&);
  friend FieldElement inv(const FieldElement&);

  Symbol value_;
  std::uint64_t p_;
};

// All binary operations throw ModulusMismatch when the operands come from
// different fields.
FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement inv(const FieldElement& a);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return mul(a, b); }
inline FieldElement operator-(const FieldElement& a) { return neg(a); }

std::ostream& operator<<(std::ostream& os, const FieldElement& e);

}  // namespace msr
