#include "msr/field.hpp"

#include <array>
#include <bit>
#include <string>

#include "msr/error.hpp"

namespace msr {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus()) {
    throw ModulusMismatch("field elements from GF(" + std::to_string(a.modulus()) + ") and GF(" +
                          std::to_string(b.modulus()) + ")");
  }
}

}  // namespace

// Deterministic Miller-Rabin; this base set is exact for all 64-bit inputs.
bool is_prime(std::uint64_t value) {
  if (value < 2) return false;
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto b : bases) {
    if (value % b == 0) return value == b;
  }
  std::uint64_t d = value - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto b : bases) {
    std::uint64_t x = powmod(b, d, value);
    if (x == 1 || x == value - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, value);
      if (x == value - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t value) {
  if (value <= 2) return 2;
  std::uint64_t c = value;
  while (!is_prime(c)) ++c;
  return c;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (!is_prime(p)) throw InvalidParams("modulus " + std::to_string(p) + " is not prime");
  if (p >= (std::uint64_t{1} << 63)) throw InvalidParams("modulus must be below 2^63");
}

Symbol PrimeField::from_int(std::int64_t v) const noexcept {
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t m = v % p;
  if (m < 0) m += p;
  return static_cast<Symbol>(m);
}

Symbol PrimeField::pow(Symbol base, std::uint64_t exp) const noexcept { return powmod(base, exp, p_); }

Symbol PrimeField::inv(Symbol a) const {
  if (a % p_ == 0) throw DivisionByZero("inverse of zero in GF(" + std::to_string(p_) + ")");
  // Extended Euclid on signed 128-bit to stay exact for any 63-bit modulus.
  __int128 t = 0, new_t = 1;
  __int128 r = p_, new_r = a % p_;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    const __int128 tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const __int128 tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (t < 0) t += p_;
  return static_cast<Symbol>(t);
}

unsigned PrimeField::symbol_width() const noexcept {
  const unsigned bits = std::bit_width(p_ - 1);
  return bits == 0 ? 1 : (bits + 7) / 8;
}

FieldElement add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  const std::uint64_t p = a.modulus();
  const std::uint64_t s = a.value() + b.value();
  return FieldElement(s >= p ? s - p : s, p, FieldElement::Trusted{});
}

FieldElement sub(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  const std::uint64_t p = a.modulus();
  const Symbol v = a.value() >= b.value() ? a.value() - b.value() : p - (b.value() - a.value());
  return FieldElement(v, p, FieldElement::Trusted{});
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return FieldElement(mulmod(a.value(), b.value(), a.modulus()), a.modulus(), FieldElement::Trusted{});
}

FieldElement neg(const FieldElement& a) {
  const Symbol v = a.value() == 0 ? 0 : a.modulus() - a.value();
  return FieldElement(v, a.modulus(), FieldElement::Trusted{});
}

FieldElement inv(const FieldElement& a) {
  if (a.value() == 0) throw DivisionByZero("inverse of zero in GF(" + std::to_string(a.modulus()) + ")");
  // p is prime, so a^(p-2) is the inverse.
  return FieldElement(powmod(a.value(), a.modulus() - 2, a.modulus()), a.modulus(), FieldElement::Trusted{});
}

std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
  return os << e.value() << " (mod " << e.modulus() << ")";
}

}  // namespace msr
