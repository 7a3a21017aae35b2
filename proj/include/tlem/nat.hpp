#ifndef TLEM_NAT_HPP
#define TLEM_NAT_HPP

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlem {

/// Unbounded natural number. All arithmetic in the engine is exact.
using Nat = mpz_class;

inline Nat nat_from_string(const std::string& s)
{
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("not a natural number: '" + s + "'");
  }
  return Nat(s, 10);
}

inline std::string to_string(const Nat& n) { return n.get_str(10); }

/// Number of binary digits of n; 0 for n == 0.
inline std::size_t bit_length(const Nat& n)
{
  return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline Nat pow2(unsigned long e)
{
  Nat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline bool fits_ulong(const Nat& n) { return n.fits_ulong_p() != 0; }

}  // namespace tlem

#endif  // TLEM_NAT_HPP
