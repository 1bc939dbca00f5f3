#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcm {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (e < 0) {
    if (base == 0) throw std::domain_error("rat_pow: 0 to a negative power");
    Rat inv = 1 / base;
    return rat_pow(inv, -e);
  }
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), (unsigned long)e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), (unsigned long)e);
  r.canonicalize();
  return r;
}

// Accepts "3/7", "-2", "0.35" (exact decimal), with optional surrounding space.
inline Rat parse_rat(const std::string& s0) {
  std::string s;
  for (char c : s0)
    if (!isspace((unsigned char)c)) s += c;
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos)
      throw std::invalid_argument("rational cannot mix '.' and '/': " + s0);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("bad rational: " + s0);
    Rat r(Int(digits), int_pow(Int(10), frac_len));
    r.canonicalize();
    return r;
  }
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s0);
  r.canonicalize();
  return r;
}

// Lowest terms; integer values print without a denominator.
inline std::string rat_str(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// log of a positive rational, safe for magnitudes far outside double range
inline double rat_ln(const Rat& x) {
  if (sgn(x) <= 0) throw std::domain_error("rat_ln: nonpositive argument");
  long en, ed;
  double mn = mpz_get_d_2exp(&en, x.get_num().get_mpz_t());
  double md = mpz_get_d_2exp(&ed, x.get_den().get_mpz_t());
  return std::log(mn) - std::log(md) + std::log(2.0) * (double)(en - ed);
}

}  // namespace rcm
