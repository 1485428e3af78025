#pragma once

#include <gmpxx.h>

#include <string>

namespace gaudin {

// Exact rational scalar. mpq_class keeps values in lowest terms with a
// positive denominator as long as inputs are canonical, which rat_parse
// guarantees.
using Rat = mpq_class;
using Int = mpz_class;

/// Parses "p", "-p" or "p/q" exactly. Throws std::invalid_argument on
/// malformed input or zero denominator.
Rat rat_parse(const std::string& text);

/// Canonical string form: "p" or "p/q" with q > 1.
std::string rat_str(const Rat& x);

inline double rat_to_double(const Rat& x) { return x.get_d(); }

inline Rat rat_of(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace gaudin
