#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace persistra {

// Exact arbitrary-precision rational. All coordinate arithmetic in the
// library goes through this type; floating point never enters core logic.
using Rational = mpq_class;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an oracle or input violates a documented contract
// (non-additive measure, incompatible grids, ...).
struct contract_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational rat(long n, long d = 1) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// Accepts "n", "n/d" and plain decimals like "-2.5".
Rational parse_rational(const std::string& text);

// Lowest terms, "n" or "n/d".
std::string to_string(const Rational& q);

long long floor_to_ll(const Rational& q);

}  // namespace persistra
