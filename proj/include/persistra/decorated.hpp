#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "persistra/rational.hpp"

namespace persistra {

// ---------------------------------------------------------------------------
// Extended rationals: -inf < every finite value < +inf.

struct XReal {
    enum Kind { neg_inf = -1, finite = 0, pos_inf = 1 };

    Kind kind = finite;
    Rational value;  // meaningful only when kind == finite

    XReal() = default;
    XReal(const Rational& q) : kind(finite), value(q) {}
    XReal(long n) : kind(finite), value(rat(n)) {}

    static XReal minus_infinity() { return XReal(neg_inf, Rational()); }
    static XReal plus_infinity() { return XReal(pos_inf, Rational()); }

    bool is_finite() const { return kind == finite; }

    // -inf + d = -inf, +inf + d = +inf
    XReal operator+(const Rational& d) const {
        return is_finite() ? XReal(Rational(value + d)) : *this;
    }
    XReal operator-(const Rational& d) const {
        return is_finite() ? XReal(Rational(value - d)) : *this;
    }

    friend bool operator==(const XReal& a, const XReal& b) {
        if (a.kind != b.kind) return false;
        return a.kind != finite || a.value == b.value;
    }
    friend bool operator<(const XReal& a, const XReal& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.kind == finite && a.value < b.value;
    }
    friend bool operator!=(const XReal& a, const XReal& b) { return !(a == b); }
    friend bool operator>(const XReal& a, const XReal& b) { return b < a; }
    friend bool operator<=(const XReal& a, const XReal& b) { return !(b < a); }
    friend bool operator>=(const XReal& a, const XReal& b) { return !(a < b); }

  private:
    XReal(Kind k, Rational q) : kind(k), value(std::move(q)) {}
};

std::string to_string(const XReal& x);

// Parses "-inf", "+inf", "inf" or a rational literal.
XReal parse_xreal(const std::string& text);

// ---------------------------------------------------------------------------
// Decorated values: p^- < p < p^+, ticks distinguishing interval ends.

enum class Dec : int { minus = 0, plus = 1 };

inline char dec_char(Dec d) { return d == Dec::minus ? '-' : '+'; }

struct DecoratedValue {
    XReal value;
    Dec dec = Dec::minus;

    DecoratedValue() = default;
    // Infinite values normalize their decoration: -inf carries +, +inf carries -.
    DecoratedValue(XReal v, Dec d) : value(std::move(v)), dec(d) {
        if (value.kind == XReal::neg_inf) dec = Dec::plus;
        if (value.kind == XReal::pos_inf) dec = Dec::minus;
    }
    DecoratedValue(const Rational& v, Dec d) : DecoratedValue(XReal(v), d) {}

    static DecoratedValue minus_infinity() {
        return DecoratedValue(XReal::minus_infinity(), Dec::plus);
    }
    static DecoratedValue plus_infinity() {
        return DecoratedValue(XReal::plus_infinity(), Dec::minus);
    }

    friend bool operator==(const DecoratedValue& a, const DecoratedValue& b) {
        return a.value == b.value && a.dec == b.dec;
    }
    friend bool operator<(const DecoratedValue& a, const DecoratedValue& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.dec < b.dec;
    }
    friend bool operator!=(const DecoratedValue& a, const DecoratedValue& b) { return !(a == b); }
    friend bool operator>(const DecoratedValue& a, const DecoratedValue& b) { return b < a; }
    friend bool operator<=(const DecoratedValue& a, const DecoratedValue& b) { return !(b < a); }
    friend bool operator>=(const DecoratedValue& a, const DecoratedValue& b) { return !(a < b); }
};

enum class Ordering { less = -1, equal = 0, greater = 1 };

inline Ordering compare_decorated(const DecoratedValue& x, const DecoratedValue& y) {
    if (x < y) return Ordering::less;
    if (y < x) return Ordering::greater;
    return Ordering::equal;
}

// Renders "1/2+", "3-"; infinities print bare as "-inf" / "+inf".
std::string to_string(const DecoratedValue& v);

// Comparisons of a decorated value against a plain value, as in p^- < p < p^+.
inline bool dec_lt(const DecoratedValue& a, const XReal& t) {
    return a.value < t || (a.value == t && a.dec == Dec::minus);
}
inline bool dec_gt(const DecoratedValue& a, const XReal& t) {
    return a.value > t || (a.value == t && a.dec == Dec::plus);
}

// ---------------------------------------------------------------------------
// A decorated point (p^*, q^*), equivalently the nonempty real interval
// (p^*, q^*(. Requires p^* < q^*; the diagonal case is (r^-, r^+) = [r,r].

struct DecoratedPoint {
    DecoratedValue birth;
    DecoratedValue death;

    DecoratedPoint() : birth(rat(0), Dec::minus), death(rat(1), Dec::minus) {}
    DecoratedPoint(DecoratedValue b, DecoratedValue d)
        : birth(std::move(b)), death(std::move(d)) {
        if (!(birth < death))
            throw std::invalid_argument("decorated point needs birth < death, got " +
                                        to_string(birth) + "," + to_string(death));
    }

    bool on_diagonal() const { return birth.value == death.value; }

    // Does the interval contain the point t?  ((p^-: p <= t, p^+: p < t, etc.)
    bool contains(const XReal& t) const { return !dec_gt(birth, t) && !dec_lt(death, t); }
    bool contains(const Rational& t) const { return contains(XReal(t)); }

    friend bool operator==(const DecoratedPoint& a, const DecoratedPoint& b) {
        return a.birth == b.birth && a.death == b.death;
    }
    friend bool operator!=(const DecoratedPoint& a, const DecoratedPoint& b) { return !(a == b); }
    friend bool operator<(const DecoratedPoint& a, const DecoratedPoint& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    }
};

// Semantic alias: a decorated point names the real interval with those ends.
using Interval = DecoratedPoint;

// Convenience constructors for the four finite decoration patterns and the
// half-infinite forms.
Interval interval_co(const Rational& p, const Rational& q);      // [p,q) = (p^-, q^-(
Interval interval_cc(const Rational& p, const Rational& q);      // [p,q] = (p^-, q^+(
Interval interval_oo(const Rational& p, const Rational& q);      // (p,q) = (p^+, q^-(
Interval interval_oc(const Rational& p, const Rational& q);      // (p,q] = (p^+, q^+(
Interval interval_to_infinity(const Rational& p, Dec d = Dec::minus);

std::string to_string(const DecoratedPoint& p);

// ---------------------------------------------------------------------------
// Closed rectangles [a,b] x [c,d] with a < b, c < d. Persistence rectangles
// additionally satisfy b <= c (they live in the half-plane above the diagonal).

struct Rect {
    XReal a, b, c, d;

    Rect(XReal a_, XReal b_, XReal c_, XReal d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
        if (!(a < b) || !(c < d))
            throw std::invalid_argument("rectangle needs a < b and c < d");
    }
    Rect(const Rational& a_, const Rational& b_, const Rational& c_, const Rational& d_)
        : Rect(XReal(a_), XReal(b_), XReal(c_), XReal(d_)) {}

    bool in_half_plane() const { return b <= c; }

    friend bool operator==(const Rect& r, const Rect& s) {
        return r.a == s.a && r.b == s.b && r.c == s.c && r.d == s.d;
    }
};

std::string to_string(const Rect& r);

// Is the tick of x^* inside the closed segment [lo,hi]?
//   x^- in [lo,hi]  iff  lo < x <= hi
//   x^+ in [lo,hi]  iff  lo <= x < hi
inline bool tick_in_segment(const DecoratedValue& x, const XReal& lo, const XReal& hi) {
    if (x.dec == Dec::minus) return lo < x.value && x.value <= hi;
    return lo <= x.value && x.value < hi;
}

// Tick membership for arbitrary rectangles; no half-plane requirement.
inline bool tick_in_rect(const DecoratedPoint& pt, const Rect& r) {
    return tick_in_segment(pt.birth, r.a, r.b) && tick_in_segment(pt.death, r.c, r.d);
}

// The membership relation (p^*, q^*) in R of the measure theory: the interval
// (p^*,q^*( satisfies [b,c] subset J subset (a,d). Rejects rectangles with b > c.
bool point_in_rect(const DecoratedPoint& pt, const Rect& r);

// delta-thickening [a-delta, b+delta] x [c-delta, d+delta]; infinite ends absorb.
Rect thicken(const Rect& r, const Rational& delta);

// ---------------------------------------------------------------------------
// Finite multiset: items with positive integer multiplicities.

template <class T>
class Multiset {
  public:
    using Map = std::map<T, long long>;

    Multiset() = default;

    void add(const T& item, long long mult = 1) {
        if (mult < 0) throw std::invalid_argument("negative multiplicity");
        if (mult == 0) return;
        items_[item] += mult;
    }

    long long multiplicity(const T& item) const {
        auto it = items_.find(item);
        return it == items_.end() ? 0 : it->second;
    }

    long long cardinality() const {
        long long n = 0;
        for (auto& [k, m] : items_) n += m;
        return n;
    }

    bool empty() const { return items_.empty(); }
    std::size_t distinct_size() const { return items_.size(); }

    template <class Pred>
    long long count_if(Pred&& pred) const {
        long long n = 0;
        for (auto& [k, m] : items_)
            if (pred(k)) n += m;
        return n;
    }

    std::vector<T> expand() const {
        std::vector<T> out;
        for (auto& [k, m] : items_)
            for (long long i = 0; i < m; ++i) out.push_back(k);
        return out;
    }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    friend bool operator==(const Multiset& a, const Multiset& b) { return a.items_ == b.items_; }
    friend bool operator!=(const Multiset& a, const Multiset& b) { return !(a == b); }

  private:
    Map items_;
};

}  // namespace persistra
