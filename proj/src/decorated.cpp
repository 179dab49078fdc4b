#include "persistra/decorated.hpp"

namespace persistra {

std::string to_string(const XReal& x) {
    switch (x.kind) {
        case XReal::neg_inf: return "-inf";
        case XReal::pos_inf: return "+inf";
        default: return to_string(x.value);
    }
}

XReal parse_xreal(const std::string& text) {
    if (text == "-inf") return XReal::minus_infinity();
    if (text == "+inf" || text == "inf") return XReal::plus_infinity();
    return XReal(parse_rational(text));
}

std::string to_string(const DecoratedValue& v) {
    if (!v.value.is_finite()) return to_string(v.value);
    return to_string(v.value) + dec_char(v.dec);
}

std::string to_string(const DecoratedPoint& p) {
    return "(" + to_string(p.birth) + "," + to_string(p.death) + ")";
}

std::string to_string(const Rect& r) {
    return "[" + to_string(r.a) + "," + to_string(r.b) + "]x[" + to_string(r.c) + "," +
           to_string(r.d) + "]";
}

Interval interval_co(const Rational& p, const Rational& q) {
    return Interval(DecoratedValue(p, Dec::minus), DecoratedValue(q, Dec::minus));
}
Interval interval_cc(const Rational& p, const Rational& q) {
    return Interval(DecoratedValue(p, Dec::minus), DecoratedValue(q, Dec::plus));
}
Interval interval_oo(const Rational& p, const Rational& q) {
    return Interval(DecoratedValue(p, Dec::plus), DecoratedValue(q, Dec::minus));
}
Interval interval_oc(const Rational& p, const Rational& q) {
    return Interval(DecoratedValue(p, Dec::plus), DecoratedValue(q, Dec::plus));
}
Interval interval_to_infinity(const Rational& p, Dec d) {
    return Interval(DecoratedValue(p, d), DecoratedValue::plus_infinity());
}

bool point_in_rect(const DecoratedPoint& pt, const Rect& r) {
    if (!r.in_half_plane())
        throw std::invalid_argument("point_in_rect expects b <= c, got " + to_string(r));
    return tick_in_rect(pt, r);
}

Rect thicken(const Rect& r, const Rational& delta) {
    if (delta < 0) throw std::invalid_argument("negative thickening");
    return Rect(r.a - delta, r.b + delta, r.c - delta, r.d + delta);
}

}  // namespace persistra
