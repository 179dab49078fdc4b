#include "persistra/rational.hpp"

#include <cctype>

namespace persistra {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw parse_error("empty rational");

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw parse_error("rational cannot mix '/' and '.': " + text);
        std::string integral = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool neg = false;
        if (!integral.empty() && (integral[0] == '+' || integral[0] == '-')) {
            neg = integral[0] == '-';
            integral = integral.substr(1);
        }
        if (integral.empty() && frac.empty()) throw parse_error("bad rational: " + text);
        for (char c : integral + frac)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw parse_error("bad rational: " + text);
        mpz_class num(integral.empty() ? "0" : integral);
        mpz_class den = 1;
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    }

    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw parse_error("bad rational: " + text);
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
        throw parse_error("zero denominator: " + text);
    if (mpz_sgn(mpq_denref(q.get_mpq_t())) < 0) {
        mpz_neg(mpq_numref(q.get_mpq_t()), mpq_numref(q.get_mpq_t()));
        mpz_neg(mpq_denref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
    }
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

long long floor_to_ll(const Rational& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!fl.fits_slong_p()) throw std::overflow_error("rational floor out of range");
    return fl.get_si();
}

}  // namespace persistra
