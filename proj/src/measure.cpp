#include "persistra/measure.hpp"

#include <algorithm>

namespace persistra {

std::string to_string(const Count& c) {
    return c.is_infinite ? "inf" : std::to_string(c.n);
}

Count RMeasure::operator()(const Rect& r) const {
    if (!in_domain(r))
        throw std::domain_error("rectangle outside measure domain: " + to_string(r));
    return eval(r);
}

Count RMeasure::extended(const Rect& r) const {
    if (!in_domain(r)) return Count::infinity();
    return eval(r);
}

RMeasure measure_of_barcode(const Barcode& b) {
    RMeasure mu;
    // Counting decorated points is well defined for any rectangle of the
    // extended plane, so the declared domain is not restricted.
    mu.domain = MeasureDomain::extended_plane;
    std::vector<Rational> endpoints;
    for (auto& [iv, mult] : b.intervals) {
        if (iv.birth.value.is_finite()) endpoints.push_back(iv.birth.value.value);
        if (iv.death.value.is_finite()) endpoints.push_back(iv.death.value.value);
    }
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    mu.grid = std::move(endpoints);
    auto intervals = std::make_shared<Multiset<Interval>>(b.intervals);
    mu.eval = [intervals](const Rect& r) -> Count {
        long long n = intervals->count_if([&](const Interval& iv) { return tick_in_rect(iv, r); });
        return Count(static_cast<unsigned long long>(n));
    };
    return mu;
}

RMeasure measure_of_grid_module(const GridModule& m) {
    RMeasure mu;
    mu.domain = MeasureDomain::half_plane;
    mu.grid = m.grid;
    auto mod = std::make_shared<GridModule>(m);
    mu.eval = [mod](const Rect& r) -> Count {
        if (!r.in_half_plane())
            throw std::domain_error("grid module measure needs b <= c: " + to_string(r));
        const auto& grid = mod->grid;
        long n = static_cast<long>(grid.size());
        // Side snapping: a,b floor to the largest grid value <= side (virtual
        // -inf below the grid), c,d lift to the smallest grid value >= side
        // (virtual +inf above it).
        auto floor_idx = [&](const XReal& x) -> GridIndex {
            if (x.kind == XReal::neg_inf) return -1;
            if (x.kind == XReal::pos_inf) return n - 1;
            auto it = std::upper_bound(grid.begin(), grid.end(), x.value);
            return static_cast<GridIndex>(it - grid.begin()) - 1;
        };
        auto ceil_idx = [&](const XReal& x) -> GridIndex {
            if (x.kind == XReal::neg_inf) return 0;
            if (x.kind == XReal::pos_inf) return n;
            auto it = std::lower_bound(grid.begin(), grid.end(), x.value);
            return static_cast<GridIndex>(it - grid.begin());
        };
        GridIndex ia = floor_idx(r.a), ib = floor_idx(r.b);
        GridIndex jc = ceil_idx(r.c), jd = ceil_idx(r.d);
        long v = static_cast<long>(rank_between(*mod, ib, jc)) -
                 static_cast<long>(rank_between(*mod, ia, jc)) -
                 static_cast<long>(rank_between(*mod, ib, jd)) +
                 static_cast<long>(rank_between(*mod, ia, jd));
        if (v < 0) throw contract_error("rank formula produced a negative count");
        return Count(static_cast<unsigned long long>(v));
    };
    return mu;
}

RMeasure webb_measure() {
    RMeasure mu;
    mu.domain = MeasureDomain::extended_plane;
    std::vector<Rational> grid;
    for (long k = -64; k <= 0; ++k) grid.push_back(rat(k));
    mu.grid = std::move(grid);
    mu.eval = [](const Rect& r) -> Count {
        // Death side: 0^+ in [c,d] iff c <= 0 < d.
        XReal zero{rat(0)};
        bool death_ok = r.c <= zero && zero < r.d;
        if (!death_ok) return Count(0);
        // Singular point (-inf, 0^+).
        if (r.a.kind == XReal::neg_inf) return Count::infinity();
        // Count n >= 1 with -n^+ in [a,b], i.e. a <= -n < b, i.e. -b < n <= -a.
        long long hi = floor_to_ll(Rational(-r.a.value));
        long long lo = 1;
        if (r.b.kind == XReal::finite) {
            // least integer strictly greater than -b
            lo = std::max(lo, floor_to_ll(Rational(-r.b.value)) + 1);
        }
        if (hi < lo) return Count(0);
        return Count(static_cast<unsigned long long>(hi - lo + 1));
    };
    return mu;
}

RMeasure corrupt_measure(const RMeasure& base, unsigned long long extra) {
    RMeasure mu = base;
    auto inner = base.eval;
    mu.eval = [inner, extra](const Rect& r) -> Count {
        Count c = inner(r);
        return c + Count(extra);
    };
    return mu;
}

namespace {

// Probe coordinate strictly beyond the declared grid (or the caller bound).
Rational beyond(const RMeasure& mu, std::optional<Rational> bound, bool below) {
    if (bound) return below ? Rational(-*bound) : *bound;
    if (!mu.grid || mu.grid->empty())
        throw contract_error("measure at infinity needs a declared grid or a bound");
    return below ? Rational(mu.grid->front() - 1) : Rational(mu.grid->back() + 1);
}

}  // namespace

Count measure_at_infinity(const RMeasure& mu, InfinityLine line, const XReal& lo,
                          const XReal& hi, std::optional<Rational> bound) {
    if (!(lo < hi)) throw std::invalid_argument("measure_at_infinity: empty interval");
    switch (line) {
        case InfinityLine::left: {
            // lim_{b -> -inf} mu([-inf,b] x [lo,hi])
            Rational b = beyond(mu, bound, true);
            XReal bb{b};
            if (mu.domain == MeasureDomain::half_plane && lo < bb)
                bb = lo;  // keep b <= c; monotone limit unchanged
            Rect probe(XReal::minus_infinity(), bb, lo, hi);
            return mu.extended(probe);
        }
        case InfinityLine::top: {
            Rational c = beyond(mu, bound, false);
            XReal cc{c};
            if (mu.domain == MeasureDomain::half_plane && cc < hi) cc = hi;
            Rect probe(lo, hi, cc, XReal::plus_infinity());
            return mu.extended(probe);
        }
        case InfinityLine::right: {
            Rational e = beyond(mu, bound, false);
            XReal ee{e};
            Rect probe(ee, XReal::plus_infinity(), lo, hi);
            return mu.extended(probe);
        }
        case InfinityLine::bottom: {
            Rational d = beyond(mu, bound, true);
            XReal dd{d};
            Rect probe(lo, hi, XReal::minus_infinity(), dd);
            return mu.extended(probe);
        }
    }
    throw std::logic_error("unreachable");
}

Count measure_at_top_left_corner(const RMeasure& mu, std::optional<Rational> bound) {
    Rational lo = beyond(mu, bound, true);
    Rational hi = beyond(mu, bound, false);
    Rect probe(XReal::minus_infinity(), XReal(lo), XReal(hi), XReal::plus_infinity());
    return mu.extended(probe);
}

bool check_split_additivity(const RMeasure& mu, const Rect& r, const Rational& at,
                            bool vertical) {
    XReal cut{at};
    if (vertical) {
        if (!(r.a < cut && cut < r.b))
            throw std::invalid_argument("split coordinate must be interior to [a,b]");
        Count whole = mu.extended(r);
        Count left = mu.extended(Rect(r.a, cut, r.c, r.d));
        Count right = mu.extended(Rect(cut, r.b, r.c, r.d));
        return whole == left + right;
    }
    if (!(r.c < cut && cut < r.d))
        throw std::invalid_argument("split coordinate must be interior to [c,d]");
    Count whole = mu.extended(r);
    Count low = mu.extended(Rect(r.a, r.b, r.c, cut));
    Count high = mu.extended(Rect(r.a, r.b, cut, r.d));
    return whole == low + high;
}

std::vector<TameProbe> probe_tameness(const RMeasure& mu, const std::vector<Rect>& probes) {
    std::vector<TameProbe> out;
    out.reserve(probes.size());
    for (const auto& r : probes) out.push_back({r, mu.extended(r).finite()});
    return out;
}

}  // namespace persistra
