#include "persistra/diagram.hpp"

#include <algorithm>
#include <deque>

namespace persistra {

DecoratedDiagram diagram_of_barcode(const Barcode& b) {
    DecoratedDiagram d;
    for (auto& [iv, mult] : b.intervals) d.points.add(iv, mult);
    return d;
}

UndecoratedDiagram undecorate(const DecoratedDiagram& d) {
    UndecoratedDiagram out;
    for (auto& [pt, mult] : d.points) {
        if (pt.on_diagonal()) continue;
        out.points.add({pt.birth.value, pt.death.value}, mult);
    }
    return out;
}

namespace {

struct Extractor {
    const RMeasure& mu;
    Rational resolution;
    DecoratedDiagram out;
    bool approximate = false;

    const std::vector<Rational>* grid() const {
        return mu.grid ? &*mu.grid : nullptr;
    }

    // Grid values v whose tick can lie in [lo,hi], i.e. lo <= v <= hi.
    std::vector<Rational> candidates(const XReal& lo, const XReal& hi) const {
        std::vector<Rational> out;
        if (!grid()) return out;
        for (const auto& v : *grid()) {
            XReal x{v};
            if (lo <= x && x <= hi) out.push_back(v);
        }
        return out;
    }

    static Rational midpoint(const XReal& lo, const XReal& hi) {
        return Rational((lo.value + hi.value) / 2);
    }

    // Probe segment for one tick direction, clamped inside [cell_lo, cell_hi].
    static std::pair<XReal, XReal> probe_segment(const Rational& v, Dec dec,
                                                 const Rational& xi) {
        if (dec == Dec::minus) return {XReal(Rational(v - xi)), XReal(v)};
        return {XReal(v), XReal(Rational(v + xi))};
    }

    Rational initial_scale(const DecoratedPoint& dp, const Rect& cell) const {
        // stay inside the cell so monotonicity bounds the probes
        Rational xi = resolution;
        auto margin = [&](const DecoratedValue& val, const XReal& lo, const XReal& hi) {
            if (val.dec == Dec::minus && lo.is_finite()) {
                Rational m = val.value.value - lo.value;
                if (m > 0 && m < xi) xi = m;
            }
            if (val.dec == Dec::plus && hi.is_finite()) {
                Rational m = hi.value - val.value.value;
                if (m > 0 && m < xi) xi = m;
            }
        };
        margin(dp.birth, cell.a, cell.b);
        margin(dp.death, cell.c, cell.d);
        // for half-plane measures keep corner probes above the diagonal
        if (mu.domain == MeasureDomain::half_plane && dp.birth.value.is_finite() &&
            dp.death.value.is_finite() && !dp.on_diagonal()) {
            Rational gap = (dp.death.value.value - dp.birth.value.value) / 2;
            if (gap < xi) xi = gap;
        }
        return xi;
    }

    // Multiplicity of the decorated point by shrinking corner rectangles;
    // stabilization is declared after two consecutive equal values.
    Count corner_multiplicity(const DecoratedPoint& dp, const Rect& cell) {
        const Rational& r = dp.birth.value.value;
        const Rational& s = dp.death.value.value;
        Rational xi = initial_scale(dp, cell);
        auto value_at = [&](const Rational& scale) {
            auto [xa, xb] = probe_segment(r, dp.birth.dec, scale);
            auto [yc, yd] = probe_segment(s, dp.death.dec, scale);
            return mu.extended(Rect(xa, xb, yc, yd));
        };
        Count prev = value_at(xi);
        for (int iter = 0; iter < 40; ++iter) {
            xi /= 2;
            Count cur = value_at(xi);
            if (cur == prev) return cur;
            prev = cur;
        }
        throw contract_error("corner probes failed to stabilize at " + to_string(dp));
    }

    // All decorated points an (r,s) position admits, tick inside the cell.
    std::vector<DecoratedPoint> decorations_in_cell(const Rational& r, const Rational& s,
                                                    const Rect& cell) const {
        std::vector<DecoratedPoint> out;
        for (Dec db : {Dec::minus, Dec::plus})
            for (Dec dd : {Dec::minus, Dec::plus}) {
                DecoratedValue birth(r, db), death(s, dd);
                if (!(birth < death)) continue;
                DecoratedPoint dp(birth, death);
                if (tick_in_rect(dp, cell)) out.push_back(dp);
            }
        return out;
    }

    void resolve_isolated(const Rect& cell, const Rational& r, const Rational& s,
                          Count cell_mass) {
        bool saw_infinite = false;
        unsigned long long total = 0;
        for (const auto& dp : decorations_in_cell(r, s, cell)) {
            Count m = corner_multiplicity(dp, cell);
            if (m.is_infinite) {
                out.singular.insert(dp);
                saw_infinite = true;
            } else if (m.n > 0) {
                out.points.add(dp, static_cast<long long>(m.n));
                total += m.n;
            }
        }
        if (!saw_infinite && cell_mass.finite() && total != cell_mass.n)
            throw contract_error("non-additive oracle: cell " + to_string(cell) + " has mass " +
                                 to_string(cell_mass) + " but decorated corners account for " +
                                 std::to_string(total));
        if (saw_infinite && cell_mass.finite())
            throw contract_error("oracle reported finite mass over a singular corner");
    }

    void emit_unresolved(const Rect& cell, Count mass) {
        // no grid candidate to snap to: report at cell resolution
        approximate = true;
        Rational mx = midpoint(cell.a, cell.b);
        Rational my = midpoint(cell.c, cell.d);
        DecoratedPoint dp{DecoratedValue(mx, Dec::minus), DecoratedValue(my, Dec::plus)};
        if (mass.is_infinite)
            out.singular.insert(dp);
        else
            out.points.add(dp, static_cast<long long>(mass.n));
    }

    Rational diameter(const Rect& cell) const {
        Rational w = cell.b.value - cell.a.value;
        Rational h = cell.d.value - cell.c.value;
        return w > h ? w : h;
    }

    void run(const Rect& root) {
        std::deque<Rect> work{root};
        while (!work.empty()) {
            Rect cell = work.front();
            work.pop_front();
            Count mass = mu.extended(cell);
            if (mass == Count(0)) continue;

            bool split_x = true, split_y = true;
            if (grid()) {
                auto xs = candidates(cell.a, cell.b);
                auto ys = candidates(cell.c, cell.d);
                if (xs.size() == 1 && ys.size() == 1) {
                    resolve_isolated(cell, xs[0], ys[0], mass);
                    continue;
                }
                // Positive mass with an empty candidate axis means the oracle
                // is not actually aligned to its declared grid; fall back to
                // resolution-bounded reporting.
                if ((xs.empty() || ys.empty()) && diameter(cell) < resolution) {
                    emit_unresolved(cell, mass);
                    continue;
                }
                split_x = xs.size() != 1;
                split_y = ys.size() != 1;
                if (!split_x && !split_y) split_x = split_y = true;
            } else if (diameter(cell) < resolution) {
                emit_unresolved(cell, mass);
                continue;
            }
            std::vector<std::pair<XReal, XReal>> xparts, yparts;
            if (split_x) {
                Rational mx = midpoint(cell.a, cell.b);
                xparts = {{cell.a, XReal(mx)}, {XReal(mx), cell.b}};
            } else {
                xparts = {{cell.a, cell.b}};
            }
            if (split_y) {
                Rational my = midpoint(cell.c, cell.d);
                yparts = {{cell.c, XReal(my)}, {XReal(my), cell.d}};
            } else {
                yparts = {{cell.c, cell.d}};
            }
            for (auto& xp : xparts)
                for (auto& yp : yparts) work.emplace_back(xp.first, xp.second, yp.first, yp.second);
        }
    }

    // ------------------------------------------------------------------
    // 1-D extraction along a line at infinity.

    using LineMeasure = std::function<Count(const XReal&, const XReal&)>;

    void run_line(const LineMeasure& nu, const XReal& lo, const XReal& hi, bool left_line) {
        std::deque<std::pair<XReal, XReal>> work{{lo, hi}};
        auto make_point = [&](const DecoratedValue& v) {
            return left_line ? DecoratedPoint(DecoratedValue::minus_infinity(), v)
                             : DecoratedPoint(v, DecoratedValue::plus_infinity());
        };
        while (!work.empty()) {
            auto [l, h] = work.front();
            work.pop_front();
            Count mass = nu(l, h);
            if (mass == Count(0)) continue;
            auto cs = candidates(l, h);
            if (grid() && cs.size() == 1) {
                const Rational& v = cs[0];
                bool saw_infinite = false;
                unsigned long long total = 0;
                for (Dec dec : {Dec::minus, Dec::plus}) {
                    DecoratedValue dv(v, dec);
                    if (!tick_in_segment(dv, l, h)) continue;
                    Rational xi = resolution;
                    if (dec == Dec::minus && l.is_finite()) xi = std::min(xi, Rational(v - l.value));
                    if (dec == Dec::plus && h.is_finite()) xi = std::min(xi, Rational(h.value - v));
                    auto value_at = [&](const Rational& scale) {
                        auto [sa, sb] = probe_segment(v, dec, scale);
                        return nu(sa, sb);
                    };
                    Count prev = value_at(xi);
                    Count cur = prev;
                    for (int iter = 0; iter < 40; ++iter) {
                        xi /= 2;
                        cur = value_at(xi);
                        if (cur == prev) break;
                        prev = cur;
                    }
                    if (cur != prev) throw contract_error("line probes failed to stabilize");
                    if (cur.is_infinite) {
                        out.singular.insert(make_point(dv));
                        saw_infinite = true;
                    } else if (cur.n > 0) {
                        out.points.add(make_point(dv), static_cast<long long>(cur.n));
                        total += cur.n;
                    }
                }
                if (!saw_infinite && mass.finite() && total != mass.n)
                    throw contract_error("non-additive oracle on a line at infinity");
                continue;
            }
            bool can_isolate = grid() && cs.size() > 1;
            Rational width = h.value - l.value;
            if (!can_isolate && width < resolution) {
                approximate = true;
                DecoratedValue mid(Rational((l.value + h.value) / 2), Dec::minus);
                if (mass.is_infinite)
                    out.singular.insert(make_point(mid));
                else
                    out.points.add(make_point(mid), static_cast<long long>(mass.n));
                continue;
            }
            Rational m = (l.value + h.value) / 2;
            work.push_back({l, XReal(m)});
            work.push_back({XReal(m), h});
        }
    }
};

}  // namespace

DecoratedDiagram extract_diagram(const RMeasure& mu, const Rect& region,
                                 const Rational& resolution) {
    if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
    if (mu.domain == MeasureDomain::half_plane && !region.in_half_plane())
        throw std::domain_error("extraction region must satisfy b <= c for this measure");

    Extractor ex{mu, resolution, {}, false};

    // Finite bounds for clipping infinite region sides. The margin stays below
    // half a grid gap so ticks just outside the declared window are excluded.
    std::optional<Rational> flo, fhi;
    bool clipped = false;
    if (mu.grid && !mu.grid->empty()) {
        Rational margin = rat(1, 2);
        for (std::size_t i = 0; i + 1 < mu.grid->size(); ++i) {
            Rational gap = ((*mu.grid)[i + 1] - (*mu.grid)[i]) / 2;
            if (gap < margin) margin = gap;
        }
        flo = mu.grid->front() - margin;
        fhi = mu.grid->back() + margin;
    }
    auto clip_lo = [&](const XReal& x) -> std::optional<XReal> {
        if (x.is_finite()) return x;
        if (x.kind == XReal::pos_inf) return std::nullopt;  // degenerate
        if (!flo) throw contract_error("unbounded region needs a grid-aligned measure");
        clipped = true;
        return XReal(*flo);
    };
    auto clip_hi = [&](const XReal& x) -> std::optional<XReal> {
        if (x.is_finite()) return x;
        if (x.kind == XReal::neg_inf) return std::nullopt;
        if (!fhi) throw contract_error("unbounded region needs a grid-aligned measure");
        clipped = true;
        return XReal(*fhi);
    };

    // Strata at infinity contained in the region.
    bool has_left = region.a.kind == XReal::neg_inf;
    bool has_top = region.d.kind == XReal::pos_inf;
    if (has_left && has_top) {
        Count corner = measure_at_top_left_corner(mu);
        if (corner.is_infinite)
            ex.out.singular.insert(
                DecoratedPoint(DecoratedValue::minus_infinity(), DecoratedValue::plus_infinity()));
        else if (corner.n > 0)
            ex.out.points.add(
                DecoratedPoint(DecoratedValue::minus_infinity(), DecoratedValue::plus_infinity()),
                static_cast<long long>(corner.n));
    }
    if (has_left) {
        auto lo = clip_lo(region.c), hi = clip_hi(region.d);
        if (lo && hi && *lo < *hi)
            ex.run_line(
                [&](const XReal& l, const XReal& h) {
                    return measure_at_infinity(mu, InfinityLine::left, l, h);
                },
                *lo, *hi, /*left_line=*/true);
    }
    if (has_top) {
        auto lo = clip_lo(region.a), hi = clip_hi(region.b);
        if (lo && hi && *lo < *hi)
            ex.run_line(
                [&](const XReal& l, const XReal& h) {
                    return measure_at_infinity(mu, InfinityLine::top, l, h);
                },
                *lo, *hi, /*left_line=*/false);
    }

    // Finite core.
    auto a = clip_lo(region.a), b = clip_hi(region.b);
    auto c = clip_lo(region.c), d = clip_hi(region.d);
    if (a && b && c && d && *a < *b && *c < *d) ex.run(Rect(*a, *b, *c, *d));

    std::string note;
    if (clipped)
        note = "finite part restricted to the declared grid window [" + to_string(*flo) + "," +
               to_string(*fhi) + "]";
    if (ex.approximate) {
        if (!note.empty()) note += "; ";
        note += "positions without a grid candidate reported at resolution " +
                to_string(resolution);
    }
    ex.out.domain_note = note;
    return ex.out;
}

Multiset<std::pair<std::size_t, std::size_t>> snap(const DecoratedDiagram& d,
                                                   const std::vector<Rational>& grid) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("snap grid must be strictly ascending");
    Multiset<std::pair<std::size_t, std::size_t>> out;
    std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            XReal lo_a = i == 0 ? XReal::minus_infinity() : XReal(grid[i - 1]);
            XReal hi_d = j + 1 == n ? XReal::plus_infinity() : XReal(grid[j + 1]);
            Rect probe(lo_a, XReal(grid[i]), XReal(grid[j]), hi_d);
            for (const auto& s : d.singular)
                if (tick_in_rect(s, probe))
                    throw contract_error("singular point " + to_string(s) +
                                         " inside snap probe " + to_string(probe));
            long long m = d.points.count_if(
                [&](const DecoratedPoint& pt) { return tick_in_rect(pt, probe); });
            if (m) out.add({i, j}, m);
        }
    return out;
}

}  // namespace persistra
