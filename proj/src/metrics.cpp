#include "persistra/metrics.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace persistra {

Stratum stratum_of(const UPoint& p) {
    bool lo = p.first.kind == XReal::neg_inf;
    bool hi = p.second.kind == XReal::pos_inf;
    if (lo && hi) return Stratum::corner;
    if (lo) return Stratum::left_line;
    if (hi) return Stratum::top_line;
    return Stratum::finite;
}

namespace {

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? a - b : b - a; }

XReal xmax(const XReal& a, const XReal& b) { return a < b ? b : a; }

}  // namespace

XReal dinf(const UPoint& a, const UPoint& b) {
    Stratum sa = stratum_of(a), sb = stratum_of(b);
    if (sa != sb) return XReal::plus_infinity();
    switch (sa) {
        case Stratum::corner: return XReal(rat(0));
        case Stratum::left_line: return XReal(abs_diff(a.second.value, b.second.value));
        case Stratum::top_line: return XReal(abs_diff(a.first.value, b.first.value));
        case Stratum::finite:
            return XReal(std::max(abs_diff(a.first.value, b.first.value),
                                  abs_diff(a.second.value, b.second.value)));
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Domains.

namespace {

// Extended membership of a coordinate in the open side-range (lo, hi): an
// infinite end of the rectangle includes the corresponding stratum.
bool side_contains(const XReal& lo, const XReal& hi, const XReal& x) {
    if (x.kind == XReal::neg_inf) return lo.kind == XReal::neg_inf;
    if (x.kind == XReal::pos_inf) return hi.kind == XReal::pos_inf;
    return lo < x && x < hi;
}

bool rect_contains(const OpenRect& r, const UPoint& p) {
    return side_contains(r.a, r.b, p.first) && side_contains(r.c, r.d, p.second);
}

// Closed square around a finite point, contained in the union of open rects?
bool square_in_union(const std::vector<OpenRect>& rects, const Rational& p, const Rational& q,
                     const Rational& r) {
    Rational x1 = p - r, x2 = p + r, y1 = q - r, y2 = q + r;
    std::vector<Rational> xs = {x1, x2}, ys = {y1, y2};
    for (const auto& rc : rects) {
        for (const XReal* v : {&rc.a, &rc.b})
            if (v->is_finite() && x1 < v->value && v->value < x2) xs.push_back(v->value);
        for (const XReal* v : {&rc.c, &rc.d})
            if (v->is_finite() && y1 < v->value && v->value < y2) ys.push_back(v->value);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            bool covered = false;
            for (const auto& rc : rects) {
                if (rc.a < XReal(xs[i]) && XReal(xs[i + 1]) < rc.b && rc.c < XReal(ys[j]) &&
                    XReal(ys[j + 1]) < rc.d) {
                    covered = true;
                    break;
                }
            }
            if (!covered) return false;
        }
    return true;
}

// 1-D trace of a rect union on a line at infinity, merged into disjoint open
// intervals. `left` selects the line (-inf, R); otherwise (R, +inf).
std::vector<std::pair<XReal, XReal>> line_trace(const std::vector<OpenRect>& rects, bool left) {
    std::vector<std::pair<XReal, XReal>> spans;
    for (const auto& rc : rects) {
        if (left) {
            if (rc.a.kind == XReal::neg_inf) spans.push_back({rc.c, rc.d});
        } else {
            if (rc.d.kind == XReal::pos_inf) spans.push_back({rc.a, rc.b});
        }
    }
    std::sort(spans.begin(), spans.end(), [](const auto& u, const auto& v) {
        return u.first < v.first || (u.first == v.first && u.second < v.second);
    });
    std::vector<std::pair<XReal, XReal>> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.first < merged.back().second)
            merged.back().second = xmax(merged.back().second, s.second);
        else
            merged.push_back(s);
    }
    return merged;
}

XReal interval_exit(const std::vector<std::pair<XReal, XReal>>& comps, const Rational& y) {
    for (const auto& [lo, hi] : comps) {
        if (side_contains(lo, hi, XReal(y))) {
            XReal dl = lo.is_finite() ? XReal(Rational(y - lo.value)) : XReal::plus_infinity();
            XReal dh = hi.is_finite() ? XReal(Rational(hi.value - y)) : XReal::plus_infinity();
            return dl < dh ? dl : dh;
        }
    }
    throw std::domain_error("point outside domain");
}

}  // namespace

bool domain_contains(const DomainSpec& dom, const UPoint& p) {
    switch (dom.kind) {
        case DomainSpec::half_plane:
            return p.first < p.second;
        case DomainSpec::half_plane_truncated:
            return p.first < p.second && p.first < XReal(dom.truncation);
        case DomainSpec::rect_union:
            for (const auto& r : dom.rects)
                if (rect_contains(r, p)) return true;
            return false;
    }
    throw std::logic_error("unreachable");
}

XReal exit_distance(const UPoint& p, const DomainSpec& dom) {
    if (!domain_contains(dom, p)) throw std::domain_error("exit_distance: point outside domain");
    Stratum s = stratum_of(p);
    switch (dom.kind) {
        case DomainSpec::half_plane:
            if (s != Stratum::finite) return XReal::plus_infinity();
            return XReal(Rational((p.second.value - p.first.value) / 2));
        case DomainSpec::half_plane_truncated: {
            if (s == Stratum::left_line || s == Stratum::corner) return XReal::plus_infinity();
            XReal cut{Rational(dom.truncation - p.first.value)};
            if (s == Stratum::top_line) return cut;
            XReal diag{Rational((p.second.value - p.first.value) / 2)};
            return diag < cut ? diag : cut;
        }
        case DomainSpec::rect_union: {
            if (s == Stratum::corner) return XReal::plus_infinity();
            if (s == Stratum::left_line)
                return interval_exit(line_trace(dom.rects, true), p.second.value);
            if (s == Stratum::top_line)
                return interval_exit(line_trace(dom.rects, false), p.first.value);
            // candidate radii at which a growing closed square can first
            // touch the rectilinear complement
            std::vector<Rational> cands;
            for (const auto& rc : dom.rects) {
                for (const XReal* v : {&rc.a, &rc.b})
                    if (v->is_finite()) cands.push_back(abs_diff(p.first.value, v->value));
                for (const XReal* v : {&rc.c, &rc.d})
                    if (v->is_finite()) cands.push_back(abs_diff(p.second.value, v->value));
            }
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            for (const auto& r : cands)
                if (!square_in_union(dom.rects, p.first.value, p.second.value, r)) return XReal(r);
            return XReal::plus_infinity();
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

// alpha in G^{-delta}: the closed delta-square stays inside G.
bool in_reverse_offset(const DomainSpec& g, const UPoint& p, const Rational& delta) {
    if (!domain_contains(g, p)) return false;
    return XReal(delta) < exit_distance(p, g);
}

// 1-D trace of a domain on a line at infinity; nullopt = the whole line.
std::optional<std::vector<std::pair<XReal, XReal>>> domain_trace(const DomainSpec& dom,
                                                                 bool left) {
    switch (dom.kind) {
        case DomainSpec::half_plane:
            return std::nullopt;
        case DomainSpec::half_plane_truncated:
            if (left) return std::nullopt;  // p = -inf is always below T
            return std::vector<std::pair<XReal, XReal>>{
                {XReal::minus_infinity(), XReal(dom.truncation)}};
        case DomainSpec::rect_union:
            return line_trace(dom.rects, left);
    }
    throw std::logic_error("unreachable");
}

bool trace_compatible(const DomainSpec& f, const DomainSpec& g, const Rational& delta,
                      bool left) {
    auto ft = domain_trace(f, left);
    if (!ft) return true;  // F covers the whole line
    auto gt = domain_trace(g, left);
    std::vector<std::pair<XReal, XReal>> gcomps =
        gt ? *gt
           : std::vector<std::pair<XReal, XReal>>{
                 {XReal::minus_infinity(), XReal::plus_infinity()}};
    for (auto [lo, hi] : gcomps) {
        XReal elo = lo + delta, ehi = hi - delta;  // eroded component
        if (!(elo < ehi)) continue;
        bool inside_some = false;
        for (auto [flo, fhi] : *ft)
            if (flo <= elo && ehi <= fhi) {
                inside_some = true;
                break;
            }
        if (!inside_some) return false;
    }
    return true;
}

bool corner_in(const DomainSpec& d) {
    return domain_contains(d, {XReal::minus_infinity(), XReal::plus_infinity()});
}

std::vector<Rational> finite_coords(const DomainSpec& d, bool xaxis, const Rational& delta) {
    std::vector<Rational> out;
    if (d.kind == DomainSpec::half_plane_truncated && xaxis) out.push_back(d.truncation);
    for (const auto& r : d.rects) {
        const XReal* sides[2] = {xaxis ? &r.a : &r.c, xaxis ? &r.b : &r.d};
        for (const XReal* s : sides)
            if (s->is_finite()) {
                out.push_back(s->value);
                out.push_back(s->value - delta);
                out.push_back(s->value + delta);
            }
    }
    return out;
}

// One cell, edge or vertex of the coordinate grid, or an unbounded tail.
// attained means the piece is degenerate in that axis (an actual grid value).
struct PieceAxis {
    XReal lo, hi;
    bool attained;
};

std::vector<PieceAxis> axis_pieces(const std::vector<Rational>& coords) {
    std::vector<PieceAxis> out;
    if (coords.empty()) {
        out.push_back({XReal::minus_infinity(), XReal::plus_infinity(), false});
        return out;
    }
    out.push_back({XReal::minus_infinity(), XReal(coords.front()), false});
    for (std::size_t i = 0; i < coords.size(); ++i) {
        out.push_back({XReal(coords[i]), XReal(coords[i]), true});
        if (i + 1 < coords.size())
            out.push_back({XReal(coords[i]), XReal(coords[i + 1]), false});
    }
    out.push_back({XReal(coords.back()), XReal::plus_infinity(), false});
    return out;
}

Rational piece_representative(const PieceAxis& p) {
    if (p.attained) return p.lo.value;
    if (p.lo.is_finite() && p.hi.is_finite()) return (p.lo.value + p.hi.value) / 2;
    if (p.lo.is_finite()) return p.lo.value + 1;
    if (p.hi.is_finite()) return p.hi.value - 1;
    return rat(0);
}

// Does every finite point of the piece lie in the domain? Used where the
// domain boundary is not aligned with the grid (the diagonal and the
// truncation line); rectilinear domains are uniform on pieces and use the
// representative directly.
bool piece_in_domain(const DomainSpec& dom, const PieceAxis& px, const PieceAxis& py) {
    auto below_diagonal_free = [&]() {
        // sup p < inf q over the piece
        if (px.hi.kind == XReal::pos_inf || py.lo.kind == XReal::neg_inf) return false;
        if (px.hi < py.lo) return true;
        return px.hi == py.lo && !(px.attained && py.attained);
    };
    switch (dom.kind) {
        case DomainSpec::half_plane:
            return below_diagonal_free();
        case DomainSpec::half_plane_truncated: {
            if (!below_diagonal_free()) return false;
            XReal t{dom.truncation};
            if (px.hi < t) return true;
            return px.hi == t && !px.attained;
        }
        case DomainSpec::rect_union: {
            UPoint rep{XReal(piece_representative(px)), XReal(piece_representative(py))};
            return domain_contains(dom, rep);
        }
    }
    throw std::logic_error("unreachable");
}

// Is the wedge {(p,q) : q - p > 2 delta, p < cut} covered by the rect union?
// Column by column: over each x-piece the active rectangles' y-ranges must
// cover an interval (lo, +inf] with lo <= inf_p + 2 delta.
bool rect_union_covers_wedge(const std::vector<OpenRect>& rects, const XReal& cut,
                             const Rational& two_delta) {
    std::vector<Rational> xs;
    for (const auto& r : rects) {
        if (r.a.is_finite()) xs.push_back(r.a.value);
        if (r.b.is_finite()) xs.push_back(r.b.value);
    }
    if (cut.is_finite()) xs.push_back(cut.value);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (const auto& px : axis_pieces(xs)) {
        // only columns with p < cut matter
        if (!(px.lo < cut)) continue;
        // rectangles whose open x-range contains the whole piece
        std::vector<std::pair<XReal, XReal>> spans;
        for (const auto& r : rects) {
            bool covers = px.attained ? (r.a < px.lo && px.lo < r.b)
                                      : (r.a <= px.lo && px.hi <= r.b);
            if (covers) spans.push_back({r.c, r.d});
        }
        std::sort(spans.begin(), spans.end(), [](const auto& u, const auto& v) {
            return u.first < v.first || (u.first == v.first && u.second < v.second);
        });
        std::vector<std::pair<XReal, XReal>> merged;
        for (const auto& s : spans) {
            if (!merged.empty() && s.first <= merged.back().second)
                merged.back().second = xmax(merged.back().second, s.second);
            else
                merged.push_back(s);
        }
        // need a component (lo, +inf] with lo <= inf_p + 2 delta
        XReal need = px.lo + two_delta;  // -inf stays -inf
        bool ok = false;
        for (const auto& [lo, hi] : merged)
            if (hi.kind == XReal::pos_inf && lo <= need) ok = true;
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool domain_compatible(const DomainSpec& f, const DomainSpec& g, const Rational& delta) {
    // corner stratum: offsets do not move corners
    if (corner_in(g) && !corner_in(f)) return false;
    // lines at infinity
    if (!trace_compatible(f, g, delta, true)) return false;
    if (!trace_compatible(f, g, delta, false)) return false;

    // finite stratum
    switch (g.kind) {
        case DomainSpec::half_plane:
        case DomainSpec::half_plane_truncated: {
            // G^{-delta} is the wedge {q - p > 2 delta, p < cut - delta}
            std::optional<Rational> g_cut;
            if (g.kind == DomainSpec::half_plane_truncated) g_cut = g.truncation;
            switch (f.kind) {
                case DomainSpec::half_plane:
                    return true;
                case DomainSpec::half_plane_truncated:
                    return g_cut && *g_cut - delta <= f.truncation;
                case DomainSpec::rect_union: {
                    XReal cut = g_cut ? XReal(Rational(*g_cut - delta))
                                      : XReal::plus_infinity();
                    return rect_union_covers_wedge(f.rects, cut, Rational(2 * delta));
                }
            }
            return false;
        }
        case DomainSpec::rect_union: {
            // G^{-delta} is rectilinear on the combined coordinate grid, so
            // containment splits into finitely many uniform pieces (cells,
            // edges, vertices and unbounded tails)
            std::vector<Rational> xs = finite_coords(g, true, delta);
            std::vector<Rational> ys = finite_coords(g, false, delta);
            auto fx = finite_coords(f, true, delta), fy = finite_coords(f, false, delta);
            xs.insert(xs.end(), fx.begin(), fx.end());
            ys.insert(ys.end(), fy.begin(), fy.end());
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            std::sort(ys.begin(), ys.end());
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
            for (const auto& px : axis_pieces(xs))
                for (const auto& py : axis_pieces(ys)) {
                    UPoint rep{XReal(piece_representative(px)), XReal(piece_representative(py))};
                    if (in_reverse_offset(g, rep, delta) && !piece_in_domain(f, px, py))
                        return false;
                }
            return true;
        }
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Matchings.

namespace {

// Kuhn's augmenting-path maximum bipartite matching.
struct Bipartite {
    std::size_t nl, nr;
    std::vector<std::vector<std::size_t>> adj;
    std::vector<long> match_l, match_r;

    Bipartite(std::size_t l, std::size_t r)
        : nl(l), nr(r), adj(l), match_l(l, -1), match_r(r, -1) {}

    bool augment(std::size_t u, std::vector<char>& seen) {
        for (std::size_t v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            if (match_r[v] < 0 || augment(static_cast<std::size_t>(match_r[v]), seen)) {
                match_l[u] = static_cast<long>(v);
                match_r[v] = static_cast<long>(u);
                return true;
            }
        }
        return false;
    }

    std::size_t solve() {
        std::size_t total = 0;
        for (std::size_t u = 0; u < nl; ++u) {
            std::vector<char> seen(nr, 0);
            if (augment(u, seen)) ++total;
        }
        return total;
    }
};

}  // namespace

std::optional<Matching> exists_delta_matching(const UndecoratedDiagram& a,
                                              const DomainSpec& dom_a,
                                              const UndecoratedDiagram& b,
                                              const DomainSpec& dom_b, const Rational& delta) {
    if (delta < 0) return std::nullopt;
    if (!domain_compatible(dom_a, dom_b, delta)) return std::nullopt;
    if (!domain_compatible(dom_b, dom_a, delta)) return std::nullopt;

    std::vector<UPoint> pa = a.points.expand(), pb = b.points.expand();
    std::size_t na = pa.size(), nb = pb.size();
    XReal d{delta};

    // left: A points then B proxies; right: B points then A proxies. A point
    // may pair with its own diagonal proxy only when it is allowed to stay
    // unmatched; proxy-proxy edges are free. A perfect matching of this graph
    // is exactly a delta-matching.
    Bipartite graph(na + nb, nb + na);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (dinf(pa[i], pb[j]) <= d) graph.adj[i].push_back(j);
    for (std::size_t i = 0; i < na; ++i) {
        bool killable =
            domain_contains(dom_b, pa[i]) ? exit_distance(pa[i], dom_b) <= d : true;
        if (killable) graph.adj[i].push_back(nb + i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        bool killable =
            domain_contains(dom_a, pb[j]) ? exit_distance(pb[j], dom_a) <= d : true;
        if (killable) graph.adj[na + j].push_back(j);
    }
    for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t i = 0; i < na; ++i) graph.adj[na + j].push_back(nb + i);

    if (graph.solve() != na + nb) return std::nullopt;

    Matching m;
    m.delta = delta;
    for (std::size_t i = 0; i < na; ++i) {
        long v = graph.match_l[i];
        if (v >= 0 && static_cast<std::size_t>(v) < nb)
            m.pairs.push_back({i, static_cast<std::size_t>(v)});
        else
            m.unmatched_a.push_back(i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        long u = graph.match_r[j];
        if (u < 0 || static_cast<std::size_t>(u) >= na) m.unmatched_b.push_back(j);
    }
    return m;
}

bool is_valid_delta_matching(const Matching& m, const UndecoratedDiagram& a,
                             const DomainSpec& dom_a, const UndecoratedDiagram& b,
                             const DomainSpec& dom_b) {
    std::vector<UPoint> pa = a.points.expand(), pb = b.points.expand();
    std::vector<int> used_a(pa.size(), 0), used_b(pb.size(), 0);
    XReal d{m.delta};
    for (auto [i, j] : m.pairs) {
        if (i >= pa.size() || j >= pb.size()) return false;
        if (used_a[i]++ || used_b[j]++) return false;
        if (!(dinf(pa[i], pb[j]) <= d)) return false;
    }
    for (auto i : m.unmatched_a) {
        if (i >= pa.size() || used_a[i]++) return false;
        if (domain_contains(dom_b, pa[i]) && !(exit_distance(pa[i], dom_b) <= d)) return false;
    }
    for (auto j : m.unmatched_b) {
        if (j >= pb.size() || used_b[j]++) return false;
        if (domain_contains(dom_a, pb[j]) && !(exit_distance(pb[j], dom_a) <= d)) return false;
    }
    for (auto u : used_a)
        if (u != 1) return false;
    for (auto u : used_b)
        if (u != 1) return false;
    return domain_compatible(dom_a, dom_b, m.delta) && domain_compatible(dom_b, dom_a, m.delta);
}

XReal bottleneck(const UndecoratedDiagram& a, const UndecoratedDiagram& b) {
    std::vector<UPoint> pa = a.points.expand(), pb = b.points.expand();

    // the strata cardinalities must agree for the distance to be finite
    auto counts = [](const std::vector<UPoint>& pts) {
        std::array<std::size_t, 4> c{0, 0, 0, 0};
        for (const auto& p : pts) c[static_cast<int>(stratum_of(p))]++;
        return c;
    };
    auto ca = counts(pa), cb = counts(pb);
    for (int s : {1, 2, 3})
        if (ca[s] != cb[s]) return XReal::plus_infinity();
    if (pa.empty() && pb.empty()) return XReal(rat(0));

    std::vector<Rational> cands = {rat(0)};
    for (const auto& p : pa)
        for (const auto& q : pb) {
            XReal d = dinf(p, q);
            if (d.is_finite()) cands.push_back(d.value);
        }
    DomainSpec hp = DomainSpec::HalfPlane();
    for (const auto& p : pa) {
        XReal e = exit_distance(p, hp);
        if (e.is_finite()) cands.push_back(e.value);
    }
    for (const auto& q : pb) {
        XReal e = exit_distance(q, hp);
        if (e.is_finite()) cands.push_back(e.value);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    if (!exists_delta_matching(a, b, cands.back())) return XReal::plus_infinity();
    // feasibility is monotone over the sorted candidate set
    std::size_t lo = 0, hi = cands.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (exists_delta_matching(a, b, cands[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return XReal(cands[lo]);
}

Matching compose_matchings(const Matching& m1, std::size_t b_size, const Matching& m2) {
    std::vector<long> via(b_size, -1);
    for (auto [jb, kc] : m2.pairs) {
        if (jb >= b_size) throw std::invalid_argument("compose: middle diagram mismatch");
        via[jb] = static_cast<long>(kc);
    }
    auto check_mid = [&](std::size_t j) {
        if (j >= b_size) throw std::invalid_argument("compose: middle diagram mismatch");
    };
    for (auto [ia, jb] : m1.pairs) {
        (void)ia;
        check_mid(jb);
    }
    for (auto j : m1.unmatched_b) check_mid(j);
    for (auto j : m2.unmatched_a) check_mid(j);

    Matching out;
    out.delta = m1.delta + m2.delta;
    std::set<std::size_t> matched_a, matched_c;
    for (auto [ia, jb] : m1.pairs) {
        if (via[jb] >= 0) {
            out.pairs.push_back({ia, static_cast<std::size_t>(via[jb])});
            matched_a.insert(ia);
            matched_c.insert(static_cast<std::size_t>(via[jb]));
        }
    }
    std::size_t a_size = m1.pairs.size() + m1.unmatched_a.size();
    std::size_t c_size = m2.pairs.size() + m2.unmatched_b.size();
    for (std::size_t i = 0; i < a_size; ++i)
        if (!matched_a.count(i)) out.unmatched_a.push_back(i);
    for (std::size_t k = 0; k < c_size; ++k)
        if (!matched_c.count(k)) out.unmatched_b.push_back(k);
    return out;
}

std::string matching_to_csv(const Matching& m) {
    std::ostringstream os;
    os << "a_index,b_index\n";
    for (auto [i, j] : m.pairs) os << i << "," << j << "\n";
    for (auto i : m.unmatched_a) os << i << ",-1\n";
    for (auto j : m.unmatched_b) os << "-1," << j << "\n";
    return os.str();
}

}  // namespace persistra
