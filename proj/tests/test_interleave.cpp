#include "doctest.h"
#include "persistra/interleave.hpp"

#include <random>

using namespace persistra;

namespace {

Barcode single(const Interval& iv, FieldSpec f = FieldSpec(2)) {
    Barcode b(f);
    b.intervals.add(iv);
    return b;
}

Barcode random_barcode(std::mt19937_64& rng, int max_intervals = 5, long denom = 4) {
    FieldSpec f(2);
    Barcode b(f);
    std::uniform_int_distribution<int> cnt(0, max_intervals);
    std::uniform_int_distribution<long> num(0, 10 * denom);
    std::uniform_int_distribution<int> dec(0, 1), mult(1, 2);
    int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
        long x = num(rng), y = num(rng);
        DecoratedValue birth(rat(std::min(x, y), denom), dec(rng) ? Dec::plus : Dec::minus);
        DecoratedValue death(rat(std::max(x, y), denom), dec(rng) ? Dec::plus : Dec::minus);
        if (!(birth < death)) continue;
        b.intervals.add(Interval(birth, death), mult(rng));
    }
    return b;
}

// Direct dimension count of im(Omega) for the canonical interleaving of two
// single intervals, evaluated pointwise; the independent oracle for the
// interpolation machinery.
std::pair<Rational, Rational> image_support_oracle(const Interval& ui, const Interval& vi,
                                                   const Rational& delta, const Rational& x,
                                                   const Rational& step) {
    auto aliveU = [&](const Rational& t) { return ui.contains(t); };
    auto aliveV = [&](const Rational& t) { return vi.contains(t); };
    // canonical phi_t: U_t -> V_{t+delta}, identity where both spaces live
    auto phi = [&](const Rational& t) { return aliveU(t) && aliveV(t + delta); };
    auto psi = [&](const Rational& t) { return aliveV(t) && aliveU(t + delta); };
    std::optional<Rational> lo, hi;
    for (Rational t = rat(-20); t <= rat(20); t += step) {
        // Omega_t = [[u, psi],[phi, v]] : U_{t-x} + V_{t+x-d} -> U_{t+x} + V_{t-x+d}
        bool colA = aliveU(t - x) &&
                    ((aliveU(t - x) && aliveU(t + x)) || phi(t - x));
        bool colB = aliveV(t + x - delta) &&
                    (psi(t + x - delta) ||
                     (aliveV(t + x - delta) && aliveV(t - x + delta)));
        if (colA || colB) {
            if (!lo) lo = t;
            hi = t + step;
        }
    }
    if (!lo) return {rat(0), rat(0)};
    return {*lo, *hi};
}

}  // namespace

TEST_CASE("canonical interleaving of the Fig 8 pair verifies") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    CHECK(verify_interleaving(phi, psi, rat(2)));
    CHECK_THROWS_AS(canonical_interleaving(u, v, rat(1)), contract_error);
}

TEST_CASE("identity maps interleave a barcode with itself at delta 0") {
    auto u = single(interval_cc(rat(1), rat(3)));
    auto [phi, psi] = canonical_interleaving(u, u, rat(0));
    CHECK(verify_interleaving(phi, psi, rat(0)));
}

TEST_CASE("the four decorations of one interval are epsilon-interleaved for every epsilon > 0") {
    std::vector<Interval> types = {interval_cc(rat(1), rat(3)), interval_co(rat(1), rat(3)),
                                   interval_oc(rat(1), rat(3)), interval_oo(rat(1), rat(3))};
    for (const Rational& eps : {rat(1, 4), rat(1, 16)})
        for (auto& s : types)
            for (auto& t : types) {
                auto [phi, psi] = canonical_interleaving(single(s), single(t), eps);
                CHECK(verify_interleaving(phi, psi, eps));
            }
}

TEST_CASE("a corrupted entry breaks verification") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    for (std::size_t i = 0; i < phi.maps.size(); ++i) {
        if (phi.shift_index[i] < 0 || phi.maps[i].rows() == 0 || phi.maps[i].cols() == 0)
            continue;
        ShiftedHom bad = phi;
        bad.maps[i].set(0, 0, 1 - bad.maps[i].at(0, 0));
        CHECK_FALSE(verify_interleaving(bad, psi, rat(2)));
        break;
    }
}

TEST_CASE("zero maps interleave short modules once delta dominates every bar") {
    auto u = single(interval_co(rat(0), rat(1)));
    auto v = single(interval_co(rat(5), rat(6)));
    auto grid = build_interleaving_grid(u, v, rat(1));
    auto su = sample_barcode_tracked(u, grid);
    auto sv = sample_barcode_tracked(v, grid);
    // all-zero homs: relations hold because both 2-delta shifts vanish
    auto [phi0, psi0] = canonical_interleaving(u, v, rat(3));
    ShiftedHom phi = phi0, psi = psi0;
    for (auto& m : phi.maps)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, 0);
    for (auto& m : psi.maps)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, 0);
    CHECK(verify_interleaving(phi, psi, rat(3)));
}

TEST_CASE("brute force: identity at zero, interval versus zero module") {
    FieldSpec f(2);
    auto u = single(interval_cc(rat(0), rat(2)));
    CHECK(brute_force_interleaving_exists(u, u, rat(0)));

    Barcode zero(f);
    auto iv = single(interval_cc(rat(0), rat(1)));
    CHECK_FALSE(brute_force_interleaving_exists(iv, zero, rat(1, 4)));
    CHECK(brute_force_interleaving_exists(iv, zero, rat(1)));
    // the closed interval [0,1] is only (1/2)^+ interleaved with 0: at
    // exactly 1/2 the shift map v_0^1 is the identity and cannot vanish
    CHECK_FALSE(brute_force_interleaving_exists(iv, zero, rat(1, 2)));
    // whereas the half-open bar [0,1) attains its infimum
    auto hv = single(interval_co(rat(0), rat(1)));
    CHECK(brute_force_interleaving_exists(hv, zero, rat(1, 2)));
}

TEST_CASE("brute force enforces the entry cap") {
    FieldSpec f(2);
    Barcode big(f);
    for (int i = 0; i < 4; ++i) big.intervals.add(interval_co(rat(0), rat(9)), 2);
    CHECK_THROWS_AS(brute_force_interleaving_exists(big, big, rat(1)), std::invalid_argument);
}

TEST_CASE("smoothing transforms intervals and drops short bars") {
    auto b = single(interval_co(rat(0), rat(4)));
    auto s = smooth(b, rat(1));
    CHECK(s.intervals.multiplicity(interval_co(rat(1), rat(3))) == 1);
    CHECK(s.intervals.cardinality() == 1);

    CHECK(smooth(single(interval_co(rat(0), rat(1))), rat(1)).intervals.empty());
    CHECK(smooth(b, rat(0)) == b);
    // closed bars survive to a diagonal point at exactly half their length
    auto c = smooth(single(interval_cc(rat(0), rat(4))), rat(2));
    CHECK(c.intervals.multiplicity(interval_cc(rat(2), rat(2))) == 1);
    CHECK(smooth(single(interval_co(rat(0), rat(4))), rat(2)).intervals.empty());
}

TEST_CASE("smoothing diagram law: translate above the shifted diagonal") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        Barcode b = random_barcode(rng);
        for (const Rational& eps : {rat(1, 4), rat(1), rat(3)}) {
            auto lhs = undecorate(diagram_of_barcode(smooth(b, eps)));
            UndecoratedDiagram rhs;
            for (auto& [iv, mult] : b.intervals) {
                XReal nb = iv.birth.value + eps, nd = iv.death.value - eps;
                if (nb < nd) rhs.points.add({nb, nd}, mult);
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("smoothing interleaves at epsilon on small instances") {
    std::mt19937_64 rng(123);
    int done = 0;
    for (int trial = 0; trial < 60 && done < 12; ++trial) {
        Barcode b = random_barcode(rng, 2, 1);
        if (b.intervals.cardinality() == 0 || b.intervals.cardinality() > 2) continue;
        Rational eps = rat(1, 2);
        Barcode s = smooth(b, eps);
        auto grid = build_interleaving_grid(b, s, eps);
        auto mu = sample_barcode(b, grid);
        auto ms = sample_barcode(s, grid);
        bool ok = false, feasible = false;
        try {
            feasible = brute_force_interleaving_exists(mu, ms, eps);
            ok = true;
        } catch (const std::invalid_argument&) {
            // instance exceeded the oracle's entry cap; skip
        }
        if (ok) {
            CHECK(feasible);
            ++done;
        }
    }
    CHECK(done >= 8);
}

TEST_CASE("interpolation endpoints and midpoint of the Fig 8 image family") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    auto fam = interpolate(u, v, phi, psi, rat(2), {rat(0), rat(1), rat(2)},
                           InterpolationVariant::image);
    CHECK(fam.samples[0].second == u);
    CHECK(fam.samples[2].second == v);
    // the independent pointwise oracle says the midpoint bar is [1, 5)
    auto [lo, hi] = image_support_oracle(interval_co(rat(0), rat(4)),
                                         interval_co(rat(1), rat(6)), rat(2), rat(1), rat(1, 4));
    CHECK(lo == rat(1));
    CHECK(hi == rat(5));
    CHECK(fam.samples[1].second == single(interval_co(rat(1), rat(5))));
}

TEST_CASE("kernel and image variants give interpolating families") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    for (auto variant : {InterpolationVariant::kernel, InterpolationVariant::cokernel}) {
        auto fam = interpolate(u, v, phi, psi, rat(2), {rat(0), rat(2)}, variant);
        CHECK(fam.samples.front().second == u);
        CHECK(fam.samples.back().second == v);
    }
}

TEST_CASE("cokernel ghost emerges at (3,3) and is reabsorbed at (2,2)") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    auto fam = interpolate(u, v, phi, psi, rat(2), {rat(1, 4), rat(1), rat(7, 4)},
                           InterpolationVariant::cokernel);
    // near the start the ghost is the short bar [3-x, 3+x)
    CHECK(fam.samples[0].second.intervals.multiplicity(
              interval_co(rat(11, 4), rat(13, 4))) == 1);
    // near the end it is [2-(2-x), 2+(2-x))
    CHECK(fam.samples[2].second.intervals.multiplicity(interval_co(rat(7, 4), rat(9, 4))) == 1);
    // main bars present throughout
    CHECK(fam.samples[1].second.intervals.cardinality() == 2);
}

TEST_CASE("vineyards: constant family and the Fig 8 trajectory") {
    auto u = single(interval_co(rat(0), rat(4)));
    InterpolationFamily constant;
    constant.u = constant.v = u;
    constant.delta = rat(1);
    constant.variant = InterpolationVariant::image;
    constant.samples = {{rat(0), u}, {rat(1, 2), u}, {rat(1), u}};
    auto crows = vineyard(constant);
    CHECK(crows.size() == 3);
    for (auto& r : crows) {
        CHECK(r.track == 0);
        CHECK(r.birth == XReal(rat(0)));
        CHECK(r.death == XReal(rat(4)));
    }

    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(2));
    std::vector<Rational> xs;
    for (int k = 0; k <= 8; ++k) xs.push_back(rat(k, 4));
    auto fam = interpolate(u, v, phi, psi, rat(2), xs, InterpolationVariant::image);
    auto rows = vineyard(fam);
    // single track, no ghosts
    std::set<long> tracks;
    for (auto& r : rows) tracks.insert(r.track);
    CHECK(tracks == std::set<long>{0});
    // d-infinity path length is exactly 2
    Rational len = rat(0);
    for (std::size_t k = 0; k + 1 < rows.size(); ++k)
        len += dinf({rows[k].birth, rows[k].death}, {rows[k + 1].birth, rows[k + 1].death}).value;
    CHECK(len == rat(2));
}

TEST_CASE("delta 3 interpolations produce ghosts in kernel and cokernel vineyards") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(3));
    std::vector<Rational> xs;
    for (int k = 0; k <= 6; ++k) xs.push_back(rat(k, 2));
    for (auto variant : {InterpolationVariant::kernel, InterpolationVariant::cokernel}) {
        auto fam = interpolate(u, v, phi, psi, rat(3), xs, variant);
        auto rows = vineyard(fam);
        bool has_ghost = false;
        for (auto& r : rows) has_ghost |= r.track == -1;
        CHECK(has_ghost);
        // the main trajectory has d-infinity length 3
        Rational len = rat(0);
        std::map<Rational, UPoint> main;
        for (auto& r : rows)
            if (r.track == 0) main[r.x] = {r.birth, r.death};
        auto it = main.begin();
        for (auto next = std::next(it); next != main.end(); ++it, ++next)
            len += dinf(it->second, next->second).value;
        CHECK(len == rat(3));
        // every consecutive pair admits an h-matching (vineyard built, so
        // stability held); spot-check validity too
        CHECK(rows.size() >= xs.size());
    }
}

TEST_CASE("infinite bars: canonical interleaving, brute force, interpolation") {
    auto u = single(interval_to_infinity(rat(1)));
    auto v = single(interval_to_infinity(rat(2)));
    auto [phi, psi] = canonical_interleaving(u, v, rat(1));
    CHECK(verify_interleaving(phi, psi, rat(1)));

    // an infinite bar is never interleaved with the zero module
    Barcode zero(FieldSpec(2));
    CHECK_FALSE(brute_force_interleaving_exists(u, zero, rat(3)));
    CHECK(bottleneck(undecorate(diagram_of_barcode(u)), undecorate(diagram_of_barcode(zero)))
              .kind == XReal::pos_inf);

    auto fam = interpolate(u, v, phi, psi, rat(1), {rat(0), rat(1, 2), rat(1)},
                           InterpolationVariant::image);
    CHECK(fam.samples.front().second == u);
    CHECK(fam.samples.back().second == v);
    CHECK(fam.samples[1].second == single(interval_to_infinity(rat(3, 2))));
}

TEST_CASE("matched interleaving assembles from an optimal matching") {
    FieldSpec f(2);
    Barcode u(f), v(f);
    u.intervals.add(interval_co(rat(0), rat(4)));
    u.intervals.add(interval_co(rat(5), rat(6)));  // short bar, dies to the diagonal
    v.intervals.add(interval_co(rat(1), rat(5)));
    auto [phi, psi] = matched_interleaving(u, v, rat(1));
    CHECK(verify_interleaving(phi, psi, rat(1)));
    // below the bottleneck distance no matching exists
    CHECK_THROWS_AS(matched_interleaving(u, v, rat(1, 4)), contract_error);

    auto fam = interpolate(u, v, phi, psi, rat(1), {rat(0), rat(1)},
                           InterpolationVariant::image);
    CHECK(fam.samples.front().second == u);
    CHECK(fam.samples.back().second == v);
}

TEST_CASE("interpolation endpoints and stability on random matched pairs") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> cnt(1, 3);
    std::uniform_int_distribution<long> endp(0, 8);
    auto random_half_open = [&]() {
        Barcode b(FieldSpec(2));
        int k = cnt(rng);
        for (int i = 0; i < k; ++i) {
            long x = endp(rng), y = endp(rng);
            if (x == y) continue;
            b.intervals.add(interval_co(rat(std::min(x, y)), rat(std::max(x, y))));
        }
        return b;
    };
    int done = 0;
    for (int trial = 0; trial < 60 && done < 15; ++trial) {
        Barcode u = random_half_open(), v = random_half_open();
        XReal d = bottleneck(undecorate(diagram_of_barcode(u)), undecorate(diagram_of_barcode(v)));
        if (!d.is_finite()) continue;
        std::pair<ShiftedHom, ShiftedHom> homs;
        try {
            homs = matched_interleaving(u, v, d.value);
        } catch (const contract_error&) {
            continue;  // infimum not attained for this pair
        }
        std::vector<Rational> xs = {rat(0), Rational(d.value / 2), d.value};
        if (d.value == 0) xs = {rat(0)};
        for (auto variant : {InterpolationVariant::image, InterpolationVariant::kernel,
                             InterpolationVariant::cokernel}) {
            auto fam = interpolate(u, v, homs.first, homs.second, d.value, xs, variant);
            CHECK(fam.samples.front().second == u);
            CHECK(fam.samples.back().second == v);
            // consecutive samples admit h-matchings (stability along the family)
            for (std::size_t k = 0; k + 1 < fam.samples.size(); ++k) {
                auto da = undecorate(diagram_of_barcode(fam.samples[k].second));
                auto db = undecorate(diagram_of_barcode(fam.samples[k + 1].second));
                Rational h = fam.samples[k + 1].first - fam.samples[k].first;
                CHECK(exists_delta_matching(da, db, h).has_value());
            }
            // box inequality between the endpoint measures at delta
            auto mu = measure_of_barcode(u), mv = measure_of_barcode(v);
            for (int probe = 0; probe < 10; ++probe) {
                long a = static_cast<long>(rng() % 12) - 2, c = static_cast<long>(rng() % 12) - 2;
                if (a + 1 > c) continue;
                CHECK(box_check(mu, mv, d.value, Rect(rat(a), rat(a + 1), rat(c), rat(c + 1))));
            }
        }
        ++done;
    }
    CHECK(done >= 10);
}

TEST_CASE("composition of interleavings verifies at the summed degree") {
    auto u = single(interval_co(rat(0), rat(4)));
    auto v = single(interval_co(rat(1), rat(6)));
    auto w = single(interval_co(rat(2), rat(5)));
    // common grid fine enough for all three pairs
    std::vector<Rational> grid;
    for (long k = -12; k <= 24; ++k) grid.push_back(rat(k, 2));
    auto [p1, q1] = canonical_interleaving(u, v, rat(2), grid);
    auto [p2, q2] = canonical_interleaving(v, w, rat(2), grid);
    auto phi = compose_homs(p1, p2);
    auto psi = compose_homs(q2, q1);
    CHECK(verify_interleaving(phi, psi, rat(4)));
}

TEST_CASE("box lemma checks") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> num(-2, 12);
    for (int trial = 0; trial < 25; ++trial) {
        Barcode b = random_barcode(rng);
        auto mu = measure_of_barcode(b);
        // identical measures satisfy the box inequality for any delta
        for (int probe = 0; probe < 10; ++probe) {
            long a = num(rng), bb = num(rng), c = num(rng), d = num(rng);
            if (a >= bb || c >= d || bb > c) continue;
            CHECK(box_check(mu, mu, rat(1), Rect(rat(a), rat(bb), rat(c), rat(d))));
        }
        // epsilon-smoothing is epsilon-interleaved with the original
        auto ms = measure_of_barcode(smooth(b, rat(1)));
        for (int probe = 0; probe < 10; ++probe) {
            long a = num(rng), bb = num(rng), c = num(rng), d = num(rng);
            if (a >= bb || c >= d || bb > c) continue;
            CHECK(box_check(mu, ms, rat(1), Rect(rat(a), rat(bb), rat(c), rat(d))));
        }
    }
    // far-apart barcodes fail the box inequality at small delta somewhere
    auto m1 = measure_of_barcode(single(interval_co(rat(0), rat(10))));
    auto m2 = measure_of_barcode(single(interval_co(rat(4), rat(10))));
    bool failed = false;
    for (long a = -1; a <= 10 && !failed; ++a)
        for (long c = a + 1; c <= 11 && !failed; ++c)
            failed = !box_check(m1, m2, rat(1), Rect(rat(a), rat(a + 1), rat(c), rat(c + 1)));
    CHECK(failed);
}

TEST_CASE("box inequalities at infinity for interleaved barcode measures") {
    FieldSpec f(2);
    Barcode b(f);
    b.intervals.add(interval_to_infinity(rat(1)));
    b.intervals.add(Interval(DecoratedValue::minus_infinity(), DecoratedValue(rat(3), Dec::minus)));
    Barcode c(f);
    c.intervals.add(interval_to_infinity(rat(2)));
    c.intervals.add(Interval(DecoratedValue::minus_infinity(), DecoratedValue(rat(4), Dec::minus)));
    auto mb = measure_of_barcode(b), mc = measure_of_barcode(c);
    Rational delta = rat(1);
    for (long lo = -2; lo < 6; ++lo) {
        XReal l{rat(lo)}, h{rat(lo + 2)};
        CHECK(measure_at_infinity(mb, InfinityLine::left, l, h) <=
              measure_at_infinity(mc, InfinityLine::left, l - delta, h + delta));
        CHECK(measure_at_infinity(mb, InfinityLine::top, l, h) <=
              measure_at_infinity(mc, InfinityLine::top, l - delta, h + delta));
        CHECK(measure_at_infinity(mc, InfinityLine::left, l, h) <=
              measure_at_infinity(mb, InfinityLine::left, l - delta, h + delta));
    }
    CHECK(measure_at_top_left_corner(mb) == measure_at_top_left_corner(mc));
}

TEST_CASE("truncation follows the three cases") {
    CHECK(truncate(single(interval_co(rat(1), rat(3))), rat(5)) ==
          single(interval_co(rat(1), rat(3))));
    auto mid = truncate(single(interval_co(rat(1), rat(9))), rat(5));
    CHECK(mid.intervals.multiplicity(Interval(DecoratedValue(rat(1), Dec::minus),
                                              DecoratedValue(rat(5), Dec::plus))) == 1);
    CHECK(truncate(single(interval_co(rat(6), rat(9))), rat(5)).intervals.empty());
    // boundary decorations at T = 5: 5^+ is above T and disappears, while
    // 5^- < 5 leaves the one-point bar [5,5]
    CHECK(truncate(single(interval_oo(rat(5), rat(9))), rat(5)).intervals.empty());
    auto at = truncate(single(interval_co(rat(5), rat(9))), rat(5));
    CHECK(at.intervals.multiplicity(interval_cc(rat(5), rat(5))) == 1);
}

TEST_CASE("truncation measure law") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> num(-2, 46);
    for (int trial = 0; trial < 40; ++trial) {
        Barcode b = random_barcode(rng);
        Rational t = rat(num(rng), 4);
        Barcode tb = truncate(b, t);
        auto mu = measure_of_barcode(b), mut = measure_of_barcode(tb);
        for (int probe = 0; probe < 25; ++probe) {
            long a = num(rng), bb = num(rng), c = num(rng), d = num(rng);
            if (a >= bb || c >= d || bb > c) continue;
            Rect r(rat(a, 4), rat(bb, 4), rat(c, 4), rat(d, 4));
            if (r.d <= XReal(t)) {
                CHECK(mut(r) == mu(r));
            } else if (r.c <= XReal(t)) {
                Rect tall(r.a, r.b, r.c, XReal::plus_infinity());
                CHECK(mut(r) == mu(tall));
            } else {
                CHECK(mut(r) == Count(0));
            }
        }
    }
}
