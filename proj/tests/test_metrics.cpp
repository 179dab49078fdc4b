#include "doctest.h"
#include "persistra/metrics.hpp"

#include <random>

using namespace persistra;

namespace {

UPoint up(long b, long d) { return {XReal(rat(b)), XReal(rat(d))}; }

UndecoratedDiagram diag(std::initializer_list<UPoint> pts) {
    UndecoratedDiagram d;
    for (auto& p : pts) d.points.add(p);
    return d;
}

UndecoratedDiagram random_diagram(std::mt19937_64& rng, int max_pts = 4) {
    UndecoratedDiagram d;
    std::uniform_int_distribution<int> cnt(0, max_pts);
    std::uniform_int_distribution<long> num(0, 16);
    int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
        long x = num(rng), y = num(rng);
        if (x == y) continue;
        d.points.add({XReal(rat(std::min(x, y), 2)), XReal(rat(std::max(x, y), 2))});
    }
    return d;
}

// Exhaustive minimum over all partial matchings; the independent oracle for
// small diagrams.
XReal brute_bottleneck(const UndecoratedDiagram& a, const UndecoratedDiagram& b) {
    std::vector<UPoint> pa = a.points.expand(), pb = b.points.expand();
    DomainSpec hp = DomainSpec::HalfPlane();
    XReal best = XReal::plus_infinity();
    std::vector<int> taken(pb.size(), 0);
    auto recurse = [&](auto&& self, std::size_t i, XReal cost) -> void {
        if (!(cost < best)) return;  // prune
        if (i == pa.size()) {
            XReal total = cost;
            for (std::size_t j = 0; j < pb.size(); ++j)
                if (!taken[j]) total = std::max(total, exit_distance(pb[j], hp),
                                                [](const XReal& x, const XReal& y) { return x < y; });
            if (total < best) best = total;
            return;
        }
        self(self, i + 1, std::max(cost, exit_distance(pa[i], hp),
                                   [](const XReal& x, const XReal& y) { return x < y; }));
        for (std::size_t j = 0; j < pb.size(); ++j) {
            if (taken[j]) continue;
            taken[j] = 1;
            self(self, i + 1, std::max(cost, dinf(pa[i], pb[j]),
                                       [](const XReal& x, const XReal& y) { return x < y; }));
            taken[j] = 0;
        }
    };
    recurse(recurse, 0, XReal(rat(0)));
    return best;
}

}  // namespace

TEST_CASE("stratum-aware distance") {
    CHECK(dinf(up(0, 4), up(1, 6)) == XReal(rat(2)));
    UPoint l1{XReal::minus_infinity(), XReal(rat(3))}, l2{XReal::minus_infinity(), XReal(rat(5))};
    CHECK(dinf(l1, l2) == XReal(rat(2)));
    CHECK(dinf(up(1, 2), l2).kind == XReal::pos_inf);
    UPoint c{XReal::minus_infinity(), XReal::plus_infinity()};
    CHECK(dinf(c, c) == XReal(rat(0)));
    UPoint t1{XReal(rat(0)), XReal::plus_infinity()}, t2{XReal(rat(5)), XReal::plus_infinity()};
    CHECK(dinf(t1, t2) == XReal(rat(5)));
}

TEST_CASE("exit distances") {
    DomainSpec hp = DomainSpec::HalfPlane();
    CHECK(exit_distance(up(1, 2), hp) == XReal(rat(1, 2)));
    CHECK(exit_distance({XReal(rat(0)), XReal::plus_infinity()}, hp).kind == XReal::pos_inf);

    // banded custom domain: (-2,6) x (1,+inf]
    DomainSpec strip = DomainSpec::RectUnion(
        {{XReal(rat(-2)), XReal(rat(6)), XReal(rat(1)), XReal::plus_infinity()}});
    CHECK(exit_distance(up(0, 4), strip) == XReal(rat(2)));
    CHECK(exit_distance({XReal(rat(0)), XReal::plus_infinity()}, strip) == XReal(rat(2)));
    CHECK_THROWS_AS(exit_distance(up(10, 12), strip), std::domain_error);

    DomainSpec trunc = DomainSpec::TruncatedAt(rat(5));
    CHECK(exit_distance(up(1, 2), trunc) == XReal(rat(1, 2)));
    CHECK(exit_distance(up(4, 20), trunc) == XReal(rat(1)));
    CHECK(exit_distance({XReal(rat(3)), XReal::plus_infinity()}, trunc) == XReal(rat(2)));
}

TEST_CASE("delta matching basics") {
    auto a = diag({up(0, 4)});
    auto b = diag({up(1, 6)});
    CHECK(exists_delta_matching(a, a, rat(0)).has_value());
    auto m = exists_delta_matching(a, b, rat(2));
    REQUIRE(m.has_value());
    CHECK(m->pairs.size() == 1);
    CHECK(is_valid_delta_matching(*m, a, DomainSpec::HalfPlane(), b, DomainSpec::HalfPlane()));

    auto diag_kill = exists_delta_matching(diag({up(1, 2)}), diag({}), rat(1, 2));
    REQUIRE(diag_kill.has_value());
    CHECK(diag_kill->pairs.empty());
    CHECK(diag_kill->unmatched_a.size() == 1);

    CHECK_FALSE(exists_delta_matching(a, b, rat(1)).has_value());
}

TEST_CASE("bottleneck examples") {
    CHECK(bottleneck(diag({up(0, 4)}), diag({up(1, 6)})) == XReal(rat(2)));
    CHECK(bottleneck(diag({up(1, 2)}), diag({})) == XReal(rat(1, 2)));
    UndecoratedDiagram inf_a = diag({{XReal(rat(0)), XReal::plus_infinity()}});
    CHECK(bottleneck(inf_a, diag({})).kind == XReal::pos_inf);
    CHECK(bottleneck(diag({}), diag({})) == XReal(rat(0)));
    // mixed strata still match within their own stratum
    UndecoratedDiagram a = diag({{XReal(rat(0)), XReal::plus_infinity()}, up(0, 4)});
    UndecoratedDiagram b = diag({{XReal(rat(3)), XReal::plus_infinity()}, up(0, 5)});
    CHECK(bottleneck(a, b) == XReal(rat(3)));
    // left line and corner
    UndecoratedDiagram l1 = diag({{XReal::minus_infinity(), XReal(rat(3))}});
    UndecoratedDiagram l2 = diag({{XReal::minus_infinity(), XReal(rat(5))}});
    CHECK(bottleneck(l1, l2) == XReal(rat(2)));
    UndecoratedDiagram c1 = diag({{XReal::minus_infinity(), XReal::plus_infinity()}});
    CHECK(bottleneck(c1, c1) == XReal(rat(0)));
    CHECK(bottleneck(c1, l1).kind == XReal::pos_inf);
}

TEST_CASE("bottleneck agrees with the exhaustive oracle") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 120; ++trial) {
        auto a = random_diagram(rng), b = random_diagram(rng);
        CHECK(bottleneck(a, b) == brute_bottleneck(a, b));
    }
}

TEST_CASE("bottleneck is a pseudometric") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_diagram(rng), b = random_diagram(rng), c = random_diagram(rng);
        CHECK(bottleneck(a, a) == XReal(rat(0)));
        CHECK(bottleneck(a, b) == bottleneck(b, a));
        XReal ab = bottleneck(a, b), bc = bottleneck(b, c), ac = bottleneck(a, c);
        if (ab.is_finite() && bc.is_finite()) CHECK(ac <= XReal(Rational(ab.value + bc.value)));
    }
}

TEST_CASE("feasibility is monotone in delta") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_diagram(rng), b = random_diagram(rng);
        XReal d = bottleneck(a, b);
        if (!d.is_finite()) continue;
        CHECK(exists_delta_matching(a, b, d.value).has_value());
        CHECK(exists_delta_matching(a, b, Rational(d.value + 1)).has_value());
        if (d.value > 0)
            CHECK_FALSE(exists_delta_matching(a, b, Rational(d.value / 2)).has_value());
    }
}

TEST_CASE("matching composition") {
    auto a = diag({up(0, 4)});
    auto b = diag({up(1, 6)});
    auto c = diag({up(2, 7)});
    auto m1 = exists_delta_matching(a, b, rat(2));
    auto m2 = exists_delta_matching(b, c, rat(1));
    REQUIRE(m1.has_value());
    REQUIRE(m2.has_value());
    auto m = compose_matchings(*m1, 1, *m2);
    CHECK(m.delta == rat(3));
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(is_valid_delta_matching(m, a, DomainSpec::HalfPlane(), c, DomainSpec::HalfPlane()));

    // identity as the second factor leaves the matching unchanged
    auto idm = exists_delta_matching(b, b, rat(0));
    auto same = compose_matchings(*m1, 1, *idm);
    CHECK(same.pairs == m1->pairs);

    // multiplicity-2 middle point: composition is valid either way
    UndecoratedDiagram two = diag({up(0, 10)});
    two.points.add(up(0, 10));  // multiplicity 2
    auto ma = exists_delta_matching(diag({up(0, 10), up(1, 10)}), two, rat(1));
    auto mb = exists_delta_matching(two, diag({up(0, 9), up(1, 11)}), rat(1));
    REQUIRE(ma.has_value());
    REQUIRE(mb.has_value());
    auto comp = compose_matchings(*ma, 2, *mb);
    CHECK(comp.delta == rat(2));
    CHECK(comp.pairs.size() == 2);
    CHECK(is_valid_delta_matching(comp, diag({up(0, 10), up(1, 10)}), DomainSpec::HalfPlane(),
                                  diag({up(0, 9), up(1, 11)}), DomainSpec::HalfPlane()));

    Matching bad = *m2;
    bad.pairs[0].first = 7;
    CHECK_THROWS_AS(compose_matchings(*m1, 1, bad), std::invalid_argument);
}

TEST_CASE("generalized matching reduces to the equal-domain definition") {
    std::mt19937_64 rng(707);
    DomainSpec hp = DomainSpec::HalfPlane();
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_diagram(rng), b = random_diagram(rng);
        std::uniform_int_distribution<long> dd(0, 8);
        Rational delta = rat(dd(rng), 2);
        auto m = exists_delta_matching(a, hp, b, hp, delta);
        // direct check of the classical definition on the result
        if (m) CHECK(is_valid_delta_matching(*m, a, hp, b, hp));
        // existence must agree with the brute-force threshold
        XReal exact = brute_bottleneck(a, b);
        CHECK(m.has_value() == (exact <= XReal(delta)));
    }
}

TEST_CASE("unequal truncated domains use the crossover rule") {
    DomainSpec full = DomainSpec::HalfPlane();
    DomainSpec trunc = DomainSpec::TruncatedAt(rat(5));
    // compatibility: full halfplane vs truncated fails (the truncated domain
    // cannot absorb far-right points of the other diagram)
    CHECK_FALSE(domain_compatible(trunc, full, rat(1)));
    CHECK(domain_compatible(full, trunc, rat(1)));
    CHECK(domain_compatible(trunc, DomainSpec::TruncatedAt(rat(11, 2)), rat(1)));
    CHECK_FALSE(domain_compatible(trunc, DomainSpec::TruncatedAt(rat(8)), rat(1)));

    // a far-right point of A may stay unmatched against a truncated partner
    auto a = diag({up(6, 20)});
    auto b = diag({});
    auto m = exists_delta_matching(a, DomainSpec::TruncatedAt(rat(13, 2)), b, trunc, rat(2));
    REQUIRE(m.has_value());
    CHECK(m->unmatched_a.size() == 1);
    // over the full half-plane the same point must match and cannot
    CHECK_FALSE(exists_delta_matching(a, full, b, full, rat(2)).has_value());
}

TEST_CASE("domain compatibility with custom rectangle unions") {
    DomainSpec hp = DomainSpec::HalfPlane();
    // a union dipping below the diagonal cannot be absorbed by the half-plane
    DomainSpec dip = DomainSpec::RectUnion({{XReal(rat(0)), XReal(rat(10)), XReal(rat(0)),
                                             XReal(rat(12))}});
    CHECK_FALSE(domain_compatible(hp, dip, rat(1)));
    // a union strictly above the diagonal is fine
    DomainSpec above = DomainSpec::RectUnion({{XReal(rat(0)), XReal(rat(4)), XReal(rat(6)),
                                               XReal(rat(10))}});
    CHECK(domain_compatible(hp, above, rat(1)));
    // eroded to nothing: always compatible
    CHECK(domain_compatible(hp, above, rat(2)));

    // two vertical slabs jointly covering the plane absorb the half-plane
    DomainSpec slabs = DomainSpec::RectUnion(
        {{XReal::minus_infinity(), XReal(rat(5)), XReal::minus_infinity(),
          XReal::plus_infinity()},
         {XReal(rat(0)), XReal::plus_infinity(), XReal::minus_infinity(),
          XReal::plus_infinity()}});
    CHECK(domain_compatible(slabs, hp, rat(1)));
    // an upper half-slab misses arbitrarily low wedge points
    DomainSpec upper = DomainSpec::RectUnion({{XReal::minus_infinity(), XReal::plus_infinity(),
                                               XReal(rat(0)), XReal::plus_infinity()}});
    CHECK_FALSE(domain_compatible(upper, hp, rat(1)));
    // a left slab absorbs a truncated half-plane when it is wide enough
    DomainSpec left4 = DomainSpec::RectUnion({{XReal::minus_infinity(), XReal(rat(4)),
                                               XReal::minus_infinity(),
                                               XReal::plus_infinity()}});
    CHECK(domain_compatible(left4, DomainSpec::TruncatedAt(rat(5)), rat(1)));
    DomainSpec left3 = DomainSpec::RectUnion({{XReal::minus_infinity(), XReal(rat(3)),
                                               XReal::minus_infinity(),
                                               XReal::plus_infinity()}});
    CHECK_FALSE(domain_compatible(left3, DomainSpec::TruncatedAt(rat(5)), rat(1)));
}

TEST_CASE("declared-true compatibility admits no sampled violation") {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<long> side(-6, 6);
    auto random_domain = [&]() -> DomainSpec {
        std::vector<OpenRect> rects;
        int k = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < k; ++i) {
            long a = side(rng), b = side(rng), c = side(rng), d = side(rng);
            if (a >= b || c >= d) {
                --i;
                continue;
            }
            rects.push_back({XReal(rat(a)), XReal(rat(b)), XReal(rat(c)), XReal(rat(d))});
        }
        return DomainSpec::RectUnion(rects);
    };
    for (int trial = 0; trial < 60; ++trial) {
        DomainSpec f = random_domain(), g = random_domain();
        Rational delta = rat(1 + static_cast<long>(rng() % 3), 2);
        bool compat = domain_compatible(f, g, delta);
        // dense quarter-lattice sweep for witnesses either way
        bool violated = false;
        for (long x = -28; x <= 28 && !violated; ++x)
            for (long y = -28; y <= 28 && !violated; ++y) {
                UPoint p{XReal(rat(x, 4)), XReal(rat(y, 4))};
                if (!domain_contains(g, p)) continue;
                if (exit_distance(p, g) <= XReal(delta)) continue;
                if (!domain_contains(f, p)) violated = true;
            }
        if (compat) CHECK_FALSE(violated);
        // (a violation found by sampling must have been declared)
        if (violated) CHECK_FALSE(compat);
    }
}

TEST_CASE("matching csv export") {
    auto m = exists_delta_matching(diag({up(0, 4), up(8, 9)}), diag({up(1, 5)}), rat(1));
    REQUIRE(m.has_value());
    auto csv = matching_to_csv(*m);
    CHECK(csv.find("a_index,b_index") == 0);
    CHECK(csv.find("-1") != std::string::npos);
}
