#include "doctest.h"
#include "persistra/measure.hpp"

#include <random>

using namespace persistra;

namespace {

Rect rect(long a, long b, long c, long d) { return Rect(rat(a), rat(b), rat(c), rat(d)); }

Barcode random_barcode(std::mt19937_64& rng, int max_intervals = 6) {
    FieldSpec f(2);
    Barcode b(f);
    std::uniform_int_distribution<int> cnt(0, max_intervals);
    std::uniform_int_distribution<long> num(0, 40);  // endpoints on the 1/4-grid [0,10]
    std::uniform_int_distribution<int> dec(0, 1), mult(1, 3);
    int k = cnt(rng);
    for (int i = 0; i < k; ++i) {
        long x = num(rng), y = num(rng);
        Dec db = dec(rng) ? Dec::plus : Dec::minus;
        Dec dd = dec(rng) ? Dec::plus : Dec::minus;
        DecoratedValue birth(rat(std::min(x, y), 4), db);
        DecoratedValue death(rat(std::max(x, y), 4), dd);
        if (!(birth < death)) continue;
        b.intervals.add(Interval(birth, death), mult(rng));
    }
    return b;
}

}  // namespace

TEST_CASE("count arithmetic") {
    CHECK(Count(2) + Count(3) == Count(5));
    CHECK((Count::infinity() + Count(1)).is_infinite);
    CHECK(Count(2) < Count::infinity());
    CHECK(Count::infinity() <= Count::infinity());
}

TEST_CASE("barcode measure counts decorated points") {
    FieldSpec f(2);
    Barcode b(f);
    b.intervals.add(interval_co(rat(1), rat(3)));
    auto mu = measure_of_barcode(b);
    CHECK(mu(Rect(rat(0), rat(2), rat(5, 2), rat(4))) == Count(1));

    Barcode empty(f);
    auto mu0 = measure_of_barcode(empty);
    CHECK(mu0(rect(0, 1, 2, 3)) == Count(0));

    Barcode tri(f);
    tri.intervals.add(interval_co(rat(1), rat(3)), 3);
    auto mu3 = measure_of_barcode(tri);
    CHECK(mu3(rect(0, 2, 2, 4)) == Count(3));
}

TEST_CASE("grid module measure: snapping and rank formula") {
    FieldSpec f(2);
    Barcode b(f);
    b.intervals.add(interval_cc(rat(1), rat(3)));
    auto m = sample_barcode(b, {rat(1), rat(3)});
    auto mu = measure_of_grid_module(m);
    CHECK(mu(Rect(XReal::minus_infinity(), XReal(rat(1)), XReal(rat(3)), XReal::plus_infinity())) ==
          Count(1));
    GridModule zero({rat(0), rat(1)}, {0, 0}, {FFMatrix(0, 0, f)}, f);
    auto muz = measure_of_grid_module(zero);
    CHECK(muz(rect(-1, 0, 1, 2)) == Count(0));
    CHECK_THROWS_AS(mu(rect(0, 3, 1, 4)), std::domain_error);
}

TEST_CASE("grid module measure equals barcode measure of its decomposition") {
    std::mt19937_64 rng(42);
    FieldSpec f(2);
    std::uniform_int_distribution<long> num(-2, 12);
    for (int trial = 0; trial < 25; ++trial) {
        Barcode b = random_barcode(rng, 4);
        // sample on its own endpoint grid, then compare measures
        std::vector<Rational> grid;
        for (auto& [iv, m] : b.intervals) {
            grid.push_back(iv.birth.value.value);
            grid.push_back(iv.death.value.value);
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        if (grid.size() < 2) continue;
        auto gm = sample_barcode(b, grid);
        auto mu_m = measure_of_grid_module(gm);
        auto mu_b = measure_of_barcode(decompose(gm));
        for (int probe = 0; probe < 100; ++probe) {
            long a = num(rng), bb = num(rng), c = num(rng), d = num(rng);
            if (a >= bb) continue;
            if (c >= d) continue;
            if (bb > c) continue;
            Rect r = rect(a, bb, c, d);
            CHECK(mu_m(r) == mu_b(r));
        }
    }
}

TEST_CASE("webb measure closed form") {
    auto w = webb_measure();
    CHECK(w(Rect(rat(-5, 2), rat(-1, 2), rat(-1, 2), rat(1, 2))) == Count(2));
    CHECK(w(Rect(XReal::minus_infinity(), XReal(rat(-1)), XReal(rat(0)), XReal(rat(1))))
              .is_infinite);
    CHECK(w(rect(1, 2, 3, 4)) == Count(0));
    // death side misses 0
    CHECK(w(rect(-3, -1, 1, 2)) == Count(0));
    // boundary ticks: -1^+ needs a <= -1 < b
    CHECK(w(rect(-1, 1, 0, 1)) == Count(1));
    CHECK(w(Rect(rat(-3, 2), rat(-1), rat(0), rat(1))) == Count(0));
}

TEST_CASE("measures at infinity") {
    FieldSpec f(2);
    Barcode b(f);
    b.intervals.add(Interval(DecoratedValue::minus_infinity(), DecoratedValue(rat(2), Dec::plus)));
    auto mu = measure_of_barcode(b);
    CHECK(measure_at_infinity(mu, InfinityLine::left, XReal(rat(1)), XReal(rat(3))) == Count(1));
    CHECK(measure_at_infinity(mu, InfinityLine::top, XReal(rat(1)), XReal(rat(3))) == Count(0));

    Barcode fin(f);
    fin.intervals.add(interval_co(rat(0), rat(1)));
    auto muf = measure_of_barcode(fin);
    for (auto line : {InfinityLine::left, InfinityLine::right, InfinityLine::top,
                      InfinityLine::bottom})
        CHECK(measure_at_infinity(muf, line, XReal(rat(-5)), XReal(rat(5))) == Count(0));

    auto w = webb_measure();
    CHECK(measure_at_infinity(w, InfinityLine::left, XReal(rat(-1)), XReal(rat(1))).is_infinite);

    RMeasure no_grid;
    no_grid.eval = [](const Rect&) { return Count(0); };
    CHECK_THROWS_AS(
        measure_at_infinity(no_grid, InfinityLine::left, XReal(rat(0)), XReal(rat(1))),
        contract_error);
    CHECK(measure_at_infinity(no_grid, InfinityLine::left, XReal(rat(0)), XReal(rat(1)), rat(10)) ==
          Count(0));
}

TEST_CASE("split additivity holds for barcode measures and fails for corrupted ones") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> num(-1, 11);
    int valid = 0, corrupt_failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Barcode b = random_barcode(rng);
        auto mu = measure_of_barcode(b);
        auto bad = corrupt_measure(mu);
        long a = num(rng), bb = num(rng), c = num(rng), d = num(rng);
        if (a + 1 >= bb || c + 1 >= d) continue;
        ++valid;
        Rect r = rect(a, bb, c, d);
        CHECK(check_split_additivity(mu, r, rat(a + 1), true));
        CHECK(check_split_additivity(mu, r, rat(c + 1), false));
        if (!check_split_additivity(bad, r, rat(a + 1), true)) ++corrupt_failures;
    }
    CHECK(valid > 20);
    CHECK(corrupt_failures == valid);  // the +1 corruption breaks every finite split
}

TEST_CASE("infinite split additivity is infinity-aware") {
    auto w = webb_measure();
    Rect r(XReal::minus_infinity(), XReal(rat(0)), XReal(rat(0)), XReal(rat(2)));
    CHECK(check_split_additivity(w, r, rat(-4), true));
}

TEST_CASE("tameness probes") {
    auto w = webb_measure();
    std::vector<Rect> probes = {
        Rect(XReal::minus_infinity(), XReal(rat(-1)), XReal(rat(0)), XReal::plus_infinity()),
        Rect(XReal::minus_infinity(), XReal(rat(-1)), XReal(rat(1)), XReal(rat(2))),
    };
    auto report = probe_tameness(w, probes);
    CHECK_FALSE(report[0].finite);
    CHECK(report[1].finite);

    FieldSpec f(2);
    std::mt19937_64 rng(8);
    Barcode b = random_barcode(rng);
    auto mu = measure_of_barcode(b);
    auto rep = probe_tameness(mu, probes);
    CHECK(rep[0].finite);
    CHECK(rep[1].finite);
}

TEST_CASE("measure axiom suite: additivity, monotonicity, subadditivity") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<long> num(-4, 44);
    std::uniform_int_distribution<long> width(4, 11);
    for (int trial = 0; trial < 30; ++trial) {
        Barcode b = random_barcode(rng);
        auto mu = measure_of_barcode(b);
        // product tiling additivity
        long a = num(rng), bb = a + width(rng), c = num(rng), d = c + width(rng);
        Rect r(rat(a, 4), rat(bb, 4), rat(c, 4), rat(d, 4));
        Count whole = mu(r);
        Count tiles(0);
        Rational xm = (r.a.value + r.b.value) / 2, ym = (r.c.value + r.d.value) / 2;
        std::vector<Rational> xs = {r.a.value, xm, r.b.value};
        std::vector<Rational> ys = {r.c.value, ym, r.d.value};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                tiles = tiles + mu(Rect(xs[i], xs[i + 1], ys[j], ys[j + 1]));
        CHECK(whole == tiles);
        // monotonicity
        Rect outer(r.a - 1, r.b + 1, r.c - 1, r.d + 1);
        CHECK(mu(r) <= mu(outer));
        // subadditivity for an overlapping cover
        Rational third = (r.b.value - r.a.value) / 3;
        Rect left(r.a, r.a + third * 2, r.c, r.d);
        Rect right(r.a + third, r.b, r.c, r.d);
        CHECK(mu(r) <= mu(left) + mu(right));
    }
}
