// scratch: search for two 5-point diagrams with box distance 1 and
// bottleneck distance 3 (not part of the default build)
//
// All coordinates are doubled so half-integer rectangle sides are integers.
#include <algorithm>
#include <iostream>
#include <random>
#include <vector>

#include "persistra/interleave.hpp"
#include "persistra/metrics.hpp"

namespace {

using Pt = std::pair<long, long>;  // doubled coordinates, death > birth >= 0

long count_in(const std::vector<Pt>& pts, long a, long b, long c, long d) {
    long n = 0;
    for (auto [x, y] : pts)
        if (a <= x && x <= b && c <= y && y <= d) ++n;
    return n;
}

// box inequality with delta = 1 (doubled: 2) over all half-integer rectangles
bool box1(const std::vector<Pt>& A, const std::vector<Pt>& B, long lo, long hi) {
    std::vector<long> odd;
    for (long v = lo; v <= hi; v += 2) odd.push_back(v);  // lo must be odd
    for (long a : odd)
        for (long b : odd) {
            if (b <= a) continue;
            for (long c : odd) {
                if (c < b) continue;
                for (long d : odd) {
                    if (d <= c) continue;
                    long na = count_in(A, a, b, c, d), nb = count_in(B, a, b, c, d);
                    if (na == 0 && nb == 0) continue;
                    // thickened rectangle must stay above the diagonal
                    bool above = b + 2 <= c - 2;
                    if (!above) continue;  // extension convention: rhs infinite
                    if (na > count_in(B, a - 2, b + 2, c - 2, d + 2)) return false;
                    if (nb > count_in(A, a - 2, b + 2, c - 2, d + 2)) return false;
                }
            }
        }
    return true;
}

long dinf(const Pt& p, const Pt& q) {
    return std::max(std::labs(p.first - q.first), std::labs(p.second - q.second));
}

// exact bottleneck (doubled coordinates, so exits are integers)
long brute_bottleneck(const std::vector<Pt>& A, const std::vector<Pt>& B) {
    long best = -1;
    std::vector<int> taken(B.size(), 0);
    auto exit2 = [](const Pt& p) { return (p.second - p.first) / 2; };
    auto rec = [&](auto&& self, std::size_t i, long cost) -> void {
        if (best >= 0 && cost >= best) return;
        if (i == A.size()) {
            long total = cost;
            for (std::size_t j = 0; j < B.size(); ++j)
                if (!taken[j]) total = std::max(total, exit2(B[j]));
            if (best < 0 || total < best) best = total;
            return;
        }
        self(self, i + 1, std::max(cost, exit2(A[i])));
        for (std::size_t j = 0; j < B.size(); ++j) {
            if (taken[j]) continue;
            taken[j] = 1;
            self(self, i + 1, std::max(cost, dinf(A[i], B[j])));
            taken[j] = 0;
        }
    };
    rec(rec, 0, 0);
    return best;
}

persistra::UndecoratedDiagram diagram_of(const std::vector<Pt>& pts) {
    persistra::UndecoratedDiagram d;
    for (auto [x, y] : pts)
        d.points.add({persistra::XReal(persistra::rat(x, 2)),
                      persistra::XReal(persistra::rat(y, 2))});
    return d;
}

persistra::Barcode barcode_of(const std::vector<Pt>& pts) {
    persistra::Barcode b(persistra::FieldSpec(2));
    for (auto [x, y] : pts)
        b.intervals.add(persistra::interval_co(persistra::rat(x, 2), persistra::rat(y, 2)));
    return b;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const long W = 28;  // doubled window
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coord(0, W / 2);
    std::uniform_int_distribution<int> pick(0, 4), mv(0, 3), side_d(0, 1);

    auto random_pts = [&]() {
        std::vector<Pt> pts;
        while (pts.size() < 5) {
            long x = 2 * coord(rng), y = 2 * coord(rng);
            if (y > x) pts.push_back({x, y});
        }
        return pts;
    };

    std::vector<Pt> A = random_pts(), B = random_pts();
    long best_seen = -1;
    for (long iter = 0; iter < 40000000; ++iter) {
        auto& side = side_d(rng) ? A : B;
        auto backup = side;
        int i = pick(rng);
        switch (mv(rng)) {
            case 0: side[i].first += 2; break;
            case 1: side[i].first -= 2; break;
            case 2: side[i].second += 2; break;
            default: side[i].second -= 2; break;
        }
        bool valid = side[i].second > side[i].first && side[i].first >= 0 &&
                     side[i].second <= W;
        if (!valid || !box1(A, B, -3, W + 3)) {
            side = backup;
        } else {
            long d = brute_bottleneck(A, B);
            if (d > best_seen) {
                best_seen = d;
                std::cout << "iter " << iter << " bottleneck(doubled) " << d << "\n  A:";
                for (auto [x, y] : A) std::cout << " (" << x / 2.0 << "," << y / 2.0 << ")";
                std::cout << "\n  B:";
                for (auto [x, y] : B) std::cout << " (" << x / 2.0 << "," << y / 2.0 << ")";
                std::cout << std::endl;
            }
            if (d >= 6) {
                // verify with the library before declaring success
                auto da = diagram_of(A), db = diagram_of(B);
                auto exact = persistra::bottleneck(da, db);
                std::cout << "library bottleneck: " << persistra::to_string(exact) << "\n";
                auto ma = persistra::measure_of_barcode(barcode_of(A));
                auto mb = persistra::measure_of_barcode(barcode_of(B));
                bool ok = true;
                for (long a = -3; a <= W + 3 && ok; a += 2)
                    for (long b = a + 2; b <= W + 3 && ok; b += 2)
                        for (long c = b; c <= W + 3 && ok; c += 2)
                            for (long d2 = c + 2; d2 <= W + 3 && ok; d2 += 2)
                                ok = persistra::box_check(
                                    ma, mb, persistra::rat(1),
                                    persistra::Rect(persistra::rat(a, 2), persistra::rat(b, 2),
                                                    persistra::rat(c, 2),
                                                    persistra::rat(d2, 2)));
                std::cout << "library box check at delta=1: " << (ok ? "pass" : "FAIL")
                          << std::endl;
                if (ok && exact == persistra::XReal(persistra::rat(3))) return 0;
            }
        }
        if (iter % 100000 == 99999) {
            A = random_pts();
            B = random_pts();
        }
    }
    std::cout << "best(doubled) " << best_seen << "\n";
    return 1;
}
