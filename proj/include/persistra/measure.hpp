#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "persistra/quiver.hpp"

namespace persistra {

// ---------------------------------------------------------------------------
// Counts in {0, 1, 2, ...} ∪ {∞} with absorbing infinity.

struct Count {
    bool is_infinite = false;
    unsigned long long n = 0;

    Count() = default;
    Count(unsigned long long v) : n(v) {}
    static Count infinity() {
        Count c;
        c.is_infinite = true;
        return c;
    }
    bool finite() const { return !is_infinite; }

    friend Count operator+(const Count& a, const Count& b) {
        if (a.is_infinite || b.is_infinite) return infinity();
        return Count(a.n + b.n);
    }
    friend bool operator==(const Count& a, const Count& b) {
        if (a.is_infinite != b.is_infinite) return false;
        return a.is_infinite || a.n == b.n;
    }
    friend bool operator!=(const Count& a, const Count& b) { return !(a == b); }
    friend bool operator<=(const Count& a, const Count& b) {
        if (b.is_infinite) return true;
        if (a.is_infinite) return false;
        return a.n <= b.n;
    }
    friend bool operator<(const Count& a, const Count& b) { return a <= b && a != b; }
};

std::string to_string(const Count& c);

// Where a measure's evaluation is defined. The extension convention treats
// rectangles outside the domain as carrying infinite mass.
enum class MeasureDomain {
    extended_plane,  // every rectangle of the extended plane
    half_plane,      // persistence rectangles only (b <= c)
};

// ---------------------------------------------------------------------------
// An r-measure oracle: rectangle -> count, additive under splitting.
// `grid`, when present, declares the measure grid-aligned: every point of its
// diagram has coordinates in the grid (or at infinity), which makes diagram
// extraction and measures at infinity exact.

struct RMeasure {
    std::function<Count(const Rect&)> eval;
    std::optional<std::vector<Rational>> grid;
    MeasureDomain domain = MeasureDomain::half_plane;

    bool in_domain(const Rect& r) const {
        return domain == MeasureDomain::extended_plane || r.in_half_plane();
    }

    // Strict evaluation: throws outside the declared domain.
    Count operator()(const Rect& r) const;

    // Extension convention: infinite outside the declared domain.
    Count extended(const Rect& r) const;
};

RMeasure measure_of_barcode(const Barcode& b);
RMeasure measure_of_grid_module(const GridModule& m);

// Webb's module over the real line, as a closed-form synthetic measure:
// diagram points (-n^+, 0^+) for n = 1, 2, 3, ... plus the singular point
// (-inf, 0^+) whose rectangles all have infinite mass. The declared grid
// covers births down to -64; extraction is exact on regions within it.
RMeasure webb_measure();

// Test fixture: same evaluations as `base` plus a constant; deliberately
// violates additivity.
RMeasure corrupt_measure(const RMeasure& base, unsigned long long extra = 1);

enum class InfinityLine { left, right, bottom, top };

// Stabilized measure on a line at infinity, e.g. mu(-inf, [c,d]) for `left`.
// Uses the declared grid to place the probe, or `bound` when supplied; throws
// contract_error when neither is available.
Count measure_at_infinity(const RMeasure& mu, InfinityLine line, const XReal& lo,
                          const XReal& hi, std::optional<Rational> bound = std::nullopt);

// Multiplicity at the corner (-inf, +inf).
Count measure_at_top_left_corner(const RMeasure& mu, std::optional<Rational> bound = std::nullopt);

// mu(R) == mu(R1) + mu(R2) for the split of R at `at` along the given side.
// Vertical split cuts [a,b]; horizontal split cuts [c,d].
bool check_split_additivity(const RMeasure& mu, const Rect& r, const Rational& at,
                            bool vertical);

struct TameProbe {
    Rect rect;
    bool finite;
};
std::vector<TameProbe> probe_tameness(const RMeasure& mu, const std::vector<Rect>& probes);

}  // namespace persistra
