#pragma once

#include "persistra/diagram.hpp"

namespace persistra {

// ---------------------------------------------------------------------------
// Stratum-aware l-infinity geometry on the extended plane. Points of an
// undecorated diagram live in one of four strata: the finite plane, the line
// (-inf, R), the line (R, +inf), and the corner (-inf, +inf). Distances
// across strata are infinite; XReal::pos_inf stands for an infinite distance.

enum class Stratum { finite, left_line, top_line, corner };

Stratum stratum_of(const UPoint& p);

// d-infinity between extended points; +inf across strata.
XReal dinf(const UPoint& a, const UPoint& b);

// ---------------------------------------------------------------------------
// Matching domains. The exit distance of a point is its d-infinity distance
// to the complement of the domain; unmatched points must sit within delta of
// the complement.

struct OpenRect {
    XReal a, b, c, d;  // open rectangle (a,b) x (c,d) in the extended plane
};

struct DomainSpec {
    enum Kind { half_plane, half_plane_truncated, rect_union };

    Kind kind = half_plane;
    Rational truncation;           // for half_plane_truncated: births below T only
    std::vector<OpenRect> rects;   // for rect_union

    static DomainSpec HalfPlane() { return DomainSpec{}; }
    static DomainSpec TruncatedAt(const Rational& t) {
        DomainSpec d;
        d.kind = half_plane_truncated;
        d.truncation = t;
        return d;
    }
    static DomainSpec RectUnion(std::vector<OpenRect> rects) {
        DomainSpec d;
        d.kind = rect_union;
        d.rects = std::move(rects);
        return d;
    }
};

bool domain_contains(const DomainSpec& dom, const UPoint& p);

// ex_inf(alpha, D) = d_inf(alpha, complement of D); throws when alpha is
// outside the domain.
XReal exit_distance(const UPoint& p, const DomainSpec& dom);

// Domain compatibility F >= G^{-delta}: every point of G with exit distance
// greater than delta lies in F.
bool domain_compatible(const DomainSpec& f, const DomainSpec& g, const Rational& delta);

// ---------------------------------------------------------------------------
// Partial delta-matchings. Point ids index the expanded point lists of the
// two diagrams (multiset entries repeated by multiplicity, in multiset order).

struct Matching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> unmatched_a;
    std::vector<std::size_t> unmatched_b;
    Rational delta;
};

// The generalized delta-matching over possibly unequal domains: matched pairs
// within delta, a point may stay unmatched only when its exit distance in the
// *other* diagram's domain is at most delta. Absence is a value.
std::optional<Matching> exists_delta_matching(const UndecoratedDiagram& a,
                                              const DomainSpec& dom_a,
                                              const UndecoratedDiagram& b,
                                              const DomainSpec& dom_b, const Rational& delta);

inline std::optional<Matching> exists_delta_matching(const UndecoratedDiagram& a,
                                                     const UndecoratedDiagram& b,
                                                     const Rational& delta) {
    return exists_delta_matching(a, DomainSpec::HalfPlane(), b, DomainSpec::HalfPlane(), delta);
}

// Exact bottleneck distance over the half-plane: minimum over the finite
// candidate set of point-to-point distances and exit distances; +inf when the
// strata cardinalities disagree.
XReal bottleneck(const UndecoratedDiagram& a, const UndecoratedDiagram& b);

// Composition through a shared middle diagram; delta adds.
Matching compose_matchings(const Matching& m1, std::size_t b_size, const Matching& m2);

// Validation helper: all matching conditions against the given diagrams.
bool is_valid_delta_matching(const Matching& m, const UndecoratedDiagram& a,
                             const DomainSpec& dom_a, const UndecoratedDiagram& b,
                             const DomainSpec& dom_b);

// Matching CSV: "a_index,b_index" rows with -1 for the diagonal.
std::string matching_to_csv(const Matching& m);

}  // namespace persistra
