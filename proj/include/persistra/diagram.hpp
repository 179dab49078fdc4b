#pragma once

#include <set>

#include "persistra/measure.hpp"

namespace persistra {

// Decorated diagram: point multiset plus the singular set (decorated points
// excluded from the finite r-interior).
struct DecoratedDiagram {
    Multiset<DecoratedPoint> points;
    std::set<DecoratedPoint> singular;
    std::string domain_note;

    friend bool operator==(const DecoratedDiagram& a, const DecoratedDiagram& b) {
        return a.points == b.points && a.singular == b.singular;
    }
    friend bool operator!=(const DecoratedDiagram& a, const DecoratedDiagram& b) {
        return !(a == b);
    }
};

using UPoint = std::pair<XReal, XReal>;  // birth < death strictly

struct UndecoratedDiagram {
    Multiset<UPoint> points;

    friend bool operator==(const UndecoratedDiagram& a, const UndecoratedDiagram& b) {
        return a.points == b.points;
    }
    friend bool operator!=(const UndecoratedDiagram& a, const UndecoratedDiagram& b) {
        return !(a == b);
    }
};

// One decorated point per interval summand; empty singular set.
DecoratedDiagram diagram_of_barcode(const Barcode& b);

// Forget decorations, drop diagonal points, merge multiplicities.
UndecoratedDiagram undecorate(const DecoratedDiagram& d);

// Recovers the decorated diagram of a measure oracle over `region` by
// recursive quadrant subdivision, with decorations determined by shrinking
// corner probes. Exact for measures with a declared grid; otherwise point
// positions are only correct to within `resolution` (reported in the
// domain_note). Cells of infinite mass are returned through `singular`.
// Throws contract_error when the oracle is caught violating additivity.
DecoratedDiagram extract_diagram(const RMeasure& mu, const Rect& region,
                                 const Rational& resolution);

// The snapping principle: multiplicity at the grid vertex (grid[i], grid[j])
// is the number of decorated points in [grid[i-1],grid[i]] x [grid[j],grid[j+1]]
// (with virtual -inf / +inf beyond the ends). Throws when a singular point of
// `d` lies inside a probe rectangle.
Multiset<std::pair<std::size_t, std::size_t>> snap(const DecoratedDiagram& d,
                                                   const std::vector<Rational>& grid);

}  // namespace persistra
