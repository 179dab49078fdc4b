#pragma once

#include <map>

#include "persistra/quiver.hpp"

namespace persistra {

struct Simplex {
    std::vector<int> vertices;  // sorted ascending, distinct
    Rational value;

    std::size_t dim() const { return vertices.size() - 1; }

    friend bool operator==(const Simplex& a, const Simplex& b) {
        return a.vertices == b.vertices && a.value == b.value;
    }
};

// A filtered simplicial complex: closed under faces, values monotone along
// faces. Simplices are kept in filtration order (value, dimension, lex).
struct FilteredComplex {
    std::vector<Simplex> simplices;

    FilteredComplex() = default;
    explicit FilteredComplex(std::vector<Simplex> simplices);  // validates

    long index_of(const std::vector<int>& vertices) const;

  private:
    std::map<std::vector<int>, std::size_t> index_;
};

// Line format: "simplex v0 v1 ... vk value"; '#' comments and blank lines are
// ignored. Face closure must be explicit; violations carry line numbers.
FilteredComplex parse_filtration(const std::string& text);

// Vertex-function file: "vertex id value" lines.
std::map<int, Rational> parse_vertex_values(const std::string& text);

// Lower-star filtration: each simplex's value is the max of its vertices'.
FilteredComplex lower_star(const std::map<int, Rational>& vertex_values,
                           const std::vector<std::vector<int>>& complex);

// Standard boundary-matrix column reduction over GF(p). Finite pairs emit
// (s^-, t^-( (dropped when s == t); unpaired creators emit (s^-, +inf(.
Barcode sublevel_persistence(const FilteredComplex& k, std::size_t degree, FieldSpec field);
std::map<std::size_t, Barcode> sublevel_persistence_all(const FilteredComplex& k,
                                                        FieldSpec field);

// ---------------------------------------------------------------------------
// Extended persistence. The sequence grows through sublevelsets and then
// relativizes by superlevelsets; it is indexed by an order-isomorphic copy of
// the real line where the backwards stage at threshold t sits at mirror(t).
// All three barcodes are reported in these mirrored line coordinates, with
// half-open bars matching the sublevel convention.

struct ExtendedPersistence {
    Barcode ord, rel, ext;
    std::vector<Rational> critical;  // ascending distinct vertex values

    Rational mirror(const Rational& t) const { return 2 * critical.back() + 1 - t; }
    Rational unmirror(const Rational& s) const { return 2 * critical.back() + 1 - s; }
};

ExtendedPersistence extended_persistence(const std::vector<std::vector<int>>& complex,
                                         const std::map<int, Rational>& vertex_values,
                                         std::size_t degree, FieldSpec field);

// The grid module of the full extended sequence in one homology degree,
// over the mirrored line; extended_persistence reads its decomposition.
GridModule extended_sequence_module(const std::vector<std::vector<int>>& complex,
                                    const std::map<int, Rational>& vertex_values,
                                    std::size_t degree, FieldSpec field);

}  // namespace persistra
