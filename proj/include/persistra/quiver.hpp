#pragma once

#include <cstdint>
#include <vector>

#include "persistra/decorated.hpp"

namespace persistra {

// ---------------------------------------------------------------------------
// Prime field GF(p).

struct FieldSpec {
    unsigned p = 2;

    FieldSpec() = default;
    explicit FieldSpec(unsigned characteristic);

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.p == b.p; }
    friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }
};

// Dense matrix over GF(p). Entries live in [0, p).
class FFMatrix {
  public:
    FFMatrix() = default;
    FFMatrix(std::size_t rows, std::size_t cols, FieldSpec field);

    static FFMatrix identity(std::size_t n, FieldSpec field);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    FieldSpec field() const { return field_; }

    unsigned at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, unsigned v);

    FFMatrix mul(const FFMatrix& rhs) const;  // this * rhs
    std::size_t rank() const;

    // Basis of the kernel / column space, as column vectors.
    std::vector<std::vector<unsigned>> kernel_basis() const;
    std::vector<std::vector<unsigned>> column_basis() const;

    // Horizontal concatenation [this | rhs]; rows must agree.
    FFMatrix augment(const FFMatrix& rhs) const;

    static FFMatrix from_columns(std::size_t rows,
                                 const std::vector<std::vector<unsigned>>& cols,
                                 FieldSpec field);

    std::vector<unsigned> apply(const std::vector<unsigned>& v) const;

    // Solve this * x = b; empty optional when inconsistent.
    std::optional<std::vector<unsigned>> solve(const std::vector<unsigned>& b) const;

    friend bool operator==(const FFMatrix& a, const FFMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.e_ == b.e_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    FieldSpec field_;
    std::vector<unsigned> e_;
};

// dim(span(A) ∩ span(B)) for column-span subspaces of the same ambient space.
std::size_t intersection_dim(const FFMatrix& a, const FFMatrix& b);

// ---------------------------------------------------------------------------
// Finite persistence module on a rational grid: an A_n quiver representation.

struct GridModule {
    std::vector<Rational> grid;   // strictly ascending
    std::vector<std::size_t> dims;
    std::vector<FFMatrix> steps;  // steps[i] : space at grid[i] -> space at grid[i+1]
    FieldSpec field;

    GridModule() = default;
    GridModule(std::vector<Rational> grid, std::vector<std::size_t> dims,
               std::vector<FFMatrix> steps, FieldSpec field);

    std::size_t size() const { return grid.size(); }

    // Index of a grid value, or -1 when absent.
    long index_of(const Rational& t) const;
};

// Barcode: a finite multiset of decorated intervals over a field.
struct Barcode {
    Multiset<Interval> intervals;
    FieldSpec field;

    Barcode() = default;
    explicit Barcode(FieldSpec f) : field(f) {}

    friend bool operator==(const Barcode& a, const Barcode& b) {
        return a.intervals == b.intervals && a.field == b.field;
    }
    friend bool operator!=(const Barcode& a, const Barcode& b) { return !(a == b); }
};

// Index type for rank queries: values < 0 mean the virtual zero space below
// the grid, values >= size() the virtual zero space above it.
using GridIndex = long;

// rank of the composite step map from grid[i] to grid[j]; identity when i == j.
std::size_t rank_between(const GridModule& m, GridIndex i, GridIndex j);

// Multiplicity of the interval summand [grid[i], grid[j]], via the alternating
// rank formula with neighbours (i-1, j+1) treated as virtual zero spaces.
std::size_t bracket_multiplicity(const GridModule& m, GridIndex i, GridIndex j);

// The same multiplicity through the localization formula
//   dim[ (im(v_b^c) ∩ ker(v_c^d)) / (im(v_a^c) ∩ ker(v_c^d)) ],
// an independent oracle for bracket_multiplicity. Requires a < b <= c < d.
std::size_t localization_multiplicity(const GridModule& m, GridIndex a, GridIndex b,
                                      GridIndex c, GridIndex d);

// Full interval decomposition; grid-closed summands are rendered (t_i^-, t_j^+(.
Barcode decompose(const GridModule& m);

// Restriction of the barcode's module to a finite grid. Membership follows the
// decorations; step matrices are 0/1 and track interval identity.
GridModule sample_barcode(const Barcode& b, const std::vector<Rational>& grid);

// sample_barcode plus the coordinate layout: layout[i] lists, for each basis
// vector of the space at grid[i], the id of the interval copy it tracks.
struct SampledModule {
    GridModule module;
    std::vector<std::vector<std::size_t>> layout;
    std::vector<Interval> interval_of_id;
};
SampledModule sample_barcode_tracked(const Barcode& b, const std::vector<Rational>& grid);

GridModule direct_sum(const GridModule& a, const GridModule& b);

}  // namespace persistra
