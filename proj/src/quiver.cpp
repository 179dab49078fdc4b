#include "persistra/quiver.hpp"

#include <algorithm>

namespace persistra {

namespace {

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned inv_mod(unsigned a, unsigned p) {
    // p is a small prime, Fermat
    unsigned r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// Row-reduce in place, returning pivot column indices.
std::vector<std::size_t> row_reduce(std::vector<std::vector<unsigned>>& m, unsigned p) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        unsigned inv = inv_mod(m[r][c], p);
        for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv % p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            unsigned f = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::vector<std::vector<unsigned>> to_rows(const FFMatrix& m) {
    std::vector<std::vector<unsigned>> rows(m.rows(), std::vector<unsigned>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m.at(i, j);
    return rows;
}

}  // namespace

FieldSpec::FieldSpec(unsigned characteristic) : p(characteristic) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
}

FFMatrix::FFMatrix(std::size_t rows, std::size_t cols, FieldSpec field)
    : rows_(rows), cols_(cols), field_(field), e_(rows * cols, 0) {}

FFMatrix FFMatrix::identity(std::size_t n, FieldSpec field) {
    FFMatrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

void FFMatrix::set(std::size_t r, std::size_t c, unsigned v) {
    e_[r * cols_ + c] = v % field_.p;
}

FFMatrix FFMatrix::mul(const FFMatrix& rhs) const {
    if (cols_ != rhs.rows_ || field_ != rhs.field_)
        throw std::invalid_argument("matrix shape mismatch in mul");
    FFMatrix out(rows_, rhs.cols_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            unsigned a = at(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                unsigned v = (out.at(i, j) + a * rhs.at(k, j)) % field_.p;
                out.set(i, j, v);
            }
        }
    return out;
}

std::size_t FFMatrix::rank() const {
    auto rows = to_rows(*this);
    return row_reduce(rows, field_.p).size();
}

std::vector<std::vector<unsigned>> FFMatrix::kernel_basis() const {
    auto rows = to_rows(*this);
    auto pivots = row_reduce(rows, field_.p);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<unsigned>> basis;
    unsigned p = field_.p;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        std::vector<unsigned> v(cols_, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = (p - rows[r][free] % p) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<unsigned>> FFMatrix::column_basis() const {
    auto rows = to_rows(*this);
    auto pivots = row_reduce(rows, field_.p);
    std::vector<std::vector<unsigned>> basis;
    for (auto c : pivots) {
        std::vector<unsigned> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

FFMatrix FFMatrix::augment(const FFMatrix& rhs) const {
    if (rows_ != rhs.rows_ || field_ != rhs.field_)
        throw std::invalid_argument("augment: row mismatch");
    FFMatrix out(rows_, cols_ + rhs.cols_, field_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out.set(i, j, at(i, j));
        for (std::size_t j = 0; j < rhs.cols_; ++j) out.set(i, cols_ + j, rhs.at(i, j));
    }
    return out;
}

FFMatrix FFMatrix::from_columns(std::size_t rows,
                                const std::vector<std::vector<unsigned>>& cols,
                                FieldSpec field) {
    FFMatrix out(rows, cols.size(), field);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("from_columns: bad column");
        for (std::size_t i = 0; i < rows; ++i) out.set(i, j, cols[j][i]);
    }
    return out;
}

std::vector<unsigned> FFMatrix::apply(const std::vector<unsigned>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<unsigned> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        unsigned acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc = (acc + at(i, j) * v[j]) % field_.p;
        out[i] = acc;
    }
    return out;
}

std::optional<std::vector<unsigned>> FFMatrix::solve(const std::vector<unsigned>& b) const {
    if (b.size() != rows_) throw std::invalid_argument("solve: size mismatch");
    std::vector<std::vector<unsigned>> m(rows_, std::vector<unsigned>(cols_ + 1));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) m[i][j] = at(i, j);
        m[i][cols_] = b[i] % field_.p;
    }
    auto pivots = row_reduce(m, field_.p);
    std::vector<unsigned> x(cols_, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == cols_) return std::nullopt;  // pivot in the rhs column
        x[pivots[r]] = m[r][cols_];
    }
    return x;
}

std::size_t intersection_dim(const FFMatrix& a, const FFMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("intersection_dim: ambient mismatch");
    std::size_t ra = a.rank(), rb = b.rank();
    std::size_t rsum = a.augment(b).rank();
    return ra + rb - rsum;
}

GridModule::GridModule(std::vector<Rational> grid_, std::vector<std::size_t> dims_,
                       std::vector<FFMatrix> steps_, FieldSpec field_)
    : grid(std::move(grid_)), dims(std::move(dims_)), steps(std::move(steps_)), field(field_) {
    if (dims.size() != grid.size())
        throw std::invalid_argument("grid module: dims/grid size mismatch");
    if (!grid.empty() && steps.size() != grid.size() - 1)
        throw std::invalid_argument("grid module: need n-1 steps");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("grid module: grid not strictly ascending");
        if (steps[i].rows() != dims[i + 1] || steps[i].cols() != dims[i])
            throw std::invalid_argument("grid module: step shape mismatch");
    }
}

long GridModule::index_of(const Rational& t) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it == grid.end() || *it != t) return -1;
    return it - grid.begin();
}

namespace {

// Composite step grid[i] -> grid[j] for in-range i <= j.
FFMatrix composite(const GridModule& m, std::size_t i, std::size_t j) {
    FFMatrix acc = FFMatrix::identity(m.dims[i], m.field);
    for (std::size_t k = i; k < j; ++k) acc = m.steps[k].mul(acc);
    return acc;
}

void check_range(const GridModule& m, GridIndex i) {
    long n = static_cast<long>(m.size());
    if (i < -1 || i > n)
        throw std::out_of_range("grid index out of range (one virtual step allowed)");
}

}  // namespace

std::size_t rank_between(const GridModule& m, GridIndex i, GridIndex j) {
    if (i > j) throw std::invalid_argument("rank_between needs i <= j");
    check_range(m, i);
    check_range(m, j);
    long n = static_cast<long>(m.size());
    if (i < 0 || j >= n) return 0;  // virtual zero spaces at the ends
    return composite(m, i, j).rank();
}

std::size_t bracket_multiplicity(const GridModule& m, GridIndex i, GridIndex j) {
    if (i > j) throw std::invalid_argument("bracket_multiplicity needs i <= j");
    long n = static_cast<long>(m.size());
    if (i < 0 || j >= n) throw std::out_of_range("bracket indices must be real grid indices");
    long r1 = rank_between(m, i, j);
    long r2 = rank_between(m, i - 1, j);
    long r3 = rank_between(m, i, j + 1);
    long r4 = rank_between(m, i - 1, j + 1);
    long v = r1 - r2 - r3 + r4;
    if (v < 0) throw contract_error("negative multiplicity; module data inconsistent");
    return static_cast<std::size_t>(v);
}

std::size_t localization_multiplicity(const GridModule& m, GridIndex a, GridIndex b,
                                      GridIndex c, GridIndex d) {
    if (!(a < b && b <= c && c < d))
        throw std::invalid_argument("localization needs a < b <= c < d");
    check_range(m, a);
    check_range(m, d);
    long n = static_cast<long>(m.size());
    if (b < 0 || c >= n) return 0;  // [b,c] must be a real interval of the grid

    std::size_t dim_c = m.dims[c];
    // ker(v_c^d): everything when d is virtual (the map to the zero space).
    FFMatrix ker = d >= n ? FFMatrix::identity(dim_c, m.field)
                          : FFMatrix::from_columns(
                                dim_c, composite(m, c, d).kernel_basis(), m.field);
    // im(v_x^c): zero when x is virtual.
    auto image_in_c = [&](GridIndex x) {
        if (x < 0) return FFMatrix(dim_c, 0, m.field);
        return FFMatrix::from_columns(dim_c, composite(m, x, c).column_basis(), m.field);
    };
    std::size_t big = intersection_dim(image_in_c(b), ker);
    std::size_t small = intersection_dim(image_in_c(a), ker);
    return big - small;
}

Barcode decompose(const GridModule& m) {
    Barcode out(m.field);
    long n = static_cast<long>(m.size());
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            std::size_t mult = bracket_multiplicity(m, i, j);
            if (mult)
                out.intervals.add(Interval(DecoratedValue(m.grid[i], Dec::minus),
                                           DecoratedValue(m.grid[j], Dec::plus)),
                                  static_cast<long long>(mult));
        }
    return out;
}

SampledModule sample_barcode_tracked(const Barcode& b, const std::vector<Rational>& grid) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("sample grid must be strictly ascending");

    std::vector<Interval> ids = b.intervals.expand();
    SampledModule out;
    out.interval_of_id = ids;
    out.layout.resize(grid.size());

    std::vector<std::size_t> dims(grid.size(), 0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t id = 0; id < ids.size(); ++id)
            if (ids[id].contains(grid[g])) out.layout[g].push_back(id);
        dims[g] = out.layout[g].size();
    }

    std::vector<FFMatrix> steps;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
        FFMatrix s(dims[g + 1], dims[g], b.field);
        for (std::size_t r = 0; r < out.layout[g + 1].size(); ++r)
            for (std::size_t c = 0; c < out.layout[g].size(); ++c)
                if (out.layout[g + 1][r] == out.layout[g][c]) s.set(r, c, 1);
        steps.push_back(std::move(s));
    }
    out.module = GridModule(grid, dims, std::move(steps), b.field);
    return out;
}

GridModule sample_barcode(const Barcode& b, const std::vector<Rational>& grid) {
    return sample_barcode_tracked(b, grid).module;
}

GridModule direct_sum(const GridModule& a, const GridModule& b) {
    if (a.grid != b.grid || a.field != b.field)
        throw std::invalid_argument("direct_sum: incompatible modules");
    std::vector<std::size_t> dims(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dims[i] = a.dims[i] + b.dims[i];
    std::vector<FFMatrix> steps;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        FFMatrix s(dims[i + 1], dims[i], a.field);
        for (std::size_t r = 0; r < a.dims[i + 1]; ++r)
            for (std::size_t c = 0; c < a.dims[i]; ++c) s.set(r, c, a.steps[i].at(r, c));
        for (std::size_t r = 0; r < b.dims[i + 1]; ++r)
            for (std::size_t c = 0; c < b.dims[i]; ++c)
                s.set(a.dims[i + 1] + r, a.dims[i] + c, b.steps[i].at(r, c));
        steps.push_back(std::move(s));
    }
    return GridModule(a.grid, dims, std::move(steps), a.field);
}

}  // namespace persistra
