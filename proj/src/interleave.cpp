#include "persistra/interleave.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace persistra {

namespace {

std::vector<Rational> finite_endpoints(const Barcode& b) {
    std::vector<Rational> out;
    for (auto& [iv, mult] : b.intervals) {
        if (iv.birth.value.is_finite()) out.push_back(iv.birth.value.value);
        if (iv.death.value.is_finite()) out.push_back(iv.death.value.value);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Composite step matrix grid[i] -> grid[j] of a module.
FFMatrix composite_step(const GridModule& m, std::size_t i, std::size_t j) {
    FFMatrix acc = FFMatrix::identity(m.dims[i], m.field);
    for (std::size_t k = i; k < j; ++k) acc = m.steps[k].mul(acc);
    return acc;
}

bool is_zero(const FFMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.at(r, c)) return false;
    return true;
}

bool same_structure(const GridModule& a, const GridModule& b) {
    return a.grid == b.grid && a.dims == b.dims && a.steps == b.steps && a.field == b.field;
}

std::vector<long> shift_indices(const std::vector<Rational>& grid, const Rational& delta) {
    std::vector<long> out(grid.size(), -1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Rational shifted = grid[i] + delta;
        auto it = std::lower_bound(grid.begin(), grid.end(), shifted);
        if (it != grid.end() && *it == shifted) out[i] = it - grid.begin();
    }
    return out;
}

ShiftedHom zero_hom(const SampledModule& src, const SampledModule& tgt, const Rational& delta) {
    ShiftedHom h;
    h.source = src;
    h.target = tgt;
    h.delta = delta;
    h.shift_index = shift_indices(src.module.grid, delta);
    h.maps.resize(src.module.grid.size(), FFMatrix(0, 0, src.module.field));
    for (std::size_t i = 0; i < src.module.grid.size(); ++i)
        if (h.shift_index[i] >= 0)
            h.maps[i] = FFMatrix(tgt.module.dims[h.shift_index[i]], src.module.dims[i],
                                 src.module.field);
    return h;
}

}  // namespace

std::vector<Rational> build_interleaving_grid(const Barcode& u, const Barcode& v,
                                              const Rational& delta) {
    std::vector<Rational> e = finite_endpoints(u);
    auto ev = finite_endpoints(v);
    e.insert(e.end(), ev.begin(), ev.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    if (e.empty()) return {rat(0)};
    Rational lo = e.front() - 2 * delta, hi = e.back() + 2 * delta;
    std::vector<Rational> out;
    if (delta == 0) {
        out = e;
    } else {
        for (const auto& base : e) {
            Rational t = base;
            while (t >= lo) {
                out.push_back(t);
                t -= delta;
            }
            t = base + delta;
            while (t <= hi) {
                out.push_back(t);
                t += delta;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<ShiftedHom, ShiftedHom> canonical_interleaving(
    const Barcode& u, const Barcode& v, const Rational& delta,
    std::optional<std::vector<Rational>> grid_in) {
    if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
    if (u.intervals.cardinality() != 1 || v.intervals.cardinality() != 1)
        throw std::invalid_argument("canonical interleaving expects single-interval barcodes");
    auto grid = grid_in ? *grid_in : build_interleaving_grid(u, v, delta);
    if (grid_in) {
        for (const auto& t : build_interleaving_grid(u, v, delta))
            if (!std::binary_search(grid.begin(), grid.end(), t))
                throw std::invalid_argument("supplied grid misses the required shift " +
                                            to_string(t));
    }
    auto su = sample_barcode_tracked(u, grid);
    auto sv = sample_barcode_tracked(v, grid);
    ShiftedHom phi = zero_hom(su, sv, delta);
    ShiftedHom psi = zero_hom(sv, su, delta);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (phi.shift_index[i] >= 0 && su.module.dims[i] == 1 &&
            sv.module.dims[phi.shift_index[i]] == 1)
            phi.maps[i].set(0, 0, 1);
        if (psi.shift_index[i] >= 0 && sv.module.dims[i] == 1 &&
            su.module.dims[psi.shift_index[i]] == 1)
            psi.maps[i].set(0, 0, 1);
    }
    if (!verify_interleaving(phi, psi, delta))
        throw contract_error("delta too small: canonical maps violate the interleaving relations");
    return {phi, psi};
}

namespace {

// Commutation of a single hom with the internal steps, zero spaces beyond the
// grid. Checking every pair (not just consecutive ones) follows the relation
// family (Phi 1^eta = 1^eta Phi) literally.
bool hom_commutes(const ShiftedHom& h) {
    const GridModule& src = h.source.module;
    const GridModule& tgt = h.target.module;
    std::size_t n = src.grid.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            long si = h.shift_index[i], sj = h.shift_index[j];
            if (sj < 0) continue;  // target space is zero there
            FFMatrix lhs = h.maps[j].mul(composite_step(src, i, j));
            if (si < 0) {
                if (!is_zero(lhs)) return false;
                continue;
            }
            FFMatrix rhs = composite_step(tgt, si, sj).mul(h.maps[i]);
            if (!(lhs == rhs)) return false;
        }
    return true;
}

// Psi o Phi == shift by 2 delta on phi's source, wherever expressible.
bool composite_is_shift(const ShiftedHom& phi, const ShiftedHom& psi) {
    const GridModule& src = phi.source.module;
    std::size_t n = src.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        long m = phi.shift_index[i];
        if (m < 0) {
            // phi lands in a zero space; the shift map must vanish too
            Rational t2 = src.grid[i] + phi.delta + psi.delta;
            auto it = std::lower_bound(src.grid.begin(), src.grid.end(), t2);
            if (it != src.grid.end() && *it == t2) {
                std::size_t k = it - src.grid.begin();
                if (!is_zero(composite_step(src, i, k))) return false;
            }
            continue;
        }
        long k = psi.shift_index[m];
        if (k < 0) continue;  // composite lands beyond the grid, where the module vanishes
        FFMatrix lhs = psi.maps[m].mul(phi.maps[i]);
        FFMatrix rhs = composite_step(src, i, static_cast<std::size_t>(k));
        if (!(lhs == rhs)) return false;
    }
    return true;
}

}  // namespace

bool verify_interleaving(const ShiftedHom& phi, const ShiftedHom& psi, const Rational& delta) {
    if (phi.delta != delta || psi.delta != delta)
        throw std::invalid_argument("hom degrees disagree with delta");
    if (phi.source.module.grid != phi.target.module.grid ||
        phi.source.module.grid != psi.source.module.grid)
        throw std::invalid_argument("interleaving homs need a common grid");
    if (!same_structure(phi.source.module, psi.target.module) ||
        !same_structure(phi.target.module, psi.source.module))
        throw std::invalid_argument("phi and psi must connect the same pair of modules");
    return hom_commutes(phi) && hom_commutes(psi) && composite_is_shift(phi, psi) &&
           composite_is_shift(psi, phi);
}

// ---------------------------------------------------------------------------
// Brute-force search over GF(2) assignments.

namespace {

struct Slot {
    bool in_phi;
    std::size_t index, row, col;
};

struct BruteSearch {
    ShiftedHom phi, psi;
    const GridModule* u;
    const GridModule* v;
    std::vector<Slot> slots;
    // slots grouped by grid index; checks run once an index is complete
    std::vector<std::size_t> slots_done_at_index;

    bool consecutive_commutes(const ShiftedHom& h, std::size_t k) {
        if (k == 0) return true;
        const GridModule& src = h.source.module;
        const GridModule& tgt = h.target.module;
        long si = h.shift_index[k - 1], sj = h.shift_index[k];
        if (sj < 0) return true;
        FFMatrix lhs = h.maps[k].mul(src.steps[k - 1]);
        if (si < 0) return is_zero(lhs);
        return lhs == composite_step(tgt, si, sj).mul(h.maps[k - 1]);
    }

    bool composites_at(std::size_t k) {
        // Psi Phi at every i with phi-shift k, Phi Psi at every j with
        // psi-shift k; all inputs are assigned once index k is complete.
        const GridModule& su = phi.source.module;
        const GridModule& sv = psi.source.module;
        for (std::size_t i = 0; i <= k; ++i) {
            if (phi.shift_index[i] == static_cast<long>(k)) {
                long end = psi.shift_index[k];
                if (end >= 0) {
                    if (!(psi.maps[k].mul(phi.maps[i]) ==
                          composite_step(su, i, static_cast<std::size_t>(end))))
                        return false;
                }
            }
            if (psi.shift_index[i] == static_cast<long>(k)) {
                long end = phi.shift_index[k];
                if (end >= 0) {
                    if (!(phi.maps[k].mul(psi.maps[i]) ==
                          composite_step(sv, i, static_cast<std::size_t>(end))))
                        return false;
                }
            }
        }
        return true;
    }

    bool index_checks(std::size_t k) {
        return consecutive_commutes(phi, k) && consecutive_commutes(psi, k) && composites_at(k);
    }

    bool dfs(std::size_t s, std::size_t index) {
        while (index < slots_done_at_index.size() && s == slots_done_at_index[index]) {
            if (!index_checks(index)) return false;
            ++index;
        }
        if (s == slots.size()) {
            return verify_interleaving(phi, psi, phi.delta);
        }
        const Slot& sl = slots[s];
        for (unsigned bit : {0u, 1u}) {
            FFMatrix& m = sl.in_phi ? phi.maps[sl.index] : psi.maps[sl.index];
            m.set(sl.row, sl.col, bit);
            if (dfs(s + 1, index)) return true;
        }
        FFMatrix& m = sl.in_phi ? phi.maps[sl.index] : psi.maps[sl.index];
        m.set(sl.row, sl.col, 0);
        return false;
    }
};

}  // namespace

bool brute_force_interleaving_exists(const GridModule& u, const GridModule& v,
                                     const Rational& delta) {
    if (u.field.p != 2 || v.field.p != 2)
        throw std::invalid_argument("brute-force oracle works over GF(2) only");
    if (u.grid != v.grid) throw std::invalid_argument("modules need a common grid");
    if (delta < 0) return false;

    SampledModule su, sv;  // layouts unused here
    su.module = u;
    sv.module = v;
    BruteSearch search;
    search.phi = zero_hom(su, sv, delta);
    search.psi = zero_hom(sv, su, delta);
    search.u = &u;
    search.v = &v;

    std::size_t unknowns = 0;
    std::size_t n = u.grid.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (bool in_phi : {true, false}) {
            const ShiftedHom& h = in_phi ? search.phi : search.psi;
            if (h.shift_index[k] < 0) continue;
            const FFMatrix& m = h.maps[k];
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    search.slots.push_back({in_phi, k, r, c});
            unknowns += m.rows() * m.cols();
        }
        search.slots_done_at_index.push_back(search.slots.size());
    }
    if (unknowns > 24)
        throw std::invalid_argument("instance too large: " + std::to_string(unknowns) +
                                    " unknown entries exceed the 24-entry cap");
    return search.dfs(0, 0);
}

bool brute_force_interleaving_exists(const Barcode& u, const Barcode& v, const Rational& delta) {
    auto grid = build_interleaving_grid(u, v, delta);
    return brute_force_interleaving_exists(sample_barcode(u, grid), sample_barcode(v, grid),
                                           delta);
}

ShiftedHom compose_homs(const ShiftedHom& first, const ShiftedHom& second) {
    if (first.source.module.grid != second.source.module.grid)
        throw std::invalid_argument("compose_homs: grids differ");
    if (!same_structure(first.target.module, second.source.module))
        throw std::invalid_argument("compose_homs: middle module mismatch");
    ShiftedHom out = zero_hom(first.source, second.target, first.delta + second.delta);
    for (std::size_t i = 0; i < out.maps.size(); ++i) {
        if (out.shift_index[i] < 0) continue;
        long mid = first.shift_index[i];
        if (mid < 0) {
            // first lands beyond the grid where the middle module vanishes;
            // the composite is the zero map, which out already holds
            if (first.source.module.dims[i] != 0 &&
                out.maps[i].rows() != 0)  // target alive but middle unknown
                throw contract_error("compose_homs: grid misses an intermediate time");
            continue;
        }
        if (second.shift_index[mid] != out.shift_index[i])
            throw contract_error("compose_homs: inconsistent shift indices");
        out.maps[i] = second.maps[mid].mul(first.maps[i]);
    }
    return out;
}

std::pair<ShiftedHom, ShiftedHom> matched_interleaving(const Barcode& u, const Barcode& v,
                                                       const Rational& delta) {
    auto du = undecorate(diagram_of_barcode(u));
    auto dv = undecorate(diagram_of_barcode(v));
    auto m = exists_delta_matching(du, dv, delta);
    if (!m) throw contract_error("no delta-matching between the diagrams at " + to_string(delta));

    // undecorated matching indices -> interval copy ids
    std::vector<Interval> iu = u.intervals.expand(), iv = v.intervals.expand();
    auto group_ids = [](const std::vector<Interval>& ivs) {
        std::map<UPoint, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            if (ivs[i].on_diagonal()) continue;
            groups[{ivs[i].birth.value, ivs[i].death.value}].push_back(i);
        }
        return groups;
    };
    auto gu = group_ids(iu), gv = group_ids(iv);
    std::vector<UPoint> pu = du.points.expand(), pv = dv.points.expand();
    std::map<UPoint, std::size_t> taken_u, taken_v;
    std::vector<std::pair<std::size_t, std::size_t>> id_pairs;
    for (auto [ia, jb] : m->pairs) {
        const UPoint &pa = pu[ia], &pb = pv[jb];
        id_pairs.push_back({gu[pa][taken_u[pa]++], gv[pb][taken_v[pb]++]});
    }

    auto grid = build_interleaving_grid(u, v, delta);
    auto su = sample_barcode_tracked(u, grid);
    auto sv = sample_barcode_tracked(v, grid);
    ShiftedHom phi = zero_hom(su, sv, delta);
    ShiftedHom psi = zero_hom(sv, su, delta);
    auto position = [](const std::vector<std::size_t>& layout, std::size_t id) -> long {
        for (std::size_t k = 0; k < layout.size(); ++k)
            if (layout[k] == id) return static_cast<long>(k);
        return -1;
    };
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (auto [uid, vid] : id_pairs) {
            if (phi.shift_index[g] >= 0) {
                long col = position(su.layout[g], uid);
                long row = position(sv.layout[phi.shift_index[g]], vid);
                if (col >= 0 && row >= 0) phi.maps[g].set(row, col, 1);
            }
            if (psi.shift_index[g] >= 0) {
                long col = position(sv.layout[g], vid);
                long row = position(su.layout[psi.shift_index[g]], uid);
                if (col >= 0 && row >= 0) psi.maps[g].set(row, col, 1);
            }
        }
    }
    if (!verify_interleaving(phi, psi, delta))
        throw contract_error("matched maps violate the relations at " + to_string(delta) +
                             " (the infimum may not be attained)");
    return {phi, psi};
}

Barcode smooth(const Barcode& b, const Rational& epsilon) {
    if (epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
    Barcode out(b.field);
    for (auto& [iv, mult] : b.intervals) {
        DecoratedValue birth(iv.birth.value + epsilon, iv.birth.dec);
        DecoratedValue death(iv.death.value - epsilon, iv.death.dec);
        if (birth < death) out.intervals.add(Interval(birth, death), mult);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interpolation.

namespace {

// Interval-module evaluation of a barcode at arbitrary rational times, with
// coordinates laid out by interval id (matching SampledModule layouts).
struct BarcodeEval {
    std::vector<Interval> ids;
    FieldSpec field;

    explicit BarcodeEval(const Barcode& b) : ids(b.intervals.expand()), field(b.field) {}

    std::vector<std::size_t> alive(const Rational& t) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i].contains(t)) out.push_back(i);
        return out;
    }

    // survival matrix alive(s) -> alive(t)
    FFMatrix step(const Rational& s, const Rational& t) const {
        auto as = alive(s), at = alive(t);
        FFMatrix m(at.size(), as.size(), field);
        for (std::size_t r = 0; r < at.size(); ++r)
            for (std::size_t c = 0; c < as.size(); ++c)
                if (at[r] == as[c]) m.set(r, c, 1);
        return m;
    }
};

// Resample a hom at an arbitrary time by snapping to its grid; layouts must
// agree or the hom grid is too coarse for this request.
FFMatrix hom_at(const ShiftedHom& h, const BarcodeEval& src, const BarcodeEval& tgt,
                const Rational& tau) {
    auto sa = src.alive(tau);
    auto ta = tgt.alive(tau + h.delta);
    if (sa.empty() || ta.empty())
        return FFMatrix(ta.size(), sa.size(), src.field);
    const auto& grid = h.source.module.grid;
    auto it = std::upper_bound(grid.begin(), grid.end(), tau);
    if (it == grid.begin()) throw contract_error("hom grid too coarse below the support");
    long g_signed = static_cast<long>(it - grid.begin()) - 1;
    // beyond the shifted part of the grid the modules are constant; fall back
    // to the last entry with a defined shift (the layout checks below verify
    // that nothing changed in between)
    while (g_signed >= 0 && h.shift_index[g_signed] < 0) --g_signed;
    if (g_signed < 0) throw contract_error("hom grid misses a shifted evaluation time");
    std::size_t g = static_cast<std::size_t>(g_signed);
    long sg = h.shift_index[g];
    if (h.source.layout[g] != sa || h.target.layout[static_cast<std::size_t>(sg)] != ta)
        throw contract_error("hom grid too coarse for the requested sample");
    return h.maps[g];
}

FFMatrix negate(FFMatrix m, unsigned p) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, (p - m.at(r, c)) % p);
    return m;
}

FFMatrix block2x2(const FFMatrix& tl, const FFMatrix& tr, const FFMatrix& bl, const FFMatrix& br,
                  FieldSpec f) {
    std::size_t rows = tl.rows() + bl.rows(), cols = tl.cols() + tr.cols();
    FFMatrix m(rows, cols, f);
    for (std::size_t r = 0; r < tl.rows(); ++r) {
        for (std::size_t c = 0; c < tl.cols(); ++c) m.set(r, c, tl.at(r, c));
        for (std::size_t c = 0; c < tr.cols(); ++c) m.set(r, tl.cols() + c, tr.at(r, c));
    }
    for (std::size_t r = 0; r < bl.rows(); ++r) {
        for (std::size_t c = 0; c < bl.cols(); ++c) m.set(tl.rows() + r, c, bl.at(r, c));
        for (std::size_t c = 0; c < br.cols(); ++c)
            m.set(tl.rows() + r, bl.cols() + c, br.at(r, c));
    }
    return m;
}

FFMatrix block_diag(const FFMatrix& a, const FFMatrix& b, FieldSpec f) {
    FFMatrix m(a.rows() + b.rows(), a.cols() + b.cols(), f);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m.set(r, c, a.at(r, c));
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) m.set(a.rows() + r, a.cols() + c, b.at(r, c));
    return m;
}

// Standard basis vectors completing span(img) to the ambient space.
std::vector<std::vector<unsigned>> complement_basis(const FFMatrix& img, std::size_t ambient,
                                                    FieldSpec f) {
    std::vector<std::vector<unsigned>> cols;
    for (std::size_t j = 0; j < img.cols(); ++j) {
        std::vector<unsigned> v(ambient);
        for (std::size_t i = 0; i < ambient; ++i) v[i] = img.at(i, j);
        cols.push_back(std::move(v));
    }
    std::vector<std::vector<unsigned>> out;
    FFMatrix cur = FFMatrix::from_columns(ambient, cols, f);
    std::size_t rank = cur.rank();
    for (std::size_t i = 0; i < ambient && rank < ambient; ++i) {
        std::vector<unsigned> e(ambient, 0);
        e[i] = 1;
        cols.push_back(e);
        FFMatrix trial = FFMatrix::from_columns(ambient, cols, f);
        if (trial.rank() > rank) {
            out.push_back(e);
            cur = trial;
            ++rank;
        } else {
            cols.pop_back();
        }
    }
    return out;
}

// Express each column of `vecs` in the column basis `basis`.
FFMatrix in_basis(const FFMatrix& basis, const FFMatrix& vecs) {
    FFMatrix out(basis.cols(), vecs.cols(), basis.field());
    for (std::size_t j = 0; j < vecs.cols(); ++j) {
        std::vector<unsigned> b(vecs.rows());
        for (std::size_t i = 0; i < vecs.rows(); ++i) b[i] = vecs.at(i, j);
        auto x = basis.solve(b);
        if (!x) throw std::logic_error("interpolation step left the subspace");
        for (std::size_t i = 0; i < basis.cols(); ++i) out.set(i, j, (*x)[i]);
    }
    return out;
}

// Half-open snapping of a decomposed grid module: the closed grid bar
// [g_i, g_j] reads as [g_i, g_{j+1}) for modules whose bars are left closed.
// A bar alive at the padded top sentinel outlives every finite breakpoint
// and reads as an infinite bar.
Barcode to_halfopen(const GridModule& w) {
    Barcode raw = decompose(w);
    Barcode out(w.field);
    for (auto& [iv, mult] : raw.intervals) {
        long j = w.index_of(iv.death.value.value);
        if (j < 0) throw std::logic_error("decomposition off the grid");
        if (j + 1 >= static_cast<long>(w.grid.size()))
            out.intervals.add(interval_to_infinity(iv.birth.value.value), mult);
        else
            out.intervals.add(interval_co(iv.birth.value.value, w.grid[j + 1]), mult);
    }
    return out;
}

}  // namespace

InterpolationFamily interpolate(const Barcode& u, const Barcode& v, const ShiftedHom& phi,
                                const ShiftedHom& psi, const Rational& delta,
                                const std::vector<Rational>& xs, InterpolationVariant variant) {
    if (!verify_interleaving(phi, psi, delta))
        throw contract_error("interpolation requires a valid interleaving");
    FieldSpec f = u.field;
    if (v.field != f) throw std::invalid_argument("field mismatch");

    InterpolationFamily fam;
    fam.u = u;
    fam.v = v;
    fam.delta = delta;
    fam.variant = variant;

    BarcodeEval ue(u), ve(v);
    std::vector<Rational> e = finite_endpoints(u);
    auto e2 = finite_endpoints(v);
    e.insert(e.end(), e2.begin(), e2.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());

    for (const auto& x : xs) {
        if (x < 0 || x > delta) throw std::invalid_argument("sample outside [0, delta]");
        Barcode sample(f);
        if (!e.empty()) {
            Rational lo = e.front() - 2 * delta - 1, hi = e.back() + 2 * delta + 1;
            std::vector<Rational> grid = {lo, hi};
            for (const auto& base : e)
                for (int k1 = -1; k1 <= 1; ++k1)
                    for (int k2 = -2; k2 <= 2; ++k2) {
                        Rational t = base + k1 * x + k2 * delta;
                        if (lo < t && t < hi) grid.push_back(t);
                    }
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

            // spaces of the chosen variant at each grid time
            std::vector<FFMatrix> bases;  // columns in the ambient coordinates
            std::vector<FFMatrix> img_for_quotient;
            for (const auto& t : grid) {
                FFMatrix uu = ue.step(t - x, t + x);
                FFMatrix vv = ve.step(t + x - delta, t - x + delta);
                switch (variant) {
                    case InterpolationVariant::image: {
                        FFMatrix omega = block2x2(uu, hom_at(psi, ve, ue, t + x - delta),
                                                  hom_at(phi, ue, ve, t - x), vv, f);
                        bases.push_back(
                            FFMatrix::from_columns(omega.rows(), omega.column_basis(), f));
                        break;
                    }
                    case InterpolationVariant::kernel: {
                        FFMatrix opp = block2x2(
                            ue.step(t + x, t - x + 2 * delta),
                            negate(hom_at(psi, ve, ue, t - x + delta), f.p),
                            negate(hom_at(phi, ue, ve, t + x), f.p),
                            ve.step(t - x + delta, t + x + delta), f);
                        bases.push_back(FFMatrix::from_columns(
                            opp.cols(), opp.kernel_basis(), f));
                        break;
                    }
                    case InterpolationVariant::cokernel: {
                        FFMatrix op = block2x2(
                            ue.step(t + x - 2 * delta, t - x),
                            negate(hom_at(psi, ve, ue, t - x - delta), f.p),
                            negate(hom_at(phi, ue, ve, t + x - 2 * delta), f.p),
                            ve.step(t - x - delta, t + x - delta), f);
                        std::size_t ambient = op.rows();
                        FFMatrix img =
                            FFMatrix::from_columns(ambient, op.column_basis(), f);
                        img_for_quotient.push_back(img);
                        bases.push_back(FFMatrix::from_columns(
                            ambient, complement_basis(img, ambient, f), f));
                        break;
                    }
                }
            }

            // induced steps between consecutive grid times
            std::vector<std::size_t> dims;
            for (auto& b : bases) dims.push_back(b.cols());
            std::vector<FFMatrix> steps;
            for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
                const Rational &t = grid[k], &t2 = grid[k + 1];
                FFMatrix amb =
                    variant == InterpolationVariant::cokernel
                        ? block_diag(ue.step(t - x, t2 - x),
                                     ve.step(t + x - delta, t2 + x - delta), f)
                        : block_diag(ue.step(t + x, t2 + x),
                                     ve.step(t - x + delta, t2 - x + delta), f);
                FFMatrix moved = amb.mul(bases[k]);
                if (variant == InterpolationVariant::cokernel) {
                    const FFMatrix& img2 = img_for_quotient[k + 1];
                    FFMatrix full = img2.augment(bases[k + 1]);
                    FFMatrix coords = in_basis(full, moved);
                    FFMatrix step(bases[k + 1].cols(), bases[k].cols(), f);
                    for (std::size_t r = 0; r < step.rows(); ++r)
                        for (std::size_t c = 0; c < step.cols(); ++c)
                            step.set(r, c, coords.at(img2.cols() + r, c));
                    steps.push_back(std::move(step));
                } else {
                    steps.push_back(in_basis(bases[k + 1], moved));
                }
            }
            sample = to_halfopen(GridModule(grid, dims, steps, f));
        }
        fam.samples.push_back({x, sample});
    }
    std::sort(fam.samples.begin(), fam.samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return fam;
}

std::vector<VineyardRow> vineyard(const InterpolationFamily& f) {
    std::vector<VineyardRow> rows;
    if (f.samples.empty()) return rows;

    std::vector<std::vector<UPoint>> pts;
    std::vector<UndecoratedDiagram> dgms;
    for (auto& [x, bc] : f.samples) {
        auto d = undecorate(diagram_of_barcode(bc));
        dgms.push_back(d);
        pts.push_back(d.points.expand());
    }

    // chained matchings assign track ids
    std::vector<std::vector<long>> track(pts.size());
    long next_track = 0;
    track[0].resize(pts[0].size());
    for (auto& t : track[0]) t = next_track++;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        Rational h = f.samples[k + 1].first - f.samples[k].first;
        auto m = exists_delta_matching(dgms[k], dgms[k + 1], h);
        if (!m)
            throw contract_error("family violates stability: no matching at step " +
                                 to_string(h));
        track[k + 1].assign(pts[k + 1].size(), -1);
        for (auto [i, j] : m->pairs) track[k + 1][j] = track[k][i];
        for (auto& t : track[k + 1])
            if (t < 0) t = next_track++;
    }

    // ghosts: tracks absent at both ends of the family
    std::set<long> at_first(track.front().begin(), track.front().end());
    std::set<long> at_last(track.back().begin(), track.back().end());
    for (std::size_t k = 0; k < pts.size(); ++k)
        for (std::size_t i = 0; i < pts[k].size(); ++i) {
            long t = track[k][i];
            bool ghost = !at_first.count(t) && !at_last.count(t);
            rows.push_back({f.samples[k].first, pts[k][i].first, pts[k][i].second,
                            ghost ? -1 : t});
        }
    return rows;
}

std::string vineyard_to_csv(const std::vector<VineyardRow>& rows) {
    std::ostringstream os;
    os << "x,birth,death,track_id\n";
    for (const auto& r : rows)
        os << to_string(r.x) << "," << to_string(r.birth) << "," << to_string(r.death) << ","
           << r.track << "\n";
    return os.str();
}

bool box_check(const RMeasure& mu1, const RMeasure& mu2, const Rational& delta, const Rect& r) {
    if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
    Rect rd = thicken(r, delta);
    // persistence measures live on the half-plane: a rectangle crossing the
    // diagonal carries infinite mass under the extension convention
    auto value = [](const RMeasure& mu, const Rect& rect) {
        return rect.in_half_plane() ? mu.extended(rect) : Count::infinity();
    };
    return value(mu1, r) <= value(mu2, rd) && value(mu2, r) <= value(mu1, rd);
}

Barcode truncate(const Barcode& b, const Rational& t) {
    XReal cut{t};
    Barcode out(b.field);
    for (auto& [iv, mult] : b.intervals) {
        if (dec_lt(iv.death, cut)) {
            out.intervals.add(iv, mult);  // q* < T: untouched
        } else if (dec_lt(iv.birth, cut)) {
            // p* < T < q*: death snaps to T^+
            out.intervals.add(Interval(iv.birth, DecoratedValue(t, Dec::plus)), mult);
        }
        // T < p*: disappears
    }
    return out;
}

}  // namespace persistra
