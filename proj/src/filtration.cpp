#include "persistra/filtration.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace persistra {

namespace {

bool simplex_order(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
}

}  // namespace

FilteredComplex::FilteredComplex(std::vector<Simplex> sx) : simplices(std::move(sx)) {
    for (auto& s : simplices) {
        if (s.vertices.empty()) throw parse_error("empty simplex");
        if (!std::is_sorted(s.vertices.begin(), s.vertices.end()) ||
            std::adjacent_find(s.vertices.begin(), s.vertices.end()) != s.vertices.end())
            throw parse_error("simplex vertices must be distinct and ascending");
    }
    std::sort(simplices.begin(), simplices.end(), simplex_order);
    for (std::size_t i = 0; i < simplices.size(); ++i)
        if (!index_.emplace(simplices[i].vertices, i).second)
            throw parse_error("duplicate simplex");
    // face closure and value monotonicity
    for (const auto& s : simplices) {
        if (s.dim() == 0) continue;
        for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
            std::vector<int> face = s.vertices;
            face.erase(face.begin() + drop);
            long idx = index_of(face);
            if (idx < 0) {
                std::ostringstream os;
                os << "missing face of simplex";
                for (int v : s.vertices) os << " " << v;
                throw parse_error(os.str());
            }
            if (simplices[idx].value > s.value)
                throw parse_error("face value exceeds coface value");
        }
    }
}

long FilteredComplex::index_of(const std::vector<int>& vertices) const {
    auto it = index_.find(vertices);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

FilteredComplex parse_filtration(const std::string& text) {
    std::vector<Simplex> out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok != "simplex")
            throw parse_error("line " + std::to_string(lineno) + ": expected 'simplex', got '" +
                              tok + "'");
        std::vector<std::string> fields;
        while (ls >> tok) fields.push_back(tok);
        if (fields.size() < 2)
            throw parse_error("line " + std::to_string(lineno) +
                              ": need at least one vertex and a value");
        Simplex s;
        for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(fields[i], &pos);
                if (pos != fields[i].size() || v < 0) throw std::invalid_argument("");
                s.vertices.push_back(v);
            } catch (...) {
                throw parse_error("line " + std::to_string(lineno) + ": bad vertex id '" +
                                  fields[i] + "'");
            }
        }
        try {
            s.value = parse_rational(fields.back());
        } catch (const parse_error& e) {
            throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
        }
        std::sort(s.vertices.begin(), s.vertices.end());
        out.push_back(std::move(s));
    }
    try {
        return FilteredComplex(std::move(out));
    } catch (const parse_error& e) {
        throw parse_error(std::string(e.what()) + " (strict mode: faces must be listed)");
    }
}

std::map<int, Rational> parse_vertex_values(const std::string& text) {
    std::map<int, Rational> out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok != "vertex")
            throw parse_error("line " + std::to_string(lineno) + ": expected 'vertex'");
        std::string ids, vs;
        if (!(ls >> ids >> vs))
            throw parse_error("line " + std::to_string(lineno) + ": expected 'vertex id value'");
        try {
            int id = std::stoi(ids);
            out[id] = parse_rational(vs);
        } catch (...) {
            throw parse_error("line " + std::to_string(lineno) + ": bad vertex line");
        }
    }
    return out;
}

FilteredComplex lower_star(const std::map<int, Rational>& vertex_values,
                           const std::vector<std::vector<int>>& complex) {
    std::vector<Simplex> out;
    for (auto verts : complex) {
        std::sort(verts.begin(), verts.end());
        Simplex s;
        s.vertices = verts;
        bool first = true;
        for (int v : verts) {
            auto it = vertex_values.find(v);
            if (it == vertex_values.end())
                throw parse_error("missing vertex value for vertex " + std::to_string(v));
            if (first || it->second > s.value) s.value = it->second;
            first = false;
        }
        out.push_back(std::move(s));
    }
    return FilteredComplex(std::move(out));
}

// ---------------------------------------------------------------------------
// Column reduction.

namespace {

unsigned inv_mod(unsigned a, unsigned p) {
    unsigned r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

using SparseCol = std::map<std::size_t, unsigned>;  // row -> nonzero coefficient

void add_scaled(SparseCol& dst, const SparseCol& src, unsigned factor, unsigned p) {
    for (auto& [row, coeff] : src) {
        unsigned v = (dst.count(row) ? dst[row] : 0u) + coeff * factor;
        v %= p;
        if (v)
            dst[row] = v;
        else
            dst.erase(row);
    }
}

}  // namespace

std::map<std::size_t, Barcode> sublevel_persistence_all(const FilteredComplex& k,
                                                        FieldSpec field) {
    const auto& sx = k.simplices;
    unsigned p = field.p;
    std::size_t n = sx.size();

    std::vector<SparseCol> cols(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& verts = sx[j].vertices;
        if (verts.size() == 1) continue;
        unsigned sign = 1;  // (-1)^i mod p, starting at i = 0
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            std::vector<int> face = verts;
            face.erase(face.begin() + drop);
            long idx = k.index_of(face);
            if (idx < 0) throw parse_error("complex not closed under faces");
            cols[j][static_cast<std::size_t>(idx)] = drop % 2 == 0 ? 1u : p - 1;
            (void)sign;
        }
    }

    std::vector<long> pivot_owner(n, -1);
    std::vector<long> killed_by(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        auto& col = cols[j];
        while (!col.empty()) {
            std::size_t low = col.rbegin()->first;
            long owner = pivot_owner[low];
            if (owner < 0) {
                pivot_owner[low] = static_cast<long>(j);
                killed_by[low] = static_cast<long>(j);
                break;
            }
            unsigned factor =
                col.rbegin()->second * inv_mod(cols[owner].rbegin()->second, p) % p;
            add_scaled(col, cols[owner], (p - factor) % p, p);
        }
    }

    std::map<std::size_t, Barcode> out;
    auto barcode_for = [&](std::size_t d) -> Barcode& {
        auto it = out.find(d);
        if (it == out.end()) it = out.emplace(d, Barcode(field)).first;
        return it->second;
    };
    for (std::size_t i = 0; i < n; ++i) {
        bool creator = cols[i].empty();
        if (!creator) continue;  // i kills something; not a cycle creator
        std::size_t d = sx[i].dim();
        if (killed_by[i] >= 0) {
            const Rational& birth = sx[i].value;
            const Rational& death = sx[killed_by[i]].value;
            if (birth != death) barcode_for(d).intervals.add(interval_co(birth, death));
        } else {
            barcode_for(d).intervals.add(interval_to_infinity(sx[i].value));
        }
    }
    return out;
}

Barcode sublevel_persistence(const FilteredComplex& k, std::size_t degree, FieldSpec field) {
    auto all = sublevel_persistence_all(k, field);
    auto it = all.find(degree);
    return it == all.end() ? Barcode(field) : it->second;
}

// ---------------------------------------------------------------------------
// Extended persistence.

namespace {

std::vector<int> sorted_copy(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

GridModule extended_sequence_module(const std::vector<std::vector<int>>& complex,
                                    const std::map<int, Rational>& vertex_values,
                                    std::size_t degree, FieldSpec field) {
    unsigned p = field.p;
    // collect simplices per relevant dimension
    std::vector<std::vector<int>> simp[3];
    std::map<std::vector<int>, std::size_t> index[3];
    for (const auto& raw : complex) {
        auto v = sorted_copy(raw);
        for (int v0 : v)
            if (!vertex_values.count(v0))
                throw parse_error("missing vertex value for vertex " + std::to_string(v0));
        long rel = static_cast<long>(v.size()) - 1 - static_cast<long>(degree);
        if (rel < -1 || rel > 1) continue;
        auto& bucket = simp[rel + 1];
        if (!index[rel + 1].count(v)) {
            index[rel + 1][v] = bucket.size();
            bucket.push_back(v);
        }
    }
    auto minmax_value = [&](const std::vector<int>& v) {
        Rational lo = vertex_values.at(v[0]), hi = lo;
        for (int x : v) {
            const Rational& q = vertex_values.at(x);
            if (q < lo) lo = q;
            if (q > hi) hi = q;
        }
        return std::pair<Rational, Rational>(lo, hi);
    };

    // boundary matrices over the full complex
    auto boundary = [&](int from) {  // from = 1 (degree) or 2 (degree+1)
        FFMatrix m(simp[from - 1].size(), simp[from].size(), field);
        for (std::size_t j = 0; j < simp[from].size(); ++j) {
            const auto& verts = simp[from][j];
            if (verts.size() == 1) continue;
            for (std::size_t drop = 0; drop < verts.size(); ++drop) {
                std::vector<int> face = verts;
                face.erase(face.begin() + drop);
                auto it = index[from - 1].find(face);
                if (it == index[from - 1].end()) throw parse_error("complex not closed under faces");
                m.set(it->second, j, drop % 2 == 0 ? 1u : p - 1);
            }
        }
        return m;
    };
    FFMatrix bd = boundary(1);    // degree -> degree-1
    FFMatrix bd1 = boundary(2);   // degree+1 -> degree

    // critical values
    std::set<Rational> crit;
    for (auto& [v, q] : vertex_values) crit.insert(q);
    std::vector<Rational> a(crit.begin(), crit.end());
    std::size_t nc = a.size();
    if (nc == 0) throw parse_error("no vertex values");
    Rational big = a.back();

    // stage masks: 0..nc-1 sublevel at a[k]; nc..2nc-1 relative at a[2nc-1-k]
    std::size_t stages = 2 * nc;
    auto allowed = [&](std::size_t stage, const std::vector<int>& v) {
        auto [lo, hi] = minmax_value(v);
        if (stage < nc) return hi <= a[stage];          // sublevel: max value <= threshold
        Rational theta = a[2 * nc - 1 - stage];
        return !(lo >= theta);                          // relative: kill superlevel simplices
    };

    std::size_t nd = simp[1].size();
    auto mask_matrix = [&](const FFMatrix& m, int row_bucket, int col_bucket,
                           std::size_t stage) {
        FFMatrix out(m.rows(), m.cols(), field);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!allowed(stage, simp[col_bucket][j])) continue;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                if (!m.at(i, j)) continue;
                if (!allowed(stage, simp[row_bucket][i])) continue;
                out.set(i, j, m.at(i, j));
            }
        }
        return out;
    };

    // homology bases per stage, as cycle vectors in full degree-coordinates
    std::vector<FFMatrix> hbasis(stages), bbasis(stages);
    for (std::size_t s = 0; s < stages; ++s) {
        FFMatrix mb = mask_matrix(bd, 0, 1, s);
        // kernel among allowed degree-simplices only
        std::vector<std::size_t> live;
        for (std::size_t j = 0; j < nd; ++j)
            if (allowed(s, simp[1][j])) live.push_back(j);
        FFMatrix restricted(mb.rows(), live.size(), field);
        for (std::size_t c = 0; c < live.size(); ++c)
            for (std::size_t r = 0; r < mb.rows(); ++r) restricted.set(r, c, mb.at(r, live[c]));
        auto ker = restricted.kernel_basis();
        std::vector<std::vector<unsigned>> zfull;
        for (auto& kv : ker) {
            std::vector<unsigned> z(nd, 0);
            for (std::size_t c = 0; c < live.size(); ++c) z[live[c]] = kv[c];
            zfull.push_back(std::move(z));
        }
        FFMatrix zmat = FFMatrix::from_columns(nd, zfull, field);

        FFMatrix mb1 = mask_matrix(bd1, 1, 2, s);
        FFMatrix bmat = FFMatrix::from_columns(nd, mb1.column_basis(), field);
        bbasis[s] = bmat;
        // extend the boundary basis by cycles to represent homology classes
        std::vector<std::vector<unsigned>> hcols;
        FFMatrix acc = bmat;
        std::size_t rank = acc.rank();
        for (std::size_t c = 0; c < zmat.cols(); ++c) {
            std::vector<unsigned> v(nd);
            for (std::size_t i = 0; i < nd; ++i) v[i] = zmat.at(i, c);
            FFMatrix trial = acc.augment(FFMatrix::from_columns(nd, {v}, field));
            if (trial.rank() > rank) {
                hcols.push_back(v);
                acc = trial;
                ++rank;
            }
        }
        hbasis[s] = FFMatrix::from_columns(nd, hcols, field);
    }

    // induced steps: project representatives to the next stage and express
    // them in that stage's homology basis
    std::vector<std::size_t> dims;
    for (std::size_t s = 0; s < stages; ++s) dims.push_back(hbasis[s].cols());
    std::vector<FFMatrix> steps;
    for (std::size_t s = 0; s + 1 < stages; ++s) {
        FFMatrix step(dims[s + 1], dims[s], field);
        for (std::size_t c = 0; c < dims[s]; ++c) {
            std::vector<unsigned> w(nd);
            for (std::size_t i = 0; i < nd; ++i)
                w[i] = allowed(s + 1, simp[1][i]) ? hbasis[s].at(i, c) : 0u;
            FFMatrix full = hbasis[s + 1].augment(bbasis[s + 1]);
            auto coords = full.solve(w);
            if (!coords) throw contract_error("projected cycle left the homology space");
            for (std::size_t r = 0; r < dims[s + 1]; ++r) step.set(r, c, (*coords)[r]);
        }
        steps.push_back(std::move(step));
    }

    std::vector<Rational> grid;
    for (std::size_t s = 0; s < stages; ++s)
        grid.push_back(s < nc ? a[s] : Rational(2 * big + 1 - a[2 * nc - 1 - s]));
    return GridModule(grid, dims, steps, field);
}

ExtendedPersistence extended_persistence(const std::vector<std::vector<int>>& complex,
                                         const std::map<int, Rational>& vertex_values,
                                         std::size_t degree, FieldSpec field) {
    ExtendedPersistence out;
    out.ord = Barcode(field);
    out.rel = Barcode(field);
    out.ext = Barcode(field);
    std::set<Rational> crit;
    for (auto& [v, q] : vertex_values) crit.insert(q);
    out.critical.assign(crit.begin(), crit.end());

    GridModule m = extended_sequence_module(complex, vertex_values, degree, field);
    std::size_t nc = out.critical.size();
    Barcode bars = decompose(m);
    for (auto& [iv, mult] : bars.intervals) {
        long i = m.index_of(iv.birth.value.value);
        long j = m.index_of(iv.death.value.value);
        if (i < 0 || j < 0) throw std::logic_error("decomposition off the stage grid");
        if (static_cast<std::size_t>(j) + 1 >= m.size())
            throw contract_error("a class survived the final relative stage");
        // report half-open over the mirrored line: dies entering stage j+1
        Interval bar = interval_co(m.grid[i], m.grid[j + 1]);
        if (static_cast<std::size_t>(j) + 1 < nc)
            out.ord.intervals.add(bar, mult);
        else if (static_cast<std::size_t>(i) < nc)
            out.ext.intervals.add(bar, mult);
        else
            out.rel.intervals.add(bar, mult);
    }
    return out;
}

}  // namespace persistra
