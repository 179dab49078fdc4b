#pragma once

#include "persistra/measure.hpp"
#include "persistra/metrics.hpp"

namespace persistra {

// ---------------------------------------------------------------------------
// Degree-delta homomorphisms between grid modules on a common grid. maps[i]
// sends the source space at grid[i] to the target space at grid[i] + delta;
// shift_index[i] locates that time in the grid, -1 when it falls outside (the
// modules are zero beyond the grid by construction, see
// build_interleaving_grid).

struct ShiftedHom {
    SampledModule source;
    SampledModule target;
    Rational delta;
    std::vector<long> shift_index;
    std::vector<FFMatrix> maps;  // meaningful where shift_index[i] >= 0
};

// Grid containing every finite endpoint of both barcodes together with all
// shifts by multiples of delta inside the support window padded by 2*delta.
std::vector<Rational> build_interleaving_grid(const Barcode& u, const Barcode& v,
                                              const Rational& delta);

// The identity-entry interleaving between two single-interval barcodes
// (Hom entries are 1 wherever both spaces are nonzero). Throws contract_error
// when delta is too small for the relations to hold. A caller-supplied grid
// must contain the default one.
std::pair<ShiftedHom, ShiftedHom> canonical_interleaving(
    const Barcode& u, const Barcode& v, const Rational& delta,
    std::optional<std::vector<Rational>> grid = std::nullopt);

// second o first, of degree first.delta + second.delta; homs must live on the
// same grid with matching middle module.
ShiftedHom compose_homs(const ShiftedHom& first, const ShiftedHom& second);

// Interleaving assembled from a delta-matching of the undecorated diagrams:
// canonical identity maps between matched interval copies, zero elsewhere.
// Throws contract_error when no delta-matching exists or the assembled maps
// fail the relations (the infimum need not be attained at delta).
std::pair<ShiftedHom, ShiftedHom> matched_interleaving(const Barcode& u, const Barcode& v,
                                                       const Rational& delta);

// All four relation families at every grid pair: both homs commute with the
// internal steps, and the two composites equal the 2*delta shift maps.
bool verify_interleaving(const ShiftedHom& phi, const ShiftedHom& psi, const Rational& delta);

// Exhaustive search over GF(2) entry assignments for (Phi, Psi). The number
// of unknown matrix entries is capped at 24; larger instances throw.
bool brute_force_interleaving_exists(const GridModule& u, const GridModule& v,
                                     const Rational& delta);
bool brute_force_interleaving_exists(const Barcode& u, const Barcode& v, const Rational& delta);

// epsilon-smoothing: every interval shrinks by epsilon at both ends,
// disappearing when nothing is left.
Barcode smooth(const Barcode& b, const Rational& epsilon);

// ---------------------------------------------------------------------------
// Interpolation between delta-interleaved modules, via the image, kernel or
// cokernel of the block map Omega evaluated along the diagonals of the strip.

enum class InterpolationVariant { image, kernel, cokernel };

struct InterpolationFamily {
    Barcode u, v;
    Rational delta;
    InterpolationVariant variant;
    std::vector<std::pair<Rational, Barcode>> samples;  // ascending x in [0, delta]
};

// Sample barcodes are reported in the finitely-observable half-open
// convention (bars [g_i, g_j)); endpoints reproduce u and v exactly when
// those are given in half-open form.
InterpolationFamily interpolate(const Barcode& u, const Barcode& v, const ShiftedHom& phi,
                                const ShiftedHom& psi, const Rational& delta,
                                const std::vector<Rational>& xs, InterpolationVariant variant);

struct VineyardRow {
    Rational x;
    XReal birth, death;
    long track;  // -1 marks ghost tracks absorbed by the diagonal
};

// Chains |y-x|-matchings between consecutive samples into trajectories.
// Throws contract_error when some consecutive pair admits no such matching.
std::vector<VineyardRow> vineyard(const InterpolationFamily& f);

// CSV export: "x,birth,death,track_id".
std::string vineyard_to_csv(const std::vector<VineyardRow>& rows);

// Both box-lemma inequalities, with the extension convention for thickened
// rectangles that leave the measures' domains.
bool box_check(const RMeasure& mu1, const RMeasure& mu2, const Rational& delta, const Rect& r);

// Truncation at T: bars below T survive, bars straddling T die at T^+, bars
// above T disappear.
Barcode truncate(const Barcode& b, const Rational& t);

}  // namespace persistra
