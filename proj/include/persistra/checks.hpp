#pragma once

#include <cstdint>
#include <random>

#include "persistra/filtration.hpp"
#include "persistra/interleave.hpp"

namespace persistra {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct CheckOptions {
    std::uint64_t seed = 0;
    int cases = 200;
};

// Suite names accepted by run_checks; "all" runs every suite.
std::vector<std::string> check_suites();
std::vector<CheckResult> run_checks(const std::string& suite, const CheckOptions& opt);

// Deterministic generators shared by the property suites and the acceptance
// tests.
namespace gen {

// Intervals with endpoints on the 1/denom-grid of [0, hi], random decorations.
Barcode random_barcode(std::mt19937_64& rng, int max_intervals = 10, long denom = 4,
                       long hi = 10, int max_mult = 3);

GridModule random_grid_module(std::mt19937_64& rng, FieldSpec field, std::size_t max_n = 6,
                              std::size_t max_dim = 4);

// Random lower-star complex: vertex values plus a random subset of edges and
// triangles over at most `max_vertices` vertices.
std::pair<std::vector<std::vector<int>>, std::map<int, Rational>> random_lower_star_complex(
    std::mt19937_64& rng, int max_vertices = 6);

// Random persistence rectangle with sides on the 1/denom-grid of [lo, hi].
Rect random_rect(std::mt19937_64& rng, long lo, long hi, long denom, bool half_plane);

}  // namespace gen

}  // namespace persistra
