#include "doctest.h"
#include "persistra/cli.hpp"
#include "persistra/checks.hpp"
#include "persistra/diagram_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace persistra;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("persistra_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    os << content;
}

const char* kMorse =
    "simplex 0 1\nsimplex 1 2\nsimplex 2 3\n"
    "simplex 0 1 4\nsimplex 1 2 5\nsimplex 0 2 6\n";

}  // namespace

TEST_CASE("cli diagram then bottleneck with itself prints 0") {
    TempDir tmp;
    write_file(tmp.file("m.flt"), kMorse);
    CHECK(cli::run({"diagram", "--input", tmp.file("m.flt"), "--degree", "0", "--field", "2",
                    "--out", tmp.file("d.csv")}) == 0);
    auto d = read_decorated_diagram_file(tmp.file("d.csv"));
    CHECK(d.points.cardinality() == 3);
    CHECK(cli::run({"bottleneck", tmp.file("d.csv"), tmp.file("d.csv")}) == 0);
}

TEST_CASE("cli diagram round-trips bit-exactly through files") {
    TempDir tmp;
    DecoratedDiagram d;
    d.points.add(Interval(DecoratedValue(rat(1, 3), Dec::plus), DecoratedValue(rat(22, 7), Dec::minus)), 2);
    d.points.add(Interval(DecoratedValue::minus_infinity(), DecoratedValue(rat(5), Dec::plus)));
    write_diagram_file(tmp.file("a.csv"), d);
    CHECK(cli::run({"smooth", "--epsilon", "0", "--in", tmp.file("a.csv"), "--out",
                    tmp.file("b.csv")}) == 0);
    CHECK(read_decorated_diagram_file(tmp.file("b.csv")) == d);
}

TEST_CASE("cli smooth drops everything when epsilon dominates") {
    TempDir tmp;
    DecoratedDiagram d;
    d.points.add(interval_co(rat(0), rat(4)));
    write_diagram_file(tmp.file("a.csv"), d);
    CHECK(cli::run({"smooth", "--epsilon", "5/2", "--in", tmp.file("a.csv"), "--out",
                    tmp.file("b.csv")}) == 0);
    CHECK(read_decorated_diagram_file(tmp.file("b.csv")).points.empty());
}

TEST_CASE("cli truncate and measure-probe") {
    TempDir tmp;
    DecoratedDiagram d;
    d.points.add(interval_co(rat(1), rat(9)));
    write_diagram_file(tmp.file("a.csv"), d);
    CHECK(cli::run({"truncate", "--at", "5", "--in", tmp.file("a.csv"), "--out",
                    tmp.file("t.csv")}) == 0);
    auto t = read_decorated_diagram_file(tmp.file("t.csv"));
    CHECK(t.points.multiplicity(Interval(DecoratedValue(rat(1), Dec::minus),
                                         DecoratedValue(rat(5), Dec::plus))) == 1);
    CHECK(cli::run({"measure-probe", "--in", tmp.file("a.csv"), "--rect", "0,2,5/2,10"}) == 0);
}

TEST_CASE("cli interpolate writes a vineyard") {
    TempDir tmp;
    DecoratedDiagram u, v;
    u.points.add(interval_co(rat(0), rat(4)));
    v.points.add(interval_co(rat(1), rat(6)));
    write_diagram_file(tmp.file("u.csv"), u);
    write_diagram_file(tmp.file("v.csv"), v);
    CHECK(cli::run({"interpolate", "--u", tmp.file("u.csv"), "--v", tmp.file("v.csv"),
                    "--delta", "2", "--variant", "image", "--steps", "5", "--vineyard",
                    tmp.file("vine.csv")}) == 0);
    std::ifstream is(tmp.file("vine.csv"));
    std::string header;
    std::getline(is, header);
    CHECK(header == "x,birth,death,track_id");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("cli extended writes the three files") {
    TempDir tmp;
    write_file(tmp.file("c.flt"),
               "simplex 0 0\nsimplex 1 1\nsimplex 2 2\n"
               "simplex 0 1 1\nsimplex 1 2 2\nsimplex 0 2 2\n");
    write_file(tmp.file("c.vals"), "vertex 0 0\nvertex 1 1\nvertex 2 2\n");
    CHECK(cli::run({"extended", "--input", tmp.file("c.flt"), "--values", tmp.file("c.vals"),
                    "--degree", "0", "--out-prefix", tmp.file("ep_")}) == 0);
    CHECK(read_decorated_diagram_file(tmp.file("ep_ord.csv")).points.empty());
    CHECK(read_decorated_diagram_file(tmp.file("ep_rel.csv")).points.empty());
    auto ext = read_decorated_diagram_file(tmp.file("ep_ext.csv"));
    CHECK(ext.points.multiplicity(interval_co(rat(0), rat(3))) == 1);
}

TEST_CASE("cli check subcommand runs the suites") {
    CHECK(cli::run({"check", "--suite", "core", "--seed", "3", "--cases", "50"}) == 0);
}

TEST_CASE("check suites are deterministic under a fixed seed") {
    persistra::CheckOptions opt;
    opt.seed = 99;
    opt.cases = 60;
    auto a = persistra::run_checks("all", opt);
    auto b = persistra::run_checks("all", opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].passed == b[i].passed);
        CHECK(a[i].detail == b[i].detail);
    }
}

TEST_CASE("cli exit codes distinguish parse errors from contract violations") {
    TempDir tmp;
    // missing file: parse error -> 2
    CHECK(cli::run({"bottleneck", tmp.file("none.csv"), tmp.file("none.csv")}) == 2);
    // malformed filtration: parse error -> 2
    write_file(tmp.file("bad.flt"), "simplex 0 1 1\n");
    CHECK(cli::run({"diagram", "--input", tmp.file("bad.flt"), "--degree", "0", "--out",
                    tmp.file("x.csv")}) == 2);
    // interleaving contract violation: matched maps fail below the distance -> 1
    DecoratedDiagram u, v;
    u.points.add(interval_co(rat(0), rat(4)));
    v.points.add(interval_co(rat(1), rat(6)));
    write_diagram_file(tmp.file("u.csv"), u);
    write_diagram_file(tmp.file("v.csv"), v);
    CHECK(cli::run({"interpolate", "--u", tmp.file("u.csv"), "--v", tmp.file("v.csv"),
                    "--delta", "1", "--variant", "image", "--steps", "3", "--vineyard",
                    tmp.file("vine.csv")}) == 1);
    // bad argv -> 2
    CHECK(cli::run({"frobnicate"}) == 2);
}
