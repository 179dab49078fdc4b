#include "persistra/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "persistra/checks.hpp"
#include "persistra/diagram_io.hpp"
#include "persistra/metrics.hpp"

namespace persistra::cli {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Barcode load_barcode(const std::string& path, FieldSpec field = FieldSpec()) {
    return barcode_of_diagram(read_decorated_diagram_file(path), field);
}

constexpr const char* kFormatsHelp = R"(File formats:
  filtration (.flt): one simplex per line,
      simplex v0 v1 ... vk value
    vertex ids are nonnegative integers, value is a rational "n/d" or a
    decimal; '#' starts a comment; every face must be listed (strict mode).
  vertex values (.vals): lines "vertex id value".
  diagram (.csv): header line "#persistra-diagram v1", then per point
      birth_value,birth_dec,death_value,death_dec,multiplicity
    with values as rationals "n/d" or "-inf"/"+inf" and dec in {-,+};
    undecorated diagrams drop the two dec columns.
  matching (.csv): "a_index,b_index" rows, -1 denotes the diagonal.
  vineyard (.csv): "x,birth,death,track_id" rows, track_id -1 marks ghost
    segments absorbed by the diagonal.)";

int run_impl(const std::vector<std::string>& args) {
    CLI::App app{"persistra: persistence diagrams as rectangle measures", "persistra"};
    app.footer(kFormatsHelp);
    app.require_subcommand(1);

    // diagram
    auto* cmd_diagram = app.add_subcommand("diagram", "sublevelset persistence of a filtration");
    std::string dg_input, dg_out;
    unsigned dg_degree = 0, dg_field = 2;
    cmd_diagram->add_option("--input", dg_input, "filtration file")->required();
    cmd_diagram->add_option("--degree", dg_degree, "homology degree")->required();
    cmd_diagram->add_option("--field", dg_field, "prime field characteristic");
    cmd_diagram->add_option("--out", dg_out, "output diagram file")->required();

    // bottleneck
    auto* cmd_bottle = app.add_subcommand("bottleneck", "exact bottleneck distance");
    std::string bt_a, bt_b;
    cmd_bottle->add_option("a", bt_a, "first diagram")->required();
    cmd_bottle->add_option("b", bt_b, "second diagram")->required();

    // smooth
    auto* cmd_smooth = app.add_subcommand("smooth", "epsilon-smoothing of a diagram");
    std::string sm_eps, sm_in, sm_out;
    cmd_smooth->add_option("--epsilon", sm_eps, "shrink amount (rational)")->required();
    cmd_smooth->add_option("--in", sm_in, "input diagram")->required();
    cmd_smooth->add_option("--out", sm_out, "output diagram")->required();

    // interpolate
    auto* cmd_interp = app.add_subcommand("interpolate", "interpolating family and vineyard");
    std::string ip_u, ip_v, ip_delta, ip_variant = "image", ip_vineyard;
    unsigned ip_steps = 9;
    cmd_interp->add_option("--u", ip_u, "left diagram")->required();
    cmd_interp->add_option("--v", ip_v, "right diagram")->required();
    cmd_interp->add_option("--delta", ip_delta, "interleaving parameter")->required();
    cmd_interp->add_option("--variant", ip_variant, "image | kernel | cokernel");
    cmd_interp->add_option("--steps", ip_steps, "number of samples in [0, delta]");
    cmd_interp->add_option("--vineyard", ip_vineyard, "vineyard CSV output")->required();

    // extended
    auto* cmd_ext = app.add_subcommand("extended", "extended persistence of a vertex function");
    std::string ex_input, ex_values, ex_prefix;
    unsigned ex_degree = 0, ex_field = 2;
    cmd_ext->add_option("--input", ex_input, "filtration file (complex structure)")->required();
    cmd_ext->add_option("--values", ex_values, "vertex-value file")->required();
    cmd_ext->add_option("--degree", ex_degree, "homology degree")->required();
    cmd_ext->add_option("--field", ex_field, "prime field characteristic");
    cmd_ext->add_option("--out-prefix", ex_prefix, "prefix for ord/rel/ext outputs")->required();

    // truncate
    auto* cmd_trunc = app.add_subcommand("truncate", "truncate a diagram at T");
    std::string tr_at, tr_in, tr_out;
    cmd_trunc->add_option("--at", tr_at, "truncation value T")->required();
    cmd_trunc->add_option("--in", tr_in, "input diagram")->required();
    cmd_trunc->add_option("--out", tr_out, "output diagram")->required();

    // measure-probe
    auto* cmd_probe = app.add_subcommand("measure-probe", "evaluate the diagram's measure");
    std::string pr_in, pr_rect;
    cmd_probe->add_option("--in", pr_in, "input diagram")->required();
    cmd_probe->add_option("--rect", pr_rect, "rectangle a,b,c,d")->required();

    // check
    auto* cmd_check = app.add_subcommand("check", "run randomized property suites");
    std::string ck_suite = "all";
    std::uint64_t ck_seed = 0;
    int ck_cases = 200;
    cmd_check->add_option("--suite", ck_suite, "suite name or 'all'");
    cmd_check->add_option("--seed", ck_seed, "deterministic seed");
    cmd_check->add_option("--cases", ck_cases, "cases per property");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (cmd_diagram->parsed()) {
        auto k = parse_filtration(slurp(dg_input));
        auto bars = sublevel_persistence(k, dg_degree, FieldSpec(dg_field));
        write_diagram_file(dg_out, diagram_of_barcode(bars));
        return 0;
    }
    if (cmd_bottle->parsed()) {
        auto a = read_any_diagram_file(bt_a);
        auto b = read_any_diagram_file(bt_b);
        std::cout << to_string(bottleneck(a, b)) << "\n";
        return 0;
    }
    if (cmd_smooth->parsed()) {
        auto b = load_barcode(sm_in);
        write_diagram_file(sm_out, diagram_of_barcode(smooth(b, parse_rational(sm_eps))));
        return 0;
    }
    if (cmd_interp->parsed()) {
        auto u = load_barcode(ip_u);
        auto v = load_barcode(ip_v);
        Rational delta = parse_rational(ip_delta);
        InterpolationVariant variant;
        if (ip_variant == "image")
            variant = InterpolationVariant::image;
        else if (ip_variant == "kernel")
            variant = InterpolationVariant::kernel;
        else if (ip_variant == "cokernel")
            variant = InterpolationVariant::cokernel;
        else
            throw parse_error("unknown variant: " + ip_variant);
        if (ip_steps < 2) throw parse_error("--steps must be at least 2");
        auto [phi, psi] = matched_interleaving(u, v, delta);
        std::vector<Rational> xs;
        for (unsigned k = 0; k < ip_steps; ++k)
            xs.push_back(delta * static_cast<long>(k) / static_cast<long>(ip_steps - 1));
        auto fam = interpolate(u, v, phi, psi, delta, xs, variant);
        std::ofstream os(ip_vineyard);
        if (!os) throw std::runtime_error("cannot write " + ip_vineyard);
        os << vineyard_to_csv(vineyard(fam));
        return 0;
    }
    if (cmd_ext->parsed()) {
        auto k = parse_filtration(slurp(ex_input));
        std::vector<std::vector<int>> cx;
        for (auto& s : k.simplices) cx.push_back(s.vertices);
        auto vals = parse_vertex_values(slurp(ex_values));
        auto ep = extended_persistence(cx, vals, ex_degree, FieldSpec(ex_field));
        auto dump = [&](const std::string& name, const Barcode& bars) {
            std::ofstream os(ex_prefix + name + ".csv");
            if (!os) throw std::runtime_error("cannot write " + ex_prefix + name + ".csv");
            os << "# extended persistence over the mirrored line: backwards stage"
                  " t maps to "
               << to_string(Rational(2 * ep.critical.back() + 1)) << " - t\n";
            write_diagram(os, diagram_of_barcode(bars));
        };
        dump("ord", ep.ord);
        dump("rel", ep.rel);
        dump("ext", ep.ext);
        return 0;
    }
    if (cmd_trunc->parsed()) {
        auto b = load_barcode(tr_in);
        write_diagram_file(tr_out, diagram_of_barcode(truncate(b, parse_rational(tr_at))));
        return 0;
    }
    if (cmd_probe->parsed()) {
        auto b = load_barcode(pr_in);
        std::vector<std::string> sides;
        std::string cur;
        for (char ch : pr_rect + ",") {
            if (ch == ',') {
                sides.push_back(cur);
                cur.clear();
            } else
                cur += ch;
        }
        if (sides.size() != 4) throw parse_error("--rect expects a,b,c,d");
        Rect r(parse_xreal(sides[0]), parse_xreal(sides[1]), parse_xreal(sides[2]),
               parse_xreal(sides[3]));
        std::cout << to_string(measure_of_barcode(b)(r)) << "\n";
        return 0;
    }
    if (cmd_check->parsed()) {
        CheckOptions opt;
        opt.seed = ck_seed;
        opt.cases = ck_cases;
        auto results = run_checks(ck_suite, opt);
        bool all_ok = true;
        for (const auto& r : results) {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
            all_ok &= r.passed;
        }
        return all_ok ? 0 : 1;
    }
    return 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_impl(args);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    return run(args);
}

}  // namespace persistra::cli
