#include "persistra/diagram_io.hpp"

#include <fstream>
#include <sstream>

namespace persistra {

namespace {

const char* kHeader = "#persistra-diagram v1";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(0, 1);
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
    }
    return out;
}

Dec parse_dec(const std::string& s, std::size_t lineno) {
    if (s == "-") return Dec::minus;
    if (s == "+") return Dec::plus;
    throw parse_error("line " + std::to_string(lineno) + ": bad decoration '" + s + "'");
}

long long parse_mult(const std::string& s, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        long long m = std::stoll(s, &pos);
        if (pos != s.size() || m < 1) throw std::invalid_argument("");
        return m;
    } catch (...) {
        throw parse_error("line " + std::to_string(lineno) + ": bad multiplicity '" + s + "'");
    }
}

struct RawLines {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    bool saw_header = false;
};

RawLines read_rows(std::istream& is) {
    RawLines out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
            trimmed.erase(0, 1);
        if (trimmed.empty()) continue;
        if (trimmed[0] == '#') {
            if (trimmed == kHeader) out.saw_header = true;
            continue;
        }
        out.rows.push_back({lineno, split_csv(trimmed)});
    }
    if (!out.saw_header) throw parse_error("missing header '" + std::string(kHeader) + "'");
    return out;
}

XReal parse_value(const std::string& s, std::size_t lineno) {
    try {
        return parse_xreal(s);
    } catch (const parse_error& e) {
        throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace

void write_diagram(std::ostream& os, const DecoratedDiagram& d) {
    os << kHeader << "\n";
    for (auto& [pt, mult] : d.points)
        os << to_string(pt.birth.value) << "," << dec_char(pt.birth.dec) << ","
           << to_string(pt.death.value) << "," << dec_char(pt.death.dec) << "," << mult << "\n";
}

void write_diagram(std::ostream& os, const UndecoratedDiagram& d) {
    os << kHeader << "\n";
    for (auto& [pt, mult] : d.points)
        os << to_string(pt.first) << "," << to_string(pt.second) << "," << mult << "\n";
}

DecoratedDiagram read_decorated_diagram(std::istream& is) {
    DecoratedDiagram d;
    for (auto& [lineno, f] : read_rows(is).rows) {
        if (f.size() != 5)
            throw parse_error("line " + std::to_string(lineno) + ": expected 5 columns, got " +
                              std::to_string(f.size()));
        DecoratedValue birth(parse_value(f[0], lineno), parse_dec(f[1], lineno));
        DecoratedValue death(parse_value(f[2], lineno), parse_dec(f[3], lineno));
        if (!(birth < death))
            throw parse_error("line " + std::to_string(lineno) + ": birth must precede death");
        d.points.add(DecoratedPoint(birth, death), parse_mult(f[4], lineno));
    }
    return d;
}

UndecoratedDiagram read_undecorated_diagram(std::istream& is) {
    UndecoratedDiagram d;
    for (auto& [lineno, f] : read_rows(is).rows) {
        if (f.size() != 3)
            throw parse_error("line " + std::to_string(lineno) + ": expected 3 columns, got " +
                              std::to_string(f.size()));
        XReal b = parse_value(f[0], lineno), t = parse_value(f[1], lineno);
        if (!(b < t))
            throw parse_error("line " + std::to_string(lineno) + ": birth must precede death");
        d.points.add({b, t}, parse_mult(f[2], lineno));
    }
    return d;
}

UndecoratedDiagram read_any_diagram(std::istream& is) {
    UndecoratedDiagram d;
    for (auto& [lineno, f] : read_rows(is).rows) {
        if (f.size() == 3) {
            XReal b = parse_value(f[0], lineno), t = parse_value(f[1], lineno);
            if (!(b < t))
                throw parse_error("line " + std::to_string(lineno) + ": birth must precede death");
            d.points.add({b, t}, parse_mult(f[2], lineno));
        } else if (f.size() == 5) {
            DecoratedValue birth(parse_value(f[0], lineno), parse_dec(f[1], lineno));
            DecoratedValue death(parse_value(f[2], lineno), parse_dec(f[3], lineno));
            if (!(birth < death))
                throw parse_error("line " + std::to_string(lineno) + ": birth must precede death");
            if (birth.value != death.value) d.points.add({birth.value, death.value},
                                                         parse_mult(f[4], lineno));
        } else {
            throw parse_error("line " + std::to_string(lineno) + ": expected 3 or 5 columns");
        }
    }
    return d;
}

namespace {
std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open " + path);
    return is;
}
}  // namespace

DecoratedDiagram read_decorated_diagram_file(const std::string& path) {
    auto is = open_in(path);
    return read_decorated_diagram(is);
}

UndecoratedDiagram read_any_diagram_file(const std::string& path) {
    auto is = open_in(path);
    return read_any_diagram(is);
}

void write_diagram_file(const std::string& path, const DecoratedDiagram& d) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_diagram(os, d);
}

void write_diagram_file(const std::string& path, const UndecoratedDiagram& d) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_diagram(os, d);
}

Barcode barcode_of_diagram(const DecoratedDiagram& d, FieldSpec field) {
    Barcode b(field);
    for (auto& [pt, mult] : d.points) b.intervals.add(pt, mult);
    return b;
}

}  // namespace persistra
