#pragma once

#include <iosfwd>

#include "persistra/diagram.hpp"

namespace persistra {

// Diagram file format, one record per line after the header:
//   #persistra-diagram v1
//   birth_value,birth_dec,death_value,death_dec,multiplicity
// Values are rationals "n/d" or "-inf"/"+inf"; dec is "-" or "+". The
// undecorated flavour drops the two dec columns. '#' lines are comments.

void write_diagram(std::ostream& os, const DecoratedDiagram& d);
void write_diagram(std::ostream& os, const UndecoratedDiagram& d);

DecoratedDiagram read_decorated_diagram(std::istream& is);
UndecoratedDiagram read_undecorated_diagram(std::istream& is);

// Reads either flavour, undecorating when necessary.
UndecoratedDiagram read_any_diagram(std::istream& is);

DecoratedDiagram read_decorated_diagram_file(const std::string& path);
UndecoratedDiagram read_any_diagram_file(const std::string& path);
void write_diagram_file(const std::string& path, const DecoratedDiagram& d);
void write_diagram_file(const std::string& path, const UndecoratedDiagram& d);

// Barcodes serialize as decorated diagrams.
Barcode barcode_of_diagram(const DecoratedDiagram& d, FieldSpec field = FieldSpec());

}  // namespace persistra
