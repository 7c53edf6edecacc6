#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tw/graph.hpp"

namespace tw {

struct ParseError : std::runtime_error {
    ParseError(int line_no, const std::string& message);
    int line;
};

// PACE 2017 .gr format: 'c' comment lines anywhere, exactly one
// 'p tw <n> <m>' header before any edge, then '<u> <v>' lines with 1-based
// endpoints. Duplicate edges and self-loops are dropped rather than
// rejected; instances in the wild contain both.
Graph parse_gr(std::istream& in);
Graph parse_gr(const std::string& text);
Graph load_gr_file(const std::string& path);

// Header plus one line per edge. Node labels are written as 1..n in
// ascending label order, so graphs already labelled 1..n round-trip with an
// identical edge set.
std::string write_gr(const Graph& g);
void save_gr_file(const Graph& g, const std::string& path);

}  // namespace tw
