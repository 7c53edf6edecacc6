#include "tw/gr_io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace tw {

ParseError::ParseError(int line_no, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}

Graph parse_gr(std::istream& in) {
    Graph g;
    bool have_header = false;
    int n = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) {
            continue;  // blank line
        }
        if (first == "c") {
            continue;
        }
        if (first == "p") {
            if (have_header) {
                throw ParseError(line_no, "duplicate 'p' header");
            }
            std::string kind;
            long long m = 0;
            if (!(ss >> kind >> n >> m) || kind != "tw" || n < 0 || m < 0) {
                throw ParseError(line_no, "malformed header, expected 'p tw <n> <m>'");
            }
            std::string extra;
            if (ss >> extra) {
                throw ParseError(line_no, "trailing tokens after header");
            }
            have_header = true;
            g = Graph::with_nodes(n);
            continue;
        }
        if (!have_header) {
            throw ParseError(line_no, "edge line before 'p tw' header");
        }
        int u = 0, v = 0;
        std::istringstream edge(line);
        if (!(edge >> u >> v)) {
            throw ParseError(line_no, "malformed edge line");
        }
        std::string extra;
        if (edge >> extra) {
            throw ParseError(line_no, "trailing tokens after edge");
        }
        if (u < 1 || u > n) {
            throw ParseError(line_no, "endpoint " + std::to_string(u) + " out of range 1.." + std::to_string(n));
        }
        if (v < 1 || v > n) {
            throw ParseError(line_no, "endpoint " + std::to_string(v) + " out of range 1.." + std::to_string(n));
        }
        g.add_edge(u, v);  // self-loops and duplicates dropped
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'p tw' header");
    }
    return g;
}

Graph parse_gr(const std::string& text) {
    std::istringstream in(text);
    return parse_gr(in);
}

Graph load_gr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return parse_gr(in);
}

std::string write_gr(const Graph& g) {
    std::map<int, int> relabel;
    int next = 1;
    for (int id : g.nodes()) {
        relabel[id] = next++;
    }
    std::ostringstream out;
    out << "p tw " << g.node_count() << ' ' << g.edge_count() << '\n';
    for (int u : g.nodes()) {
        for (int v : g.neighbors(u)) {
            if (u < v) {
                out << relabel[u] << ' ' << relabel[v] << '\n';
            }
        }
    }
    return out.str();
}

void save_gr_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << write_gr(g);
}

}  // namespace tw
