#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "link_sentinel/graph.hpp"

namespace link_sentinel {

namespace {

[[noreturn]] void parse_failure(std::size_t line_no, const std::string& what) {
    throw GraphError("edge list line " + std::to_string(line_no) + ": " + what);
}

bool read_index(std::istringstream& fields, std::size_t& out) {
    long long value = 0;
    if (!(fields >> value) || value < 0) {
        return false;
    }
    out = static_cast<std::size_t>(value);
    return true;
}

}  // namespace

Digraph parse_edge_list(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::set<Edge> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (first == "n") {
            std::size_t count = 0;
            if (n) {
                parse_failure(line_no, "repeated `n` directive");
            }
            if (!read_index(fields, count)) {
                parse_failure(line_no, "`n` needs a non-negative vertex count");
            }
            n = count;
        } else {
            if (!n) {
                parse_failure(line_no, "edge before the `n` directive");
            }
            std::istringstream head_field(line);
            Edge e;
            if (!read_index(head_field, e.tail) || !read_index(head_field, e.head)) {
                parse_failure(line_no, "expected `<tail> <head>`");
            }
            if (e.tail < 1 || e.tail > *n || e.head < 1 || e.head > *n) {
                parse_failure(line_no, "vertex index outside 1.." + std::to_string(*n));
            }
            if (!seen.insert(e).second) {
                parse_failure(line_no, "duplicate edge");
            }
            edges.push_back(e);
            fields.swap(head_field);
        }
        if (std::string trailing; fields >> trailing) {
            parse_failure(line_no, "unexpected trailing token `" + trailing + "`");
        }
    }
    if (!n) {
        throw GraphError("edge list has no `n` directive");
    }
    return Digraph(*n, std::move(edges));
}

Digraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

Digraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open edge list `" + path + "`");
    }
    return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const Digraph& g) {
    out << "n " << g.vertex_count() << '\n';
    for (const Edge& e : g.edges()) {
        out << e.tail << ' ' << e.head << '\n';
    }
}

}  // namespace link_sentinel
