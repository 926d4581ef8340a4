#include "sparsify/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparsify/errors.hpp"

namespace sparsify::io {

namespace {

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Edge checked_edge(long long u, long long v, double w, long long n, int line) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("vertex index out of range", line);
    if (u == v) throw ParseError("self-loop", line);
    if (!std::isfinite(w) || w <= 0) throw ParseError("edge weight must be positive and finite", line);
    return {static_cast<int>(u), static_cast<int>(v), w};
}

}  // namespace

WeightedGraph parse_text(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    long long n = -1;
    std::vector<Edge> edges;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::string first;
        if (!(fields >> first)) continue;
        if (n < 0) {
            if (first != "n" || !(fields >> n) || n < 1) throw ParseError("expected header \"n <count>\"", line);
            std::string extra;
            if (fields >> extra) throw ParseError("trailing tokens after header", line);
            continue;
        }
        long long u = 0, v = 0;
        double w = 1.0;
        std::istringstream edge_fields(raw);
        if (!(edge_fields >> u >> v)) throw ParseError("expected \"u v [w]\"", line);
        if (!(edge_fields >> w)) {
            if (!edge_fields.eof()) throw ParseError("malformed weight", line);
            w = 1.0;
        }
        std::string extra;
        edge_fields.clear();
        if (edge_fields >> extra) throw ParseError("trailing tokens after edge", line);
        edges.push_back(checked_edge(u, v, w, n, line));
    }
    if (n < 0) throw ParseError("missing header \"n <count>\"", line);
    return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer() || !doc.contains("edges") ||
        !doc["edges"].is_array()) {
        throw ParseError("JSON graph needs integer \"n\" and array \"edges\"");
    }
    const long long n = doc["n"].get<long long>();
    if (n < 1) throw ParseError("\"n\" must be positive");
    std::vector<Edge> edges;
    int index = 0;
    for (const auto& item : doc["edges"]) {
        ++index;
        if (!item.is_array() || item.size() < 2 || item.size() > 3 || !item[0].is_number_integer() ||
            !item[1].is_number_integer() || (item.size() == 3 && !item[2].is_number())) {
            throw ParseError("edge " + std::to_string(index) + " must be [u, v] or [u, v, w]");
        }
        const double w = item.size() == 3 ? item[2].get<double>() : 1.0;
        try {
            edges.push_back(checked_edge(item[0].get<long long>(), item[1].get<long long>(), w, n, 0));
        } catch (const ParseError& e) {
            throw ParseError("edge " + std::to_string(index) + ": " + e.what());
        }
    }
    return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph parse_graph(const std::string& text) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{') return parse_json(text);
    return parse_text(text);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

WeightedGraph read_graph(const std::filesystem::path& path) {
    try {
        return parse_graph(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string to_text(const WeightedGraph& g) {
    std::string out = "n " + std::to_string(g.num_vertices()) + "\n";
    for (const auto& e : g.edges()) {
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_real(e.w) + "\n";
    }
    return out;
}

std::string to_json(const WeightedGraph& g) {
    nlohmann::ordered_json doc;
    doc["n"] = g.num_vertices();
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) doc["edges"].push_back({e.u, e.v, e.w});
    return doc.dump(2) + "\n";
}

void write_graph(const std::filesystem::path& path, const WeightedGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PreconditionError("cannot write " + path.string());
    out << (path.extension() == ".json" ? to_json(g) : to_text(g));
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex_digest(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

}  // namespace sparsify::io
