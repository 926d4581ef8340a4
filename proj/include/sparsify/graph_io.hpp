#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sparsify/graph.hpp"

namespace sparsify::io {

// Text format: a header "n <count>" followed by one "u v [w]" line per edge
// (weight defaults to 1). Blank lines and '#' comments are ignored.
// JSON format: {"n": <count>, "edges": [[u, v, w], ...]}.

WeightedGraph parse_text(const std::string& text);
WeightedGraph parse_json(const std::string& text);

/// Picks the JSON parser when the first non-blank character is '{'.
WeightedGraph parse_graph(const std::string& text);
WeightedGraph read_graph(const std::filesystem::path& path);

std::string to_text(const WeightedGraph& g);
std::string to_json(const WeightedGraph& g);

/// JSON when the extension is ".json", text otherwise.
void write_graph(const std::filesystem::path& path, const WeightedGraph& g);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex_digest(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace sparsify::io
