#pragma once

// CSV signal files with header `node,value`.

#include <map>
#include <string>
#include <string_view>

#include "graphbayes/graph_core.hpp"

namespace graphbayes {

/// Node -> value pairs as read from a signal file. Nodes may be a subset.
using SparseSignal = std::map<NodeId, double>;

/// Parse `node,value` CSV. Throws GraphError with a line number on bad input,
/// duplicate nodes, or non-finite values.
SparseSignal parse_signal_csv(std::string_view text, bool one_based = false);
SparseSignal load_signal_csv(const std::string& path, bool one_based = false);

std::string format_signal_csv(const Vector& x);

/// Shortest round-trip decimal; `inf` / `-inf` / `nan` for non-finite values.
std::string format_number(double v);

std::string read_text_file(const std::string& path);

}  // namespace graphbayes
