#include "graphbayes/signal_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

namespace graphbayes {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SparseSignal parse_signal_csv(std::string_view text, bool one_based) {
    SparseSignal out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        auto bad = [&](const std::string& why) {
            return GraphError("signal line " + std::to_string(line_no) + ": " + why);
        };
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) throw bad("expected `node,value`");
        const std::string node_tok(trim(line.substr(0, comma)));
        const std::string value_tok(trim(line.substr(comma + 1)));

        if (!header_seen) {
            header_seen = true;
            if (node_tok == "node" && value_tok == "value") continue;
            throw bad("missing `node,value` header");
        }

        char* end = nullptr;
        errno = 0;
        const long long node = std::strtoll(node_tok.c_str(), &end, 10);
        if (node_tok.empty() || *end != '\0' || errno != 0) throw bad("bad node id");
        const double value = std::strtod(value_tok.c_str(), &end);
        if (value_tok.empty() || *end != '\0') throw bad("bad value");
        if (!std::isfinite(value)) throw bad("non-finite value");

        const long long id = node - (one_based ? 1 : 0);
        if (id < 0 || id > std::numeric_limits<int>::max()) throw bad("node id out of range");
        if (!out.emplace(static_cast<NodeId>(id), value).second) throw bad("duplicate node");
    }
    if (!header_seen) throw GraphError("signal file is empty");
    return out;
}

SparseSignal load_signal_csv(const std::string& path, bool one_based) {
    return parse_signal_csv(read_text_file(path), one_based);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

std::string format_signal_csv(const Vector& x) {
    std::string out = "node,value\n";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out += fmt::format("{},{}\n", i, format_number(x[i]));
    }
    return out;
}

}  // namespace graphbayes
