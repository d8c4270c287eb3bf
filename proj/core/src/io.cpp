#include "gfl/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "gfl/error.hpp"
#include "gfl/trails.hpp"

namespace gfl::io {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) tokens.push_back(s.substr(start, i - start));
    }
    return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    return ec == std::errc() && ptr == end;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

Graph read_matrix_market_adjacency(std::istream& in, MatrixMarketHeader* header_out) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) parse_error(1, "empty file, expected %%MatrixMarket banner");
    ++line_no;

    const auto banner = split(line);
    if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket") {
        parse_error(line_no, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
    }
    MatrixMarketHeader header{lower(banner[1]), lower(banner[2]), lower(banner[3]),
                              lower(banner[4])};
    if (header.object != "matrix") parse_error(line_no, "object must be 'matrix'");
    if (header.format != "coordinate") {
        throw Error(ErrorCode::NotCoordinateFormat,
                    "line 1: format '" + header.format + "' is not 'coordinate'");
    }
    if (header.symmetry != "symmetric" && header.symmetry != "general") {
        parse_error(line_no, "unsupported symmetry '" + header.symmetry + "'");
    }
    const bool pattern = header.field == "pattern";
    if (!pattern && header.field != "real" && header.field != "integer" &&
        header.field != "complex") {
        parse_error(line_no, "unsupported field '" + header.field + "'");
    }

    bool have_size = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '%') continue;
        const auto tok = split(body);
        if (tok.size() != 3 || !parse_number(tok[0], header.rows) ||
            !parse_number(tok[1], header.cols) || !parse_number(tok[2], header.nnz)) {
            parse_error(line_no, "expected 'rows cols nnz'");
        }
        have_size = true;
        break;
    }
    if (!have_size) parse_error(line_no, "missing size line");
    if (header.rows != header.cols) {
        parse_error(line_no, "adjacency matrix must be square, got " + std::to_string(header.rows) +
                                 "x" + std::to_string(header.cols));
    }

    std::vector<Edge> edges;
    edges.reserve(header.nnz);
    std::size_t seen = 0;
    while (seen < header.nnz && std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '%') continue;
        const auto tok = split(body);
        const std::size_t expected = pattern ? 2 : (header.field == "complex" ? 4 : 3);
        std::size_t i = 0;
        std::size_t j = 0;
        if (tok.size() != expected || !parse_number(tok[0], i) || !parse_number(tok[1], j)) {
            parse_error(line_no, "malformed entry");
        }
        if (i < 1 || j < 1 || i > header.rows || j > header.cols) {
            parse_error(line_no, "index out of range");
        }
        ++seen;
        bool nonzero = true;
        if (!pattern) {
            double re = 0.0;
            double im = 0.0;
            if (!parse_number(tok[2], re) || (expected == 4 && !parse_number(tok[3], im))) {
                parse_error(line_no, "malformed value");
            }
            nonzero = re != 0.0 || im != 0.0;
        }
        if (i == j || !nonzero) continue;
        const auto a = static_cast<VertexId>(std::min(i, j) - 1);
        const auto b = static_cast<VertexId>(std::max(i, j) - 1);
        edges.push_back({a, b});
    }
    if (seen < header.nnz) {
        parse_error(line_no, "expected " + std::to_string(header.nnz) + " entries, found " +
                                 std::to_string(seen));
    }

    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return x.u != y.u ? x.u < y.u : x.v < y.v;
    });
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (header_out) *header_out = header;
    return Graph(header.rows, std::move(edges));
}

Graph read_matrix_market_adjacency(const std::filesystem::path& path,
                                   MatrixMarketHeader* header) {
    auto in = open_in(path);
    return read_matrix_market_adjacency(in, header);
}

void write_matrix_market_adjacency(std::ostream& out, const Graph& g) {
    std::vector<Edge> lower_tri;
    lower_tri.reserve(g.n_edges());
    for (const auto& e : g.edges()) lower_tri.push_back({std::max(e.u, e.v), std::min(e.u, e.v)});
    std::sort(lower_tri.begin(), lower_tri.end(), [](const Edge& x, const Edge& y) {
        return x.v != y.v ? x.v < y.v : x.u < y.u;
    });
    out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    out << g.n_vertices() << ' ' << g.n_vertices() << ' ' << lower_tri.size() << '\n';
    for (const auto& e : lower_tri) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

void write_matrix_market_adjacency(const std::filesystem::path& path, const Graph& g) {
    auto out = open_out(path);
    write_matrix_market_adjacency(out, g);
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<Edge> edges;
    std::size_t declared = 0;
    bool have_declared = false;
    std::size_t max_id = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto tok = split(body.substr(1));
            if (tok.size() == 2 && tok[0] == "vertices") {
                if (!parse_number(tok[1], declared)) parse_error(line_no, "bad vertex count");
                have_declared = true;
            }
            continue;
        }
        const auto tok = split(body);
        VertexId u = 0;
        VertexId v = 0;
        if (tok.size() != 2 || !parse_number(tok[0], u) || !parse_number(tok[1], v)) {
            parse_error(line_no, "expected 'u v'");
        }
        edges.push_back({u, v});
        max_id = std::max<std::size_t>({max_id, u, v});
        any = true;
    }
    const std::size_t n = have_declared ? declared : (any ? max_id + 1 : 0);
    return Graph(n, std::move(edges));
}

Graph read_edge_list(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# vertices " << g.n_vertices() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    auto out = open_out(path);
    write_edge_list(out, g);
}

Graph read_graph(const std::filesystem::path& path) {
    if (path.extension() == ".mtx") return read_matrix_market_adjacency(path);
    return read_edge_list(path);
}

std::vector<double> read_vector_csv(std::istream& in) {
    std::vector<double> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        double x = 0.0;
        if (!parse_number(body, x)) parse_error(line_no, "not a number: '" + std::string(body) + "'");
        v.push_back(x);
    }
    return v;
}

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_vector_csv(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

void write_vector_csv(std::ostream& out, const std::vector<double>& v) {
    char buf[32];
    for (const double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf << '\n';
    }
}

void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& v) {
    auto out = open_out(path);
    write_vector_csv(out, v);
}

void write_trails(std::ostream& out, const TrailSet& ts) {
    const auto stats = trail_stats(ts);
    out << "# trails " << stats.count << '\n';
    out << "# edges " << ts.total_length() << '\n';
    out << "# length min " << stats.min_length << " median " << stats.median_length << " mean "
        << stats.mean_length << " max " << stats.max_length << '\n';
    for (const auto& t : ts.trails) {
        for (std::size_t i = 0; i < t.vertices.size(); ++i) {
            if (i) out << ' ';
            out << t.vertices[i];
        }
        out << '\n';
    }
}

void write_trails(const std::filesystem::path& path, const TrailSet& ts) {
    auto out = open_out(path);
    write_trails(out, ts);
}

TrailSet read_trails(std::istream& in, std::size_t n_vertices) {
    TrailSet ts;
    ts.n_vertices = n_vertices;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        Trail t;
        for (const auto tok : split(body)) {
            VertexId v = 0;
            if (!parse_number(tok, v)) parse_error(line_no, "bad vertex id '" + std::string(tok) + "'");
            if (v >= n_vertices) {
                throw Error(ErrorCode::VertexOutOfRange,
                            "line " + std::to_string(line_no) + ": vertex " + std::to_string(v) +
                                " >= " + std::to_string(n_vertices));
            }
            t.vertices.push_back(v);
        }
        ts.n_edges += t.length();
        ts.trails.push_back(std::move(t));
    }
    return ts;
}

TrailSet read_trails(const std::filesystem::path& path, std::size_t n_vertices) {
    auto in = open_in(path);
    return read_trails(in, n_vertices);
}

} // namespace gfl::io
