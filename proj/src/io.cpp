#include "ccx/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "ccx/lifting.hpp"

#ifndef CCX_DEFAULT_FIXTURE_DIR
#define CCX_DEFAULT_FIXTURE_DIR "."
#endif

namespace ccx {

namespace {

using Vec3 = Eigen::Vector3d;

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    return in;
}

// Next line that is not blank and not a comment; the text after '#' is dropped.
bool next_line(std::istream& is, std::string& line, int& lineno) {
    while (std::getline(is, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + what);
}

template <typename T>
std::vector<T> numbers(const std::string& line, int lineno) {
    std::istringstream ss(line);
    std::vector<T> out;
    T x;
    while (ss >> x) out.push_back(x);
    if (!ss.eof()) parse_fail(lineno, "expected numbers in '" + line + "'");
    return out;
}

std::vector<long long> integers(const std::string& line, int lineno) {
    std::istringstream ss(line);
    std::vector<long long> out;
    std::string tok;
    while (ss >> tok) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            parse_fail(lineno, "'" + tok + "' is not an integer");
        }
        if (used != tok.size()) parse_fail(lineno, "'" + tok + "' is not an integer");
        out.push_back(v);
    }
    return out;
}

Vertex as_vertex(long long v, int lineno) {
    if (v < 0 || v > static_cast<long long>(UINT32_MAX) - 1) parse_fail(lineno, "vertex index out of range");
    return static_cast<Vertex>(v);
}

Vec3 pos(const Mesh& m, Vertex v) { return {m.positions[v][0], m.positions[v][1], m.positions[v][2]}; }

double angle_at(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 u = a - p;
    const Vec3 w = b - p;
    return std::atan2(u.cross(w).norm(), u.dot(w));
}

}  // namespace

Graph parse_edge_list(std::istream& is) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::size_t n = 0;
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::istringstream hdr(raw);
        std::string hash, word;
        std::size_t declared = 0;
        if (hdr >> hash >> word >> declared && hash == "#" && word == "vertices") n = std::max(n, declared);
        std::string line = raw;
        if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto v = integers(line, lineno);
        if (v.size() != 2) parse_fail(lineno, "expected 'u v'");
        const Vertex a = as_vertex(v[0], lineno);
        const Vertex b = as_vertex(v[1], lineno);
        if (a == b) throw Error(ErrorCode::SelfLoop, "line " + std::to_string(lineno) + ": self-loop at " + std::to_string(a));
        edges.emplace_back(a, b);
        n = std::max<std::size_t>(n, std::max(a, b) + 1);
    }
    return make_graph(n, std::move(edges));
}

Graph load_edge_list(const std::string& path) {
    auto in = open(path);
    return parse_edge_list(in);
}

void write_edge_list(std::ostream& os, const Graph& g) {
    os << "# vertices " << g.vertex_count << '\n';
    for (auto [u, v] : g.edges) os << u << ' ' << v << '\n';
}

CombinatorialComplex parse_cc(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!next_line(is, line, lineno)) parse_fail(lineno, "missing 'cc N' header");
    std::istringstream hdr(line);
    std::string tag;
    long long n = -1;
    if (!(hdr >> tag >> n) || tag != "cc" || n < 0) parse_fail(lineno, "expected 'cc N'");
    std::vector<RankedCell> cells;
    while (next_line(is, line, lineno)) {
        const auto v = integers(line, lineno);
        if (v.size() < 2) parse_fail(lineno, "expected 'rank v1 v2 ...'");
        std::vector<Vertex> vs;
        for (std::size_t i = 1; i < v.size(); ++i) vs.push_back(as_vertex(v[i], lineno));
        if (v[0] < INT32_MIN || v[0] > INT32_MAX) parse_fail(lineno, "rank out of range");
        cells.push_back({CellSet(std::move(vs)), static_cast<int>(v[0])});
    }
    return build_cc(static_cast<std::size_t>(n), cells);
}

CombinatorialComplex load_cc(const std::string& path) {
    auto in = open(path);
    return parse_cc(in);
}

void write_cc(std::ostream& os, const CombinatorialComplex& cc) {
    os << "cc " << cc.vertex_count() << '\n';
    for (const auto& rc : cc.ranked_cells()) {
        os << rc.rank;
        for (auto v : rc.cell.vertices()) os << ' ' << v;
        os << '\n';
    }
}

Mesh parse_off(std::istream& is) {
    std::string line;
    int lineno = 0;
    if (!next_line(is, line, lineno)) parse_fail(lineno, "empty OFF file");
    std::istringstream first(line);
    std::string tag;
    first >> tag;
    if (tag != "OFF") parse_fail(lineno, "missing OFF header");
    std::string rest;
    std::getline(first, rest);
    if (rest.find_first_not_of(" \t\r") == std::string::npos && !next_line(is, rest, lineno))
        parse_fail(lineno, "missing counts line");
    const auto counts = integers(rest, lineno);
    if (counts.size() < 2 || counts[0] < 0 || counts[1] < 0) parse_fail(lineno, "bad counts line");
    Mesh m;
    for (long long i = 0; i < counts[0]; ++i) {
        if (!next_line(is, line, lineno)) parse_fail(lineno, "too few vertices");
        const auto p = numbers<double>(line, lineno);
        if (p.size() != 3 || !std::all_of(p.begin(), p.end(), [](double x) { return std::isfinite(x); }))
            parse_fail(lineno, "vertex needs 3 finite coordinates");
        m.positions.push_back({p[0], p[1], p[2]});
    }
    for (long long i = 0; i < counts[1]; ++i) {
        if (!next_line(is, line, lineno)) parse_fail(lineno, "too few faces");
        const auto f = integers(line, lineno);
        if (f.empty() || f[0] != static_cast<long long>(f.size()) - 1) parse_fail(lineno, "face count mismatch");
        if (f[0] != 3)
            throw Error(ErrorCode::NonTriangleFace, "line " + std::to_string(lineno) + ": face with " +
                                                        std::to_string(f[0]) + " vertices");
        std::array<Vertex, 3> face{};
        for (int k = 0; k < 3; ++k) {
            if (f[k + 1] < 0 || f[k + 1] >= counts[0])
                throw Error(ErrorCode::VertexOutOfRange, "line " + std::to_string(lineno) + ": bad vertex index");
            face[k] = static_cast<Vertex>(f[k + 1]);
        }
        const double area = 0.5 * (pos(m, face[1]) - pos(m, face[0])).cross(pos(m, face[2]) - pos(m, face[0])).norm();
        if (!(area > 0.0))
            throw Error(ErrorCode::DegenerateFace, "line " + std::to_string(lineno) + ": zero-area face");
        m.faces.push_back(face);
    }
    return m;
}

Mesh load_off(const std::string& path) {
    auto in = open(path);
    return parse_off(in);
}

void write_off(std::ostream& os, const Mesh& m) {
    os << "OFF\n" << m.positions.size() << ' ' << m.faces.size() << " 0\n" << std::setprecision(17);
    for (const auto& p : m.positions) os << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    for (const auto& f : m.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

CombinatorialComplex mesh_to_cc(const Mesh& m) {
    std::vector<RankedCell> cells;
    std::set<CellSet> edges;
    for (const auto& f : m.faces) {
        for (int k = 0; k < 3; ++k) edges.insert(CellSet{f[k], f[(k + 1) % 3]});
        cells.push_back({CellSet{f[0], f[1], f[2]}, 2});
    }
    for (const auto& e : edges) cells.push_back({e, 1});
    return build_cc(m.positions.size(), cells);
}

MeshFeatures mesh_features(const Mesh& m) {
    const CombinatorialComplex cc = mesh_to_cc(m);
    const auto nv = cc.rank_size(0);
    const auto& edges = cc.rank_size(1) ? cc.cells(1) : std::vector<CellSet>{};
    const auto& faces = cc.rank_size(2) ? cc.cells(2) : std::vector<CellSet>{};

    // Winding-aware normal per canonical face.
    std::vector<Vec3> normal(faces.size(), Vec3::Zero());
    std::vector<double> area(faces.size(), 0.0);
    for (const auto& f : m.faces) {
        const std::size_t idx = cc.find(CellSet{f[0], f[1], f[2]})->index;
        const Vec3 c = (pos(m, f[1]) - pos(m, f[0])).cross(pos(m, f[2]) - pos(m, f[0]));
        area[idx] = 0.5 * c.norm();
        normal[idx] = c.normalized();
    }

    MeshFeatures out;
    out.vertex = Cochain{0, Matrix::Zero(static_cast<Eigen::Index>(nv), 6)};
    std::vector<Vec3> vnormal(nv, Vec3::Zero());
    for (std::size_t i = 0; i < faces.size(); ++i)
        for (auto v : faces[i].vertices()) vnormal[v] += area[i] * normal[i];
    for (std::size_t v = 0; v < nv; ++v) {
        out.vertex.data.block<1, 3>(v, 0) = pos(m, static_cast<Vertex>(v)).transpose();
        if (vnormal[v].norm() > 0) out.vertex.data.block<1, 3>(v, 3) = vnormal[v].normalized().transpose();
    }

    out.face = Cochain{2, Matrix::Zero(static_cast<Eigen::Index>(faces.size()), 7)};
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto& v = faces[i].vertices();
        out.face.data(i, 0) = area[i];
        out.face.data.block<1, 3>(i, 1) = normal[i].transpose();
        for (int k = 0; k < 3; ++k)
            out.face.data(i, 4 + k) = angle_at(pos(m, v[k]), pos(m, v[(k + 1) % 3]), pos(m, v[(k + 2) % 3]));
    }

    std::map<CellSet, std::vector<std::size_t>> faces_of;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto& v = faces[i].vertices();
        for (int k = 0; k < 3; ++k) faces_of[CellSet{v[k], v[(k + 1) % 3]}].push_back(i);
    }
    out.edge = Cochain{1, Matrix::Zero(static_cast<Eigen::Index>(edges.size()), 6)};
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Vertex a = edges[i].front();
        const Vertex b = edges[i].back();
        const auto& adj = faces_of[edges[i]];
        if (adj.size() > 2)
            throw Error(ErrorCode::NonManifoldEdge, "edge " + edges[i].to_string() + " borders " +
                                                        std::to_string(adj.size()) + " faces");
        const double len = (pos(m, a) - pos(m, b)).norm();
        auto row = out.edge.data.row(i);
        row(0) = len;
        row(1) = std::numbers::pi;
        if (adj.size() == 2)
            row(1) = std::numbers::pi - std::acos(std::clamp(normal[adj[0]].dot(normal[adj[1]]), -1.0, 1.0));
        for (std::size_t s = 0; s < adj.size(); ++s) {
            Vertex c = 0;
            for (auto v : faces[adj[s]].vertices())
                if (v != a && v != b) c = v;
            row(2 + s) = angle_at(pos(m, c), pos(m, a), pos(m, b));
            const double others = 0.5 * ((pos(m, c) - pos(m, a)).norm() + (pos(m, c) - pos(m, b)).norm());
            row(4 + s) = len / others;
        }
    }
    return out;
}

Graph knn_graph(const Matrix& points, int k) {
    const auto n = points.rows();
    if (k < 1 || k >= n) throw Error(ErrorCode::BadK, "k must satisfy 1 <= k < n");
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::pair<double, Eigen::Index>> d(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) d[c++] = {(points.row(i) - points.row(j)).squaredNorm(), j};
        std::partial_sort(d.begin(), d.begin() + k, d.end());
        for (int t = 0; t < k; ++t) edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(d[t].second));
    }
    return make_graph(static_cast<std::size_t>(n), std::move(edges));
}

std::string fixture_dir() {
    if (const char* env = std::getenv("CCX_FIXTURE_DIR"); env && *env) return env;
    return CCX_DEFAULT_FIXTURE_DIR;
}

std::string fixture_path(const std::string& name) { return fixture_dir() + "/" + name; }

std::string read_file(const std::string& path) {
    auto in = open(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ccx
