#include "dtn/worldmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "dtn/error.hpp"
#include "dtn/rng.hpp"

namespace dtn {

namespace {

// ---------------------------------------------------------------------------
// WKT parsing
// ---------------------------------------------------------------------------

struct WktCursor {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n' ||
                          peek() == ','))
            advance();
    }

    void skip_spaces() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
            advance();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

std::string read_keyword(WktCursor& c) {
    std::string kw;
    while (!c.eof() && ((c.peek() >= 'A' && c.peek() <= 'Z') || (c.peek() >= 'a' && c.peek() <= 'z')))
    {
        kw.push_back(static_cast<char>(std::toupper(c.peek())));
        c.advance();
    }
    return kw;
}

double read_number(WktCursor& c) {
    c.skip_spaces();
    const char* begin = c.text.data() + c.pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) c.fail("expected a number");
    if (!std::isfinite(v)) c.fail("non-finite coordinate");
    const size_t consumed = static_cast<size_t>(end - begin);
    for (size_t i = 0; i < consumed; ++i) c.advance();
    return v;
}

void expect(WktCursor& c, char ch) {
    c.skip_spaces();
    if (c.eof() || c.peek() != ch) c.fail(std::string("expected '") + ch + "'");
    c.advance();
}

// "(x y, x y, ...)"
std::vector<Point2D> read_point_list(WktCursor& c) {
    expect(c, '(');
    std::vector<Point2D> pts;
    while (true) {
        const double x = read_number(c);
        const double y = read_number(c);
        pts.push_back({x, y});
        c.skip_spaces();
        if (c.eof()) c.fail("unterminated coordinate list");
        if (c.peek() == ',') {
            c.advance();
            continue;
        }
        if (c.peek() == ')') {
            c.advance();
            return pts;
        }
        c.fail("expected ',' or ')'");
    }
}

struct WktGeometries {
    std::vector<std::vector<Point2D>> polylines;  // LINESTRING contents
    std::vector<Point2D> points;                  // POINT contents
};

WktGeometries parse_wkt(std::string_view text) {
    WktGeometries out;
    WktCursor c{text};
    while (true) {
        c.skip_ws();
        if (c.eof()) break;
        const int kw_line = c.line;
        const int kw_col = c.col;
        const std::string kw = read_keyword(c);
        if (kw == "LINESTRING") {
            out.polylines.push_back(read_point_list(c));
        } else if (kw == "MULTILINESTRING") {
            expect(c, '(');
            while (true) {
                out.polylines.push_back(read_point_list(c));
                c.skip_spaces();
                if (c.eof()) c.fail("unterminated MULTILINESTRING");
                if (c.peek() == ',') {
                    c.advance();
                    continue;
                }
                if (c.peek() == ')') {
                    c.advance();
                    break;
                }
                c.fail("expected ',' or ')'");
            }
        } else if (kw == "POINT") {
            auto pts = read_point_list(c);
            if (pts.size() != 1) throw ParseError("POINT must contain one coordinate", kw_line, kw_col);
            out.points.push_back(pts[0]);
        } else {
            throw ParseError("unknown geometry '" + kw + "'", kw_line, kw_col);
        }
    }
    if (out.polylines.empty() && out.points.empty())
        throw ParseError("empty geometry set", c.line, c.col);
    return out;
}

// ---------------------------------------------------------------------------
// Graph assembly
// ---------------------------------------------------------------------------

struct GraphBuilder {
    std::map<std::pair<double, double>, int> index;  // exact coordinate -> node
    std::vector<Point2D> nodes;
    std::vector<uint32_t> node_layers;
    std::map<std::pair<int, int>, uint32_t> edges;   // (a<b) -> layer mask

    int add_node(Point2D p, uint32_t layer) {
        auto [it, inserted] = index.try_emplace({p.x, p.y}, static_cast<int>(nodes.size()));
        if (inserted) {
            nodes.push_back(p);
            node_layers.push_back(layer);
        } else {
            node_layers[it->second] |= layer;
        }
        return it->second;
    }

    void add_edge(int a, int b, uint32_t layer) {
        if (a == b) return;  // degenerate zero-length segment
        if (a > b) std::swap(a, b);
        edges[{a, b}] |= layer;
    }

    void add_geometries(const WktGeometries& g, uint32_t layer) {
        for (const auto& line : g.polylines) {
            int prev = -1;
            for (const Point2D& p : line) {
                const int cur = add_node(p, layer);
                if (prev >= 0) add_edge(prev, cur, layer);
                prev = cur;
            }
        }
        for (const Point2D& p : g.points) add_node(p, layer);
    }

    // Keeps the largest connected component (ties: the one containing the
    // lowest node index), reindexes, normalizes to a (0,0) min corner.
    MapGraph finish(MapLoadReport* report) {
        const int n = static_cast<int>(nodes.size());
        std::vector<std::vector<int>> adj(n);
        for (const auto& [e, layer] : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        std::vector<int> comp(n, -1);
        int ncomp = 0;
        for (int s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            std::vector<int> stack{s};
            comp[s] = ncomp;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int w : adj[v])
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
            }
            ++ncomp;
        }
        std::vector<int> comp_size(ncomp, 0);
        for (int v = 0; v < n; ++v) ++comp_size[comp[v]];
        int keep = 0;
        for (int k = 1; k < ncomp; ++k)
            if (comp_size[k] > comp_size[keep]) keep = k;

        std::vector<int> remap(n, -1);
        MapGraph g;
        for (int v = 0; v < n; ++v) {
            if (comp[v] != keep) continue;
            remap[v] = static_cast<int>(g.nodes.size());
            g.nodes.push_back(nodes[v]);
            g.node_layers.push_back(node_layers[v]);
        }
        int kept_edges = 0;
        for (const auto& [e, layer] : edges) {
            if (remap[e.first] < 0) continue;
            g.edges.push_back({remap[e.first], remap[e.second], 0.0, layer});
            ++kept_edges;
        }
        if (report) {
            report->raw_nodes = n;
            report->raw_edges = static_cast<int>(edges.size());
            report->pruned_nodes = n - static_cast<int>(g.nodes.size());
            report->pruned_edges = static_cast<int>(edges.size()) - kept_edges;
        }

        double min_x = std::numeric_limits<double>::infinity();
        double min_y = min_x;
        double max_x = -min_x;
        double max_y = -min_x;
        for (const Point2D& p : g.nodes) {
            min_x = std::min(min_x, p.x);
            min_y = std::min(min_y, p.y);
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
        for (Point2D& p : g.nodes) {
            p.x -= min_x;
            p.y -= min_y;
        }
        g.world_width = max_x - min_x;
        g.world_height = max_y - min_y;
        g.offset_x = min_x;
        g.offset_y = min_y;
        for (MapEdge& e : g.edges) e.length = distance(g.nodes[e.a], g.nodes[e.b]);
        g.build_adjacency();
        return g;
    }
};

} // namespace

void MapGraph::build_adjacency() {
    adjacency.assign(nodes.size(), {});
    for (const MapEdge& e : edges) {
        adjacency[e.a].push_back({e.b, e.length});
        adjacency[e.b].push_back({e.a, e.length});
    }
    for (auto& nbrs : adjacency) std::sort(nbrs.begin(), nbrs.end());
}

MapGraph load_wkt(std::string_view text, MapLoadReport* report) {
    const std::string s(text);
    return merge_wkt_layers(std::span<const std::string>(&s, 1), report);
}

MapGraph merge_wkt_layers(std::span<const std::string> texts, MapLoadReport* report) {
    if (texts.empty()) throw ParseError("no map layers given", 1);
    GraphBuilder b;
    for (size_t k = 0; k < texts.size(); ++k)
        b.add_geometries(parse_wkt(texts[k]), 1u << std::min<size_t>(k, 31));
    if (report) report->files = static_cast<int>(texts.size());
    MapGraph g = b.finish(report);
    if (g.nodes.empty()) throw ParseError("empty geometry set", 1);
    return g;
}

MapGraph generate_grid(int rows, int cols, double spacing) {
    if (rows < 2 || cols < 2 || spacing <= 0.0)
        throw ConfigError("grid map needs rows >= 2, cols >= 2 and a positive spacing");
    MapGraph g;
    g.nodes.reserve(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g.nodes.push_back({c * spacing, r * spacing});
    g.node_layers.assign(g.nodes.size(), 1u);
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.edges.push_back({id(r, c), id(r, c + 1), spacing, 1u});
            if (r + 1 < rows) g.edges.push_back({id(r, c), id(r + 1, c), spacing, 1u});
        }
    }
    g.world_width = (cols - 1) * spacing;
    g.world_height = (rows - 1) * spacing;
    g.build_adjacency();
    return g;
}

MapGraph generate_sparse(int n, double width, double height, uint64_t seed) {
    if (n < 2 || width <= 0.0 || height <= 0.0)
        throw ConfigError("sparse map needs n >= 2 and a positive extent");
    Rng rng(mix_seed(seed));
    std::vector<Point2D> pts;
    std::set<std::pair<double, double>> seen;
    while (static_cast<int>(pts.size()) < n) {
        Point2D p{rng.uniform(0.0, width), rng.uniform(0.0, height)};
        if (seen.insert({p.x, p.y}).second) pts.push_back(p);
    }

    std::set<std::pair<int, int>> edge_set;
    auto link = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        edge_set.insert({a, b});
    };
    // 3 nearest neighbors per node
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> d;
        d.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) d.push_back({distance(pts[i], pts[j]), j});
        std::sort(d.begin(), d.end());
        for (int k = 0; k < std::min(3, static_cast<int>(d.size())); ++k) link(i, d[k].second);
    }
    // bridge remaining components through their closest node pairs
    std::vector<int> comp(n);
    auto recolor = [&]() {
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : edge_set) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::fill(comp.begin(), comp.end(), -1);
        int ncomp = 0;
        for (int s = 0; s < n; ++s) {
            if (comp[s] >= 0) continue;
            std::vector<int> stack{s};
            comp[s] = ncomp;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[v])
                    if (comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
            }
            ++ncomp;
        }
        return ncomp;
    };
    while (recolor() > 1) {
        double best = std::numeric_limits<double>::infinity();
        int ba = -1, bb = -1;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (comp[i] == comp[j]) continue;
                const double d = distance(pts[i], pts[j]);
                if (d < best) {
                    best = d;
                    ba = i;
                    bb = j;
                }
            }
        link(ba, bb);
    }

    MapGraph g;
    g.nodes = std::move(pts);
    g.node_layers.assign(g.nodes.size(), 1u);
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const Point2D& p : g.nodes) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    for (Point2D& p : g.nodes) {
        p.x -= min_x;
        p.y -= min_y;
    }
    g.world_width = max_x - min_x;
    g.world_height = max_y - min_y;
    g.offset_x = min_x;
    g.offset_y = min_y;
    for (auto [a, b] : edge_set)
        g.edges.push_back({a, b, distance(g.nodes[a], g.nodes[b]), 1u});
    g.build_adjacency();
    return g;
}

std::string to_wkt(const MapGraph& g) {
    std::string out;
    char buf[128];
    for (const MapEdge& e : g.edges) {
        std::snprintf(buf, sizeof buf, "LINESTRING (%.17g %.17g, %.17g %.17g)\n", g.nodes[e.a].x,
                      g.nodes[e.a].y, g.nodes[e.b].x, g.nodes[e.b].y);
        out += buf;
    }
    return out;
}

std::vector<int> shortest_path(const MapGraph& g, int from, int to, uint32_t layer_mask) {
    const int n = g.node_count();
    if (from < 0 || from >= n || to < 0 || to >= n)
        throw std::logic_error("shortest_path: node index out of range");
    if (from == to) return {from};

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[from] = 0.0;
    heap.push({0.0, from});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (v == to) break;
        for (auto [w, len] : g.adjacency[v]) {
            if (!(g.node_layers[w] & layer_mask)) continue;
            const double nd = d + len;
            if (nd < dist[w]) {
                dist[w] = nd;
                prev[w] = v;
                heap.push({nd, w});
            }
        }
    }
    if (prev[to] < 0) throw std::logic_error("shortest_path: nodes are disconnected");
    std::vector<int> path;
    for (int v = to; v != -1; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

double path_length(const MapGraph& g, std::span<const int> path) {
    double len = 0.0;
    for (size_t i = 1; i < path.size(); ++i)
        len += distance(g.nodes[path[i - 1]], g.nodes[path[i]]);
    return len;
}

int nearest_node(const MapGraph& g, Point2D p, uint32_t layer_mask) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.node_count(); ++v) {
        if (!(g.node_layers[v] & layer_mask)) continue;
        const double d = distance(p, g.nodes[v]);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    if (best < 0) throw std::logic_error("nearest_node: no node matches the layer mask");
    return best;
}

RouteDefinition load_route(const MapGraph& g, std::string_view wkt_text, RouteType type) {
    const WktGeometries geo = parse_wkt(wkt_text);
    if (geo.polylines.size() != 1)
        throw ParseError("route file must contain exactly one LINESTRING", 1);
    std::vector<Point2D> stops = geo.polylines[0];
    for (Point2D& p : stops) {
        p.x -= g.offset_x;
        p.y -= g.offset_y;
    }
    return make_route(g, stops, type);
}

RouteDefinition make_route(const MapGraph& g, std::span<const Point2D> stops, RouteType type) {
    if (stops.size() < 2) throw ConfigError("a route needs at least 2 stops");
    RouteDefinition r;
    r.type = type;
    for (const Point2D& p : stops) {
        const int v = nearest_node(g, p);
        r.max_snap_distance = std::max(r.max_snap_distance, distance(p, g.nodes[v]));
        r.stops.push_back(v);
    }
    return r;
}

} // namespace dtn
