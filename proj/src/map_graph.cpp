#include "trajloc/map_graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace trajloc {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

MapGraph::MapGraph(std::vector<GeoNode> nodes,
                   std::vector<std::pair<NodeId, NodeId>> edge_pairs) {
    std::unordered_map<NodeId, GeoNode> by_id;
    for (const auto& n : nodes) {
        if (n.lat < -90.0 || n.lat > 90.0)
            throw DataError("node " + std::to_string(n.id) + ": latitude out of range");
        if (n.lon < -180.0 || n.lon > 180.0)
            throw DataError("node " + std::to_string(n.id) + ": longitude out of range");
        if (!by_id.emplace(n.id, n).second)
            throw DataError("duplicate node id " + std::to_string(n.id));
    }

    // Canonicalize, drop self-loops, deduplicate.
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (auto [a, b] : edge_pairs) {
        if (by_id.count(a) == 0)
            throw DataError("edge references missing node " + std::to_string(a));
        if (by_id.count(b) == 0)
            throw DataError("edge references missing node " + std::to_string(b));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        pairs.insert({a, b});
    }
    if (pairs.empty()) throw DataError("graph has no edges");

    // Largest connected component over the deduplicated edge set.
    std::unordered_map<NodeId, std::vector<NodeId>> adj;
    for (const auto& [a, b] : pairs) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::unordered_map<NodeId, int> comp;
    int n_comp = 0;
    for (const auto& [start, _] : adj) {
        if (comp.count(start)) continue;
        std::vector<NodeId> stack{start};
        comp[start] = n_comp;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : adj[u]) {
                if (!comp.count(v)) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
            }
        }
        ++n_comp;
    }
    std::vector<std::size_t> comp_size(n_comp, 0);
    for (const auto& [_, c] : comp) ++comp_size[c];
    int best = static_cast<int>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

    for (const auto& [a, b] : pairs) {
        if (comp[a] != best) continue;
        Edge e;
        e.id = static_cast<EdgeId>(edges_.size());  // pairs iterate in sorted order
        e.a = a;
        e.b = b;
        edges_.push_back(e);
    }

    std::set<NodeId> kept;
    for (const auto& e : edges_) {
        kept.insert(e.a);
        kept.insert(e.b);
    }
    for (NodeId id : kept) {
        node_index_[id] = nodes_.size();
        nodes_.push_back(by_id.at(id));
    }
    for (const auto& e : edges_) {
        adjacency_[e.a].emplace_back(e.b, e.id);
        adjacency_[e.b].emplace_back(e.a, e.id);
    }
    for (auto& [_, nbrs] : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    for (const auto& n : nodes_) {
        centroid_lat_ += n.lat;
        centroid_lon_ += n.lon;
    }
    centroid_lat_ /= static_cast<double>(nodes_.size());
    centroid_lon_ /= static_cast<double>(nodes_.size());
}

const GeoNode& MapGraph::node(NodeId id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end())
        throw DataError("unknown node id " + std::to_string(id));
    return nodes_[it->second];
}

const Edge& MapGraph::edge(EdgeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= edges_.size())
        throw DataError("unknown edge id " + std::to_string(id));
    return edges_[static_cast<std::size_t>(id)];
}

const std::vector<std::pair<NodeId, EdgeId>>& MapGraph::neighbors(NodeId id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end())
        throw DataError("unknown node id " + std::to_string(id));
    return it->second;
}

bool MapGraph::edges_adjacent(EdgeId a, EdgeId b) const {
    const Edge& ea = edge(a);
    const Edge& eb = edge(b);
    return ea.a == eb.a || ea.a == eb.b || ea.b == eb.a || ea.b == eb.b;
}

std::pair<double, double> MapGraph::project_local(NodeId id) const {
    const GeoNode& n = node(id);
    double x = kEarthRadiusMeters * std::cos(centroid_lat_ * kDegToRad) *
               (n.lon - centroid_lon_) * kDegToRad;
    double y = kEarthRadiusMeters * (n.lat - centroid_lat_) * kDegToRad;
    return {x, y};
}

double MapGraph::edge_length(EdgeId id) const {
    const Edge& e = edge(id);
    auto [xa, ya] = project_local(e.a);
    auto [xb, yb] = project_local(e.b);
    return std::hypot(xb - xa, yb - ya);
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    double dlat = (lat2 - lat1) * kDegToRad;
    double dlon = (lon2 - lon1) * kDegToRad;
    double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(lat1 * kDegToRad) * std::cos(lat2 * kDegToRad) *
                   std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(a));
}

std::string MapGraph::summary() const {
    std::map<std::size_t, int> degree_hist;
    for (const auto& n : nodes_) ++degree_hist[neighbors(n.id).size()];
    std::ostringstream out;
    out << "nodes\t" << nodes_.size() << "\n";
    out << "edges\t" << edges_.size() << "\n";
    for (const auto& [deg, count] : degree_hist)
        out << "degree_" << deg << "\t" << count << "\n";
    return out.str();
}

std::string MapGraph::to_geojson() const {
    std::ostringstream out;
    out.precision(9);
    out << "{\"type\":\"FeatureCollection\",\"features\":[";
    bool first = true;
    for (const auto& n : nodes_) {
        if (!first) out << ",";
        first = false;
        out << "{\"type\":\"Feature\",\"properties\":{\"node_id\":" << n.id
            << "},\"geometry\":{\"type\":\"Point\",\"coordinates\":[" << n.lon << ","
            << n.lat << "]}}";
    }
    for (const auto& e : edges_) {
        const GeoNode& a = node(e.a);
        const GeoNode& b = node(e.b);
        out << ",{\"type\":\"Feature\",\"properties\":{\"edge_id\":" << e.id
            << "},\"geometry\":{\"type\":\"LineString\",\"coordinates\":[[" << a.lon
            << "," << a.lat << "],[" << b.lon << "," << b.lat << "]]}}";
    }
    out << "]}";
    return out.str();
}

MapGraph parse_simple_graph(const std::string& text) {
    std::vector<GeoNode> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        if (kind == "node") {
            GeoNode n;
            if (!(ls >> n.id >> n.lat >> n.lon))
                throw DataError("line " + std::to_string(lineno) + ": bad node line");
            nodes.push_back(n);
        } else if (kind == "edge") {
            NodeId a, b;
            if (!(ls >> a >> b))
                throw DataError("line " + std::to_string(lineno) + ": bad edge line");
            edges.emplace_back(a, b);
        } else {
            throw DataError("line " + std::to_string(lineno) + ": unknown record '" +
                            kind + "'");
        }
    }
    return MapGraph(std::move(nodes), std::move(edges));
}

namespace {

// Minimal XML scanner for the OSM subset: start/end/empty tags with
// attributes. Tracks line numbers for error reporting. Comments, the
// declaration and character data are skipped.
class XmlScanner {
public:
    explicit XmlScanner(const std::string& text) : text_(text) {}

    struct Tag {
        std::string name;
        std::unordered_map<std::string, std::string> attrs;
        bool closing = false;      // </name>
        bool self_closed = false;  // <name ... />
    };

    // Returns false at end of input.
    bool next(Tag& tag) {
        for (;;) {
            std::size_t lt = find_advance('<');
            if (lt == std::string::npos) return false;
            if (starts_with("<!--")) {
                skip_until("-->");
                continue;
            }
            if (starts_with("<?") || starts_with("<!")) {
                skip_until(">");
                continue;
            }
            return parse_tag(tag);
        }
    }

    int line() const { return line_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError("XML parse error at line " + std::to_string(line_) + ": " + msg);
    }

private:
    bool starts_with(const char* s) const {
        return text_.compare(pos_, std::strlen(s), s) == 0;
    }

    std::size_t find_advance(char c) {
        while (pos_ < text_.size() && text_[pos_] != c) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        return pos_ < text_.size() ? pos_ : std::string::npos;
    }

    void skip_until(const char* end) {
        std::size_t p = text_.find(end, pos_);
        if (p == std::string::npos) fail("unterminated markup");
        for (std::size_t i = pos_; i < p; ++i)
            if (text_[i] == '\n') ++line_;
        pos_ = p + std::strlen(end);
    }

    bool parse_tag(Tag& tag) {
        tag = Tag{};
        ++pos_;  // consume '<'
        if (pos_ < text_.size() && text_[pos_] == '/') {
            tag.closing = true;
            ++pos_;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == ':'))
            ++pos_;
        tag.name = text_.substr(start, pos_ - start);
        if (tag.name.empty()) fail("empty tag name");

        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated tag <" + tag.name);
            if (text_[pos_] == '>') {
                ++pos_;
                return true;
            }
            if (text_[pos_] == '/') {
                ++pos_;
                if (pos_ >= text_.size() || text_[pos_] != '>') fail("expected '>' after '/'");
                ++pos_;
                tag.self_closed = true;
                return true;
            }
            // attribute name="value"
            std::size_t as = pos_;
            while (pos_ < text_.size() && text_[pos_] != '=' && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != '>' && text_[pos_] != '/')
                ++pos_;
            std::string name = text_.substr(as, pos_ - as);
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != '=') fail("attribute '" + name + "' missing '='");
            ++pos_;
            skip_space();
            if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
                fail("attribute '" + name + "' missing quoted value");
            char quote = text_[pos_++];
            std::size_t vs = pos_;
            while (pos_ < text_.size() && text_[pos_] != quote) {
                if (text_[pos_] == '\n') ++line_;
                ++pos_;
            }
            if (pos_ >= text_.size()) fail("unterminated attribute value");
            tag.attrs[name] = text_.substr(vs, pos_ - vs);
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

MapGraph parse_osm(const std::string& text) {
    XmlScanner scanner(text);
    std::vector<GeoNode> nodes;
    std::set<NodeId> node_ids;
    std::vector<std::pair<NodeId, NodeId>> edges;

    XmlScanner::Tag tag;
    bool in_way = false;
    std::vector<NodeId> way_refs;
    while (scanner.next(tag)) {
        if (tag.closing) {
            if (tag.name == "way") {
                for (std::size_t i = 0; i + 1 < way_refs.size(); ++i)
                    edges.emplace_back(way_refs[i], way_refs[i + 1]);
                way_refs.clear();
                in_way = false;
            }
            continue;
        }
        if (tag.name == "node") {
            GeoNode n;
            auto id = tag.attrs.find("id");
            auto lat = tag.attrs.find("lat");
            auto lon = tag.attrs.find("lon");
            if (id == tag.attrs.end() || lat == tag.attrs.end() || lon == tag.attrs.end())
                scanner.fail("node element missing id/lat/lon");
            try {
                n.id = std::stoll(id->second);
                n.lat = std::stod(lat->second);
                n.lon = std::stod(lon->second);
            } catch (const std::exception&) {
                scanner.fail("node element has non-numeric id/lat/lon");
            }
            nodes.push_back(n);
            node_ids.insert(n.id);
        } else if (tag.name == "way") {
            if (!tag.self_closed) in_way = true;
        } else if (tag.name == "nd" && in_way) {
            auto ref = tag.attrs.find("ref");
            if (ref == tag.attrs.end()) scanner.fail("nd element missing ref");
            NodeId r = 0;
            try {
                r = std::stoll(ref->second);
            } catch (const std::exception&) {
                scanner.fail("nd element has non-numeric ref");
            }
            way_refs.push_back(r);
        }
        // relations and all other elements are ignored
    }
    for (const auto& [a, b] : edges) {
        if (node_ids.count(a) == 0)
            throw DataError("way references missing node " + std::to_string(a));
        if (node_ids.count(b) == 0)
            throw DataError("way references missing node " + std::to_string(b));
    }
    if (nodes.empty() || edges.empty()) throw DataError("OSM extract yields an empty graph");
    return MapGraph(std::move(nodes), std::move(edges));
}

MapGraph load_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.find("<osm") != std::string::npos || text.find("<?xml") != std::string::npos)
        return parse_osm(text);
    return parse_simple_graph(text);
}

}  // namespace trajloc
