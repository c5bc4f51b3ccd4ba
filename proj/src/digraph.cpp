#include "kmodal/digraph.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kmodal {

Digraph Digraph::build(std::vector<VertexId> vertices, std::vector<Edge> edges) {
    Digraph g;
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw std::invalid_argument("duplicate vertex id");
    g.verts_ = std::move(vertices);
    for (size_t i = 0; i < g.verts_.size(); ++i) g.index_[g.verts_[i]] = (int)i;
    g.inc_.resize(g.verts_.size());
    g.edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!g.has_vertex(e.tail) || !g.has_vertex(e.head))
            throw std::invalid_argument("edge endpoint is not a declared vertex");
        if (e.tail == e.head) throw std::invalid_argument("self-loop");
        EdgeId id = (EdgeId)g.edges_.size();
        g.edges_.push_back(e);
        g.inc_[(size_t)g.index_of(e.tail)].push_back(id);
        g.inc_[(size_t)g.index_of(e.head)].push_back(id);
    }
    return g;
}

bool Digraph::connected() const {
    if (verts_.empty()) return true;
    return components().size() == 1;
}

int Digraph::max_degree() const {
    int d = 0;
    for (const auto& l : inc_) d = std::max(d, (int)l.size());
    return d;
}

std::vector<std::vector<VertexId>> Digraph::components() const {
    std::vector<std::vector<VertexId>> out;
    std::vector<char> seen(verts_.size(), 0);
    for (size_t s = 0; s < verts_.size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> stack = {(int)s};
        std::vector<VertexId> comp;
        seen[s] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            comp.push_back(verts_[(size_t)i]);
            for (EdgeId e : inc_[(size_t)i]) {
                int j = index_.at(other_end(e, verts_[(size_t)i]));
                if (!seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

Digraph Digraph::induced(const std::vector<VertexId>& vs, std::vector<EdgeId>* edge_map) const {
    std::set<VertexId> keep(vs.begin(), vs.end());
    std::vector<Edge> es;
    if (edge_map) edge_map->clear();
    for (EdgeId e = 0; e < edge_count(); ++e) {
        if (keep.count(edges_[(size_t)e].tail) && keep.count(edges_[(size_t)e].head)) {
            es.push_back(edges_[(size_t)e]);
            if (edge_map) edge_map->push_back(e);
        }
    }
    return build(std::vector<VertexId>(keep.begin(), keep.end()), std::move(es));
}

RotationSystem RotationSystem::build(const Digraph& g, std::map<VertexId, std::vector<EdgeId>> rot) {
    std::vector<std::vector<EdgeId>> dense(g.vertices().size());
    for (auto& [v, order] : rot) {
        if (!g.has_vertex(v)) throw std::invalid_argument("rotation at unknown vertex");
        dense[(size_t)g.index_of(v)] = std::move(order);
    }
    return from_dense(g, std::move(dense));
}

RotationSystem RotationSystem::from_dense(const Digraph& g, std::vector<std::vector<EdgeId>> rot) {
    if (rot.size() != g.vertices().size()) throw std::invalid_argument("rotation size mismatch");
    for (size_t i = 0; i < rot.size(); ++i) {
        VertexId v = g.vertex_at((int)i);
        auto inc = g.incident(v);
        if (rot[i].size() != inc.size()) throw std::invalid_argument("rotation degree mismatch");
        std::vector<EdgeId> a(rot[i]), b(inc.begin(), inc.end());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::invalid_argument("rotation does not match incidences");
    }
    RotationSystem rs;
    rs.rot_ = std::move(rot);
    return rs;
}

RotationSystem RotationSystem::reflected() const {
    RotationSystem rs(*this);
    for (auto& l : rs.rot_) std::reverse(l.begin(), l.end());
    return rs;
}

MaxModalityFn::MaxModalityFn(int k, std::map<VertexId, int> bounds) : k_(k), bounds_(std::move(bounds)) {
    if (k < 0 || (k & 1)) throw std::invalid_argument("k must be a non-negative even integer");
    for (auto& [v, b] : bounds_) {
        (void)v;
        if (b < 0 || b > k || (b & 1)) throw std::invalid_argument("modality bound must be even in [0,k]");
    }
}

MaxModalityFn MaxModalityFn::with(VertexId v, int value) const {
    auto b = bounds_;
    b[v] = value;
    return MaxModalityFn(k_, std::move(b));
}

int modality_at(const Digraph& g, const RotationSystem& rs, VertexId v) {
    auto order = rs.at(g, v);
    if (order.size() < 2) return 0;
    int count = 0;
    for (size_t i = 0; i < order.size(); ++i) {
        EdgeId a = order[i];
        EdgeId b = order[(i + 1) % order.size()];
        if (g.orientation(a, v) != g.orientation(b, v)) ++count;
    }
    return count;
}

bool is_k_modal(const Digraph& g, const RotationSystem& rs, int k) {
    for (VertexId v : g.vertices())
        if (modality_at(g, rs, v) > k) return false;
    return true;
}

bool satisfies_m(const Digraph& g, const RotationSystem& rs, const MaxModalityFn& m) {
    for (VertexId v : g.vertices())
        if (modality_at(g, rs, v) > m.at(v)) return false;
    return true;
}

std::vector<std::vector<Dart>> trace_faces(const Digraph& g, const RotationSystem& rs) {
    // dart = 2*e + (forward ? 0 : 1); successor: reverse, then next in the
    // rotation at the dart's head
    int m = g.edge_count();
    std::vector<int> pos_at_tail(m), pos_at_head(m);
    for (VertexId v : g.vertices()) {
        auto order = rs.at(g, v);
        for (size_t i = 0; i < order.size(); ++i) {
            EdgeId e = order[i];
            if (g.edge(e).tail == v)
                pos_at_tail[(size_t)e] = (int)i;
            else
                pos_at_head[(size_t)e] = (int)i;
        }
    }
    std::vector<char> used(2 * (size_t)m, 0);
    std::vector<std::vector<Dart>> faces;
    for (int d0 = 0; d0 < 2 * m; ++d0) {
        if (used[(size_t)d0]) continue;
        std::vector<Dart> face;
        int d = d0;
        while (!used[(size_t)d]) {
            used[(size_t)d] = 1;
            EdgeId e = (EdgeId)(d / 2);
            bool fwd = (d % 2) == 0;
            face.push_back({e, fwd});
            VertexId head = fwd ? g.edge(e).head : g.edge(e).tail;
            auto order = rs.at(g, head);
            int p = fwd ? pos_at_head[(size_t)e] : pos_at_tail[(size_t)e];
            EdgeId next = order[((size_t)p + 1) % order.size()];
            d = 2 * next + (g.edge(next).tail == head ? 0 : 1);
        }
        faces.push_back(std::move(face));
    }
    return faces;
}

bool is_planar_rotation(const Digraph& g, const RotationSystem& rs) {
    auto faces = trace_faces(g, rs);
    // distribute faces to components via any dart's edge
    auto comps = g.components();
    std::unordered_map<VertexId, int> comp_of;
    for (size_t c = 0; c < comps.size(); ++c)
        for (VertexId v : comps[c]) comp_of[v] = (int)c;
    std::vector<long long> nf(comps.size(), 0), ne(comps.size(), 0), nv(comps.size(), 0);
    for (size_t c = 0; c < comps.size(); ++c) nv[c] = (long long)comps[c].size();
    for (EdgeId e = 0; e < g.edge_count(); ++e) ne[(size_t)comp_of[g.edge(e).tail]]++;
    for (auto& f : faces) nf[(size_t)comp_of[g.edge(f.front().e).tail]]++;
    for (size_t c = 0; c < comps.size(); ++c) {
        if (ne[c] == 0) continue;  // isolated vertex: no faces traced
        if (nv[c] - ne[c] + nf[c] != 2) return false;
    }
    return true;
}

// ---- text formats ----

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

long long parse_int(std::string_view tok, int line) {
    long long value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw parse_error(line, "expected integer, got '" + std::string(tok) + "'");
    return value;
}

}  // namespace

Digraph parse_digraph(std::string_view text) {
    std::vector<VertexId> vs;
    std::set<VertexId> declared;
    std::vector<Edge> es;
    int line = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view l = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line;
        if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
        auto toks = split_ws(l);
        if (toks.empty()) continue;
        if (toks[0] == "v") {
            if (toks.size() != 2) throw parse_error(line, "expected 'v <id>'");
            VertexId v = parse_int(toks[1], line);
            if (!declared.insert(v).second) throw parse_error(line, "duplicate vertex id");
            vs.push_back(v);
        } else if (toks[0] == "e") {
            if (toks.size() != 3) throw parse_error(line, "expected 'e <tail> <head>'");
            VertexId t = parse_int(toks[1], line);
            VertexId h = parse_int(toks[2], line);
            if (t == h) throw parse_error(line, "self-loop");
            if (!declared.count(t) || !declared.count(h))
                throw parse_error(line, "edge endpoint is not a declared vertex");
            es.push_back({t, h});
        } else {
            throw parse_error(line, "unknown directive '" + std::string(toks[0]) + "'");
        }
    }
    return Digraph::build(std::move(vs), std::move(es));
}

std::string serialize_digraph(const Digraph& g) {
    std::ostringstream out;
    for (VertexId v : g.vertices()) out << "v " << v << "\n";
    for (const Edge& e : g.edges()) out << "e " << e.tail << " " << e.head << "\n";
    return out.str();
}

std::string to_dot(const Digraph& g, const RotationSystem* rs) {
    std::ostringstream out;
    out << "digraph g {\n";
    for (VertexId v : g.vertices()) {
        out << "  \"" << v << "\";";
        if (rs) {
            out << "  // port order:";
            for (EdgeId e : rs->at(g, v)) out << " " << e;
        }
        out << "\n";
    }
    for (const Edge& e : g.edges()) out << "  \"" << e.tail << "\" -> \"" << e.head << "\";\n";
    out << "}\n";
    return out.str();
}

std::string rotation_to_json(const Digraph& g, const RotationSystem& rs) {
    nlohmann::json j = nlohmann::json::object();
    for (VertexId v : g.vertices()) {
        auto order = rs.at(g, v);
        j[std::to_string(v)] = std::vector<EdgeId>(order.begin(), order.end());
    }
    return j.dump();
}

RotationSystem rotation_from_json(const Digraph& g, std::string_view json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    std::map<VertexId, std::vector<EdgeId>> rot;
    for (auto it = j.begin(); it != j.end(); ++it)
        rot[std::stoll(it.key())] = it.value().get<std::vector<EdgeId>>();
    return RotationSystem::build(g, std::move(rot));
}

MaxModalityFn parse_max_modality(std::string_view text, int k, const Digraph& g) {
    std::map<VertexId, int> bounds;
    int line = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view l = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line;
        if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
        auto toks = split_ws(l);
        if (toks.empty()) continue;
        if (toks.size() != 2) throw parse_error(line, "expected '<vertex> <bound>'");
        VertexId v = parse_int(toks[0], line);
        if (!g.has_vertex(v)) throw parse_error(line, "unknown vertex in modality bound");
        bounds[v] = (int)parse_int(toks[1], line);
    }
    return MaxModalityFn(k, std::move(bounds));
}

}  // namespace kmodal
