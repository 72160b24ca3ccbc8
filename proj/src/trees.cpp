#include "mop/trees.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

namespace mop {

namespace {

std::string vtx(VertexId v) { return std::to_string(v); }

}  // namespace

StableTree StableTree::validate(std::vector<VertexId> vertices,
                                std::vector<std::pair<VertexId, VertexId>> edge_pairs,
                                std::vector<std::pair<TailLabel, VertexId>> tails) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.empty()) fail(Err::Disconnected, "empty vertex set");

  auto known = [&](VertexId v) {
    return std::binary_search(vertices.begin(), vertices.end(), v);
  };

  std::vector<Edge> edges;
  edges.reserve(edge_pairs.size());
  for (auto [a, b] : edge_pairs) {
    if (!known(a)) fail(Err::UnknownVertex, "edge endpoint " + vtx(a));
    if (!known(b)) fail(Err::UnknownVertex, "edge endpoint " + vtx(b));
    edges.emplace_back(a, b);  // rejects self-loops
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] == edges[i - 1])
      fail(Err::Cyclic, "parallel edge {" + vtx(edges[i].u) + "," + vtx(edges[i].v) + "}");

  std::sort(tails.begin(), tails.end());
  for (auto& [label, v] : tails) {
    if (label == 0) fail(Err::InvalidLabel, "tail label 0 (labels are positive)");
    if (!known(v)) fail(Err::UnknownVertex, "tail " + std::to_string(label) + " at vertex " + vtx(v));
  }
  for (std::size_t i = 1; i < tails.size(); ++i)
    if (tails[i].first == tails[i - 1].first)
      fail(Err::DuplicateTailLabel, "label " + std::to_string(tails[i].first));

  // Connected plus |E| == |V| - 1 pins the graph as a tree.
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<VertexId> stack{vertices.front()};
  std::set<VertexId> seen{vertices.front()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  if (seen.size() != vertices.size()) {
    for (VertexId v : vertices)
      if (!seen.count(v))
        fail(Err::Disconnected, "vertex " + vtx(v) + " unreachable from vertex " + vtx(vertices.front()));
  }
  if (edges.size() != vertices.size() - 1)
    fail(Err::Cyclic, std::to_string(edges.size()) + " edges on " +
                          std::to_string(vertices.size()) + " vertices");

  std::unordered_map<VertexId, std::size_t> valence;
  for (const Edge& e : edges) {
    ++valence[e.u];
    ++valence[e.v];
  }
  for (auto& [label, v] : tails) ++valence[v];
  for (VertexId v : vertices)
    if (valence[v] < 3)
      fail(Err::Unstable, "vertex " + vtx(v) + " has valence " + std::to_string(valence[v]));

  StableTree t;
  t.vertices_ = std::move(vertices);
  t.edges_ = std::move(edges);
  t.tails_ = std::move(tails);
  return t;
}

StableTree StableTree::corolla(const std::vector<TailLabel>& labels) {
  std::vector<std::pair<TailLabel, VertexId>> tails;
  tails.reserve(labels.size());
  for (TailLabel l : labels) tails.emplace_back(l, 0);
  return validate({0}, {}, std::move(tails));
}

bool StableTree::has_vertex(VertexId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool StableTree::has_edge(const Edge& e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool StableTree::has_tail(TailLabel label) const {
  auto it = std::lower_bound(tails_.begin(), tails_.end(), label,
                             [](const auto& p, TailLabel l) { return p.first < l; });
  return it != tails_.end() && it->first == label;
}

VertexId StableTree::tail_vertex(TailLabel label) const {
  auto it = std::lower_bound(tails_.begin(), tails_.end(), label,
                             [](const auto& p, TailLabel l) { return p.first < l; });
  if (it == tails_.end() || it->first != label)
    fail(Err::MissingTail, "tail " + std::to_string(label));
  return it->second;
}

std::vector<TailLabel> StableTree::tail_labels() const {
  std::vector<TailLabel> out;
  out.reserve(tails_.size());
  for (auto& [l, v] : tails_) out.push_back(l);
  return out;
}

std::vector<TailLabel> StableTree::tails_at(VertexId v) const {
  std::vector<TailLabel> out;
  for (auto& [l, w] : tails_)
    if (w == v) out.push_back(l);
  return out;
}

std::vector<VertexId> StableTree::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (const Edge& e : edges_) {
    if (e.u == v) out.push_back(e.v);
    else if (e.v == v) out.push_back(e.u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t StableTree::edge_degree(VertexId v) const {
  std::size_t n = 0;
  for (const Edge& e : edges_)
    if (e.u == v || e.v == v) ++n;
  return n;
}

std::size_t StableTree::tail_count_at(VertexId v) const {
  std::size_t n = 0;
  for (auto& [l, w] : tails_)
    if (w == v) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Canonical code

namespace {

// Rooted encoding of the subtree at v, entered from `parent`. Sibling subtrees
// always contain disjoint nonempty tail sets (stability forces a tail into
// every pendant subtree), so sorted child codes are pairwise distinct and the
// encoding is strictly canonical.
std::string encode_from(const StableTree& t, VertexId v, VertexId parent, bool has_parent) {
  std::vector<std::string> kids;
  for (VertexId w : t.neighbors(v)) {
    if (has_parent && w == parent) continue;
    kids.push_back(encode_from(t, w, v, true));
  }
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  bool first = true;
  for (TailLabel l : t.tails_at(v)) {
    if (!first) out += ',';
    out += std::to_string(l);
    first = false;
  }
  out += ';';
  for (const std::string& k : kids) out += k;
  out += ')';
  return out;
}

struct CodeNode {
  std::vector<TailLabel> labels;
  std::vector<CodeNode> children;
};

CodeNode parse_code(const std::string& s, std::size_t& pos) {
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c)
      fail(Err::ParseError, std::string("expected '") + c + "' at offset " + std::to_string(pos));
    ++pos;
  };
  expect('(');
  CodeNode node;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    std::uint64_t val = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      val = val * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      if (val > 0xffffffffULL) fail(Err::ParseError, "label overflow");
      ++pos;
    }
    node.labels.push_back(static_cast<TailLabel>(val));
    if (pos < s.size() && s[pos] == ',') {
      ++pos;
      if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        fail(Err::ParseError, "expected label after ',' at offset " + std::to_string(pos));
    }
  }
  expect(';');
  while (pos < s.size() && s[pos] == '(') node.children.push_back(parse_code(s, pos));
  expect(')');
  return node;
}

CodeNode parse_code_full(const std::string& s) {
  std::size_t pos = 0;
  CodeNode root = parse_code(s, pos);
  if (pos != s.size()) fail(Err::ParseError, "trailing bytes at offset " + std::to_string(pos));
  return root;
}

void build_from_node(const CodeNode& node, VertexId& next_id,
                     std::vector<VertexId>& vertices,
                     std::vector<std::pair<VertexId, VertexId>>& edges,
                     std::vector<std::pair<TailLabel, VertexId>>& tails) {
  VertexId id = next_id++;
  vertices.push_back(id);
  for (TailLabel l : node.labels) tails.emplace_back(l, id);
  for (const CodeNode& child : node.children) {
    VertexId child_id = next_id;
    build_from_node(child, next_id, vertices, edges, tails);
    edges.emplace_back(id, child_id);
  }
}

std::string render_pretty(const CodeNode& node) {
  std::string out = "(";
  bool first = true;
  for (TailLabel l : node.labels) {
    if (!first) out += ',';
    out += std::to_string(l);
    first = false;
  }
  for (const CodeNode& child : node.children) {
    if (!first) out += ',';
    out += render_pretty(child);
    first = false;
  }
  out += ')';
  return out;
}

}  // namespace

CanonicalCode canonical_code(const StableTree& tree) {
  // Root at the vertex carrying the smallest tail label: that vertex is fixed
  // by every label-preserving isomorphism, so the rooted form is canonical.
  VertexId root = tree.tail_vertex(tree.min_tail());
  return CanonicalCode(encode_from(tree, root, 0, false));
}

std::string CanonicalCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out += digits[c >> 4];
    out += digits[c & 0xf];
  }
  return out;
}

CanonicalCode CanonicalCode::from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) fail(Err::ParseError, "odd hex length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    fail(Err::ParseError, std::string("bad hex digit '") + c + "'");
  };
  std::string bytes;
  bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
    bytes += static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1]));
  return CanonicalCode(bytes);
}

std::string CanonicalCode::pretty() const { return render_pretty(parse_code_full(bytes_)); }

std::size_t CanonicalCode::codimension() const {
  std::size_t vertices = 0;
  for (char c : bytes_)
    if (c == '(') ++vertices;
  return vertices == 0 ? 0 : vertices - 1;
}

StableTree tree_from_code(const CanonicalCode& code) {
  CodeNode root = parse_code_full(code.bytes());
  std::vector<VertexId> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::pair<TailLabel, VertexId>> tails;
  VertexId next_id = 0;
  build_from_node(root, next_id, vertices, edges, tails);
  return StableTree::validate(std::move(vertices), std::move(edges), std::move(tails));
}

StableTree canonicalized(const StableTree& tree) { return tree_from_code(canonical_code(tree)); }

bool are_isomorphic(const StableTree& t1, const StableTree& t2) {
  return canonical_code(t1) == canonical_code(t2);
}

// ---------------------------------------------------------------------------
// Morphisms

TreeMorphism TreeMorphism::checked(StableTree source, StableTree target,
                                   std::map<VertexId, VertexId> vertex_map,
                                   std::map<Edge, Edge> edge_section,
                                   std::map<TailLabel, TailLabel> tail_section) {
  auto bad = [](const std::string& what) { fail(Err::InvalidMorphism, what); };

  if (vertex_map.size() != source.vertex_count()) bad("vertex map is not total on the source");
  std::set<VertexId> image;
  for (auto& [v, w] : vertex_map) {
    if (!source.has_vertex(v)) bad("vertex map key " + vtx(v) + " not in source");
    if (!target.has_vertex(w)) bad("vertex map value " + vtx(w) + " not in target");
    image.insert(w);
  }
  if (image.size() != target.vertex_count()) bad("vertex map is not surjective");

  if (edge_section.size() != target.edge_count()) bad("edge section is not total on target edges");
  std::set<Edge> edge_values;
  for (auto& [et, es] : edge_section) {
    if (!target.has_edge(et)) bad("edge section key not a target edge");
    if (!source.has_edge(es)) bad("edge section value not a source edge");
    if (!edge_values.insert(es).second) bad("edge section is not injective");
    VertexId a = vertex_map.at(es.u), b = vertex_map.at(es.v);
    if (a == b || Edge(a, b) != et) bad("edge section incompatible with the vertex map");
  }

  if (tail_section.size() != target.tail_count()) bad("tail section is not total on target tails");
  std::set<TailLabel> tail_values;
  for (auto& [lt, ls] : tail_section) {
    if (!target.has_tail(lt)) bad("tail section key not a target tail");
    if (!source.has_tail(ls)) bad("tail section value not a source tail");
    if (!tail_values.insert(ls).second) bad("tail section is not injective");
    if (vertex_map.at(source.tail_vertex(ls)) != target.tail_vertex(lt))
      bad("tail section incompatible with the vertex map");
  }

  for (const Edge& e : source.edges()) {
    if (edge_values.count(e)) continue;  // preserved
    if (vertex_map.at(e.u) != vertex_map.at(e.v))
      bad("edge {" + vtx(e.u) + "," + vtx(e.v) + "} neither preserved nor contracted");
  }

  TreeMorphism m;
  m.source_ = std::move(source);
  m.target_ = std::move(target);
  m.vertex_map_ = std::move(vertex_map);
  m.edge_section_ = std::move(edge_section);
  m.tail_section_ = std::move(tail_section);
  return m;
}

std::optional<Edge> TreeMorphism::map_edge(const Edge& e) const {
  VertexId a = vertex_map_.at(e.u), b = vertex_map_.at(e.v);
  if (a == b) return std::nullopt;
  return Edge(a, b);
}

std::vector<Edge> TreeMorphism::contracted_edges() const {
  std::set<Edge> preserved;
  for (auto& [et, es] : edge_section_) preserved.insert(es);
  std::vector<Edge> out;
  for (const Edge& e : source_.edges())
    if (!preserved.count(e)) out.push_back(e);
  return out;
}

TreeMorphism identity_morphism(const StableTree& tree) {
  std::map<VertexId, VertexId> vm;
  for (VertexId v : tree.vertices()) vm[v] = v;
  std::map<Edge, Edge> es;
  for (const Edge& e : tree.edges()) es.emplace(e, e);
  std::map<TailLabel, TailLabel> ts;
  for (auto& [l, v] : tree.tails()) ts[l] = l;
  return TreeMorphism::checked(tree, tree, std::move(vm), std::move(es), std::move(ts));
}

// ---------------------------------------------------------------------------
// Gluing

Gluing glue_detailed(const StableTree& t1, TailLabel tail1,
                     const StableTree& t2, TailLabel tail2) {
  VertexId va = t1.tail_vertex(tail1);
  VertexId vb = t2.tail_vertex(tail2);

  for (auto& [l, v] : t1.tails()) {
    if (l == tail1) continue;
    if (l != tail2 && t2.has_tail(l))
      fail(Err::TailLabelClash, "label " + std::to_string(l) + " appears in both factors");
  }

  std::map<VertexId, VertexId> left, right;
  VertexId next = 0;
  for (VertexId v : t1.vertices()) left[v] = next++;
  for (VertexId v : t2.vertices()) right[v] = next++;

  std::vector<VertexId> vertices;
  for (auto& [v, w] : left) vertices.push_back(w);
  for (auto& [v, w] : right) vertices.push_back(w);

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const Edge& e : t1.edges()) edges.emplace_back(left[e.u], left[e.v]);
  for (const Edge& e : t2.edges()) edges.emplace_back(right[e.u], right[e.v]);
  edges.emplace_back(left[va], right[vb]);

  std::vector<std::pair<TailLabel, VertexId>> tails;
  for (auto& [l, v] : t1.tails())
    if (l != tail1) tails.emplace_back(l, left[v]);
  for (auto& [l, v] : t2.tails())
    if (l != tail2) tails.emplace_back(l, right[v]);

  Gluing g{StableTree::validate(std::move(vertices), std::move(edges), std::move(tails)),
           std::move(left), std::move(right), Edge(0, 1)};
  g.joint = Edge(g.left_vertices[va], g.right_vertices[vb]);
  return g;
}

StableTree glue(const StableTree& t1, TailLabel tail1,
                const StableTree& t2, TailLabel tail2) {
  return glue_detailed(t1, tail1, t2, tail2).tree;
}

// ---------------------------------------------------------------------------
// Contraction

TreeMorphism contract_edges(const StableTree& tree, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const Edge& e : edges)
    if (!tree.has_edge(e))
      fail(Err::NoSuchEdge, "edge {" + vtx(e.u) + "," + vtx(e.v) + "}");

  // Union-find over the contracted subforest; the representative of each
  // component is its minimal vertex id, so iterated single contractions and
  // one multi-edge contraction produce identical results.
  std::map<VertexId, VertexId> parent;
  for (VertexId v : tree.vertices()) parent[v] = v;
  auto find = [&](VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Edge& e : edges) {
    VertexId a = find(e.u), b = find(e.v);
    if (a == b) continue;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }

  std::map<VertexId, VertexId> vertex_map;
  std::vector<VertexId> vertices;
  for (VertexId v : tree.vertices()) {
    VertexId r = find(v);
    vertex_map[v] = r;
    if (r == v) vertices.push_back(v);
  }

  std::set<Edge> contracted(edges.begin(), edges.end());
  std::vector<std::pair<VertexId, VertexId>> new_edges;
  std::map<Edge, Edge> edge_section;
  for (const Edge& e : tree.edges()) {
    if (contracted.count(e)) continue;
    Edge mapped(vertex_map[e.u], vertex_map[e.v]);
    new_edges.emplace_back(mapped.u, mapped.v);
    edge_section.emplace(mapped, e);
  }

  std::vector<std::pair<TailLabel, VertexId>> tails;
  std::map<TailLabel, TailLabel> tail_section;
  for (auto& [l, v] : tree.tails()) {
    tails.emplace_back(l, vertex_map[v]);
    tail_section[l] = l;
  }

  StableTree target = StableTree::validate(std::move(vertices), std::move(new_edges), std::move(tails));
  return TreeMorphism::checked(tree, std::move(target), std::move(vertex_map),
                               std::move(edge_section), std::move(tail_section));
}

TreeMorphism contract_edge(const StableTree& tree, const Edge& edge) {
  if (!tree.has_edge(edge))
    fail(Err::NoSuchEdge, "edge {" + vtx(edge.u) + "," + vtx(edge.v) + "}");
  return contract_edges(tree, {edge});
}

// ---------------------------------------------------------------------------
// Morphism composition and gluing

TreeMorphism compose_morphisms(const TreeMorphism& f, const TreeMorphism& g) {
  if (!(f.target() == g.source()))
    fail(Err::SourceTargetMismatch, "target of the first morphism differs from source of the second");

  std::map<VertexId, VertexId> vm;
  for (auto& [v, w] : f.vertex_map()) vm[v] = g.vertex_map().at(w);
  std::map<Edge, Edge> es;
  for (auto& [et, emid] : g.edge_section()) es.emplace(et, f.edge_section().at(emid));
  std::map<TailLabel, TailLabel> ts;
  for (auto& [lt, lmid] : g.tail_section()) ts[lt] = f.tail_section().at(lmid);

  return TreeMorphism::checked(f.source(), g.target(), std::move(vm), std::move(es), std::move(ts));
}

namespace {

Edge map_through(const std::map<VertexId, VertexId>& m, const Edge& e) {
  return Edge(m.at(e.u), m.at(e.v));
}

TailLabel section_preimage(const TreeMorphism& f, TailLabel tail) {
  if (!f.source().has_tail(tail)) fail(Err::MissingTail, "tail " + std::to_string(tail));
  for (auto& [lt, ls] : f.tail_section())
    if (ls == tail) return lt;
  fail(Err::TailContracted, "tail " + std::to_string(tail) + " is contracted by the morphism");
}

}  // namespace

TreeMorphism glue_morphisms(const TreeMorphism& f1, TailLabel tail1,
                            const TreeMorphism& f2, TailLabel tail2) {
  TailLabel s1 = section_preimage(f1, tail1);
  TailLabel s2 = section_preimage(f2, tail2);

  Gluing src = glue_detailed(f1.source(), tail1, f2.source(), tail2);
  Gluing tgt = glue_detailed(f1.target(), s1, f2.target(), s2);

  std::map<VertexId, VertexId> vm;
  for (auto& [v, gv] : src.left_vertices) vm[gv] = tgt.left_vertices.at(f1.map_vertex(v));
  for (auto& [v, gv] : src.right_vertices) vm[gv] = tgt.right_vertices.at(f2.map_vertex(v));

  std::map<Edge, Edge> es;
  for (auto& [et, e] : f1.edge_section())
    es.emplace(map_through(tgt.left_vertices, et), map_through(src.left_vertices, e));
  for (auto& [et, e] : f2.edge_section())
    es.emplace(map_through(tgt.right_vertices, et), map_through(src.right_vertices, e));
  es.emplace(tgt.joint, src.joint);

  std::map<TailLabel, TailLabel> ts;
  for (auto& [lt, ls] : f1.tail_section())
    if (lt != s1) ts[lt] = ls;
  for (auto& [lt, ls] : f2.tail_section())
    if (lt != s2) ts[lt] = ls;

  return TreeMorphism::checked(src.tree, tgt.tree, std::move(vm), std::move(es), std::move(ts));
}

// ---------------------------------------------------------------------------

StableTree relabel_tails(const StableTree& tree, const std::map<TailLabel, TailLabel>& perm) {
  auto apply = [&](TailLabel l) {
    auto it = perm.find(l);
    return it == perm.end() ? l : it->second;
  };
  std::set<TailLabel> seen;
  std::vector<std::pair<TailLabel, VertexId>> tails;
  for (auto& [l, v] : tree.tails()) {
    TailLabel nl = apply(l);
    if (nl == 0) fail(Err::InvalidLabel, "relabeling maps " + std::to_string(l) + " to 0");
    if (!seen.insert(nl).second)
      fail(Err::NonInjectiveRelabeling, "two tails map to label " + std::to_string(nl));
    tails.emplace_back(nl, v);
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const Edge& e : tree.edges()) edges.emplace_back(e.u, e.v);
  return StableTree::validate(tree.vertices(), std::move(edges), std::move(tails));
}

}  // namespace mop
