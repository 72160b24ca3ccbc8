#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mop/errors.hpp"

namespace mop {

using VertexId = std::uint32_t;
using TailLabel = std::uint32_t;  // tail labels are positive integers

/// Unordered pair of distinct vertices, stored normalized (u < v).
struct Edge {
  VertexId u, v;

  Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) fail(Err::Cyclic, "self-loop at vertex " + std::to_string(a));
  }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Dual graph of a stable genus-zero curve: a finite tree whose vertices carry
/// labeled tails (marked points) and every vertex has edge-degree + tail-count >= 3.
///
/// Values are immutable after construction; all operations on them are pure
/// functions, so trees may be shared freely across threads.
class StableTree {
 public:
  /// Checks connectedness, acyclicity, stability and label distinctness;
  /// throws DomainError naming the violated invariant otherwise.
  static StableTree validate(std::vector<VertexId> vertices,
                             std::vector<std::pair<VertexId, VertexId>> edges,
                             std::vector<std::pair<TailLabel, VertexId>> tails);

  /// Single-vertex tree carrying the given tails (needs at least 3 of them).
  static StableTree corolla(const std::vector<TailLabel>& labels);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Tail map as (label, vertex) pairs sorted by label.
  const std::vector<std::pair<TailLabel, VertexId>>& tails() const { return tails_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t tail_count() const { return tails_.size(); }

  bool has_vertex(VertexId v) const;
  bool has_edge(const Edge& e) const;
  bool has_tail(TailLabel label) const;
  VertexId tail_vertex(TailLabel label) const;  // MissingTail if absent
  TailLabel min_tail() const { return tails_.front().first; }

  std::vector<TailLabel> tail_labels() const;
  std::vector<TailLabel> tails_at(VertexId v) const;   // sorted
  std::vector<VertexId> neighbors(VertexId v) const;   // sorted
  std::size_t edge_degree(VertexId v) const;
  std::size_t tail_count_at(VertexId v) const;

  friend bool operator==(const StableTree&, const StableTree&) = default;

 private:
  StableTree() = default;

  std::vector<VertexId> vertices_;                    // sorted, unique
  std::vector<Edge> edges_;                           // sorted, unique
  std::vector<std::pair<TailLabel, VertexId>> tails_; // sorted by label
};

/// Canonical byte encoding of a StableTree, equal across all representations of
/// trees related by a tail-label-preserving isomorphism.
///
/// The bytes form a readable nested grammar
///     code := '(' label (',' label)* ';' code* ')'  |  '(' ';' code* ')'
/// rooted at the vertex carrying the minimal tail label, children sorted by
/// their own code. External interfaces serialize codes as lowercase hex.
class CanonicalCode {
 public:
  explicit CanonicalCode(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const { return bytes_; }
  std::string hex() const;
  static CanonicalCode from_hex(const std::string& hex);  // ParseError

  /// Human-readable nested-parenthesis description, e.g. "(1,2,(3,4))".
  std::string pretty() const;
  /// Edge count of the encoded tree (= codimension of the stratum).
  std::size_t codimension() const;

  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;

 private:
  std::string bytes_;
};

CanonicalCode canonical_code(const StableTree& tree);

/// Rebuilds a tree from its code; vertex ids are assigned 0,1,... in the
/// canonical depth-first order.
StableTree tree_from_code(const CanonicalCode& code);

/// Canonical representative of the isomorphism class: tree_from_code of the code.
StableTree canonicalized(const StableTree& tree);

/// Tail-label-fixing isomorphism test (decided by canonical codes).
bool are_isomorphic(const StableTree& t1, const StableTree& t2);

/// Tree morphism as in the dual-graph category: covariant surjective vertex map
/// plus contravariant injective edge/tail sections. Source edges outside the
/// section image are contracted; their endpoints share a vertex image.
class TreeMorphism {
 public:
  /// Validates every morphism axiom; throws InvalidMorphism otherwise.
  static TreeMorphism checked(StableTree source, StableTree target,
                              std::map<VertexId, VertexId> vertex_map,
                              std::map<Edge, Edge> edge_section,
                              std::map<TailLabel, TailLabel> tail_section);

  const StableTree& source() const { return source_; }
  const StableTree& target() const { return target_; }
  const std::map<VertexId, VertexId>& vertex_map() const { return vertex_map_; }
  const std::map<Edge, Edge>& edge_section() const { return edge_section_; }
  const std::map<TailLabel, TailLabel>& tail_section() const { return tail_section_; }

  VertexId map_vertex(VertexId v) const { return vertex_map_.at(v); }
  /// Image of a source edge; nullopt when the edge is contracted.
  std::optional<Edge> map_edge(const Edge& e) const;
  /// Source edges not in the image of the edge section.
  std::vector<Edge> contracted_edges() const;

  friend bool operator==(const TreeMorphism&, const TreeMorphism&) = default;

 private:
  TreeMorphism() = default;

  StableTree source_, target_;
  std::map<VertexId, VertexId> vertex_map_;
  std::map<Edge, Edge> edge_section_;
  std::map<TailLabel, TailLabel> tail_section_;
};

TreeMorphism identity_morphism(const StableTree& tree);

/// Gluing of two trees into one new edge, with the vertex renumberings applied
/// to each factor and the id of the new edge.
struct Gluing {
  StableTree tree;
  std::map<VertexId, VertexId> left_vertices;
  std::map<VertexId, VertexId> right_vertices;
  Edge joint;
};

/// (t1,tail1)*(t2,tail2): removes the two tails and joins their attachment
/// vertices by a new edge. Residual tail labels must be disjoint.
Gluing glue_detailed(const StableTree& t1, TailLabel tail1,
                     const StableTree& t2, TailLabel tail2);
StableTree glue(const StableTree& t1, TailLabel tail1,
                const StableTree& t2, TailLabel tail2);

/// Contracts one edge; returns the morphism tree -> contracted tree whose edge
/// section omits exactly that edge.
TreeMorphism contract_edge(const StableTree& tree, const Edge& edge);

/// Contracts a set of edges in one step (edge section omits exactly that set).
TreeMorphism contract_edges(const StableTree& tree, std::vector<Edge> edges);

/// Composition f then g; requires target(f) == source(g) exactly.
TreeMorphism compose_morphisms(const TreeMorphism& f, const TreeMorphism& g);

/// Functorial gluing of morphisms: f1 * f2 from glue(src1,t1,src2,t2) to the
/// glue of the targets along the tails whose sections hit t1, t2.
TreeMorphism glue_morphisms(const TreeMorphism& f1, TailLabel tail1,
                            const TreeMorphism& f2, TailLabel tail2);

/// Relabels tails by the given finite map (labels absent from the map are
/// fixed); must be injective on the tree's labels.
StableTree relabel_tails(const StableTree& tree,
                         const std::map<TailLabel, TailLabel>& perm);

}  // namespace mop
