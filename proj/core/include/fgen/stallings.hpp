#ifndef FGEN_STALLINGS_HPP
#define FGEN_STALLINGS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fgen/errors.hpp"
#include "fgen/tuples.hpp"
#include "fgen/words.hpp"

namespace fgen {

/// Folded, deterministic and codeterministic A-graph with base vertex 0,
/// uniquely representing a finitely generated subgroup of the free group.
/// Edges carry positive letters; inverse letters traverse edges backwards.
class StallingsGraph {
 public:
  using Vertex = std::int32_t;
  static constexpr Vertex none = -1;

  StallingsGraph(int rank, std::size_t vertices)
      : rank_(rank),
        out_(vertices * std::size_t(rank), none),
        in_(vertices * std::size_t(rank), none) {}

  int rank() const noexcept { return rank_; }
  std::size_t vertex_count() const noexcept { return out_.size() / std::size_t(rank_); }
  std::size_t edge_count() const noexcept;

  /// Target of the positive-letter edge (v, a_j, .), or none.
  Vertex out(Vertex v, int j) const { return out_[std::size_t(v) * std::size_t(rank_) + std::size_t(j)]; }
  /// Source of the positive-letter edge (., a_j, v), or none.
  Vertex in(Vertex v, int j) const { return in_[std::size_t(v) * std::size_t(rank_) + std::size_t(j)]; }

  /// Follows one letter (inverse letters go backwards); none if undefined.
  Vertex step(Vertex v, Letter x) const {
    return is_positive_letter(x) ? out(v, x / 2) : in(v, x / 2);
  }

  void set_edge(Vertex u, int j, Vertex v) {
    out_[std::size_t(u) * std::size_t(rank_) + std::size_t(j)] = v;
    in_[std::size_t(v) * std::size_t(rank_) + std::size_t(j)] = u;
  }

  bool operator==(const StallingsGraph& o) const = default;

 private:
  int rank_;
  std::vector<Vertex> out_;
  std::vector<Vertex> in_;
};

/// Builds the Stallings graph of <h> by folding the bouquet of loops.
/// The result does not depend on the order of the entries.
StallingsGraph stallings_graph(const WordTuple& h);

/// Membership: u is in the subgroup iff it labels a loop at the base vertex.
bool contains(const StallingsGraph& g, const Word& u);

/// Rank of the represented subgroup: |E| - |V| + 1.
std::size_t rank(const StallingsGraph& g);

/// A basis of the subgroup, one word per edge outside a spanning tree.
/// stallings_graph(basis(g)) is isomorphic to g.
WordTuple basis(const StallingsGraph& g);

/// Base-point-preserving labeled-graph isomorphism. Folded based graphs
/// admit at most one such isomorphism, so a synchronized traversal decides.
bool isomorphic(const StallingsGraph& g1, const StallingsGraph& g2);

/// Throws std::logic_error if the graph is not folded/admissible.
void validate(const StallingsGraph& g);

/// Pullback of two labeled graphs: vertices are vertex pairs, edges are
/// synchronized edges, plus the component decomposition.
struct FiberProduct {
  std::size_t v1 = 0, v2 = 0;

  struct Component {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool has_diagonal = false;      // contains a pair (x, x); meaningful for self-products
    bool has_off_diagonal = false;  // contains a pair (x, y) with x != y
  };
  std::vector<std::int32_t> component_of;  // index (x, y) -> x * v2 + y
  std::vector<Component> components;
};

inline constexpr std::size_t kDefaultVertexPairCap = 100'000'000;

FiberProduct fiber_product(const StallingsGraph& g1, const StallingsGraph& g2,
                           std::size_t vertex_pair_cap = kDefaultVertexPairCap);

/// Exact malnormality: every component of the self fiber product containing
/// an off-diagonal vertex is a tree.
bool is_malnormal(const StallingsGraph& g,
                  std::size_t vertex_pair_cap = kDefaultVertexPairCap);

/// Refutation oracle: false iff some nonempty reduced word of length <= max_len
/// labels loops at two distinct vertices. Sound as a refutation; complete only
/// when all fiber-product cycles are short enough.
bool brute_force_malnormal(const StallingsGraph& g, std::size_t max_len,
                           std::uint64_t node_budget = 200'000'000);

/// JSON record {"vertices": V, "base": 0, "edges": [[src, "a", dst], ...]}.
std::string graph_to_json(const StallingsGraph& g);
StallingsGraph graph_from_json(const std::string& text);

/// DOT export with the base vertex double-circled.
std::string graph_to_dot(const StallingsGraph& g);

}  // namespace fgen

#endif
