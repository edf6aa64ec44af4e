#include "fgen/stallings.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

namespace fgen {

namespace {

/// Union-find folder over the bouquet vertices. Out/in slots live on class
/// representatives; merging two classes folds their slots and enqueues any
/// clashing targets/sources, which is exactly Stallings folding.
class Folder {
 public:
  Folder(int rank, std::size_t vertices)
      : rank_(rank),
        parent_(vertices),
        size_(vertices, 1),
        out_(vertices * std::size_t(rank), -1),
        in_(vertices * std::size_t(rank), -1) {
    for (std::size_t i = 0; i < vertices; ++i) parent_[i] = std::int32_t(i);
  }

  std::int32_t find(std::int32_t v) {
    while (parent_[std::size_t(v)] != v) {
      parent_[std::size_t(v)] = parent_[std::size_t(parent_[std::size_t(v)])];
      v = parent_[std::size_t(v)];
    }
    return v;
  }

  void add_edge(std::int32_t u, int j, std::int32_t v) {
    u = find(u);
    v = find(v);
    auto& out_slot = out_[std::size_t(u) * std::size_t(rank_) + std::size_t(j)];
    if (out_slot < 0) {
      out_slot = v;
    } else {
      pending_.emplace_back(find(out_slot), v);
    }
    u = find(u);
    v = find(v);
    auto& in_slot = in_[std::size_t(v) * std::size_t(rank_) + std::size_t(j)];
    if (in_slot < 0) {
      in_slot = u;
    } else {
      pending_.emplace_back(find(in_slot), u);
    }
    drain();
  }

  std::int32_t out(std::int32_t root, int j) {
    auto& slot = out_[std::size_t(root) * std::size_t(rank_) + std::size_t(j)];
    if (slot >= 0) slot = find(slot);
    return slot;
  }

  std::int32_t in(std::int32_t root, int j) {
    auto& slot = in_[std::size_t(root) * std::size_t(rank_) + std::size_t(j)];
    if (slot >= 0) slot = find(slot);
    return slot;
  }

 private:
  void drain() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.back();
      pending_.pop_back();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (size_[std::size_t(a)] < size_[std::size_t(b)]) std::swap(a, b);
      parent_[std::size_t(b)] = a;
      size_[std::size_t(a)] += size_[std::size_t(b)];
      for (int j = 0; j < rank_; ++j) {
        const std::size_t wa = std::size_t(a) * std::size_t(rank_) + std::size_t(j);
        const std::size_t wb = std::size_t(b) * std::size_t(rank_) + std::size_t(j);
        if (out_[wb] >= 0) {
          if (out_[wa] < 0) out_[wa] = out_[wb];
          else pending_.emplace_back(find(out_[wa]), find(out_[wb]));
        }
        if (in_[wb] >= 0) {
          if (in_[wa] < 0) in_[wa] = in_[wb];
          else pending_.emplace_back(find(in_[wa]), find(in_[wb]));
        }
      }
    }
  }

  int rank_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> out_;
  std::vector<std::int32_t> in_;
  std::vector<std::pair<std::int32_t, std::int32_t>> pending_;
};

}  // namespace

std::size_t StallingsGraph::edge_count() const noexcept {
  std::size_t e = 0;
  for (Vertex t : out_)
    if (t != none) ++e;
  return e;
}

StallingsGraph stallings_graph(const WordTuple& h) {
  for (const auto& w : h.words)
    if (w.empty()) throw std::invalid_argument("stallings_graph: empty word in tuple");

  std::size_t total = 1;
  for (const auto& w : h.words) total += w.length() > 0 ? w.length() - 1 : 0;
  Folder folder(h.rank, total);

  // Bouquet of loops at vertex 0, one per word.
  std::int32_t next_vertex = 1;
  for (const auto& w : h.words) {
    std::int32_t cur = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      std::int32_t nxt = (i + 1 == w.length()) ? 0 : next_vertex++;
      Letter x = w[i];
      if (is_positive_letter(x)) folder.add_edge(cur, x / 2, nxt);
      else folder.add_edge(nxt, x / 2, cur);
      cur = nxt;
    }
  }

  // Renumber classes by BFS from the base so that serialization is canonical.
  std::vector<std::int32_t> id(total, -1);
  std::vector<std::int32_t> order;
  order.reserve(total);
  std::int32_t base = folder.find(0);
  id[std::size_t(base)] = 0;
  order.push_back(base);
  for (std::size_t head = 0; head < order.size(); ++head) {
    std::int32_t v = order[head];
    for (int j = 0; j < h.rank; ++j) {
      for (std::int32_t w : {folder.out(v, j), folder.in(v, j)}) {
        if (w >= 0 && id[std::size_t(w)] < 0) {
          id[std::size_t(w)] = std::int32_t(order.size());
          order.push_back(w);
        }
      }
    }
  }

  StallingsGraph g(h.rank, order.size());
  for (std::int32_t v : order) {
    for (int j = 0; j < h.rank; ++j) {
      std::int32_t t = folder.out(v, j);
      if (t >= 0) g.set_edge(id[std::size_t(v)], j, id[std::size_t(t)]);
    }
  }
  return g;
}

bool contains(const StallingsGraph& g, const Word& u) {
  StallingsGraph::Vertex v = 0;
  for (Letter x : u.letters()) {
    if (x / 2 >= g.rank()) return false;
    v = g.step(v, x);
    if (v == StallingsGraph::none) return false;
  }
  return v == 0;
}

std::size_t rank(const StallingsGraph& g) {
  return g.edge_count() - g.vertex_count() + 1;
}

WordTuple basis(const StallingsGraph& g) {
  const auto V = g.vertex_count();
  // BFS spanning tree; path_letters[v] labels the tree path base -> v.
  std::vector<char> seen(V, 0);
  std::vector<std::vector<Letter>> path(V);
  std::vector<std::pair<StallingsGraph::Vertex, int>> tree_edges;  // (src, letter j)
  std::queue<StallingsGraph::Vertex> q;
  seen[0] = 1;
  q.push(0);
  std::vector<std::vector<char>> in_tree(V, std::vector<char>(std::size_t(g.rank()), 0));
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (int j = 0; j < g.rank(); ++j) {
      auto t = g.out(v, j);
      if (t != StallingsGraph::none && !seen[std::size_t(t)]) {
        seen[std::size_t(t)] = 1;
        in_tree[std::size_t(v)][std::size_t(j)] = 1;
        path[std::size_t(t)] = path[std::size_t(v)];
        path[std::size_t(t)].push_back(Letter(2 * j));
        q.push(t);
      }
      auto s = g.in(v, j);
      if (s != StallingsGraph::none && !seen[std::size_t(s)]) {
        seen[std::size_t(s)] = 1;
        in_tree[std::size_t(s)][std::size_t(j)] = 1;  // tree edge (s, j, v)
        path[std::size_t(s)] = path[std::size_t(v)];
        path[std::size_t(s)].push_back(Letter(2 * j + 1));
        q.push(s);
      }
    }
  }

  Alphabet a(g.rank());
  std::vector<Word> words;
  for (StallingsGraph::Vertex v = 0; std::size_t(v) < V; ++v) {
    for (int j = 0; j < g.rank(); ++j) {
      auto t = g.out(v, j);
      if (t == StallingsGraph::none || in_tree[std::size_t(v)][std::size_t(j)]) continue;
      std::vector<Letter> raw = path[std::size_t(v)];
      raw.push_back(Letter(2 * j));
      for (auto it = path[std::size_t(t)].rbegin(); it != path[std::size_t(t)].rend(); ++it)
        raw.push_back(inverse_letter(*it));
      words.push_back(Word::reduce(a, raw));
    }
  }
  return WordTuple{g.rank(), std::move(words)};
}

bool isomorphic(const StallingsGraph& g1, const StallingsGraph& g2) {
  if (g1.rank() != g2.rank()) return false;
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  // The only candidate isomorphism maps synchronized traversals onto each other.
  std::vector<StallingsGraph::Vertex> image(g1.vertex_count(), StallingsGraph::none);
  image[0] = 0;
  std::queue<StallingsGraph::Vertex> q;
  q.push(0);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (int j = 0; j < g1.rank(); ++j) {
      auto t1 = g1.out(v, j);
      auto t2 = g2.out(image[std::size_t(v)], j);
      if ((t1 == StallingsGraph::none) != (t2 == StallingsGraph::none)) return false;
      if (t1 != StallingsGraph::none) {
        if (image[std::size_t(t1)] == StallingsGraph::none) {
          image[std::size_t(t1)] = t2;
          q.push(t1);
        } else if (image[std::size_t(t1)] != t2) {
          return false;
        }
      }
      auto s1 = g1.in(v, j);
      auto s2 = g2.in(image[std::size_t(v)], j);
      if ((s1 == StallingsGraph::none) != (s2 == StallingsGraph::none)) return false;
      if (s1 != StallingsGraph::none) {
        if (image[std::size_t(s1)] == StallingsGraph::none) {
          image[std::size_t(s1)] = s2;
          q.push(s1);
        } else if (image[std::size_t(s1)] != s2) {
          return false;
        }
      }
    }
  }
  return true;
}

void validate(const StallingsGraph& g) {
  const auto V = g.vertex_count();
  // Determinism/codeterminism are structural in this representation; check
  // mutual consistency of the out/in maps, connectivity and admissibility.
  std::vector<int> incidences(V, 0);
  for (StallingsGraph::Vertex v = 0; std::size_t(v) < V; ++v)
    for (int j = 0; j < g.rank(); ++j) {
      auto t = g.out(v, j);
      if (t != StallingsGraph::none) {
        if (g.in(t, j) != v) throw std::logic_error("inconsistent out/in maps");
        ++incidences[std::size_t(v)];
        ++incidences[std::size_t(t)];
      }
    }
  std::vector<char> seen(V, 0);
  std::queue<StallingsGraph::Vertex> q;
  seen[0] = 1;
  q.push(0);
  std::size_t reached = 1;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (int j = 0; j < g.rank(); ++j)
      for (auto w : {g.out(v, j), g.in(v, j)})
        if (w != StallingsGraph::none && !seen[std::size_t(w)]) {
          seen[std::size_t(w)] = 1;
          ++reached;
          q.push(w);
        }
  }
  if (reached != V) throw std::logic_error("graph is not connected");
  for (std::size_t v = 1; v < V; ++v)
    if (incidences[v] < 2) throw std::logic_error("non-base vertex with fewer than 2 incidences");
}

FiberProduct fiber_product(const StallingsGraph& g1, const StallingsGraph& g2,
                           std::size_t vertex_pair_cap) {
  if (g1.rank() != g2.rank())
    throw std::invalid_argument("fiber product requires a shared alphabet");
  const std::size_t v1 = g1.vertex_count(), v2 = g2.vertex_count();
  if (v1 * v2 > vertex_pair_cap)
    throw ResourceLimitError("fiber product would have " + std::to_string(v1 * v2) +
                             " vertex pairs (cap " + std::to_string(vertex_pair_cap) + ")");

  const std::size_t n = v1 * v2;
  std::vector<std::int32_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = std::int32_t(i);
  auto find = [&](std::int32_t x) {
    while (parent[std::size_t(x)] != x) {
      parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
      x = parent[std::size_t(x)];
    }
    return x;
  };

  auto pair_index = [&](StallingsGraph::Vertex x, StallingsGraph::Vertex y) {
    return std::int32_t(std::size_t(x) * v2 + std::size_t(y));
  };

  for (StallingsGraph::Vertex x = 0; std::size_t(x) < v1; ++x)
    for (StallingsGraph::Vertex y = 0; std::size_t(y) < v2; ++y)
      for (int j = 0; j < g1.rank(); ++j) {
        auto tx = g1.out(x, j);
        auto ty = g2.out(y, j);
        if (tx != StallingsGraph::none && ty != StallingsGraph::none) {
          auto ra = find(pair_index(x, y));
          auto rb = find(pair_index(tx, ty));
          if (ra != rb) parent[std::size_t(ra)] = rb;
        }
      }

  FiberProduct fp;
  fp.v1 = v1;
  fp.v2 = v2;
  fp.component_of.resize(n);
  std::vector<std::int32_t> comp_id(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    auto root = find(std::int32_t(i));
    if (comp_id[std::size_t(root)] < 0) {
      comp_id[std::size_t(root)] = std::int32_t(fp.components.size());
      fp.components.emplace_back();
    }
    fp.component_of[i] = comp_id[std::size_t(root)];
    auto& c = fp.components[std::size_t(fp.component_of[i])];
    c.vertices += 1;
    const auto x = i / v2, y = i % v2;
    if (v1 == v2 && x == y) c.has_diagonal = true;
    if (x != y || v1 != v2) c.has_off_diagonal = true;
  }
  for (StallingsGraph::Vertex x = 0; std::size_t(x) < v1; ++x)
    for (StallingsGraph::Vertex y = 0; std::size_t(y) < v2; ++y)
      for (int j = 0; j < g1.rank(); ++j) {
        auto tx = g1.out(x, j);
        auto ty = g2.out(y, j);
        if (tx != StallingsGraph::none && ty != StallingsGraph::none)
          fp.components[std::size_t(fp.component_of[std::size_t(pair_index(x, y))])].edges += 1;
      }
  return fp;
}

bool is_malnormal(const StallingsGraph& g, std::size_t vertex_pair_cap) {
  FiberProduct fp = fiber_product(g, g, vertex_pair_cap);
  for (const auto& c : fp.components) {
    if (c.has_diagonal && c.has_off_diagonal)
      throw std::logic_error("diagonal isolation violated: input graph is not folded");
    if (c.has_off_diagonal && c.edges + 1 != c.vertices) return false;  // not a tree
  }
  return true;
}

bool brute_force_malnormal(const StallingsGraph& g, std::size_t max_len,
                           std::uint64_t node_budget) {
  const auto V = g.vertex_count();
  if (V < 2) return true;

  std::uint64_t nodes = 0;
  // Walks from every start vertex in parallel; a witness is a word with
  // loops at two distinct starts.
  std::vector<StallingsGraph::Vertex> cur(V);
  for (std::size_t v = 0; v < V; ++v) cur[v] = StallingsGraph::Vertex(v);

  auto dfs = [&](auto&& self, const std::vector<StallingsGraph::Vertex>& state,
                 std::size_t depth, Letter last) -> bool {
    // Returns true if a witness was found.
    if (depth == max_len) return false;
    for (Letter x = 0; x < Letter(2 * g.rank()); ++x) {
      if (depth > 0 && x == inverse_letter(last)) continue;
      if (++nodes > node_budget)
        throw ResourceLimitError("brute-force malnormality budget exceeded");
      std::vector<StallingsGraph::Vertex> next(V, StallingsGraph::none);
      std::size_t alive = 0, loops = 0;
      for (std::size_t v = 0; v < V; ++v) {
        if (state[v] == StallingsGraph::none) continue;
        auto t = g.step(state[v], x);
        next[v] = t;
        if (t != StallingsGraph::none) {
          ++alive;
          if (t == StallingsGraph::Vertex(v)) ++loops;
        }
      }
      if (loops >= 2) return true;
      if (alive >= 2 && self(self, next, depth + 1, x)) return true;
    }
    return false;
  };
  return !dfs(dfs, cur, 0, Letter(0));
}

std::string graph_to_json(const StallingsGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = g.vertex_count();
  j["base"] = 0;
  j["rank"] = g.rank();
  auto edges = nlohmann::ordered_json::array();
  Alphabet a(g.rank());
  for (StallingsGraph::Vertex v = 0; std::size_t(v) < g.vertex_count(); ++v)
    for (int x = 0; x < g.rank(); ++x) {
      auto t = g.out(v, x);
      if (t != StallingsGraph::none)
        edges.push_back({v, std::string(1, a.letter_to_char(Letter(2 * x))), t});
    }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

StallingsGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("edges"))
    throw std::invalid_argument("graph JSON: missing 'vertices' or 'edges'");
  const auto V = j["vertices"].get<std::size_t>();
  if (V == 0) throw std::invalid_argument("graph JSON: vertex count must be positive");
  if (j.value("base", 0) != 0) throw std::invalid_argument("graph JSON: base must be 0");

  int rank = j.value("rank", 0);
  if (rank == 0) {
    for (const auto& e : j["edges"]) {
      const auto s = e.at(1).get<std::string>();
      if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'z') rank = std::max(rank, s[0] - 'a' + 1);
      if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z') rank = std::max(rank, s[0] - 'A' + 1);
    }
    rank = std::max(rank, 1);
  }
  Alphabet a(rank);
  StallingsGraph g(rank, V);
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("graph JSON: edges must be [src, letter, dst] triples");
    auto src = e.at(0).get<std::int64_t>();
    auto dst = e.at(2).get<std::int64_t>();
    const auto s = e.at(1).get<std::string>();
    if (s.size() != 1) throw std::invalid_argument("graph JSON: letter must be one character");
    Letter x = a.letter_from_char(s[0]);
    if (src < 0 || dst < 0 || std::size_t(src) >= V || std::size_t(dst) >= V)
      throw std::invalid_argument("graph JSON: edge endpoint out of range");
    if (!is_positive_letter(x)) {
      std::swap(src, dst);
      x = inverse_letter(x);
    }
    if (g.out(StallingsGraph::Vertex(src), x / 2) != StallingsGraph::none ||
        g.in(StallingsGraph::Vertex(dst), x / 2) != StallingsGraph::none)
      throw std::invalid_argument("graph JSON: edges violate determinism");
    g.set_edge(StallingsGraph::Vertex(src), x / 2, StallingsGraph::Vertex(dst));
  }
  return g;
}

std::string graph_to_dot(const StallingsGraph& g) {
  Alphabet a(g.rank());
  std::string out = "digraph stallings {\n  rankdir=LR;\n  node [shape=circle];\n"
                    "  0 [shape=doublecircle];\n";
  for (StallingsGraph::Vertex v = 0; std::size_t(v) < g.vertex_count(); ++v)
    for (int x = 0; x < g.rank(); ++x) {
      auto t = g.out(v, x);
      if (t != StallingsGraph::none)
        out += "  " + std::to_string(v) + " -> " + std::to_string(t) + " [label=\"" +
               a.letter_to_char(Letter(2 * x)) + "\"];\n";
    }
  out += "}\n";
  return out;
}

}  // namespace fgen
