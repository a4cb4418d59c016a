#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rpqdb {

using NodeIndex = uint32_t;
using EdgeIndex = uint32_t;

enum class PathSemantic { Walk, Trail, Acyclic, Simple };

inline const char* to_string(PathSemantic s) {
  switch (s) {
    case PathSemantic::Walk: return "WALK";
    case PathSemantic::Trail: return "TRAIL";
    case PathSemantic::Acyclic: return "ACYCLIC";
    case PathSemantic::Simple: return "SIMPLE";
  }
  return "?";
}

/// Alternating node/edge sequence. A zero-length path is a single node and
/// no edges; otherwise nodes.size() == edges.size() + 1 and edge i runs from
/// node i to node i+1.
struct Path {
  std::vector<NodeIndex> nodes;
  std::vector<EdgeIndex> edges;

  static Path at(NodeIndex v) { return Path{{v}, {}}; }
  static Path hop(NodeIndex s, EdgeIndex e, NodeIndex t) {
    return Path{{s, t}, {e}};
  }

  size_t length() const { return edges.size(); }
  NodeIndex first() const { return nodes.front(); }
  NodeIndex last() const { return nodes.back(); }

  bool operator==(const Path&) const = default;
};

inline uint64_t hash_path(const Path& p) {
  // splitmix64-style mixing over both sequences
  uint64_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
  };
  mix(p.nodes.size());
  for (NodeIndex v : p.nodes) mix(v);
  mix(0x517cc1b727220a95ull);
  for (EdgeIndex e : p.edges) mix(e);
  return h;
}

struct PathHash {
  size_t operator()(const Path& p) const { return hash_path(p); }
};

namespace detail {
template <typename T>
inline bool has_duplicate(const std::vector<T>& xs, size_t begin, size_t end) {
  size_t n = end - begin;
  if (n < 2) return false;
  if (n <= 24) {
    for (size_t i = begin; i < end; ++i)
      for (size_t j = i + 1; j < end; ++j)
        if (xs[i] == xs[j]) return true;
    return false;
  }
  std::unordered_set<T> seen;
  seen.reserve(n * 2);
  for (size_t i = begin; i < end; ++i)
    if (!seen.insert(xs[i]).second) return true;
  return false;
}
}  // namespace detail

/// WALK: anything. TRAIL: no repeated edge. ACYCLIC: no repeated node.
/// SIMPLE: no repeated node except that the endpoints may coincide.
inline bool satisfies(const Path& p, PathSemantic s) {
  switch (s) {
    case PathSemantic::Walk:
      return true;
    case PathSemantic::Trail:
      return !detail::has_duplicate(p.edges, 0, p.edges.size());
    case PathSemantic::Acyclic:
      return !detail::has_duplicate(p.nodes, 0, p.nodes.size());
    case PathSemantic::Simple: {
      size_t n = p.nodes.size();
      if (n < 3) return true;
      if (detail::has_duplicate(p.nodes, 1, n - 1)) return false;
      NodeIndex f = p.nodes.front(), l = p.nodes.back();
      for (size_t i = 1; i + 1 < n; ++i)
        if (p.nodes[i] == f || p.nodes[i] == l) return false;
      return true;
    }
  }
  return false;
}

/// Concatenation; requires last(p) == first(q).
inline Path concat(const Path& p, const Path& q) {
  if (p.last() != q.first())
    throw std::invalid_argument("cannot concatenate paths: endpoint " +
                                std::to_string(p.last()) +
                                " does not match start " +
                                std::to_string(q.first()));
  Path r;
  r.nodes.reserve(p.nodes.size() + q.nodes.size() - 1);
  r.edges.reserve(p.edges.size() + q.edges.size());
  r.nodes = p.nodes;
  r.nodes.insert(r.nodes.end(), q.nodes.begin() + 1, q.nodes.end());
  r.edges = p.edges;
  r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
  return r;
}

/// Duplicate-free path collection with insertion-order iteration.
class PathSet {
 public:
  PathSet() = default;

  bool insert(Path p) {
    uint64_t h = hash_path(p);
    auto [it, fresh] = buckets_.try_emplace(h);
    if (!fresh) {
      for (uint32_t i : it->second)
        if (paths_[i] == p) return false;
    }
    it->second.push_back(static_cast<uint32_t>(paths_.size()));
    paths_.push_back(std::move(p));
    return true;
  }

  bool contains(const Path& p) const {
    auto it = buckets_.find(hash_path(p));
    if (it == buckets_.end()) return false;
    for (uint32_t i : it->second)
      if (paths_[i] == p) return true;
    return false;
  }

  size_t size() const { return paths_.size(); }
  bool empty() const { return paths_.empty(); }
  const Path& operator[](size_t i) const { return paths_[i]; }
  const std::vector<Path>& paths() const { return paths_; }

  auto begin() const { return paths_.begin(); }
  auto end() const { return paths_.end(); }

  bool set_equals(const PathSet& o) const {
    if (size() != o.size()) return false;
    for (const Path& p : paths_)
      if (!o.contains(p)) return false;
    return true;
  }

 private:
  std::vector<Path> paths_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> buckets_;
};

}  // namespace rpqdb
