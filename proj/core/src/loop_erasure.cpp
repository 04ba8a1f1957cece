#include "lew/loop_erasure.hpp"

#include <unordered_map>
#include <unordered_set>

namespace lew {

ErasureTrace loop_erase(const LatticePath& p) {
  if (p.vertices.empty()) throw Error("loop_erase of an empty path");
  ErasureTrace trace;
  trace.input = p;
  const auto& a = p.vertices;
  const int n = static_cast<int>(a.size()) - 1;

  std::unordered_map<VertexId, int, VertexIdHash> last;
  last.reserve(a.size());
  for (int j = 0; j <= n; ++j) last[a[static_cast<size_t>(j)]] = j;

  int jk = last[a[0]];
  trace.retained_indices.push_back(jk);
  while (jk < n) {
    jk = last[a[static_cast<size_t>(jk + 1)]];
    trace.retained_indices.push_back(jk);
  }
  trace.output.vertices.reserve(trace.retained_indices.size());
  for (int j : trace.retained_indices) {
    trace.output.vertices.push_back(a[static_cast<size_t>(j)]);
  }
  return trace;
}

void loop_erase_vertices(std::span<const VertexId> in, std::vector<VertexId>& out) {
  out.clear();
  if (in.empty()) return;
  std::unordered_map<VertexId, int, VertexIdHash> pos;
  pos.reserve(in.size());
  for (const VertexId& v : in) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      for (size_t k = static_cast<size_t>(it->second) + 1; k < out.size(); ++k) {
        pos.erase(out[k]);
      }
      out.resize(static_cast<size_t>(it->second) + 1);
    } else {
      pos.emplace(v, static_cast<int>(out.size()));
      out.push_back(v);
    }
  }
}

bool paths_intersect(const WeightedDigraph& g, const LatticePath& p,
                     const LatticePath& q, bool interior_only) {
  const auto& small = p.vertices.size() <= q.vertices.size() ? p : q;
  const auto& large = p.vertices.size() <= q.vertices.size() ? q : p;
  std::unordered_set<VertexId, VertexIdHash> seen;
  seen.reserve(small.vertices.size());
  for (const VertexId& v : small.vertices) {
    if (interior_only && g.is_absorbing(v)) continue;
    seen.insert(v);
  }
  for (const VertexId& v : large.vertices) {
    if (seen.count(v)) return true;
  }
  return false;
}

bool fomin_condition(const WeightedDigraph& g, std::span<const LatticePath> paths) {
  const int n = static_cast<int>(paths.size());
  if (n == 0) throw Error("fomin_condition needs at least one path");
  std::vector<VertexId> le;
  std::unordered_set<VertexId, VertexIdHash> le_set;
  for (int i = 0; i < n - 1; ++i) {
    loop_erase_vertices(paths[static_cast<size_t>(i)].vertices, le);
    le_set.clear();
    for (const VertexId& v : le) {
      if (!g.is_absorbing(v)) le_set.insert(v);
    }
    for (int j = i + 1; j < n; ++j) {
      for (const VertexId& v : paths[static_cast<size_t>(j)].vertices) {
        if (le_set.count(v)) return false;
      }
    }
  }
  return true;
}

bool affine_condition(const WeightedDigraph& strip, std::span<const LatticePath> paths) {
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("affine_condition is defined on the periodic strip");
  }
  const int n = static_cast<int>(paths.size());
  if (n == 0) throw Error("affine_condition needs at least one path");
  const int M = strip.period();

  std::vector<VertexId> le;
  std::unordered_set<VertexId, VertexIdHash> le_set;
  auto hits = [&](const LatticePath& p) {
    for (const VertexId& v : p.vertices) {
      if (le_set.count(v)) return true;
    }
    return false;
  };
  auto fill_le_set = [&](std::span<const VertexId> verts, int col_shift) {
    le_set.clear();
    for (const VertexId& v : verts) {
      const VertexId w{v.col + col_shift, v.row};
      if (!strip.is_absorbing(w)) le_set.insert(w);
    }
  };

  for (int j = 2; j <= n; ++j) {
    loop_erase_vertices(paths[static_cast<size_t>(j - 2)].vertices, le);
    fill_le_set(le, 0);
    if (hits(paths[static_cast<size_t>(j - 1)])) return false;
  }
  // wrap condition P_1 vs LE(S P_n); erasure commutes with translation
  loop_erase_vertices(paths[static_cast<size_t>(n - 1)].vertices, le);
  fill_le_set(le, M);
  if (hits(paths[0])) return false;
  return true;
}

}  // namespace lew
