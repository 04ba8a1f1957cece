#include "lew/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "lew/loop_erasure.hpp"

namespace lew::mc {

namespace {

// One forward step from a non-absorbing vertex; returns false if the row has
// no outgoing weight (cannot happen on a checked Markov graph).
inline bool step(const WeightedDigraph& g, VertexId& v, double u) {
  const auto& cdf = g.row_cdf(v.row);
  const double target = u * cdf.total;
  int d = 0;
  while (d < 3 && target >= cdf.c[d]) ++d;
  if (cdf.total <= 0) return false;
  int c = v.col + cdf.dc[d];
  int r = v.row + cdf.dr[d];
  switch (g.kind()) {
    case GraphKind::PeriodicStrip:
      break;
    case GraphKind::Cylinder: {
      const int M = g.period();
      if (c == M) c = 0;
      if (c == -1) c = M - 1;
      break;
    }
    case GraphKind::FinitePlanar:
      // reflecting side columns
      if (c == g.width()) c = v.col - 1;
      if (c == -1) c = v.col + 1;
      break;
  }
  v = VertexId{c, r};
  return true;
}

struct BlockTally {
  uint64_t hits = 0;
  uint64_t aborts = 0;
};

constexpr uint64_t kBlock = 16384;

template <typename PerSample>
McEstimate run_blocks(uint64_t samples, int threads, PerSample per_sample) {
  const uint64_t nblocks = (samples + kBlock - 1) / kBlock;
  std::vector<BlockTally> tallies(nblocks);
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const uint64_t blk = next.fetch_add(1);
      if (blk >= nblocks) return;
      BlockTally t;
      const uint64_t begin = blk * kBlock;
      const uint64_t end = std::min(samples, begin + kBlock);
      for (uint64_t s = begin; s < end; ++s) per_sample(s, t);
      tallies[blk] = t;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  McEstimate est;
  for (const BlockTally& t : tallies) {
    est.hits += t.hits;
    est.aborts += t.aborts;
  }
  est.samples_used = samples - est.aborts;
  if (est.samples_used > 0) {
    est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.samples_used);
    est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                            static_cast<double>(est.samples_used));
  }
  return est;
}

void require_markov(const WeightedDigraph& g) {
  if (!g.markov()) throw DomainError("Monte Carlo needs a stochastic graph");
}

}  // namespace

int default_max_steps(const WeightedDigraph& g) {
  const int M = g.kind() == GraphKind::FinitePlanar ? g.width() : g.period();
  return std::max(1000, 100 * g.height() * M * M);
}

bool sample_walk(const WeightedDigraph& g, VertexId start, RngStream& rng,
                 int max_steps, LatticePath& out) {
  out.vertices.clear();
  out.weight = 1.0;
  VertexId v = g.canonical(start);
  out.vertices.push_back(v);
  if (g.is_absorbing(v)) {
    // h+ convention: the first step must enter the interior
    if (!step(g, v, rng.uniform())) return false;
    if (g.is_absorbing(v)) return false;
    out.vertices.push_back(v);
  }
  for (int s = 0; s < max_steps; ++s) {
    if (!step(g, v, rng.uniform())) return false;
    out.vertices.push_back(v);
    if (g.is_absorbing(v)) return true;
  }
  return false;
}

McEstimate estimate_fomin_lhs(const WeightedDigraph& g,
                              std::span<const VertexId> sources,
                              std::span<const VertexId> targets,
                              const McConfig& cfg) {
  require_markov(g);
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(g);

  struct Ws {
    std::vector<LatticePath> paths;
  };
  thread_local Ws ws;

  auto per_sample = [&](uint64_t s, BlockTally& t) {
    // destination pass without storage; matching samples are replayed
    VertexId ends[16];
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      VertexId v = g.canonical(sources[static_cast<size_t>(w)]);
      if (g.is_absorbing(v)) {
        if (!step(g, v, rng.uniform()) || g.is_absorbing(v)) {
          ++t.aborts;
          return;
        }
      }
      int steps = 0;
      while (!g.is_absorbing(v)) {
        if (steps++ >= max_steps || !step(g, v, rng.uniform())) {
          ++t.aborts;
          return;
        }
      }
      ends[w] = v;
    }
    for (int w = 0; w < n; ++w) {
      if (!(ends[w] == g.canonical(targets[static_cast<size_t>(w)]))) return;
    }
    ws.paths.assign(static_cast<size_t>(n), LatticePath{});
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      sample_walk(g, sources[static_cast<size_t>(w)], rng, max_steps,
                  ws.paths[static_cast<size_t>(w)]);
    }
    if (fomin_condition(g, ws.paths)) ++t.hits;
  };
  if (n > 16) throw TooLarge("at most 16 walkers");
  return run_blocks(cfg.samples, cfg.threads, per_sample);
}

McEstimate estimate_affine_lhs(const WeightedDigraph& strip,
                               std::span<const VertexId> sources,
                               std::span<const VertexId> targets,
                               const McConfig& cfg) {
  require_markov(strip);
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("affine estimator simulates on the strip");
  }
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  if (n > 16) throw TooLarge("at most 16 walkers");
  const int M = strip.period();
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(strip);

  // residue -> target index (targets have distinct columns mod M)
  std::vector<int> target_of_residue(static_cast<size_t>(M), -1);
  for (int j = 0; j < n; ++j) {
    const int res = ((targets[static_cast<size_t>(j)].col % M) + M) % M;
    if (target_of_residue[static_cast<size_t>(res)] != -1) {
      throw DomainError("target columns must be distinct mod M");
    }
    target_of_residue[static_cast<size_t>(res)] = j;
  }

  struct Ws {
    std::vector<LatticePath> paths;
  };
  thread_local Ws ws;

  auto per_sample = [&](uint64_t s, BlockTally& t) {
    int end_col[16];
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      VertexId v = sources[static_cast<size_t>(w)];
      int steps = 0;
      while (!strip.is_absorbing(v)) {
        if (steps++ >= max_steps || !step(strip, v, rng.uniform())) {
          ++t.aborts;
          return;
        }
      }
      end_col[w] = v.col;
    }
    // walker 1 fixes the cyclic shift ell (if any)
    const int res1 = ((end_col[0] % M) + M) % M;
    const int j1 = target_of_residue[static_cast<size_t>(res1)];
    if (j1 < 0) return;
    // [ell](1) = 1 - ell mod n in {1..n}  =>  ell = (1 - (j1+1)) mod n
    const int ell = ((1 - (j1 + 1)) % n + n) % n;
    // destination pattern: walker j ends at S^{m + k_ell[j]} b_{[ell](j)}
    int common = 0;
    for (int w = 0; w < n; ++w) {
      const int bj = ((w + 1 - ell - 1) % n + n) % n;  // [ell](w+1) - 1, 0-based
      const int bcol = targets[static_cast<size_t>(bj)].col;
      const int diff = end_col[w] - bcol;
      if (((diff % M) + M) % M != 0) return;
      const int tj = diff / M;
      const int kj = (w + 1) <= ell ? 1 : 0;
      const int m = tj - kj;
      if (w == 0) {
        common = m;
      } else if (m != common) {
        return;
      }
    }
    if (n >= 2) {
      ws.paths.assign(static_cast<size_t>(n), LatticePath{});
      for (int w = 0; w < n; ++w) {
        RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
        sample_walk(strip, sources[static_cast<size_t>(w)], rng, max_steps,
                    ws.paths[static_cast<size_t>(w)]);
      }
      if (!affine_condition(strip, ws.paths)) return;
    }
    // n = 1 estimates the unconstrained quotient hitting probability
    ++t.hits;
  };
  return run_blocks(cfg.samples, cfg.threads, per_sample);
}

McEstimate estimate_affine_rigid_lhs(const WeightedDigraph& strip,
                                     std::span<const VertexId> sources,
                                     std::span<const VertexId> targets,
                                     const McConfig& cfg) {
  require_markov(strip);
  if (strip.kind() != GraphKind::PeriodicStrip) {
    throw WrongGraphKind("rigid affine estimator simulates on the strip");
  }
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  if (n > 16) throw TooLarge("at most 16 walkers");
  const int M = strip.period();
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(strip);

  struct Ws {
    std::vector<LatticePath> paths;
  };
  thread_local Ws ws;

  auto per_sample = [&](uint64_t s, BlockTally& t) {
    int end_col[16];
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      VertexId v = sources[static_cast<size_t>(w)];
      int steps = 0;
      while (!strip.is_absorbing(v)) {
        if (steps++ >= max_steps || !step(strip, v, rng.uniform())) {
          ++t.aborts;
          return;
        }
      }
      end_col[w] = v.col;
    }
    int common = 0;
    for (int w = 0; w < n; ++w) {
      const int diff = end_col[w] - targets[static_cast<size_t>(w)].col;
      if (((diff % M) + M) % M != 0) return;
      const int m = diff / M;
      if (w == 0) {
        common = m;
      } else if (m != common) {
        return;
      }
    }
    if (n >= 2) {
      ws.paths.assign(static_cast<size_t>(n), LatticePath{});
      for (int w = 0; w < n; ++w) {
        RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
        sample_walk(strip, sources[static_cast<size_t>(w)], rng, max_steps,
                    ws.paths[static_cast<size_t>(w)]);
      }
      if (!affine_condition(strip, ws.paths)) return;
    }
    ++t.hits;
  };
  return run_blocks(cfg.samples, cfg.threads, per_sample);
}

McEstimate estimate_cyclic_cylinder_lhs(const WeightedDigraph& cyl,
                                        std::span<const VertexId> sources,
                                        std::span<const VertexId> targets,
                                        const McConfig& cfg) {
  require_markov(cyl);
  if (cyl.kind() != GraphKind::Cylinder) {
    throw WrongGraphKind("cyclic estimator simulates on the cylinder");
  }
  if (sources.size() != targets.size()) throw DomainError("need |sources| == |targets|");
  const int n = static_cast<int>(sources.size());
  if (n > 16) throw TooLarge("at most 16 walkers");
  const int max_steps = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(cyl);

  struct Ws {
    std::vector<LatticePath> paths;
  };
  thread_local Ws ws;

  auto per_sample = [&](uint64_t s, BlockTally& t) {
    VertexId ends[16];
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      VertexId v = cyl.canonical(sources[static_cast<size_t>(w)]);
      int steps = 0;
      while (!cyl.is_absorbing(v)) {
        if (steps++ >= max_steps || !step(cyl, v, rng.uniform())) {
          ++t.aborts;
          return;
        }
      }
      ends[w] = v;
    }
    int ell = -1;
    for (int l = 0; l < n && ell < 0; ++l) {
      bool all = true;
      for (int w = 0; w < n; ++w) {
        int src = ((w - l) % n + n) % n;
        if (!(ends[w] == cyl.canonical(targets[static_cast<size_t>(src)]))) {
          all = false;
          break;
        }
      }
      if (all) ell = l;
    }
    if (ell < 0) return;
    ws.paths.assign(static_cast<size_t>(n), LatticePath{});
    for (int w = 0; w < n; ++w) {
      RngStream rng(cfg.seed, s, static_cast<uint32_t>(w));
      sample_walk(cyl, sources[static_cast<size_t>(w)], rng, max_steps,
                  ws.paths[static_cast<size_t>(w)]);
    }
    if (fomin_condition(cyl, ws.paths)) ++t.hits;
  };
  return run_blocks(cfg.samples, cfg.threads, per_sample);
}

ZReport z_report(const McEstimate& est, double exact) {
  ZReport z;
  z.p_hat = est.p_hat;
  z.std_err = est.std_err;
  z.exact = exact;
  z.samples_used = est.samples_used;
  z.aborts = est.aborts;
  if (est.std_err > 0) {
    z.z = (est.p_hat - exact) / est.std_err;
  } else {
    z.z = est.p_hat == exact ? 0.0 : std::numeric_limits<double>::infinity();
  }
  z.pass = std::abs(z.z) <= 4.0;
  return z;
}

}  // namespace lew::mc
