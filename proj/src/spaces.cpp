#include "cqm/spaces.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <sstream>

namespace cqm::spaces {

void FiniteGraphSpace::add_edge(int u, int v) {
  if (u == v) return;
  if (u < 0 || v < 0 || u >= n || v >= n) throw Error("edge endpoint out of range");
  if (std::find(adj[static_cast<std::size_t>(u)].begin(), adj[static_cast<std::size_t>(u)].end(), v) ==
      adj[static_cast<std::size_t>(u)].end()) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
}

FiniteGraphSpace FiniteGraphSpace::path(int n) {
  FiniteGraphSpace g;
  g.n = n;
  g.adj.resize(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

FiniteGraphSpace FiniteGraphSpace::cycle(int n) {
  FiniteGraphSpace g = path(n);
  if (n >= 3) g.add_edge(n - 1, 0);
  return g;
}

FiniteGraphSpace FiniteGraphSpace::from_edge_list(std::string_view text) {
  std::vector<std::pair<int, int>> edges;
  int max_vertex = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;
    if (!(ls >> v)) throw Error("edge list: line with a single endpoint: " + line);
    if (u < 0 || v < 0) throw Error("edge list: negative vertex id");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_vertex = std::max({max_vertex, static_cast<int>(u), static_cast<int>(v)});
  }
  if (max_vertex < 0) throw Error("edge list: no edges");
  FiniteGraphSpace g;
  g.n = max_vertex + 1;
  g.adj.resize(static_cast<std::size_t>(g.n));
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

std::vector<std::vector<int>> all_pairs_distances(const FiniteGraphSpace& g) {
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(g.n),
                                     std::vector<int>(static_cast<std::size_t>(g.n), -1));
  for (int s = 0; s < g.n; ++s) {
    auto& d = dist[static_cast<std::size_t>(s)];
    d[static_cast<std::size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g.adj[static_cast<std::size_t>(v)]) {
        if (d[static_cast<std::size_t>(w)] == -1) {
          d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(v)] + 1;
          q.push_back(w);
        }
      }
    }
    for (int v = 0; v < g.n; ++v) {
      if (d[static_cast<std::size_t>(v)] == -1) {
        throw Disconnected("graph is disconnected: no path " + std::to_string(s) + " -> " +
                           std::to_string(v));
      }
    }
  }
  return dist;
}

double delta_four_point(const FiniteGraphSpace& g) {
  auto d = all_pairs_distances(g);
  auto dd = [&](int a, int b) { return d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
  int max_gap = 0;
  for (int x = 0; x < g.n; ++x) {
    for (int y = x + 1; y < g.n; ++y) {
      for (int z = y + 1; z < g.n; ++z) {
        for (int w = z + 1; w < g.n; ++w) {
          int s1 = dd(x, y) + dd(z, w);
          int s2 = dd(x, z) + dd(y, w);
          int s3 = dd(x, w) + dd(y, z);
          int lo = std::min({s1, s2, s3});
          int hi = std::max({s1, s2, s3});
          int med = s1 + s2 + s3 - lo - hi;
          max_gap = std::max(max_gap, hi - med);
        }
      }
    }
  }
  return static_cast<double>(max_gap) / 2.0;
}

int TreeBall::index_of(const ReducedWord& w) const {
  auto it = index_.find(std::string(reinterpret_cast<const char*>(w.letters().data()), w.size()));
  return it == index_.end() ? -1 : it->second;
}

TreeBall tree_ball(int radius, int rank) {
  if (radius < 0) throw Error("tree_ball: negative radius");
  TreeBall ball;
  ball.radius = radius;
  ball.rank = rank;
  ball.word_of.push_back(ReducedWord(rank));
  ball.index_.emplace("", 0);
  std::size_t sphere_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t sphere_end = ball.word_of.size();
    for (std::size_t i = sphere_begin; i < sphere_end; ++i) {
      std::vector<Letter> base = ball.word_of[i].letters();
      for (int gen = 1; gen <= rank; ++gen) {
        for (Letter l : {static_cast<Letter>(gen), static_cast<Letter>(-gen)}) {
          if (!base.empty() && base.back() == words::inverse_letter(l)) continue;
          std::vector<Letter> next = base;
          next.push_back(l);
          std::string key(reinterpret_cast<const char*>(next.data()), next.size());
          if (ball.index_.emplace(key, static_cast<int>(ball.word_of.size())).second) {
            ball.word_of.push_back(ReducedWord::from_reduced(rank, std::move(next)));
          }
        }
      }
    }
    sphere_begin = sphere_end;
  }
  ball.graph.n = static_cast<int>(ball.word_of.size());
  ball.graph.adj.resize(ball.word_of.size());
  for (std::size_t i = 0; i < ball.word_of.size(); ++i) {
    const auto& w = ball.word_of[i];
    if (w.empty()) continue;
    std::vector<Letter> parent(w.letters().begin(), w.letters().end() - 1);
    std::string key(reinterpret_cast<const char*>(parent.data()), parent.size());
    ball.graph.add_edge(static_cast<int>(i), ball.index_.at(key));
  }
  return ball;
}

SearchResult min_cost_path(const GraphSearchProblem& p) {
  const FiniteGraphSpace& g = *p.graph;
  for (const auto& s : p.shortcuts) {
    if (s.cost < 1) throw Error("shortcut cost must be >= 1");
  }
  std::vector<std::vector<GraphShortcut>> by_source(static_cast<std::size_t>(g.n));
  for (const auto& s : p.shortcuts) by_source[static_cast<std::size_t>(s.from)].push_back(s);

  const long long inf = -1;
  std::vector<long long> cost(static_cast<std::size_t>(g.n), inf);
  std::vector<long long> base_len(static_cast<std::size_t>(g.n), 0);
  using Entry = std::pair<long long, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  cost[static_cast<std::size_t>(p.source)] = 0;
  heap.emplace(0, p.source);
  SearchResult result;
  while (!heap.empty()) {
    auto [c, v] = heap.top();
    heap.pop();
    if (cost[static_cast<std::size_t>(v)] != c) continue;
    ++result.expanded;
    auto relax = [&](int t, long long nc, long long nb) {
      auto& ct = cost[static_cast<std::size_t>(t)];
      auto& bt = base_len[static_cast<std::size_t>(t)];
      if (ct == inf || nc < ct || (nc == ct && nb < bt)) {
        bool push = (ct == inf || nc < ct);
        ct = nc;
        bt = nb;
        if (push) heap.emplace(nc, t);
      }
    };
    for (int t : g.adj[static_cast<std::size_t>(v)]) {
      relax(t, c + 1, base_len[static_cast<std::size_t>(v)] + 1);
    }
    for (const auto& s : by_source[static_cast<std::size_t>(v)]) {
      relax(s.to, c + s.cost, base_len[static_cast<std::size_t>(v)] + s.cost);
    }
  }
  if (cost[static_cast<std::size_t>(p.target)] == inf) {
    throw RadiusTooSmall("target unreachable in the search region");
  }
  result.cost = cost[static_cast<std::size_t>(p.target)];
  result.base_edge_length = base_len[static_cast<std::size_t>(p.target)];
  return result;
}

TreeRegion TreeRegion::ball(long long radius, int /*rank*/) {
  TreeRegion r;
  r.kind = Kind::BallAroundIdentity;
  r.radius = radius;
  return r;
}

TreeRegion TreeRegion::tube(const ReducedWord& source, const ReducedWord& target, long long radius) {
  TreeRegion r;
  r.kind = Kind::TubeAroundGeodesic;
  r.radius = radius;
  r.source = source;
  r.target = target;
  return r;
}

bool TreeRegion::contains(const ReducedWord& v) const {
  if (kind == Kind::BallAroundIdentity) {
    return static_cast<long long>(v.size()) <= radius;
  }
  // Distance from v to the geodesic [source, target].
  ReducedWord sv = words::multiply(words::inverse(source), v);
  ReducedWord st = words::multiply(words::inverse(source), target);
  std::size_t lcp = 0;
  while (lcp < sv.size() && lcp < st.size() && sv.at(lcp) == st.at(lcp)) ++lcp;
  return static_cast<long long>(sv.size() - lcp) <= radius;
}

SearchResult min_cost_path(const TreeSearchProblem& p) {
  for (const auto& s : p.shortcuts) {
    if (s.cost < 1) throw Error("shortcut cost must be >= 1");
  }
  if (!p.region.contains(p.source) || !p.region.contains(p.target)) {
    throw RadiusTooSmall("search region does not contain the endpoints");
  }

  // A* with the consistent lower bound (num/den) * d(v, target), where
  // num/den is the cheapest cost-per-base-edge over all edge kinds. With a
  // consistent heuristic the first settled cost at the target is exact.
  long long num = 1, den = 1;
  for (const auto& s : p.shortcuts) {
    long long len = std::max<long long>(1, static_cast<long long>(s.label.size()));
    if (s.cost * den < num * len) {
      num = s.cost;
      den = len;
    }
  }

  struct NodeData {
    long long cost;
    long long base_len;
  };
  std::unordered_map<std::string, NodeData> best;
  auto key_of = [](const ReducedWord& w) {
    return std::string(reinterpret_cast<const char*>(w.letters().data()), w.size());
  };

  auto h = [&](const ReducedWord& w) {
    std::size_t lcp = 0;
    while (lcp < w.size() && lcp < p.target.size() && w.at(lcp) == p.target.at(lcp)) ++lcp;
    long long d = static_cast<long long>(w.size() + p.target.size() - 2 * lcp);
    return num * d;
  };

  struct Entry {
    long long priority;
    long long cost;
    long long base_len;
    ReducedWord vertex;
    bool operator>(const Entry& o) const {
      return priority != o.priority ? priority > o.priority : cost > o.cost;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  best[key_of(p.source)] = NodeData{0, 0};
  heap.push(Entry{h(p.source), 0, 0, p.source});
  SearchResult result;
  const std::string target_key = key_of(p.target);

  while (!heap.empty()) {
    Entry e = heap.top();
    heap.pop();
    std::string vk = key_of(e.vertex);
    auto it = best.find(vk);
    if (it == best.end() || it->second.cost != e.cost || it->second.base_len != e.base_len) continue;
    if (vk == target_key) {
      result.cost = e.cost;
      result.base_edge_length = e.base_len;
      // Per-query sanity: the geodesic is an admissible path (tube regions
      // contain it and balls are convex), and no path beats the cheapest
      // cost-per-distance ratio.
      long long d = 0;
      {
        std::size_t lcp = 0;
        while (lcp < p.source.size() && lcp < p.target.size() &&
               p.source.at(lcp) == p.target.at(lcp)) {
          ++lcp;
        }
        d = static_cast<long long>(p.source.size() + p.target.size() - 2 * lcp);
      }
      if (result.cost > d || result.cost * den < d * num) {
        throw Error("min_cost_path: cost " + std::to_string(result.cost) +
                    " violates its bounds for d = " + std::to_string(d));
      }
      return result;
    }
    ++result.expanded;
    auto relax = [&](const ReducedWord& t, long long step_cost, long long step_len) {
      if (!p.region.contains(t)) return;
      long long nc = e.cost + step_cost;
      long long nb = e.base_len + step_len;
      std::string tk = key_of(t);
      auto bit = best.find(tk);
      if (bit == best.end() || nc < bit->second.cost ||
          (nc == bit->second.cost && nb < bit->second.base_len)) {
        best[tk] = NodeData{nc, nb};
        heap.push(Entry{nc * den + h(t), nc, nb, t});
      }
    };
    // Unit edges.
    for (int gen = 1; gen <= p.rank; ++gen) {
      for (Letter l : {static_cast<Letter>(gen), static_cast<Letter>(-gen)}) {
        std::vector<Letter> next = e.vertex.letters();
        if (!next.empty() && next.back() == words::inverse_letter(l)) {
          next.pop_back();
        } else {
          next.push_back(l);
        }
        relax(ReducedWord::from_reduced(p.rank, std::move(next)), 1, 1);
      }
    }
    // Shortcut edges.
    for (const auto& s : p.shortcuts) {
      relax(words::multiply(e.vertex, s.label), s.cost, static_cast<long long>(s.label.size()));
    }
  }
  throw RadiusTooSmall("target unreachable in the search region");
}

}  // namespace cqm::spaces
