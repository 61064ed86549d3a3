#include "complab/graph_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace complab::spaces {

namespace {

[[noreturn]] void construction_fail(const std::string& what) {
  throw std::invalid_argument("graph: " + what);
}

[[noreturn]] void domain_fail(const std::string& what) {
  throw std::domain_error("graph: " + what);
}

}  // namespace

GraphSpace::GraphSpace(int vertex_count, const std::vector<GraphEdge>& edges,
                       std::vector<int> boundary_vertices)
    : vertex_count_(vertex_count),
      edges_(edges),
      boundary_(std::move(boundary_vertices)) {
  if (vertex_count < 1) construction_fail("needs at least one vertex");
  adjacency_.resize(vertex_count);
  for (const auto& e : edges_) {
    if (e.u < 0 || e.u >= vertex_count || e.v < 0 || e.v >= vertex_count) {
      construction_fail("edge endpoint out of range");
    }
    if (e.u == e.v) construction_fail("self-loop edge");
    if (e.weight <= 0.0) construction_fail("edge weights must be positive");
    adjacency_[e.u].push_back({e.v, e.weight});
    adjacency_[e.v].push_back({e.u, e.weight});
    max_edge_weight_ = std::max(max_edge_weight_, e.weight);
  }
  for (int b : boundary_) {
    if (b < 0 || b >= vertex_count) construction_fail("boundary vertex out of range");
  }
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());

  // Connectivity check.
  std::vector<char> seen(vertex_count, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& arc : adjacency_[u]) {
      if (!seen[arc.to]) {
        seen[arc.to] = 1;
        stack.push_back(arc.to);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    construction_fail("graph is disconnected");
  }
}

void GraphSpace::validate(const SpacePoint& p) const {
  if (p.index < 0 || p.index >= vertex_count_) {
    domain_fail("vertex id out of range");
  }
}

const std::vector<double>& GraphSpace::dist_from(int source) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = dist_cache_.find(source);
  if (it != dist_cache_.end()) return it->second;

  std::vector<double> dist(vertex_count_, std::numeric_limits<double>::infinity());
  std::vector<int> pred(vertex_count_, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  dist[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : adjacency_[u]) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        pred[arc.to] = u;
        queue.push({nd, arc.to});
      } else if (nd == dist[arc.to] && u < pred[arc.to]) {
        pred[arc.to] = u;  // deterministic tie-break toward smaller ids
      }
    }
  }
  pred_cache_[source] = std::move(pred);
  return dist_cache_.emplace(source, std::move(dist)).first->second;
}

double GraphSpace::vertex_distance(int u, int v) const { return dist_from(u)[v]; }

double GraphSpace::distance(const SpacePoint& x, const SpacePoint& y) const {
  validate(x);
  validate(y);
  return vertex_distance(x.index, y.index);
}

std::vector<int> GraphSpace::shortest_path(int u, int v) const {
  dist_from(u);
  std::vector<int> pred;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    pred = pred_cache_.at(u);
  }
  std::vector<int> path;
  for (int w = v; w != -1; w = pred[w]) path.push_back(w);
  std::reverse(path.begin(), path.end());
  if (path.front() != u) domain_fail("no path between vertices");
  return path;
}

std::vector<GeodesicPath> GraphSpace::geodesics(const SpacePoint& x,
                                                const SpacePoint& y,
                                                double /*step*/) const {
  validate(x);
  validate(y);
  if (x.index == y.index) domain_fail("degenerate geodesic request (x == y)");
  const auto vertices = shortest_path(x.index, y.index);

  GeodesicPath path;
  path.start = x;
  path.end = y;
  path.snap_pitch = max_edge_weight_;
  path.params.reserve(vertices.size());
  path.points.reserve(vertices.size());
  double t = 0.0;
  int prev = -1;
  for (int v : vertices) {
    if (prev >= 0) t += vertex_distance(prev, v);
    path.params.push_back(t);
    path.points.push_back(SpacePoint{v, 0.0, 0.0});
    prev = v;
  }
  path.length = t;
  const auto params = path.params;
  const auto points = path.points;
  path.eval = [params, points](double tt) {
    // Snap to the nearest path vertex.
    auto it = std::lower_bound(params.begin(), params.end(), tt);
    if (it == params.begin()) return points.front();
    if (it == params.end()) return points.back();
    const auto hi = static_cast<size_t>(it - params.begin());
    return (tt - params[hi - 1] <= params[hi] - tt) ? points[hi - 1] : points[hi];
  };
  return {path};
}

SpacePoint GraphSpace::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> u(0, vertex_count_ - 1);
  return {u(rng), 0.0, 0.0};
}

std::vector<SpacePoint> GraphSpace::boundary_finite() const {
  std::vector<SpacePoint> out;
  out.reserve(boundary_.size());
  for (int b : boundary_) out.push_back({b, 0.0, 0.0});
  return out;
}

SpacePtr make_graph(int vertex_count, const std::vector<GraphEdge>& edges,
                    const std::vector<int>& boundary_vertices) {
  return std::make_shared<GraphSpace>(vertex_count, edges, boundary_vertices);
}

SpacePtr subdivide(const SpacePtr& space, double h) {
  if (h <= 0.0) domain_fail("subdivision pitch must be positive");
  auto graph = std::dynamic_pointer_cast<const GraphSpace>(space);
  if (!graph) {
    throw std::domain_error("subdivide: only graph spaces can be subdivided");
  }
  std::vector<GraphEdge> edges;
  int next = graph->vertex_count();
  for (const auto& e : graph->edges()) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(e.weight / h - 1e-12)));
    if (pieces == 1) {
      edges.push_back(e);
      continue;
    }
    const double w = e.weight / pieces;
    int prev = e.u;
    for (int i = 1; i < pieces; ++i) {
      edges.push_back({prev, next, w});
      prev = next++;
    }
    edges.push_back({prev, e.v, w});
  }
  return std::make_shared<GraphSpace>(next, edges, graph->boundary_vertices());
}

}  // namespace complab::spaces
