#pragma once

#include <mutex>
#include <unordered_map>
#include <vector>

#include "complab/space.hpp"

namespace complab::spaces {

/// Weighted-graph space with the shortest-path metric. Points are vertices;
/// interior points along edges are realized by `subdivide`.
class GraphSpace final : public Space {
 public:
  GraphSpace(int vertex_count, const std::vector<GraphEdge>& edges,
             std::vector<int> boundary_vertices);

  std::string kind() const override { return "graph"; }
  void validate(const SpacePoint& p) const override;
  double distance(const SpacePoint& x, const SpacePoint& y) const override;
  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override;
  SpacePoint sample(std::mt19937_64& rng) const override;

  bool has_boundary() const override { return !boundary_.empty(); }
  std::vector<SpacePoint> boundary_finite() const override;
  double discretization_pitch() const override { return max_edge_weight_; }

  int vertex_count() const { return vertex_count_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const std::vector<int>& boundary_vertices() const { return boundary_; }

  double vertex_distance(int u, int v) const;
  std::vector<int> shortest_path(int u, int v) const;

 private:
  struct Arc {
    int to;
    double weight;
  };

  const std::vector<double>& dist_from(int source) const;

  int vertex_count_;
  std::vector<GraphEdge> edges_;
  std::vector<int> boundary_;
  std::vector<std::vector<Arc>> adjacency_;
  double max_edge_weight_ = 0.0;

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<int, std::vector<double>> dist_cache_;
  mutable std::unordered_map<int, std::vector<int>> pred_cache_;
};

}  // namespace complab::spaces
