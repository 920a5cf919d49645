#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trailscan/family.hpp"
#include "trailscan/rng.hpp"

namespace trailscan {

enum class GraphKind { lattice2d, tree, lattice_hd };

const char* to_string(GraphKind kind);
GraphKind graph_kind_from_name(const std::string& name);

struct NodeRef {
  int32_t layer = 0;
  int64_t offset = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// Layered DAG with edges only between consecutive layers. Nodes are addressed
// as (layer, offset); on the 2d lattice the signed coordinate is
// j = 2*offset - layer, on the d-axis lattice the offset is a mixed-radix pack
// of per-axis coordinates (radix layer+1, axis 0 least significant).
class LayeredDag {
 public:
  static constexpr int64_t kDefaultNodeCap = int64_t{1} << 31;

  LayeredDag() = default;  // empty placeholder; use build() for a real graph

  static LayeredDag build(GraphKind kind, int depth, int dim = 1,
                          int64_t node_cap = kDefaultNodeCap);

  GraphKind kind() const { return kind_; }
  int depth() const { return depth_; }
  int dim() const { return dim_; }
  int64_t node_count() const { return node_count_; }
  int64_t layer_size(int layer) const { return layer_sizes_[layer]; }
  int64_t layer_start(int layer) const { return layer_starts_[layer]; }
  int64_t index_of(NodeRef v) const { return layer_starts_[v.layer] + v.offset; }
  bool valid(NodeRef v) const {
    return v.layer >= 0 && v.layer < depth_ && v.offset >= 0 &&
           v.offset < layer_sizes_[v.layer];
  }
  // lattice2d signed coordinate
  int64_t coord_of(NodeRef v) const { return 2 * v.offset - v.layer; }

  friend bool operator==(const LayeredDag& a, const LayeredDag& b) {
    return a.kind_ == b.kind_ && a.depth_ == b.depth_ && a.dim_ == b.dim_;
  }

 private:
  GraphKind kind_ = GraphKind::lattice2d;
  int depth_ = 1;
  int dim_ = 1;
  int64_t node_count_ = 0;
  std::vector<int64_t> layer_sizes_;
  std::vector<int64_t> layer_starts_;
};

// Steps from the origin, one entry per transition and axis: lattice2d uses
// -1/+1, tree uses 0/1 (left/right child), lattice_hd uses -1/+1 for each of
// dim axes, so steps.size() == (depth-1)*dim.
struct PathSteps {
  GraphKind kind = GraphKind::lattice2d;
  int depth = 1;
  int dim = 1;
  std::vector<int8_t> steps;
};

PathSteps increasing_path(const LayeredDag& g);
std::vector<NodeRef> path_vertices(const LayeredDag& g, const PathSteps& p);
PathSteps steps_from_vertices(const LayeredDag& g,
                              const std::vector<NodeRef>& vertices);

std::vector<NodeRef> predecessors(const LayeredDag& g, NodeRef v);
std::vector<NodeRef> successors(const LayeredDag& g, NodeRef v);

// One realization of the node variables, layer-major contiguous.
struct NodeField {
  LayeredDag graph;
  std::vector<double> values;

  double& at(NodeRef v) { return values[graph.index_of(v)]; }
  double at(NodeRef v) const { return values[graph.index_of(v)]; }
};

NodeField make_field(const LayeredDag& g);
void fill_null(NodeField& field, const Family& fam, Rng& rng);
NodeField sample_null_field(const LayeredDag& g, const Family& fam, Rng& rng);

void plant_vertices(NodeField& field, const std::vector<NodeRef>& vertices,
                    const Family& fam, double theta, Rng& rng);
void plant_path(NodeField& field, const PathSteps& p, const Family& fam,
                double theta, Rng& rng);

}  // namespace trailscan
