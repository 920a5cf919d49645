#include "trailscan/graph.hpp"

#include <limits>
#include <stdexcept>

namespace trailscan {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::lattice2d:
      return "lattice2d";
    case GraphKind::tree:
      return "tree";
    case GraphKind::lattice_hd:
      return "lattice_hd";
  }
  return "?";
}

GraphKind graph_kind_from_name(const std::string& name) {
  if (name == "lattice2d") return GraphKind::lattice2d;
  if (name == "tree") return GraphKind::tree;
  if (name == "lattice_hd") return GraphKind::lattice_hd;
  throw std::invalid_argument("unknown graph kind: " + name);
}

LayeredDag LayeredDag::build(GraphKind kind, int depth, int dim,
                             int64_t node_cap) {
  if (depth < 1) throw std::invalid_argument("build: depth must be >= 1");
  if (kind == GraphKind::lattice_hd) {
    if (dim < 1) throw std::invalid_argument("build: dim must be >= 1");
  } else {
    dim = 1;
  }
  LayeredDag g;
  g.kind_ = kind;
  g.depth_ = depth;
  g.dim_ = dim;
  g.layer_sizes_.resize(depth);
  g.layer_starts_.resize(depth);
  int64_t total = 0;
  constexpr int64_t kHardLimit = std::numeric_limits<int64_t>::max() / 4;
  for (int i = 0; i < depth; ++i) {
    int64_t size = 1;
    bool huge = false;
    switch (kind) {
      case GraphKind::lattice2d:
        size = i + 1;
        break;
      case GraphKind::tree:
        huge = i >= 62;
        if (!huge) size = int64_t{1} << i;
        break;
      case GraphKind::lattice_hd:
        for (int a = 0; a < dim && !huge; ++a) {
          huge = size > kHardLimit / (i + 1);
          if (!huge) size *= (i + 1);
        }
        break;
    }
    if (huge || size > kHardLimit - total) {
      throw std::length_error("build: graph would need more than " +
                              std::to_string(kHardLimit) + " nodes, cap is " +
                              std::to_string(node_cap));
    }
    g.layer_starts_[i] = total;
    g.layer_sizes_[i] = size;
    total += size;
    if (total > node_cap) {
      throw std::length_error("build: graph would need " +
                              std::to_string(total) + " nodes by layer " +
                              std::to_string(i) + ", cap is " +
                              std::to_string(node_cap));
    }
  }
  g.node_count_ = total;
  return g;
}

namespace {

void check_path_matches(const LayeredDag& g, const PathSteps& p,
                        const char* what) {
  if (p.kind != g.kind() || p.depth != g.depth() || p.dim != g.dim()) {
    throw std::invalid_argument(std::string(what) +
                                ": path does not match graph");
  }
  size_t want = static_cast<size_t>(g.depth() - 1) * g.dim();
  if (p.steps.size() != want) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(want) + " step entries, got " +
                                std::to_string(p.steps.size()));
  }
}

int8_t check_step(GraphKind kind, int8_t s, const char* what) {
  bool ok = (kind == GraphKind::tree) ? (s == 0 || s == 1)
                                      : (s == -1 || s == 1);
  if (!ok) {
    throw std::invalid_argument(std::string(what) + ": step " +
                                std::to_string(int(s)) +
                                " outside the alphabet of " + to_string(kind));
  }
  return s;
}

// radix of the per-axis pack at a given layer
inline int64_t hd_radix(int layer) { return layer + 1; }

}  // namespace

PathSteps increasing_path(const LayeredDag& g) {
  PathSteps p;
  p.kind = g.kind();
  p.depth = g.depth();
  p.dim = g.dim();
  p.steps.assign(static_cast<size_t>(g.depth() - 1) * g.dim(), int8_t{1});
  return p;
}

std::vector<NodeRef> path_vertices(const LayeredDag& g, const PathSteps& p) {
  check_path_matches(g, p, "path_vertices");
  std::vector<NodeRef> out(g.depth());
  out[0] = NodeRef{0, 0};
  switch (g.kind()) {
    case GraphKind::lattice2d: {
      int64_t o = 0;
      for (int i = 1; i < g.depth(); ++i) {
        int8_t s = check_step(g.kind(), p.steps[i - 1], "path_vertices");
        o += (s > 0) ? 1 : 0;
        out[i] = NodeRef{i, o};
      }
      break;
    }
    case GraphKind::tree: {
      int64_t o = 0;
      for (int i = 1; i < g.depth(); ++i) {
        int8_t s = check_step(g.kind(), p.steps[i - 1], "path_vertices");
        o = 2 * o + s;
        out[i] = NodeRef{i, o};
      }
      break;
    }
    case GraphKind::lattice_hd: {
      std::vector<int64_t> c(g.dim(), 0);
      for (int i = 1; i < g.depth(); ++i) {
        for (int a = 0; a < g.dim(); ++a) {
          int8_t s = check_step(g.kind(), p.steps[(i - 1) * g.dim() + a],
                                "path_vertices");
          c[a] += (s > 0) ? 1 : 0;
        }
        int64_t o = 0;
        for (int a = g.dim() - 1; a >= 0; --a) o = o * hd_radix(i) + c[a];
        out[i] = NodeRef{i, o};
      }
      break;
    }
  }
  return out;
}

PathSteps steps_from_vertices(const LayeredDag& g,
                              const std::vector<NodeRef>& vertices) {
  if (static_cast<int>(vertices.size()) != g.depth()) {
    throw std::invalid_argument("steps_from_vertices: need one vertex per layer");
  }
  PathSteps p;
  p.kind = g.kind();
  p.depth = g.depth();
  p.dim = g.dim();
  p.steps.reserve(static_cast<size_t>(g.depth() - 1) * g.dim());
  for (int i = 0; i < g.depth(); ++i) {
    if (vertices[i].layer != i || !g.valid(vertices[i])) {
      throw std::invalid_argument("steps_from_vertices: invalid vertex at layer " +
                                  std::to_string(i));
    }
  }
  for (int i = 1; i < g.depth(); ++i) {
    int64_t prev = vertices[i - 1].offset;
    int64_t cur = vertices[i].offset;
    switch (g.kind()) {
      case GraphKind::lattice2d: {
        int64_t d = cur - prev;
        if (d != 0 && d != 1) {
          throw std::invalid_argument(
              "steps_from_vertices: not an edge at layer " + std::to_string(i));
        }
        p.steps.push_back(d == 1 ? int8_t{1} : int8_t{-1});
        break;
      }
      case GraphKind::tree: {
        if (cur / 2 != prev) {
          throw std::invalid_argument(
              "steps_from_vertices: not an edge at layer " + std::to_string(i));
        }
        p.steps.push_back(static_cast<int8_t>(cur & 1));
        break;
      }
      case GraphKind::lattice_hd: {
        int64_t rp = hd_radix(i - 1), rc = hd_radix(i);
        int64_t op = prev, oc = cur;
        for (int a = 0; a < g.dim(); ++a) {
          int64_t cp = op % rp, cc = oc % rc;
          op /= rp;
          oc /= rc;
          int64_t d = cc - cp;
          if (d != 0 && d != 1) {
            throw std::invalid_argument(
                "steps_from_vertices: not an edge at layer " + std::to_string(i));
          }
          p.steps.push_back(d == 1 ? int8_t{1} : int8_t{-1});
        }
        break;
      }
    }
  }
  return p;
}

std::vector<NodeRef> predecessors(const LayeredDag& g, NodeRef v) {
  if (!g.valid(v)) throw std::invalid_argument("predecessors: invalid node");
  if (v.layer == 0) {
    throw std::invalid_argument("predecessors: the origin has none");
  }
  std::vector<NodeRef> out;
  int pl = v.layer - 1;
  switch (g.kind()) {
    case GraphKind::lattice2d:
      if (v.offset - 1 >= 0) out.push_back(NodeRef{pl, v.offset - 1});
      if (v.offset <= pl) out.push_back(NodeRef{pl, v.offset});
      break;
    case GraphKind::tree:
      out.push_back(NodeRef{pl, v.offset / 2});
      break;
    case GraphKind::lattice_hd: {
      int d = g.dim();
      std::vector<int64_t> c(d);
      int64_t o = v.offset;
      int64_t rc = hd_radix(v.layer);
      for (int a = 0; a < d; ++a) {
        c[a] = o % rc;
        o /= rc;
      }
      int64_t rp = hd_radix(pl);
      for (int mask = 0; mask < (1 << d); ++mask) {
        int64_t po = 0;
        bool ok = true;
        for (int a = d - 1; a >= 0; --a) {
          int64_t pc = c[a] - ((mask >> a) & 1);
          if (pc < 0 || pc > pl) {
            ok = false;
            break;
          }
          po = po * rp + pc;
        }
        if (ok) out.push_back(NodeRef{pl, po});
      }
      break;
    }
  }
  return out;
}

std::vector<NodeRef> successors(const LayeredDag& g, NodeRef v) {
  if (!g.valid(v)) throw std::invalid_argument("successors: invalid node");
  std::vector<NodeRef> out;
  if (v.layer + 1 >= g.depth()) return out;
  int nl = v.layer + 1;
  switch (g.kind()) {
    case GraphKind::lattice2d:
      out.push_back(NodeRef{nl, v.offset});
      out.push_back(NodeRef{nl, v.offset + 1});
      break;
    case GraphKind::tree:
      out.push_back(NodeRef{nl, 2 * v.offset});
      out.push_back(NodeRef{nl, 2 * v.offset + 1});
      break;
    case GraphKind::lattice_hd: {
      int d = g.dim();
      std::vector<int64_t> c(d);
      int64_t o = v.offset;
      int64_t rc = hd_radix(v.layer);
      for (int a = 0; a < d; ++a) {
        c[a] = o % rc;
        o /= rc;
      }
      int64_t rn = hd_radix(nl);
      for (int mask = 0; mask < (1 << d); ++mask) {
        int64_t no = 0;
        for (int a = d - 1; a >= 0; --a) {
          no = no * rn + c[a] + ((mask >> a) & 1);
        }
        out.push_back(NodeRef{nl, no});
      }
      break;
    }
  }
  return out;
}

NodeField make_field(const LayeredDag& g) {
  NodeField f;
  f.graph = g;
  f.values.assign(static_cast<size_t>(g.node_count()), 0.0);
  return f;
}

void fill_null(NodeField& field, const Family& fam, Rng& rng) {
  fam.fill_iid(field.values, 0.0, rng);
}

NodeField sample_null_field(const LayeredDag& g, const Family& fam, Rng& rng) {
  NodeField f = make_field(g);
  fill_null(f, fam, rng);
  return f;
}

void plant_vertices(NodeField& field, const std::vector<NodeRef>& vertices,
                    const Family& fam, double theta, Rng& rng) {
  for (NodeRef v : vertices) {
    if (!field.graph.valid(v)) {
      throw std::invalid_argument("plant_vertices: invalid vertex");
    }
    field.at(v) = fam.sample(theta, rng);
  }
}

void plant_path(NodeField& field, const PathSteps& p, const Family& fam,
                double theta, Rng& rng) {
  plant_vertices(field, path_vertices(field.graph, p), fam, theta, rng);
}

}  // namespace trailscan
