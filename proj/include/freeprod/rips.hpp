// Finite systems of isometries on finite metric forests: independence,
// the volume identity, Imanishi classification, and dual-tree computation
// through the delta pseudo-metric.
//
// Internal form: every base is a node-spanned subtree and every isometry a
// node bijection. Loaders subdivide segments so that all base endpoints and
// their orbit closure are nodes; isometries then carry whole edges to whole
// edges, which makes orbits of points finite state machines over
// (edge, offset) pairs.
//
// Systems produced by suspending a tree carry group labels: the label of a
// domain node witnesses which group element realizes the map there. Hand
// systems leave labels empty.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "freeprod/tree.hpp"

namespace freeprod {

class RipsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForestNode {
  std::string id;
  int component = 0;
  std::optional<int> special;  // factor index whose fixed point this is
};

struct ForestEdge {
  int a = 0, b = 0;
  Rat length;
};

struct MetricForest {
  std::vector<ForestNode> nodes;
  std::vector<ForestEdge> edges;
  int components = 0;

  Rat total_length() const;
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;  // node -> (edge, other)
};

struct PartialIso {
  std::string name;
  std::vector<int> domain;  // nodes of the domain subtree
  std::vector<int> image;   // image[i] = image node of domain[i]
  std::vector<Word> labels; // optional, aligned with domain (suspensions)

  std::optional<int> map_node(int node) const;
  std::optional<int> unmap_node(int node) const;
};

struct IsometrySystem {
  std::shared_ptr<const FactorSpec> spec;  // may be null for hand systems
  MetricForest forest;
  std::vector<PartialIso> isos;

  // Structural checks: forest is a forest, domains/images are subtrees,
  // induced maps are isometric edge bijections. Throws RipsError.
  void check() const;
  Rat base_length(const PartialIso& p) const;
};

// --- operations ----------------------------------------------------------

// A word in the isometries: indices are 1-based, negative for inverses.
using IsoWord = std::vector<int>;

struct Composite {
  std::vector<int> domain;  // possibly empty
  std::vector<int> image;
  bool nondegenerate = false;  // domain contains at least one edge
  bool identity_on_domain = false;
};
// Rejects unreduced words. Returns nullopt when the composite domain is
// empty.
std::optional<Composite> compose_word(const IsometrySystem& sys, const IsoWord& word);

struct IndependenceVerdict {
  bool violated = false;
  int checked_up_to = 0;
  IsoWord witness;       // when violated
  std::string arc;       // description of a fixed nondegenerate arc
};
IndependenceVerdict independent_generators(const IsometrySystem& sys, int length_budget);

struct VolumeIdentity {
  Rat forest_length;
  Rat base_sum;
  bool equal;
};
VolumeIdentity volume_identity(const IsometrySystem& sys);

enum class LeafClass { kCompact, kDenseCandidate };
struct ImanishiComponent {
  std::vector<int> edges;  // forest edges of the component
  LeafClass tag;
  bool certified;  // orbit enumeration closed within budget
};
std::vector<ImanishiComponent> imanishi_classify(const IsometrySystem& sys, long step_budget);

struct DualTreeResult {
  bool refused = false;
  std::string reason;                      // set when refused
  std::vector<ImanishiComponent> classification;
  std::vector<std::pair<std::string, Rat>> probe_lengths;  // per probe word
  std::optional<MarkedGraphOfGroups> assembled;            // when assembly succeeded
};
// For labeled (suspended) systems computes translation lengths of the probe
// words in the dual tree via shortest delta-paths over the labeled orbit
// graph, and attempts to assemble the quotient graph of groups. Refuses when
// a component is not certified compact or when the leaf search exceeds
// `budget` states.
DualTreeResult dual_tree(const IsometrySystem& sys, std::span<const Word> probes, long budget);

// Gaboriau-Levitt index of the leaf through `node`, evaluated on the leaf
// graph. nullopt when the leaf enumeration exceeds the budget.
std::optional<long> leaf_index(const IsometrySystem& sys, int node, long budget = 100000);

// --- suspension -----------------------------------------------------------

struct SuspendOptions {
  // Extra group elements whose base-lift translates seed the finite subtree
  // K; the fundamental domain (canonical lifts, stable-letter endpoints,
  // generator translates, special points) is always included unless
  // `fundamental_domain` is cleared, in which case only `seeds` plus the
  // special points are used.
  std::vector<Word> seeds;
  bool fundamental_domain = true;
  int z_factor_window = 8;  // power window for infinite-cyclic identifications
};

IsometrySystem suspend(const Tree& t, const SuspendOptions& opt = {});

}  // namespace freeprod
