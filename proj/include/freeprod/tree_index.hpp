// Index theory and length lattices for very small simplicial trees.
//
// The index of a vertex orbit is 2 rk_K(Stab) + v1 - 2, where v1 counts
// stabilizer-orbits of trivially-stabilized directions at a lift. Each
// incident end of the quotient graph is one orbit of directions, so v1 is the
// number of incident ends whose edge group is trivial. Branch and inversion
// orbits are exactly those of positive index.
#pragma once

#include "freeprod/tree.hpp"

namespace freeprod {

struct VertexIndexRecord {
  int vertex;
  long stab_kurosh_rank;
  long v1;
  long index;
  bool inversion_center;
};

struct IndexReport {
  std::vector<VertexIndexRecord> records;
  long total = 0;
  long branch_orbit_count = 0;   // orbits with positive index
  long bound = 0;                // 2 rk_K(G,F) - 2
  bool equality = false;         // total == bound (geometric equality)
  std::vector<int> deficient;    // vertices whose orbit broke the equality sum
};

long local_index(const Tree& t, int vertex);

// Requires a validated very small tree; callers pass the report so refusal is
// explicit. Throws TreeError when the report says otherwise.
IndexReport total_index(const Tree& t, const ValidationReport& rep);

enum class VertexType {
  kTrivialValence3 = 1,
  kPeripheralValence1 = 2,
  kZValence1 = 3,
  kZValence2Mixed = 4,
  kZValence3TwoZ = 5,
  kUnclassified = 0,
};

struct VertexClass {
  int vertex;
  VertexType type;
  std::string reason;  // set when unclassified
};
std::vector<VertexClass> classify_vertices(const Tree& t);

struct LatticeReport {
  // Generators as exact values plus their decomposition over edge-length
  // value classes (columns: one per distinct edge length, in first-seen
  // order). Distances between branch/inversion lifts generate Lambda;
  // translation lengths of marking generators and pairwise products
  // generate L.
  std::vector<Rat> value_classes;
  std::vector<std::pair<Rat, std::vector<BigInt>>> lambda_gens;
  std::vector<std::pair<Rat, std::vector<BigInt>>> length_gens;
  long r_z = 0;             // rank of the integer span of all generator vectors
  long bound = 0;           // rk_f + b - 1
  bool two_lambda_in_l = true;
  bool l_in_lambda = true;
};
LatticeReport lattice_ranks(const Tree& t, const ValidationReport& rep);

// Quotient edge count after merging removable subdivision vertices, checked
// against 3 rk_f + 2|F| - 3.
struct EdgeCountReport {
  long essential_edges = 0;
  long bound = 0;
  bool ok = false;
};
EdgeCountReport edge_count_check(const Tree& t);

// Integer-lattice membership: is target in the Z-span of the rows?
bool in_integer_span(const std::vector<std::vector<BigInt>>& rows,
                     const std::vector<BigInt>& target);
long integer_rank(const std::vector<std::vector<BigInt>>& rows);

}  // namespace freeprod
