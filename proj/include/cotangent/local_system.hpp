#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "cotangent/simplicial.hpp"

namespace cotangent {

// A local system of rank r on a triangulated space: an invertible r x r
// transport matrix for every edge, flat in the sense that transport around
// every triangle is the identity. Transport along {i, j} from i to j is
// transport(i, j); the reverse direction is its inverse.
class LocalSystem {
 public:
  LocalSystem(SimplicialComplex space, const Field& f, int rank);

  static LocalSystem trivial(SimplicialComplex space, const Field& f, int rank);

  const SimplicialComplex& space() const { return space_; }
  const Field& field() const { return field_; }
  int rank() const { return rank_; }

  // Sets transport from i to j along the edge {i, j} (i != j, edge must
  // exist, matrix must be invertible).
  void set_transport(int i, int j, const Matrix& t);
  bool has_transport(int i, int j) const;
  // Transport between equal or adjacent vertices.
  Matrix transport(int from, int to) const;

  bool is_flat() const;
  // invariant_error naming the first missing edge or failing triangle.
  void require_flat() const;

 private:
  SimplicialComplex space_;
  Field field_;
  int rank_;
  // Key (i, j) with i < j stores transport i -> j; the inverse is cached.
  std::map<std::pair<int, int>, Matrix> fwd_, bwd_;
};

// Cochain complex of the space with coefficients in the system; the stalk of
// a simplex sits at its first vertex, and the front face of the differential
// is corrected by transport. d^2 = 0 precisely when the system is flat, so
// the construction calls require_flat().
ChainComplex twisted_cochain_complex(const LocalSystem& p);

// --- flat systems for tests and experiments ---

// Random gauge transform of the trivial system: transport i -> j is
// A_j A_i^{-1} for random invertible A_v, hence flat with trivial monodromy.
LocalSystem gauge_random_system(const SimplicialComplex& space, const Field& f,
                                int rank, std::uint64_t seed);

// Transport along each edge is m raised to the integer weight of the edge;
// flat when the weights form a simplicial cocycle. Weights are indexed by
// simplices(1) order. Multiple (weights, matrix) pairs multiply together and
// then all matrices must commute pairwise.
LocalSystem exponent_system(const SimplicialComplex& space, const Field& f,
                            const std::vector<std::pair<std::vector<long>, Matrix>>& factors);

// Integer basis of the space of 1-cocycles (denominators cleared), each
// indexed by simplices(1) order.
std::vector<std::vector<long>> integer_cocycle_basis(const SimplicialComplex& space);

// Basis of 1-cocycles mod p, entries lifted to {0, ..., p-1}. Useful for
// order-p monodromy (e.g. sign systems with p = 2), where classes need not
// lift to integer cocycles.
std::vector<std::vector<long>> mod_p_cocycle_basis(const SimplicialComplex& space,
                                                   std::int64_t p);

// Some integer 1-cocycle with nonzero class in H^1, if one exists.
std::optional<std::vector<long>> nontrivial_cocycle(const SimplicialComplex& space);

// Random invertible matrix with small entries; deterministic in the engine
// state.
Matrix random_invertible(const Field& f, std::size_t n, std::mt19937_64& rng);

// Checks H^1(Z; F_p) = 0 for p in {2, 3, 5, 7} and over the given field.
// A heuristic stand-in for simple connectivity (it can pass on spaces with
// perfect fundamental group); callers that need pi_1 = 1 should warn rather
// than fail when this is false.
bool h1_probe_vanishes(const SimplicialComplex& space, const Field& also);

// Local system of homomorphisms: the stalk over v is Hom(P_v, Q_v) with
// row-major coordinates (a, b) -> a * rank(P) + b, and transport by
// conjugation M -> T_Q M T_P^{-1}.
LocalSystem hom_system(const LocalSystem& p, const LocalSystem& q);
LocalSystem end_system(const LocalSystem& p);

// Dimension of the space of maps of local systems P -> Q, i.e. families
// f_v : P_v -> Q_v with T_Q f_i = f_j T_P along every edge.
std::size_t flat_hom_dimension(const LocalSystem& p, const LocalSystem& q);

// A local system whose stalk coordinates carry internal degrees preserved by
// all transports.
struct GradedLocalSystem {
  LocalSystem system;
  std::vector<int> degrees;

  GradedLocalSystem(LocalSystem s, std::vector<int> deg);
  static GradedLocalSystem ungraded(LocalSystem s);

  int min_degree() const;
  int max_degree() const;
  std::vector<std::size_t> coords_of_degree(int t) const;
  // Restriction to the coordinates of one internal degree.
  LocalSystem graded_piece(int t) const;
  // invariant_error if some transport mixes internal degrees.
  void require_degree_preserving() const;
};

// Hom system with internal degree deg_Q(a) - deg_P(b) on coordinate (a, b).
GradedLocalSystem graded_hom_system(const GradedLocalSystem& p,
                                    const GradedLocalSystem& q);
// End system with internal degree deg(a) - deg(b) on coordinate (a, b).
GradedLocalSystem graded_end_system(const GradedLocalSystem& v);

// A homotopy-coherent coefficient system. Every vertex carries the same
// coordinate layout (`degrees`) but its own internal differential, making
// the stalks genuinely different complexes; every simplex {i_0 < ... < i_e}
// of dimension e >= 1 may carry an operator stalk(i_0) -> stalk(i_e) of
// internal degree 1 - e. Edges are chain maps, triangles are homotopies
// correcting the failure of edge composites to be flat, and so on upward.
// The identities tying the layers together are exactly "the module built
// from this data has a square-zero differential", and they are checked
// there rather than here; require_shapes only enforces degree bookkeeping
// and square-zero internal differentials.
struct HomotopyLocalSystem {
  SimplicialComplex space;
  Field field;
  std::vector<int> degrees;           // internal degree of each stalk coordinate
  std::vector<Matrix> internal_diff;  // one rank x rank matrix per vertex
  std::map<Simplex, Matrix> ops;      // keyed by simplices of dimension >= 1

  std::size_t rank() const { return degrees.size(); }

  // Degree bookkeeping: internal differentials raise the degree by one and
  // square to zero; the operator on a dimension-e simplex shifts it by 1-e.
  // Throws invariant_error naming the offending vertex or simplex.
  void require_shapes() const;

  // The stalk complex at a vertex (shared layout, per-vertex differential).
  ChainComplex stalk_complex(int v) const;

  // A strict system viewed as homotopy data: the given coordinate degrees,
  // zero internal differentials, edge operators equal to the transports, and
  // no higher corrections.
  static HomotopyLocalSystem strict(const GradedLocalSystem& p);
  static HomotopyLocalSystem strict(const LocalSystem& p);

  // Stalkwise cone of the identity of a strict system: each stalk becomes
  // the acyclic two-step complex id : P_v[1] -> P_v, transports act
  // diagonally, and no higher corrections are needed.
  static HomotopyLocalSystem cone_of_identity(const GradedLocalSystem& p);
  static HomotopyLocalSystem cone_of_identity(const LocalSystem& p);
};

}  // namespace cotangent
