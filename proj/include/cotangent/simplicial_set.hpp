#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cotangent/chain_complex.hpp"

namespace cotangent {

// A possibly degenerate cell written in canonical form: a strictly
// decreasing word of degeneracy operators applied to a nondegenerate cell,
// s_{degens[0]} s_{degens[1]} ... s_{degens[k-1]} (cell).
struct FormalCell {
  std::vector<int> degens;
  std::size_t cell = 0;

  bool nondegenerate() const { return degens.empty(); }
  auto operator<=>(const FormalCell&) const = default;
};

// A simplicial set with a single vertex, described by its nondegenerate
// cells and their faces.  Faces land on formal cells, so collapsed
// boundaries are expressible without auxiliary low-dimensional cells.
class ReducedSimplicialSet {
 public:
  struct Cell {
    std::string name;
    int dim = 0;
    std::vector<FormalCell> faces;  // d_0 ... d_dim; empty for the vertex
  };

  // Validates: exactly one vertex, face counts and dimensions, strictly
  // decreasing degeneracy words, and the simplicial identities
  // d_i d_j = d_{j-1} d_i (i < j) on every cell.  Throws parse_error.
  static ReducedSimplicialSet from_cells(std::vector<Cell> cells);

  std::size_t cell_count() const { return cells_.size(); }
  const Cell& cell(std::size_t k) const { return cells_.at(k); }
  std::size_t vertex() const { return vertex_; }
  int dim() const;
  // Indices of the nondegenerate cells of dimension n, in input order.
  const std::vector<std::size_t>& cells_of_dim(int n) const;
  std::size_t count(int n) const { return cells_of_dim(n).size(); }

  int formal_dim(const FormalCell& c) const;
  std::string formal_name(const FormalCell& c) const;
  // Simplicial operators on formal cells, kept in canonical form.
  FormalCell face(int i, const FormalCell& c) const;
  FormalCell degeneracy(int j, const FormalCell& c) const;

  // Front p-face (d_{p+1} ... d_n) and back q-face (d_0 ... d_0) of a formal
  // n-cell; the two halves of the chain-level diagonal.
  FormalCell front_face(int p, const FormalCell& c) const;
  FormalCell back_face(int q, const FormalCell& c) const;

  // Chains on nondegenerate cells, with degenerate faces dropped.  The
  // complex is laid out cohomologically: an n-cell sits in degree -n.
  ChainComplex normalized_chains(const Field& f) const;

  bool operator==(const ReducedSimplicialSet& o) const;

 private:
  std::vector<Cell> cells_;
  std::size_t vertex_ = 0;
  std::vector<std::vector<std::size_t>> by_dim_;
  std::map<std::string, std::size_t> by_name_;
};

// Cartesian product, with nondegenerate cells enumerated as the pairs of
// degenerate cylinders with disjoint degeneracy directions and faces taken
// componentwise.
ReducedSimplicialSet sset_product(const ReducedSimplicialSet& x,
                                  const ReducedSimplicialSet& y);

// JSON round trip; schema:
// {"cells":[{"id":"a","dim":2,"faces":[{"deg_word":[0],"cell":"v"},...]},...]}
ReducedSimplicialSet sset_from_json(const std::string& text);
std::string sset_to_json(const ReducedSimplicialSet& s);

// Built-in one-vertex models: "sphere2_min" (a single 2-cell),
// "sphere3_min" (a single 3-cell), "wedge_s2_s2" (two 2-cells).
ReducedSimplicialSet builtin_sset(const std::string& name);
std::vector<std::string> builtin_sset_names();

// Loop-space homology read-out over a degree window [-depth, 0].  `dims`
// carries every degree in the window that is certified; `safe` records the
// certification per degree, and `warning` explains any uncertified part.
struct LoopHomologyTable {
  int depth = 0;
  std::map<int, std::size_t> dims;
  std::map<int, bool> safe;
  std::string warning;
};

std::string loop_table_to_string(const LoopHomologyTable& t);

// Word complex on the desuspended nondegenerate cells (an n-cell becomes a
// letter of degree 1-n) with the differential induced by the faces and the
// front/back diagonal.  Exact in degrees >= -depth.  Throws parse_error on
// a nondegenerate 1-cell: letters of degree zero would make every degree
// infinite-dimensional and the loop-space reading needs a 1-reduced model.
ChainComplex loop_word_complex(const ReducedSimplicialSet& s, const Field& f,
                               int depth);

// Homology table of the word complex on [-depth, 0]; every degree in range
// is certified exact.
LoopHomologyTable loop_homology_of_sset(const ReducedSimplicialSet& s,
                                        const Field& f, int depth);

}  // namespace cotangent
