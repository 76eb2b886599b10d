#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotangent/chain_complex.hpp"

namespace cotangent {

// A simplex is a strictly increasing list of vertex ids.
using Simplex = std::vector<int>;

// Sorts and validates; throws parse_error on duplicate vertices.
Simplex normalize_simplex(Simplex s);

std::string simplex_to_string(const Simplex& s);

// A finite abstract simplicial complex on vertex set {0, ..., n-1}. Every
// vertex is a simplex even when isolated; higher simplices come from the
// closure of the given facets.
class SimplicialComplex {
 public:
  static SimplicialComplex from_facets(int n_vertices,
                                       const std::vector<Simplex>& facets);

  int n_vertices() const { return n_vertices_; }
  // Dimension of the largest simplex.
  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }

  // All k-dimensional simplices in lexicographic order; empty if out of range.
  const std::vector<Simplex>& simplices(int k) const;
  std::size_t count(int k) const { return simplices(k).size(); }
  std::size_t total_simplices() const;

  bool has(const Simplex& s) const;
  // Position of s within simplices(s.size()-1).
  std::optional<std::size_t> index_of(const Simplex& s) const;

  long long euler_characteristic() const;
  bool is_connected() const;

  // Simplicial cochain complex with constant coefficients; degree k has one
  // basis vector per k-simplex, in the simplices(k) order.
  ChainComplex cochain_complex(const Field& f) const;

  bool operator==(const SimplicialComplex& o) const {
    return n_vertices_ == o.n_vertices_ && by_dim_ == o.by_dim_;
  }

 private:
  int n_vertices_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
  std::map<Simplex, std::size_t> index_;
};

// Built-in test spaces, keyed by name:
//   point, interval, circle3, sphere2, torus7, rp2_6, klein.
SimplicialComplex corpus_complex(const std::string& name);
std::vector<std::string> corpus_names();

}  // namespace cotangent
