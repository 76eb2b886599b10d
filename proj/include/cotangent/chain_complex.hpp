#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotangent/matrix.hpp"

namespace cotangent {

// Graded dimension table, degree -> dim. Degrees with dim 0 are omitted.
using GradedDims = std::map<int, std::size_t>;

std::string graded_dims_to_string(const GradedDims& g);

// A finite cochain complex: d_n : C^n -> C^{n+1} with d_{n+1} d_n = 0.
// Cohomology in degree n is ker(d_n)/im(d_{n-1}).
class ChainComplex {
 public:
  explicit ChainComplex(const Field& f) : field(f) {}

  Field field;

  void set_dim(int n, std::size_t dim);
  std::size_t dim(int n) const;
  // Degrees with nonzero dimension, ascending.
  std::vector<int> degrees() const;
  int min_degree() const;
  int max_degree() const;
  std::size_t total_dim() const;

  // The differential out of degree n, shape dim(n+1) x dim(n). Always
  // defined (implicitly zero).
  Matrix diff(int n) const;
  void set_diff(int n, Matrix m);

  // Optional basis labels for diagnostics.
  std::map<int, std::vector<std::string>> labels;

  // First degree n where d_{n+1} d_n != 0, if any.
  std::optional<int> first_dsq_failure() const;
  // Throws invariant_error if d^2 != 0.
  void require_valid(const std::string& what) const;

  GradedDims cohomology() const;
  // Columns = basis of ker(d_n).
  Matrix cocycle_basis(int n) const;
  // Columns = basis of im(d_{n-1}) inside C^n.
  Matrix coboundary_basis(int n) const;

  long long euler_characteristic() const;

 private:
  std::map<int, std::size_t> dims_;
  std::map<int, Matrix> d_;
};

// C[k]^n = C^{n+k}; the differential picks up (-1)^k.
ChainComplex shift(const ChainComplex& c, int k);

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

// Mapping cone of a chain map f : A -> B, i.e. A[1] (+) B with the usual
// triangular differential. `f` maps degree n of A to degree n of B.
ChainComplex cone(const ChainComplex& a, const ChainComplex& b,
                  const std::map<int, Matrix>& f);

// Checks that f : A -> B commutes with the differentials.
bool is_chain_map(const ChainComplex& a, const ChainComplex& b,
                  const std::map<int, Matrix>& f);

// Degreewise dual: (C^v)^n = (C^{-n})^*, differential transposed.
ChainComplex dualize(const ChainComplex& c);

// Tensor product over the base field with the Koszul sign on differentials.
ChainComplex tensor(const ChainComplex& a, const ChainComplex& b);

}  // namespace cotangent
