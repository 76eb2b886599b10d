#pragma once

#include "cotangent/chain_complex.hpp"

namespace cotangent {

// Spectral sequence of a cochain complex with a decreasing filtration
// F^p ⊇ F^{p+1}, where F^p in degree n is spanned by the basis vectors whose
// filtration level is >= p. The differential must respect the filtration
// (level of d(x) >= level of x); construction checks this and the final-page
// abutment  sum_p dim E_inf^{p, n-p} = dim H^n.
//
// Pages follow the standard cycle/boundary description
//   Z_r^{p,q} = F^p C^{p+q}  ∩  d^{-1}(F^{p+r} C^{p+q+1})
//   E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})
// with differentials d_r of bidegree (r, 1-r) induced by d.
class SpectralSequence {
 public:
  // filtration[n] lists the level of every degree-n basis vector, in basis
  // order; degrees with dim 0 may be omitted.
  SpectralSequence(const ChainComplex& c, std::map<int, std::vector<int>> filtration);

  // Pages r >= stable_page() all equal the final page.
  int stable_page() const { return stable_page_; }
  int min_level() const { return min_level_; }
  int max_level() const { return max_level_; }

  // dim E_r^{p,q} for any r >= 0 (clamped to the stable page).
  std::size_t dim(int r, int p, int q) const;
  std::size_t infinity_dim(int p, int q) const { return dim(stable_page_, p, q); }

  // Nonzero entries of one page, keyed by (p, q).
  std::map<std::pair<int, int>, std::size_t> page(int r) const;

  // Rank of the induced differential E_r^{p,q} -> E_r^{p+r, q-r+1}.
  std::size_t differential_rank(int r, int p, int q) const;

  const ChainComplex& complex() const { return c_; }

 private:
  // Spanning matrix (columns) of Z_r^{p,q} inside C^{p+q}; r >= 0.
  Matrix cycle_span(int r, int p, int n) const;
  // Spanning matrix of the subspace divided out at (p, q), page r >= 1.
  Matrix boundary_span(int r, int p, int n) const;

  ChainComplex c_;
  std::map<int, std::vector<int>> filt_;
  int min_level_ = 0, max_level_ = 0;
  int stable_page_ = 1;
  mutable std::map<std::tuple<int, int, int>, Matrix> cycle_cache_;
};

}  // namespace cotangent
