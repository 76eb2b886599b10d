#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotangent/cech_dga.hpp"
#include "cotangent/chain_complex.hpp"
#include "cotangent/sdr.hpp"

namespace cotangent {

// Bar-construction machinery for the Čech dg algebra of a connected
// triangulated space, built from the augmentation ideal:
//
//  * BarConstruction materializes word-length truncations of the tensor
//    coalgebra T(I[1]) on the shifted augmentation ideal, and of the standard
//    free resolution T(I[1]) (x) C of the trivial module.
//  * DualWordAlgebra is the degreewise linear dual of the truncated
//    coalgebra; concatenation of dual words makes it a dg algebra whose
//    cohomology computes loop-space homology when the space is simply
//    connected.
//  * TransferredBar computes small models of the same complexes through
//    homotopy transfer, so large spaces and word bounds stay tractable.
//  * endomorphism_complex / endomorphism_model present the dg endomorphisms
//    of the truncated resolution (as a dg module over the algebra) directly,
//    resp. as a small transferred model.
//
// Truncating at word length w only computes the untruncated answer in a
// window of degrees; ideal_connectivity and the *_window helpers certify
// that window from the least degree carrying reduced cohomology.

// A word is a list of letter indices.  For BarConstruction the letters index
// algebra.ideal_basis(); for the transferred models they index the chosen
// cohomology representatives.
using BarWord = std::vector<std::size_t>;

// Least degree with nonzero cohomology of the augmentation ideal (equals the
// least positive degree with nonzero cohomology of the space when it is
// connected); nullopt when the ideal is acyclic.
std::optional<int> ideal_connectivity(const CechDga& algebra);

// Degree windows in which the truncation at word length w agrees with the
// untruncated construction.  A nullopt gamma (acyclic ideal) certifies every
// degree; a nullopt return in the max/min slot likewise means unbounded.
//  * resolution: degrees <= max; there the cohomology is the ground field in
//    degree 0.
//  * coalgebra: degrees <= max.
//  * dual word algebra: degrees >= min.
//  * endomorphisms vs dual word algebra: degrees in [min, 0].
std::optional<int> resolution_window_max(std::optional<int> gamma, int word_bound);
std::optional<int> coalgebra_window_max(std::optional<int> gamma, int word_bound);
std::optional<int> dual_window_min(std::optional<int> gamma, int word_bound);
std::optional<int> endomorphism_window_min(std::optional<int> gamma, int word_bound);

// Cheap necessary test for simple connectivity: first cohomology vanishes
// over Q and over a few small prime fields.  A false return means loop-space
// readings of the dual word algebra are not certified.
bool simply_connected_probe(const SimplicialComplex& space);

// Word-length truncations of the bar construction, with every basis written
// out.  Feasible for small spaces and word bounds; use TransferredBar beyond
// that.  Throws parse_error for a disconnected space or when a basis would
// exceed basis_cap.
class BarConstruction {
 public:
  BarConstruction(const CechDga& algebra, int word_bound,
                  std::size_t basis_cap = 150000);

  const CechDga& algebra() const { return *algebra_; }
  int word_bound() const { return word_bound_; }

  // Sum over letters of (ideal degree - 1).
  int word_degree(const BarWord& u) const;
  std::string word_name(const BarWord& u) const;

  // T_{<=w}(I[1]): the internal differential of each letter plus merges of
  // adjacent letters through the algebra product.
  const ChainComplex& coalgebra() const { return coalgebra_; }
  const std::vector<BarWord>& coalgebra_basis(int degree) const;
  std::optional<std::size_t> coalgebra_index(const BarWord& u) const;

  // T_{<=w}(I[1]) (x) C: the truncated free resolution of the trivial
  // module, adding the differential of the module factor and the term that
  // pushes the last letter into it.  Built on first use.
  const ChainComplex& resolution() const;
  struct ResolutionBasisElement {
    BarWord word;
    Simplex cell;
  };
  const std::vector<ResolutionBasisElement>& resolution_basis(int degree) const;
  std::optional<std::size_t> resolution_index(const BarWord& u,
                                              const Simplex& cell) const;

 private:
  void build_resolution() const;

  const CechDga* algebra_;
  int word_bound_ = 0;
  std::size_t basis_cap_ = 0;
  ChainComplex coalgebra_;
  std::map<int, std::vector<BarWord>> coalgebra_basis_;
  std::map<BarWord, std::pair<int, std::size_t>> coalgebra_index_;
  mutable bool resolution_built_ = false;
  mutable ChainComplex resolution_;
  mutable std::map<int, std::vector<ResolutionBasisElement>> resolution_basis_;
  mutable std::map<std::pair<BarWord, Simplex>, std::pair<int, std::size_t>>
      resolution_index_;
};

// Degreewise linear dual of the truncated tensor coalgebra.  The differential
// carries the sign -(-1)^n on degree-n duals so that concatenation of dual
// words (with its Koszul sign) satisfies the Leibniz rule; cohomology
// dimensions agree with the plain transpose.
class DualWordAlgebra {
 public:
  using Element = std::map<BarWord, Scalar>;

  explicit DualWordAlgebra(const BarConstruction& bar);

  const BarConstruction& bar() const { return *bar_; }
  // Degree-n basis elements are the duals of the words of coalgebra degree
  // -n, in coalgebra_basis(-n) order.
  const ChainComplex& complex() const { return complex_; }

  Element unit() const;  // dual of the empty word
  Element gen(const BarWord& u) const;
  // Concatenation xy with sign (-1)^{|x||y|} in coalgebra degrees; nullopt
  // when the concatenation exceeds the word bound (the product is zero).
  std::optional<std::pair<BarWord, Scalar>> mul_basis(const BarWord& x,
                                                      const BarWord& y) const;
  Element mul(const Element& x, const Element& y) const;
  Element add(const Element& x, const Element& y) const;
  Element scale(const Scalar& c, const Element& x) const;
  Element d(const Element& x) const;
  bool is_zero(const Element& x) const;

 private:
  const BarConstruction* bar_;
  ChainComplex complex_;
};

// Small models of the truncated bar complexes, computed without ever
// materializing the big bases: the ideal and the algebra are first retracted
// onto their cohomology, and the bar differential is transferred through the
// resulting tensor-product retraction by the perturbation series, evaluated
// term by term on pure tensors.
class TransferredBar {
 public:
  explicit TransferredBar(const CechDga& algebra);

  const CechDga& algebra() const { return *algebra_; }
  // Letters: a basis of the cohomology of the augmentation ideal.
  std::size_t letter_count() const { return letter_degrees_.size(); }
  int letter_degree(std::size_t k) const { return letter_degrees_[k]; }
  // Cells: a basis of the cohomology of the algebra.
  std::size_t cell_count() const { return cell_degrees_.size(); }
  int cell_degree(std::size_t k) const { return cell_degrees_[k]; }

  // Model of T_{<=w}(I[1]): words in the cohomology letters.
  ChainComplex coalgebra_model(int word_bound,
                               std::size_t basis_cap = 60000) const;
  // Model of the truncated resolution: words (x) cohomology cells.
  ChainComplex resolution_model(int word_bound,
                                std::size_t basis_cap = 60000) const;

 private:
  struct PureTensor;
  std::vector<PureTensor> transfer_rounds(const PureTensor& start,
                                          bool with_cell) const;
  ChainComplex build_model(int word_bound, bool with_cell,
                           std::size_t basis_cap) const;

  const CechDga* algebra_;
  ChainComplex ideal_complex_;
  std::vector<std::vector<Simplex>> ideal_cells_;  // ideal basis per degree
  Sdr ideal_sdr_;
  Sdr algebra_sdr_;
  std::map<int, Matrix> ideal_ip_;    // include.project per degree
  std::map<int, Matrix> algebra_ip_;  // include.project per degree
  std::vector<int> letter_degrees_;
  std::vector<std::size_t> letter_pos_;  // index within its degree
  std::vector<int> cell_degrees_;
  std::vector<std::size_t> cell_pos_;
};

// Retraction of a materialized truncated bar complex onto a small model,
// with a homotopy that never increases word length: each word-length block
// of the internal differential is reduced by Gaussian elimination, the
// blocks are summed, and the length-lowering part of the differential
// (merges, and the module action for resolutions) is fed to the perturbation
// series.  `length` gives the word length of each basis element, per degree.
Sdr bar_sdr(const ChainComplex& full,
            const std::map<int, std::vector<int>>& length);

// Dg endomorphisms of the truncated resolution as a dg module over the
// algebra: an endomorphism is determined by its values on the free
// generators (the words), so the underlying complex is Hom(coalgebra,
// resolution) with the differential twisted by the action term.  Degrees are
// clamped to [min_degree, max_degree] of the answer's natural support.
ChainComplex endomorphism_complex(const BarConstruction& bar);

// Small model of the same complex: both sides are retracted through bar_sdr
// and the action term is transferred by the perturbation series on
// homomorphisms.
ChainComplex endomorphism_model(const BarConstruction& bar);

}  // namespace cotangent
