#pragma once

#include <map>

#include "cotangent/chain_complex.hpp"

namespace cotangent {

// A strong deformation retract between cochain complexes:
//
//   include : small -> big     (degree 0 chain map)
//   project : big -> small     (degree 0 chain map)
//   homotopy: big^n -> big^{n-1}
//
// with  project . include = 1,
//       d.homotopy + homotopy.d = 1 - include.project,
// and the side conditions
//       homotopy.include = 0, project.homotopy = 0, homotopy.homotopy = 0.
//
// Maps are stored per source degree; missing degrees are zero.
struct Sdr {
  ChainComplex big;
  ChainComplex small;
  std::map<int, Matrix> include;
  std::map<int, Matrix> project;
  std::map<int, Matrix> homotopy;

  Sdr(ChainComplex b, ChainComplex s)
      : big(std::move(b)), small(std::move(s)) {}

  // Shape-correct accessors; absent entries come back as zero matrices.
  Matrix include_at(int n) const;
  Matrix project_at(int n) const;
  Matrix homotopy_at(int n) const;
};

// Retract a complex onto a zero-differential model of its cohomology by
// blockwise Gaussian elimination, one degree at a time. The small complex
// has dim H^n in each degree and zero differential, so its basis is a
// choice of harmonic representatives.
Sdr gaussian_sdr(const ChainComplex& c);

// Checks every retract identity exactly; throws invariant_error naming the
// first identity that fails.
void validate_sdr(const Sdr& s);

// Basic perturbation lemma. `delta` is a degree +1 operator on the big
// complex (keyed by source degree) such that (d + delta)^2 = 0 and
// delta.homotopy is nilpotent. Returns the retract of the perturbed big
// complex onto the small one with the transferred differential
//   d' = d_small + project . T . include,   T = delta (1 - homotopy delta)^{-1}.
// Throws invariant_error if the geometric series fails to terminate within
// `cap` rounds (i.e. the nilpotency hypothesis fails).
Sdr perturb_sdr(const Sdr& s, const std::map<int, Matrix>& delta, int cap = 64);

}  // namespace cotangent
