#pragma once

#include "cotangent/local_system.hpp"
#include "cotangent/spectral.hpp"

namespace cotangent {

// Outcome of replaying the rank-one concentration argument on an abstract
// product-form second page  H^*(base) (x) End(fiber), with columns 0..n and
// rows indexed by the internal End degree.
struct CornerVerdict {
  bool consistent = false;
  int base_top_degree = 0;
  int s_min = 0, s_max = 0;          // extreme End rows
  std::size_t corner_low_dim = 0;    // dim at (0, s_min)
  std::size_t corner_high_dim = 0;   // dim at (n, s_max)
  int concentration_degree = 0;      // fiber degree, set when concentrated
  std::size_t fiber_dim = 0;         // total fiber dimension
  long long fiber_euler = 0;
  std::vector<std::string> certificate;  // why no differential touches corners
  std::vector<std::string> deduction;    // the chain of conclusions, in order
  std::string summary;  // "consistent: ..." or "contradiction: ..."
};

// Replays the concentration argument on dimension data alone:
//  * the extreme corners (0, s_min) and (n, s_max) of the box survive to the
//    final page, since every later differential (bidegree (r, 1-r), r >= 2)
//    enters from outside the box or leaves it;
//  * survivors must fit the abutment window [0, n], forcing s_min = s_max = 0,
//    i.e. the fiber sits in a single degree;
//  * the survivor at (0, 0) has dimension (dim fiber)^2, bounded by the
//    abutment's degree-0 dimension — for abutment_h0 = 1 the fiber is a line.
//
// base_h lists dim H^0(base) .. dim H^n(base); both ends must be 1.
// fiber_dims maps internal degree to fiber dimension (no zero entries).
CornerVerdict corner_argument(const std::vector<std::size_t>& base_h,
                              const GradedDims& fiber_dims,
                              std::size_t abutment_h0);

// Comparison of a page-two entry table against the twisted-cohomology oracle
// H^r(Z; Hom^s(P, Q)) computed independently from the systems.
struct E2Report {
  bool match = true;
  std::vector<std::string> lines;  // one "(r,s): got d, oracle d" per cell
};

// ss must come from the Čech filtration of the hom complex of the modules of
// p and q; rows are internal degrees, columns are Čech degrees.
E2Report compare_e2_twisted(const SpectralSequence& ss, const GradedLocalSystem& p,
                            const GradedLocalSystem& q);

}  // namespace cotangent
