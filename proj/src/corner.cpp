#include "cotangent/corner.hpp"

namespace cotangent {

CornerVerdict corner_argument(const std::vector<std::size_t>& base_h,
                              const GradedDims& fiber_dims,
                              std::size_t abutment_h0) {
  if (base_h.empty()) throw parse_error("base cohomology table is empty");
  int n = static_cast<int>(base_h.size()) - 1;
  if (base_h.front() != 1 || base_h.back() != 1)
    throw parse_error("the argument needs one-dimensional H^0 and H^n of the base");
  if (fiber_dims.empty()) throw parse_error("fiber dimension table is empty");
  for (const auto& [deg, dim] : fiber_dims)
    if (dim == 0) throw parse_error("fiber dimension table lists a zero entry");

  CornerVerdict v;
  v.base_top_degree = n;
  int fiber_min = fiber_dims.begin()->first;
  int fiber_max = fiber_dims.rbegin()->first;
  v.s_min = fiber_min - fiber_max;
  v.s_max = fiber_max - fiber_min;
  v.fiber_dim = 0;
  v.fiber_euler = 0;
  for (const auto& [deg, dim] : fiber_dims) {
    v.fiber_dim += dim;
    long long signed_dim = static_cast<long long>(dim);
    v.fiber_euler += (deg % 2 == 0) ? signed_dim : -signed_dim;
  }
  // Product form: corner entries are H^0 * (extreme End row) etc.
  std::size_t cross = fiber_dims.begin()->second * fiber_dims.rbegin()->second;
  v.corner_low_dim = base_h.front() * cross;
  v.corner_high_dim = base_h.back() * cross;

  // Certify survival: every differential of bidegree (r, 1-r), r >= 2,
  // touching a corner starts or ends outside the box [0,n] x [s_min,s_max].
  int r_bound = std::max(n, v.s_max - v.s_min) + 2;
  for (int r = 2; r <= r_bound; ++r) {
    v.certificate.push_back(
        "page " + std::to_string(r) + ": into (0," + std::to_string(v.s_min) +
        ") from column " + std::to_string(-r) + " < 0; out to row " +
        std::to_string(v.s_min + 1 - r) + " < " + std::to_string(v.s_min));
    v.certificate.push_back(
        "page " + std::to_string(r) + ": into (" + std::to_string(n) + "," +
        std::to_string(v.s_max) + ") from row " + std::to_string(v.s_max + r - 1) +
        " > " + std::to_string(v.s_max) + "; out to column " +
        std::to_string(n + r) + " > " + std::to_string(n));
  }
  v.deduction.push_back("corner (0," + std::to_string(v.s_min) +
                        ") survives with dimension " +
                        std::to_string(v.corner_low_dim));
  v.deduction.push_back("corner (" + std::to_string(n) + "," +
                        std::to_string(v.s_max) + ") survives with dimension " +
                        std::to_string(v.corner_high_dim));

  if (v.s_min < 0) {
    v.summary = "contradiction: surviving corner (0," + std::to_string(v.s_min) +
                ") has total degree " + std::to_string(v.s_min) +
                " outside the abutment window [0," + std::to_string(n) + "]";
    v.deduction.push_back(v.summary);
    return v;
  }
  if (v.s_max > 0) {
    v.summary = "contradiction: surviving corner (" + std::to_string(n) + "," +
                std::to_string(v.s_max) + ") has total degree " +
                std::to_string(n + v.s_max) + " outside the abutment window [0," +
                std::to_string(n) + "]";
    v.deduction.push_back(v.summary);
    return v;
  }
  v.concentration_degree = fiber_min;
  v.deduction.push_back("rows collapse: fiber concentrated in degree " +
                        std::to_string(fiber_min));

  std::size_t square = v.fiber_dim * v.fiber_dim;
  v.deduction.push_back("survivor at (0,0) has dimension " +
                        std::to_string(square) +
                        ", bounded by the abutment's degree-0 dimension " +
                        std::to_string(abutment_h0));
  if (square > abutment_h0) {
    v.summary = "contradiction: surviving corner (0,0) has dimension " +
                std::to_string(square) + " > " + std::to_string(abutment_h0);
    v.deduction.push_back(v.summary);
    return v;
  }
  v.consistent = true;
  v.summary = v.fiber_dim == 1 ? "consistent: rank 1 forced" : "consistent";
  v.deduction.push_back("fiber Euler characteristic " +
                        std::to_string(v.fiber_euler) +
                        " (sign fixed by the concentration degree)");
  return v;
}

E2Report compare_e2_twisted(const SpectralSequence& ss, const GradedLocalSystem& p,
                            const GradedLocalSystem& q) {
  E2Report rep;
  GradedLocalSystem homs = graded_hom_system(p, q);
  int zdim = p.system.space().dim();
  for (int s = homs.min_degree(); s <= homs.max_degree(); ++s) {
    if (homs.coords_of_degree(s).empty()) continue;
    GradedDims oracle = twisted_cochain_complex(homs.graded_piece(s)).cohomology();
    for (int r = 0; r <= zdim; ++r) {
      auto it = oracle.find(r);
      std::size_t want = it == oracle.end() ? 0 : it->second;
      std::size_t got = ss.dim(2, r, s);
      rep.lines.push_back("(" + std::to_string(r) + "," + std::to_string(s) +
                          "): page two " + std::to_string(got) + ", oracle " +
                          std::to_string(want) +
                          (got == want ? "" : "  <- mismatch"));
      if (got != want) rep.match = false;
    }
  }
  return rep;
}

}  // namespace cotangent
