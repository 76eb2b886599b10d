#include "cotangent/spectral.hpp"

#include <algorithm>

namespace cotangent {

namespace {

// Columns of the identity selecting the basis vectors at levels >= p.
Matrix level_inclusion(const Field& f, const std::vector<int>& levels, int p) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] >= p) keep.push_back(i);
  Matrix incl(levels.size(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) incl.at(keep[j], j) = f.one();
  return incl;
}

}  // namespace

SpectralSequence::SpectralSequence(const ChainComplex& c,
                                   std::map<int, std::vector<int>> filtration)
    : c_(c), filt_(std::move(filtration)) {
  bool any = false;
  for (int n = c_.min_degree(); n <= c_.max_degree(); ++n) {
    auto it = filt_.find(n);
    std::size_t have = it == filt_.end() ? 0 : it->second.size();
    if (have != c_.dim(n))
      throw parse_error("filtration levels missing or mis-sized in degree " +
                        std::to_string(n));
    if (it == filt_.end()) continue;
    for (int lv : it->second) {
      if (!any) {
        min_level_ = max_level_ = lv;
        any = true;
      }
      min_level_ = std::min(min_level_, lv);
      max_level_ = std::max(max_level_, lv);
    }
  }
  // The differential must not lower the level.
  for (int n = c_.min_degree(); n < c_.max_degree(); ++n) {
    Matrix d = c_.diff(n);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (!c_.field.is_zero(d.at(i, j)) &&
            filt_.at(n + 1)[i] < filt_.at(n)[j])
          throw invariant_error("differential lowers the filtration level");
  }
  stable_page_ = std::max(1, max_level_ - min_level_ + 1);

  // Abutment: the final page assembles the cohomology of the total complex.
  GradedDims h = c_.cohomology();
  for (int n = c_.min_degree(); n <= c_.max_degree(); ++n) {
    std::size_t total = 0;
    for (int p = min_level_; p <= max_level_; ++p)
      total += dim(stable_page_, p, n - p);
    auto it = h.find(n);
    std::size_t want = it == h.end() ? 0 : it->second;
    if (total != want)
      throw invariant_error("final page does not assemble the cohomology");
  }
}

static const std::vector<int>& levels_or_empty(
    const std::map<int, std::vector<int>>& filt, int n) {
  static const std::vector<int> empty;
  auto it = filt.find(n);
  return it == filt.end() ? empty : it->second;
}

Matrix SpectralSequence::cycle_span(int r, int p, int n) const {
  auto key = std::make_tuple(r, p, n);
  auto hit = cycle_cache_.find(key);
  if (hit != cycle_cache_.end()) return hit->second;

  const Field& f = c_.field;
  const std::vector<int>& lv = levels_or_empty(filt_, n);
  Matrix incl = level_inclusion(f, lv, p);
  Matrix out(lv.size(), 0);
  if (incl.cols() > 0) {
    const std::vector<int>& lv_up = levels_or_empty(filt_, n + 1);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < lv_up.size(); ++i)
      if (lv_up[i] < p + r) bad.push_back(i);
    if (bad.empty()) {
      out = incl;
    } else {
      Matrix d = c_.diff(n);
      Matrix restricted = mat_mul(f, d, incl);
      Matrix bad_rows(bad.size(), restricted.cols());
      for (std::size_t i = 0; i < bad.size(); ++i)
        for (std::size_t j = 0; j < restricted.cols(); ++j)
          bad_rows.at(i, j) = restricted.at(bad[i], j);
      out = mat_mul(f, incl, kernel_basis(f, bad_rows));
    }
  }
  cycle_cache_.emplace(key, out);
  return out;
}

Matrix SpectralSequence::boundary_span(int r, int p, int n) const {
  const Field& f = c_.field;
  if (r == 0)
    return level_inclusion(f, levels_or_empty(filt_, n), p + 1);
  Matrix stay = cycle_span(r - 1, p + 1, n);
  Matrix hit = mat_mul(f, c_.diff(n - 1), cycle_span(r - 1, p - r + 1, n - 1));
  return hstack(stay, hit);
}

std::size_t SpectralSequence::dim(int r, int p, int q) const {
  if (r < 0) throw parse_error("spectral page must be >= 0");
  r = std::min(r, stable_page_);
  int n = p + q;
  if (r == 0) {
    const std::vector<int>& lv = levels_or_empty(filt_, n);
    return static_cast<std::size_t>(std::count(lv.begin(), lv.end(), p));
  }
  Matrix z = cycle_span(r, p, n);
  if (z.cols() == 0) return 0;
  return z.cols() - rank(c_.field, boundary_span(r, p, n));
}

std::map<std::pair<int, int>, std::size_t> SpectralSequence::page(int r) const {
  std::map<std::pair<int, int>, std::size_t> out;
  for (int n = c_.min_degree(); n <= c_.max_degree(); ++n)
    for (int p = min_level_; p <= max_level_; ++p) {
      std::size_t d = dim(r, p, n - p);
      if (d > 0) out[{p, n - p}] = d;
    }
  return out;
}

std::size_t SpectralSequence::differential_rank(int r, int p, int q) const {
  if (r < 0) throw parse_error("spectral page must be >= 0");
  const Field& f = c_.field;
  int n = p + q;
  Matrix source = (r == 0) ? level_inclusion(f, levels_or_empty(filt_, n), p)
                           : cycle_span(r, p, n);
  Matrix image = mat_mul(f, c_.diff(n), source);
  Matrix target_denominator = boundary_span(r, p + r, n + 1);
  return rank(f, hstack(target_denominator, image)) -
         rank(f, target_denominator);
}

}  // namespace cotangent
