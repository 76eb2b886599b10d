#pragma once

#include <map>
#include <optional>
#include <utility>

#include "cotangent/simplicial.hpp"

namespace cotangent {

// The dg algebra of Čech cochains on the cover of a triangulated space by
// open vertex stars. Nonempty intersections of stars correspond to simplices,
// so the generators g_I are indexed by simplices I, with deg g_I = |I| - 1.
//
//  * differential: d g_I = sum over simplices J = I + one vertex v of
//    (-1)^{position of v in J} g_J  (the simplicial cochain differential);
//  * product: g_A * g_B is nonzero iff B's last vertex equals A's first
//    vertex and B followed by A spans a simplex; then
//        g_A * g_B = (-1)^{deg A * deg B} g_{B cup A}.
//    (The second factor contributes the front segment. With stalks placed at
//    the final vertex of a simplex this orientation, and exactly this sign,
//    make the Leibniz rule hold; the tests check every pair.)
//  * unit: the sum of all g_v;
//  * augmentation: the coefficient of g_{v0} at a chosen base vertex v0,
//    which is a map of dg algebras onto the ground field.
class CechDga {
 public:
  // Sparse element: simplex -> coefficient. Not necessarily homogeneous.
  using Element = std::map<Simplex, Scalar>;

  CechDga(SimplicialComplex space, const Field& f, int base_vertex = 0);

  const SimplicialComplex& space() const { return space_; }
  const Field& field() const { return field_; }
  int base_vertex() const { return base_; }

  static int degree(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

  // Underlying cochain complex (basis order matches space().simplices(k)).
  const ChainComplex& complex() const { return complex_; }
  GradedDims cohomology() const { return complex_.cohomology(); }

  Element zero() const { return {}; }
  Element unit() const;
  Element gen(const Simplex& s) const;

  // Product of basis generators a * b (a first); zero or a signed generator.
  std::optional<std::pair<Simplex, Scalar>> mul_basis(const Simplex& a,
                                                      const Simplex& b) const;

  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element scale(const Scalar& c, const Element& x) const;
  Element mul(const Element& x, const Element& y) const;
  Element d(const Element& x) const;
  Scalar augmentation(const Element& x) const;

  bool is_zero(const Element& x) const;

  // Basis of the augmentation ideal: every simplex except the base vertex's
  // own generator, ordered by degree then lexicographically.
  const std::vector<Simplex>& ideal_basis() const { return ideal_basis_; }
  // Position in ideal_basis, if the simplex is not the base vertex.
  std::optional<std::size_t> ideal_index(const Simplex& s) const;

 private:
  SimplicialComplex space_;
  Field field_;
  int base_;
  ChainComplex complex_;
  std::vector<Simplex> ideal_basis_;
  std::map<Simplex, std::size_t> ideal_index_;
};

}  // namespace cotangent
