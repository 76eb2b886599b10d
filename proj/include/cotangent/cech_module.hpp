#pragma once

#include <optional>
#include <string>
#include <utility>

#include "cotangent/cech_dga.hpp"
#include "cotangent/local_system.hpp"

namespace cotangent {

// The dg module over the Čech algebra built from a coefficient system: a
// (graded) local system P, or more generally a homotopy-coherent system of
// stalk complexes. The underlying space has one stalk copy per simplex,
// placed at the final vertex: the piece at I is the stalk of max I, in
// degree (|I| - 1) + internal degree.
//
//  * differential, with w = max I and m = |I|:
//      - the stalk's internal differential with the total-complex sign
//        (-1)^{m-1};
//      - one-vertex extensions below w with the Čech sign (-1)^{position};
//      - for each system operator on a simplex {w < j_1 < ... < j_e} whose
//        added vertices extend I, the operator applied to the coefficient
//        with sign (-1)^{m + e(e-1)/2}; for a strict system only e = 1
//        survives and this is the transported Čech extension at the end.
//    The differential squares to zero exactly when the system's correction
//    identities hold; construction checks this and names a violating
//    simplex otherwise.
//  * right action: (x e_I) * g_C = (-1)^{deg * deg} x e_{C cup I} when C's
//    last vertex is I's first vertex and the union is a simplex — the
//    algebra extends simplices at the front, away from the stalk, so the
//    action needs no transport;
//  * the result is free over the algebra on one generator per vertex v
//    (the stalk at v placed on the 0-simplex {v}).
class CechModule {
 public:
  // Sparse element: simplex -> stalk coordinates at its final vertex.
  using Element = std::map<Simplex, std::vector<Scalar>>;

  CechModule(const CechDga& algebra, GradedLocalSystem system);
  CechModule(const CechDga& algebra, LocalSystem system);
  CechModule(const CechDga& algebra, HomotopyLocalSystem system);

  const CechDga& algebra() const { return algebra_; }
  const HomotopyLocalSystem& coefficients() const { return *hom_; }
  const SimplicialComplex& space() const { return algebra_.space(); }
  const Field& field() const { return algebra_.field(); }
  std::size_t rank() const { return degrees_.size(); }
  const std::vector<int>& degrees() const { return degrees_; }

  // The stalk complex every piece with final vertex v is a copy of.
  ChainComplex stalk_complex(int v) const { return hom_->stalk_complex(v); }

  int total_degree(const Simplex& s, std::size_t coord) const {
    return CechDga::degree(s) + degrees_[coord];
  }

  Element zero() const { return {}; }
  Element basis_element(const Simplex& s, std::size_t coord) const;

  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element scale(const Scalar& c, const Element& x) const;
  bool is_zero(const Element& x) const;

  Element d(const Element& x) const;
  Element act(const Element& m, const CechDga::Element& c) const;

  // Basis bookkeeping per total degree.
  struct BasisVector {
    Simplex simplex;
    std::size_t coord;
  };
  const std::vector<BasisVector>& basis(int n) const;
  std::vector<Scalar> coordinates(const Element& x, int n) const;
  Element element_from(int n, const std::vector<Scalar>& v) const;

  // Matrix of right multiplication by the algebra generator g, from total
  // degree n to n + deg(g).
  Matrix action_matrix(const Simplex& g, int n) const;

  // Underlying cochain complex in total degree, with labeled basis.
  const ChainComplex& complex() const { return complex_; }
  GradedDims cohomology() const { return complex_.cohomology(); }

 private:
  void build();

  CechDga algebra_;
  std::vector<int> degrees_;
  std::optional<HomotopyLocalSystem> hom_;
  // Operators grouped by their first vertex, the only stalk they apply to.
  std::map<int, std::vector<std::pair<Simplex, Matrix>>> ops_by_front_;
  ChainComplex complex_;
  std::map<int, std::vector<BasisVector>> basis_;
  std::map<std::pair<Simplex, std::size_t>, std::size_t> index_;  // within degree
};

// A homogeneous module map src -> dst of the stated degree, recorded by its
// values on the free generators: images[(v, alpha)] is the image of the
// stalk basis vector alpha sitting on the 0-simplex {v}. Each image lies in
// the span of basis vectors (I', beta) with min(I') = v.
struct HomElement {
  int degree = 0;
  std::map<std::pair<int, std::size_t>, CechModule::Element> images;
};

// The complex of module maps between two free modules, with composition.
// Degree-k maps are identified with their generator images, the differential
// is  D(phi) = d_dst . phi - (-1)^k phi . d_src,  and both sides are again
// module maps, so the complex closes up on generator images.
class HomComplex {
 public:
  HomComplex(CechModule src, CechModule dst);

  const CechModule& source() const { return src_; }
  const CechModule& target() const { return dst_; }
  const Field& field() const { return src_.field(); }

  struct BasisVector {
    int vertex;
    std::size_t src_coord;
    Simplex target;
    std::size_t dst_coord;
  };
  const std::vector<BasisVector>& basis(int k) const;

  HomElement zero(int degree) const { return HomElement{degree, {}}; }
  HomElement basis_hom(int k, std::size_t idx) const;
  HomElement identity() const;  // requires src == dst shapes

  HomElement add(const HomElement& a, const HomElement& b) const;
  HomElement scale(const Scalar& c, const HomElement& a) const;
  bool is_zero(const HomElement& a) const;

  // Value of the map on an arbitrary module element.
  CechModule::Element apply(const HomElement& phi, const CechModule::Element& m) const;

  HomElement differential(const HomElement& phi) const;
  // compose(f, g) = f after g; degrees add.
  HomElement compose(const HomElement& f, const HomElement& g) const;

  std::vector<Scalar> to_vector(const HomElement& phi) const;
  HomElement from_vector(int degree, const std::vector<Scalar>& v) const;

  // The hom cochain complex; basis order matches basis(k).
  const ChainComplex& complex() const { return complex_; }
  GradedDims cohomology() const { return complex_.cohomology(); }

  // Filtration level of each basis vector (dimension of the target simplex),
  // for the spectral sequence of the filtered hom complex.
  std::map<int, std::vector<int>> cech_filtration() const;

 private:
  void build();

  CechModule src_, dst_;
  ChainComplex complex_;
  std::map<int, std::vector<BasisVector>> basis_;
  std::map<std::tuple<int, std::size_t, Simplex, std::size_t>, std::size_t> index_;
};

// Value of a module endomorphism of m, recorded on generators, at an
// arbitrary element.
CechModule::Element apply_module_map(const CechModule& m, const HomElement& phi,
                                     const CechModule::Element& x);

// Matrix of the module endomorphism from total degree n to n + phi.degree,
// in the basis order of m.complex().
Matrix module_map_matrix(const CechModule& m, const HomElement& phi, int n);

// Searching for a degree -1 module endomorphism h with d h + h d = id. The
// search succeeds exactly when every stalk complex of the module is acyclic;
// otherwise `failure` names a non-acyclic stalk. When the stalks are acyclic
// but the linear solve fails — which the acyclicity argument rules out — an
// invariant_error is raised rather than a failure report.
struct ContractionOutcome {
  std::optional<HomElement> homotopy;
  std::string failure;
};
ContractionOutcome contracting_homotopy(const CechModule& m);

}  // namespace cotangent
