#include "cotangent/local_system.hpp"

#include <algorithm>
#include <string>

namespace cotangent {

namespace {

std::pair<int, int> edge_key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

std::string edge_name(int i, int j) {
  return "{" + std::to_string(std::min(i, j)) + "," + std::to_string(std::max(i, j)) + "}";
}

}  // namespace

LocalSystem::LocalSystem(SimplicialComplex space, const Field& f, int rank)
    : space_(std::move(space)), field_(f), rank_(rank) {
  if (rank <= 0) throw parse_error("local system rank must be positive");
}

LocalSystem LocalSystem::trivial(SimplicialComplex space, const Field& f, int rank) {
  LocalSystem p(std::move(space), f, rank);
  Matrix id = Matrix::identity(static_cast<std::size_t>(rank), f);
  for (const Simplex& e : p.space_.simplices(1)) p.set_transport(e[0], e[1], id);
  return p;
}

void LocalSystem::set_transport(int i, int j, const Matrix& t) {
  if (i == j) throw parse_error("transport needs two distinct vertices");
  if (!space_.has({std::min(i, j), std::max(i, j)}))
    throw parse_error("no edge " + edge_name(i, j));
  if (t.rows() != static_cast<std::size_t>(rank_) ||
      t.cols() != static_cast<std::size_t>(rank_))
    throw parse_error("transport matrix for " + edge_name(i, j) +
                      " has the wrong shape");
  auto inv = inverse(field_, t);
  if (!inv)
    throw invariant_error("transport along " + edge_name(i, j) + " is singular");
  if (i < j) {
    fwd_[edge_key(i, j)] = t;
    bwd_[edge_key(i, j)] = *inv;
  } else {
    fwd_[edge_key(i, j)] = *inv;
    bwd_[edge_key(i, j)] = t;
  }
}

bool LocalSystem::has_transport(int i, int j) const {
  return fwd_.count(edge_key(i, j)) > 0;
}

Matrix LocalSystem::transport(int from, int to) const {
  if (from == to) return Matrix::identity(static_cast<std::size_t>(rank_), field_);
  auto it = fwd_.find(edge_key(from, to));
  if (it == fwd_.end())
    throw invariant_error("no transport along " + edge_name(from, to));
  if (from < to) return it->second;
  return bwd_.at(edge_key(from, to));
}

bool LocalSystem::is_flat() const {
  try {
    require_flat();
    return true;
  } catch (const invariant_error&) {
    return false;
  }
}

void LocalSystem::require_flat() const {
  for (const Simplex& e : space_.simplices(1))
    if (!has_transport(e[0], e[1]))
      throw invariant_error("no transport along " + edge_name(e[0], e[1]));
  for (const Simplex& t : space_.simplices(2)) {
    Matrix around = mat_mul(field_, transport(t[1], t[2]), transport(t[0], t[1]));
    if (!(around == transport(t[0], t[2])))
      throw invariant_error("transport is not flat on triangle " + simplex_to_string(t));
  }
}

ChainComplex twisted_cochain_complex(const LocalSystem& p) {
  p.require_flat();
  const Field& f = p.field();
  const SimplicialComplex& z = p.space();
  std::size_t r = static_cast<std::size_t>(p.rank());
  ChainComplex c(f);
  for (int k = 0; k <= z.dim(); ++k) c.set_dim(k, r * z.count(k));
  for (int k = 0; k + 1 <= z.dim(); ++k) {
    Matrix d(c.dim(k + 1), c.dim(k));
    const auto& rows = z.simplices(k + 1);
    for (std::size_t ti = 0; ti < rows.size(); ++ti) {
      const Simplex& tau = rows[ti];
      for (std::size_t j = 0; j < tau.size(); ++j) {
        Simplex face = tau;
        face.erase(face.begin() + static_cast<long>(j));
        std::size_t fi = *z.index_of(face);
        // Stalks live at the first vertex; dropping it needs transport.
        Matrix block = (j == 0)
                           ? p.transport(tau[1], tau[0])
                           : mat_scale(f, f.from_int(j % 2 == 0 ? 1 : -1),
                                       Matrix::identity(r, f));
        for (std::size_t a = 0; a < r; ++a)
          for (std::size_t b = 0; b < r; ++b)
            d.at(ti * r + a, fi * r + b) = f.add(d.at(ti * r + a, fi * r + b),
                                                 block.at(a, b));
      }
    }
    c.set_diff(k, std::move(d));
  }
  c.require_valid("twisted cochain complex");
  return c;
}

LocalSystem gauge_random_system(const SimplicialComplex& space, const Field& f,
                                int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Matrix> gauge;
  gauge.reserve(static_cast<std::size_t>(space.n_vertices()));
  for (int v = 0; v < space.n_vertices(); ++v)
    gauge.push_back(random_invertible(f, static_cast<std::size_t>(rank), rng));
  LocalSystem p(space, f, rank);
  for (const Simplex& e : space.simplices(1)) {
    Matrix t = mat_mul(f, gauge[static_cast<std::size_t>(e[1])],
                       *inverse(f, gauge[static_cast<std::size_t>(e[0])]));
    p.set_transport(e[0], e[1], t);
  }
  return p;
}

LocalSystem exponent_system(
    const SimplicialComplex& space, const Field& f,
    const std::vector<std::pair<std::vector<long>, Matrix>>& factors) {
  if (factors.empty()) throw parse_error("exponent system needs at least one factor");
  std::size_t r = factors.front().second.rows();
  for (const auto& [weights, m] : factors) {
    if (weights.size() != space.count(1))
      throw parse_error("edge weight list has the wrong length");
    if (m.rows() != r || m.cols() != r)
      throw parse_error("exponent system matrices must share one square shape");
    if (!inverse(f, m)) throw invariant_error("exponent system matrix is singular");
  }
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      const Matrix& a = factors[i].second;
      const Matrix& b = factors[j].second;
      if (!(mat_mul(f, a, b) == mat_mul(f, b, a)))
        throw invariant_error("exponent system matrices do not commute");
    }
  LocalSystem p(space, f, static_cast<int>(r));
  const auto& edges = space.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Matrix t = Matrix::identity(r, f);
    for (const auto& [weights, m] : factors)
      t = mat_mul(f, t, mat_pow(f, m, weights[e]));
    p.set_transport(edges[e][0], edges[e][1], t);
  }
  return p;
}

std::vector<std::vector<long>> integer_cocycle_basis(const SimplicialComplex& space) {
  Field q = Field::rationals();
  ChainComplex c = space.cochain_complex(q);
  Matrix ker = kernel_basis(q, c.diff(1));
  std::vector<std::vector<long>> out;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    // Scale the column to coprime integers.
    mpz_class lcm_den = 1;
    for (std::size_t i = 0; i < ker.rows(); ++i) {
      const Scalar& s = ker.at(i, j);
      if (q.is_zero(s) || s.is_residue()) continue;
      mpz_class den = s.rational().get_den();
      mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
    }
    std::vector<long> z(ker.rows(), 0);
    mpz_class gcd_num = 0;
    for (std::size_t i = 0; i < ker.rows(); ++i) {
      Scalar s = q.mul(Scalar(mpq_class(lcm_den)), ker.at(i, j));
      mpz_class n = s.is_residue() ? mpz_class(static_cast<long>(s.residue()))
                                   : mpz_class(s.rational().get_num());
      z[i] = n.get_si();
      mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), n.get_mpz_t());
    }
    if (gcd_num > 1)
      for (long& v : z) v /= gcd_num.get_si();
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<std::vector<long>> mod_p_cocycle_basis(const SimplicialComplex& space,
                                                   std::int64_t p) {
  Field fp = Field::prime(p);
  ChainComplex c = space.cochain_complex(fp);
  Matrix ker = kernel_basis(fp, c.diff(1));
  std::vector<std::vector<long>> out;
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    std::vector<long> z(ker.rows(), 0);
    for (std::size_t i = 0; i < ker.rows(); ++i)
      z[i] = static_cast<long>(ker.at(i, j).residue());
    out.push_back(std::move(z));
  }
  return out;
}

std::optional<std::vector<long>> nontrivial_cocycle(const SimplicialComplex& space) {
  Field q = Field::rationals();
  ChainComplex c = space.cochain_complex(q);
  Matrix coboundaries = c.diff(0);
  std::size_t base_rank = rank(q, coboundaries);
  for (const auto& z : integer_cocycle_basis(space)) {
    Matrix col(z.size(), 1);
    for (std::size_t i = 0; i < z.size(); ++i) col.at(i, 0) = q.from_int(z[i]);
    if (rank(q, hstack(coboundaries, col)) > base_rank) return z;
  }
  return std::nullopt;
}

Matrix random_invertible(const Field& f, std::size_t n, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix m(n, n);
    if (f.is_prime_field()) {
      std::uniform_int_distribution<std::int64_t> dist(0, f.characteristic() - 1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = f.from_int(dist(rng));
    } else {
      std::uniform_int_distribution<long> dist(-4, 4);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = f.from_int(dist(rng));
    }
    if (rank(f, m) == n) return m;
  }
  throw invariant_error("failed to sample an invertible matrix");
}

LocalSystem hom_system(const LocalSystem& p, const LocalSystem& q) {
  if (!(p.space().n_vertices() == q.space().n_vertices()))
    throw parse_error("hom system needs systems on the same space");
  const Field& f = p.field();
  if (f != q.field()) throw parse_error("hom system needs a common field");
  std::size_t rp = static_cast<std::size_t>(p.rank());
  std::size_t rq = static_cast<std::size_t>(q.rank());
  LocalSystem h(p.space(), f, static_cast<int>(rp * rq));
  for (const Simplex& e : p.space().simplices(1)) {
    Matrix tq = q.transport(e[0], e[1]);
    Matrix tp_inv = p.transport(e[1], e[0]);
    // M -> T_Q M T_P^{-1} in row-major coordinates (a, b).
    Matrix k(rp * rq, rp * rq);
    for (std::size_t a = 0; a < rq; ++a)
      for (std::size_t b = 0; b < rp; ++b)
        for (std::size_t c = 0; c < rq; ++c)
          for (std::size_t d = 0; d < rp; ++d)
            k.at(a * rp + b, c * rp + d) =
                f.mul(tq.at(a, c), tp_inv.at(d, b));
    h.set_transport(e[0], e[1], k);
  }
  return h;
}

LocalSystem end_system(const LocalSystem& p) { return hom_system(p, p); }

std::size_t flat_hom_dimension(const LocalSystem& p, const LocalSystem& q) {
  const Field& f = p.field();
  std::size_t rp = static_cast<std::size_t>(p.rank());
  std::size_t rq = static_cast<std::size_t>(q.rank());
  std::size_t nv = static_cast<std::size_t>(p.space().n_vertices());
  std::size_t unknowns = nv * rq * rp;  // entries of each f_v, row-major
  const auto& edges = p.space().simplices(1);
  Matrix sys(edges.size() * rq * rp, unknowns);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int i = edges[e][0], j = edges[e][1];
    Matrix tq = q.transport(i, j);
    Matrix tp = p.transport(i, j);
    // Row for each entry (a, b) of T_Q f_i - f_j T_P = 0.
    for (std::size_t a = 0; a < rq; ++a)
      for (std::size_t b = 0; b < rp; ++b) {
        std::size_t row = (e * rq + a) * rp + b;
        for (std::size_t c = 0; c < rq; ++c) {
          std::size_t col = (static_cast<std::size_t>(i) * rq + c) * rp + b;
          sys.at(row, col) = f.add(sys.at(row, col), tq.at(a, c));
        }
        for (std::size_t d = 0; d < rp; ++d) {
          std::size_t col = (static_cast<std::size_t>(j) * rq + a) * rp + d;
          sys.at(row, col) = f.sub(sys.at(row, col), tp.at(d, b));
        }
      }
  }
  return unknowns - rank(f, sys);
}

GradedLocalSystem::GradedLocalSystem(LocalSystem s, std::vector<int> deg)
    : system(std::move(s)), degrees(std::move(deg)) {
  if (degrees.size() != static_cast<std::size_t>(system.rank()))
    throw parse_error("one internal degree per stalk coordinate required");
}

GradedLocalSystem GradedLocalSystem::ungraded(LocalSystem s) {
  std::vector<int> deg(static_cast<std::size_t>(s.rank()), 0);
  return GradedLocalSystem(std::move(s), std::move(deg));
}

int GradedLocalSystem::min_degree() const {
  return *std::min_element(degrees.begin(), degrees.end());
}

int GradedLocalSystem::max_degree() const {
  return *std::max_element(degrees.begin(), degrees.end());
}

std::vector<std::size_t> GradedLocalSystem::coords_of_degree(int t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] == t) out.push_back(i);
  return out;
}

LocalSystem GradedLocalSystem::graded_piece(int t) const {
  require_degree_preserving();
  std::vector<std::size_t> coords = coords_of_degree(t);
  if (coords.empty()) throw parse_error("no coordinates in internal degree " +
                                        std::to_string(t));
  const Field& f = system.field();
  LocalSystem piece(system.space(), f, static_cast<int>(coords.size()));
  for (const Simplex& e : system.space().simplices(1)) {
    Matrix t_full = system.transport(e[0], e[1]);
    Matrix t_piece(coords.size(), coords.size());
    for (std::size_t a = 0; a < coords.size(); ++a)
      for (std::size_t b = 0; b < coords.size(); ++b)
        t_piece.at(a, b) = t_full.at(coords[a], coords[b]);
    piece.set_transport(e[0], e[1], t_piece);
  }
  return piece;
}

void GradedLocalSystem::require_degree_preserving() const {
  const Field& f = system.field();
  for (const Simplex& e : system.space().simplices(1)) {
    Matrix t = system.transport(e[0], e[1]);
    for (std::size_t a = 0; a < degrees.size(); ++a)
      for (std::size_t b = 0; b < degrees.size(); ++b)
        if (degrees[a] != degrees[b] && !f.is_zero(t.at(a, b)))
          throw invariant_error("transport mixes internal degrees on edge " +
                                simplex_to_string(e));
  }
}

GradedLocalSystem graded_hom_system(const GradedLocalSystem& p,
                                    const GradedLocalSystem& q) {
  p.require_degree_preserving();
  q.require_degree_preserving();
  LocalSystem h = hom_system(p.system, q.system);
  std::size_t rp = p.degrees.size(), rq = q.degrees.size();
  std::vector<int> deg(rp * rq, 0);
  for (std::size_t a = 0; a < rq; ++a)
    for (std::size_t b = 0; b < rp; ++b)
      deg[a * rp + b] = q.degrees[a] - p.degrees[b];
  return GradedLocalSystem(std::move(h), std::move(deg));
}

GradedLocalSystem graded_end_system(const GradedLocalSystem& v) {
  return graded_hom_system(v, v);
}

bool h1_probe_vanishes(const SimplicialComplex& space, const Field& also) {
  std::vector<Field> fields = {Field::prime(2), Field::prime(3), Field::prime(5),
                               Field::prime(7)};
  bool have = false;
  for (const Field& f : fields)
    if (f == also) have = true;
  if (!have) fields.push_back(also);
  for (const Field& f : fields) {
    GradedDims h = space.cochain_complex(f).cohomology();
    if (h.count(1)) return false;
  }
  return true;
}

void HomotopyLocalSystem::require_shapes() const {
  std::size_t r = rank();
  if (internal_diff.size() != static_cast<std::size_t>(space.n_vertices()))
    throw invariant_error("homotopy system needs one internal differential per vertex");
  for (int v = 0; v < space.n_vertices(); ++v) {
    const Matrix& d = internal_diff[v];
    if (d.rows() != r || d.cols() != r)
      throw invariant_error("internal differential at vertex " +
                            std::to_string(v) + " has the wrong shape");
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t a = 0; a < r; ++a)
        if (!field.is_zero(d.at(b, a)) && degrees[b] != degrees[a] + 1)
          throw invariant_error("internal differential at vertex " +
                                std::to_string(v) + " is not of degree one");
    if (!is_zero_matrix(field, mat_mul(field, d, d)))
      throw invariant_error("internal differential at vertex " +
                            std::to_string(v) + " does not square to zero");
  }
  for (const auto& [s, op] : ops) {
    if (s.size() < 2 || !space.has(s))
      throw invariant_error("operator attached to a non-simplex " +
                            simplex_to_string(s));
    if (op.rows() != r || op.cols() != r)
      throw invariant_error("operator on " + simplex_to_string(s) +
                            " has the wrong shape");
    int shift = 1 - (static_cast<int>(s.size()) - 1);
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t a = 0; a < r; ++a)
        if (!field.is_zero(op.at(b, a)) && degrees[b] != degrees[a] + shift)
          throw invariant_error("operator on " + simplex_to_string(s) +
                                " is not of degree " + std::to_string(shift));
  }
}

ChainComplex HomotopyLocalSystem::stalk_complex(int v) const {
  if (v < 0 || v >= space.n_vertices())
    throw parse_error("stalk vertex out of range");
  std::map<int, std::vector<std::size_t>> coords;
  for (std::size_t a = 0; a < rank(); ++a) coords[degrees[a]].push_back(a);
  ChainComplex out(field);
  for (const auto& [t, list] : coords) out.set_dim(t, list.size());
  for (const auto& [t, list] : coords) {
    auto up = coords.find(t + 1);
    if (up == coords.end()) continue;
    Matrix d(up->second.size(), list.size());
    for (std::size_t i = 0; i < up->second.size(); ++i)
      for (std::size_t j = 0; j < list.size(); ++j)
        d.at(i, j) = internal_diff[v].at(up->second[i], list[j]);
    out.set_diff(t, std::move(d));
  }
  out.require_valid("stalk complex");
  return out;
}

HomotopyLocalSystem HomotopyLocalSystem::strict(const GradedLocalSystem& p) {
  p.system.require_flat();
  p.require_degree_preserving();
  const SimplicialComplex& space = p.system.space();
  std::size_t r = p.degrees.size();
  HomotopyLocalSystem out{space, p.system.field(), p.degrees, {}, {}};
  out.internal_diff.assign(static_cast<std::size_t>(space.n_vertices()),
                           Matrix(r, r));
  for (const Simplex& e : space.simplices(1))
    out.ops[e] = p.system.transport(e[0], e[1]);
  return out;
}

HomotopyLocalSystem HomotopyLocalSystem::strict(const LocalSystem& p) {
  return strict(GradedLocalSystem::ungraded(p));
}

HomotopyLocalSystem HomotopyLocalSystem::cone_of_identity(const GradedLocalSystem& p) {
  p.system.require_flat();
  p.require_degree_preserving();
  const Field& f = p.system.field();
  const SimplicialComplex& space = p.system.space();
  std::size_t r = p.degrees.size();
  // Coordinates 0..r-1 are the shifted copy, r..2r-1 the plain copy.
  std::vector<int> deg(2 * r);
  for (std::size_t a = 0; a < r; ++a) {
    deg[a] = p.degrees[a] - 1;
    deg[r + a] = p.degrees[a];
  }
  HomotopyLocalSystem out{space, f, std::move(deg), {}, {}};
  Matrix delta(2 * r, 2 * r);
  for (std::size_t a = 0; a < r; ++a) delta.at(r + a, a) = f.one();
  out.internal_diff.assign(static_cast<std::size_t>(space.n_vertices()), delta);
  for (const Simplex& e : space.simplices(1)) {
    Matrix t = p.system.transport(e[0], e[1]);
    Matrix big(2 * r, 2 * r);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        big.at(a, b) = t.at(a, b);
        big.at(r + a, r + b) = t.at(a, b);
      }
    out.ops[e] = std::move(big);
  }
  return out;
}

HomotopyLocalSystem HomotopyLocalSystem::cone_of_identity(const LocalSystem& p) {
  return cone_of_identity(GradedLocalSystem::ungraded(p));
}

}  // namespace cotangent
