#include "hk/homology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hk/errors.hpp"

namespace hk {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw SizeMismatch("IntMatrix multiply: shape mismatch");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const BigInt& aik = at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const BigInt& b = o.at(k, j);
        if (b != 0) r.at(i, j) += aik * b;
      }
    }
  return r;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const BigInt& v) { return v == 0; });
}

std::vector<BigInt> SnfResult::diagonal() const {
  std::vector<BigInt> out;
  const std::size_t n = std::min(d.rows(), d.cols());
  for (std::size_t i = 0; i < n; ++i) out.push_back(d.at(i, i));
  return out;
}

namespace {

// Elementary operations on D with the transforms and their inverses kept in
// lock step, preserving D = U * A * V throughout.
struct Reduction {
  IntMatrix d, u, u_inv, v, v_inv;

  explicit Reduction(const IntMatrix& a)
      : d(a),
        u(IntMatrix::identity(a.rows())),
        u_inv(IntMatrix::identity(a.rows())),
        v(IntMatrix::identity(a.cols())),
        v_inv(IntMatrix::identity(a.cols())) {}

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < d.cols(); ++c) std::swap(d.at(i, c), d.at(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    for (std::size_t r = 0; r < u_inv.rows(); ++r) std::swap(u_inv.at(r, i), u_inv.at(r, j));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < d.rows(); ++r) std::swap(d.at(r, i), d.at(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(i, c), v_inv.at(j, c));
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < d.cols(); ++c) d.at(i, c) = -d.at(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv.at(r, i) = -u_inv.at(r, i);
  }

  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < d.cols(); ++c)
      if (d.at(j, c) != 0) d.at(i, c) += q * d.at(j, c);
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (u.at(j, c) != 0) u.at(i, c) += q * u.at(j, c);
    for (std::size_t r = 0; r < u_inv.rows(); ++r)
      if (u_inv.at(r, i) != 0) u_inv.at(r, j) -= q * u_inv.at(r, i);
  }

  // col_i += q * col_j
  void add_col(std::size_t i, std::size_t j, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < d.rows(); ++r)
      if (d.at(r, j) != 0) d.at(r, i) += q * d.at(r, j);
    for (std::size_t r = 0; r < v.rows(); ++r)
      if (v.at(r, j) != 0) v.at(r, i) += q * v.at(r, j);
    for (std::size_t c = 0; c < v_inv.cols(); ++c)
      if (v_inv.at(i, c) != 0) v_inv.at(j, c) -= q * v_inv.at(i, c);
  }
};

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Division with |remainder| <= |b|/2; keeps entry growth down.
BigInt nearest_div(const BigInt& a, const BigInt& b) {
  BigInt q = floor_div(a, b);
  BigInt r = a - q * b;
  if (2 * r > abs(b)) ++q;
  return q;
}

}  // namespace

SnfResult smith_normal_form(const IntMatrix& a) {
  Reduction red(a);
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t t = 0;

  while (t < m && t < n) {
    // Pivot with minimal nonzero absolute value, to control growth.
    std::size_t pi = t, pj = t;
    BigInt best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const BigInt& x = red.d.at(i, j);
        if (x == 0) continue;
        if (best == 0 || abs(x) < best) {
          best = abs(x);
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    red.swap_rows(t, pi);
    red.swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (red.d.at(i, t) == 0) continue;
        const BigInt q = nearest_div(red.d.at(i, t), red.d.at(t, t));
        red.add_row(i, t, -q);
        if (red.d.at(i, t) != 0) {
          // remainder became the smaller pivot
          red.swap_rows(t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (red.d.at(t, j) == 0) continue;
        const BigInt q = nearest_div(red.d.at(t, j), red.d.at(t, t));
        red.add_col(j, t, -q);
        if (red.d.at(t, j) != 0) {
          red.swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Pivot must divide the rest of the submatrix for the divisibility
      // chain; fold an offending row in and reduce again.
      for (std::size_t i = t + 1; i < m && clean; ++i)
        for (std::size_t j = t + 1; j < n && clean; ++j)
          if (red.d.at(i, j) % red.d.at(t, t) != 0) {
            red.add_row(t, i, 1);
            clean = false;
          }
    }
    if (red.d.at(t, t) < 0) red.negate_row(t);
    ++t;
  }

  SnfResult out;
  out.rank = static_cast<int>(t);
  out.d = std::move(red.d);
  out.u = std::move(red.u);
  out.u_inv = std::move(red.u_inv);
  out.v = std::move(red.v);
  out.v_inv = std::move(red.v_inv);
  return out;
}

HomologySummary homology(const IntMatrix& d_kplus1, const IntMatrix& d_k) {
  if (d_k.cols() != d_kplus1.rows())
    throw SizeMismatch("homology: boundary maps have incompatible shapes");
  if (d_k.rows() > 0 && d_kplus1.cols() > 0 && !(d_k * d_kplus1).is_zero())
    throw NotAComplex("homology: d_k . d_{k+1} != 0");

  const std::size_t n_k = d_k.cols();
  const auto snf_k = smith_normal_form(d_k);
  const auto snf_k1 = smith_normal_form(d_kplus1);

  HomologySummary out;
  out.betti = static_cast<long>(n_k) - snf_k.rank - snf_k1.rank;
  for (const BigInt& x : snf_k1.diagonal())
    if (x >= 2) out.torsion.push_back(x.convert_to<long long>());
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

IntMatrix boundary_matrix(const SimplicialComplex3& c, int k) {
  switch (k) {
    case 0:
      return IntMatrix(0, c.num_vertices());
    case 1: {
      IntMatrix m(c.num_vertices(), c.num_edges());
      for (std::size_t e = 0; e < c.num_edges(); ++e) {
        m.at(c.edges[e][1], e) += 1;
        m.at(c.edges[e][0], e) -= 1;
      }
      return m;
    }
    case 2: {
      IntMatrix m(c.num_edges(), c.num_triangles());
      for (std::size_t f = 0; f < c.num_triangles(); ++f)
        for (const auto& [e, s] : c.tri_edges[f]) m.at(e, f) += s;
      return m;
    }
    case 3: {
      IntMatrix m(c.num_triangles(), c.num_tets());
      for (std::size_t t = 0; t < c.num_tets(); ++t)
        for (const auto& [f, s] : c.tet_faces[t]) m.at(f, t) += s;
      return m;
    }
    case 4:
      return IntMatrix(c.num_tets(), 0);
    default:
      throw Error("boundary_matrix: k must be in 0..4");
  }
}

std::vector<HomologySummary> mesh_homology(const SimplicialComplex3& c) {
  std::vector<HomologySummary> out;
  for (int k = 0; k < 4; ++k) out.push_back(homology(boundary_matrix(c, k + 1), boundary_matrix(c, k)));
  return out;
}

namespace {

// Column Hermite normal form, in place; returns pivot (row, col) pairs.
std::vector<std::pair<int, int>> column_hnf(IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::pair<int, int>> pivots;
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows && k < cols; ++r) {
    // gcd-collapse row r across columns k..cols-1
    while (true) {
      std::size_t jmin = cols;
      BigInt best = 0;
      for (std::size_t j = k; j < cols; ++j) {
        const BigInt& x = m.at(r, j);
        if (x == 0) continue;
        if (best == 0 || abs(x) < best) {
          best = abs(x);
          jmin = j;
        }
      }
      if (jmin == cols) break;  // row all zero
      bool others = false;
      for (std::size_t j = k; j < cols; ++j) {
        if (j == jmin || m.at(r, j) == 0) continue;
        others = true;
        const BigInt q = floor_div(m.at(r, j), m.at(r, jmin));
        for (std::size_t rr = 0; rr < rows; ++rr) m.at(rr, j) -= q * m.at(rr, jmin);
      }
      if (!others) {
        // single nonzero left: move to column k, normalize sign
        for (std::size_t rr = 0; rr < rows; ++rr) std::swap(m.at(rr, k), m.at(rr, jmin));
        if (m.at(r, k) < 0)
          for (std::size_t rr = 0; rr < rows; ++rr) m.at(rr, k) = -m.at(rr, k);
        // reduce earlier columns modulo the pivot
        for (std::size_t j = 0; j < k; ++j) {
          const BigInt q = floor_div(m.at(r, j), m.at(r, k));
          if (q != 0)
            for (std::size_t rr = 0; rr < rows; ++rr) m.at(rr, j) -= q * m.at(rr, k);
        }
        pivots.emplace_back(static_cast<int>(r), static_cast<int>(k));
        ++k;
        break;
      }
    }
  }
  return pivots;
}

long long to_ll(const BigInt& x) {
  if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
    throw Error("integer overflow converting lattice entry");
  return x.convert_to<long long>();
}

std::vector<TwoCycle> coordinate_plane_cycles(const SimplicialComplex3& c) {
  // One cycle per coordinate plane x_axis = 0, oriented by the volume-form
  // pairing dual to that axis.
  std::vector<TwoCycle> out;
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, w = (axis + 2) % 3;
    TwoCycle z;
    z.complex_id = c.id;
    z.coeff.assign(c.num_triangles(), 0);
    bool any = false;
    for (std::size_t f = 0; f < c.num_triangles(); ++f) {
      bool in_plane = true;
      for (int k = 0; k < 3 && in_plane; ++k) {
        double x = c.vertices[c.triangles[f][k]][axis];
        if (std::min(std::abs(x), std::abs(x - 1.0)) > 1e-9) in_plane = false;
      }
      if (!in_plane) continue;
      // triangle edge vectors from its own edge copies
      const auto& te = c.tri_edges[f];
      const std::array<double, 3> e1 = c.edge_disp[te[2][0]];  // v0 -> v1
      const std::array<double, 3> e2 = c.edge_disp[te[1][0]];  // v0 -> v2
      if (std::abs(e1[axis]) > 1e-9 || std::abs(e2[axis]) > 1e-9) continue;
      const double wedge = e1[u] * e2[w] - e1[w] * e2[u];
      if (std::abs(wedge) < 1e-12) continue;
      z.coeff[f] = wedge > 0 ? 1 : -1;
      any = true;
    }
    if (!any || !is_two_cycle(c, z)) return {};
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

std::vector<TwoCycle> two_cycle_basis(const SimplicialComplex3& c) {
  if (c.known_betti2 && *c.known_betti2 == 0) return {};

  if (c.periodic) {
    auto fast = coordinate_plane_cycles(c);
    if (fast.size() == 3) return fast;
  }

  // Generic route: kernel of d2 modulo image of d3, free part only.
  if (c.num_triangles() > 4000)
    throw ResourceLimit("two_cycle_basis: complex too large for the generic SNF route");

  const auto snf2 = smith_normal_form(boundary_matrix(c, 2));
  const std::size_t ntri = c.num_triangles();
  const std::size_t kdim = ntri - snf2.rank;
  if (kdim == 0) return {};

  // Kernel lattice basis: trailing columns of V.
  IntMatrix kernel(ntri, kdim);
  for (std::size_t r = 0; r < ntri; ++r)
    for (std::size_t j = 0; j < kdim; ++j) kernel.at(r, j) = snf2.v.at(r, snf2.rank + j);

  // Tet boundaries in kernel coordinates: rows rank.. of V^-1 * d3.
  const IntMatrix vinv_d3 = snf2.v_inv * boundary_matrix(c, 3);
  IntMatrix img(kdim, c.num_tets());
  for (std::size_t r = 0; r < kdim; ++r)
    for (std::size_t j = 0; j < c.num_tets(); ++j) img.at(r, j) = vinv_d3.at(snf2.rank + r, j);

  // Quotient Z^kdim / im(img): free generators are the columns of U^-1 at
  // indices whose SNF diagonal entry is zero.
  const auto snf_img = smith_normal_form(img);
  const auto diag = snf_img.diagonal();
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < kdim; ++i) {
    const BigInt d = i < diag.size() ? diag[i] : BigInt(0);
    if (d == 0) free_idx.push_back(i);
  }

  IntMatrix gens(ntri, free_idx.size());
  for (std::size_t col = 0; col < free_idx.size(); ++col)
    for (std::size_t r = 0; r < ntri; ++r) {
      BigInt acc = 0;
      for (std::size_t j = 0; j < kdim; ++j) {
        const BigInt& x = snf_img.u_inv.at(j, free_idx[col]);
        if (x != 0) acc += kernel.at(r, j) * x;
      }
      gens.at(r, col) = acc;
    }

  // Canonical deterministic form of the chosen basis.
  column_hnf(gens);

  std::vector<TwoCycle> out;
  for (std::size_t col = 0; col < gens.cols(); ++col) {
    TwoCycle z;
    z.complex_id = c.id;
    z.coeff.resize(ntri);
    for (std::size_t r = 0; r < ntri; ++r) z.coeff[r] = to_ll(gens.at(r, col));
    if (!is_two_cycle(c, z)) throw Error("two_cycle_basis: generator is not a cycle");
    out.push_back(std::move(z));
  }
  return out;
}

bool Lattice::contains(const std::vector<long long>& v) const {
  if (static_cast<int>(v.size()) != dim_) throw SizeMismatch("lattice membership: wrong dimension");
  std::vector<long long> rem = v;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const int r = pivot_rows_[k];
    const long long p = basis_[k][r];
    if (rem[r] % p != 0) return false;
    const long long q = rem[r] / p;
    for (int i = 0; i < dim_; ++i) rem[i] -= q * basis_[k][i];
  }
  return std::all_of(rem.begin(), rem.end(), [](long long x) { return x == 0; });
}

std::vector<long long> Lattice::reduce(const std::vector<long long>& v) const {
  if (static_cast<int>(v.size()) != dim_) throw SizeMismatch("lattice reduce: wrong dimension");
  std::vector<long long> rem = v;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const int r = pivot_rows_[k];
    const long long p = basis_[k][r];
    long long q = rem[r] / p;
    if (rem[r] % p != 0 && ((rem[r] < 0) != (p < 0))) --q;  // floor division
    for (int i = 0; i < dim_; ++i) rem[i] -= q * basis_[k][i];
  }
  return rem;
}

Lattice lattice_from_vectors(int dim, const std::vector<std::vector<long long>>& generators) {
  IntMatrix m(dim, generators.size());
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (static_cast<int>(generators[j].size()) != dim)
      throw SizeMismatch("lattice generator: wrong dimension");
    for (int i = 0; i < dim; ++i) m.at(i, j) = generators[j][i];
  }
  const auto pivots = column_hnf(m);
  std::vector<std::vector<long long>> cols;
  std::vector<int> pivot_rows;
  for (const auto& [r, kcol] : pivots) {
    std::vector<long long> col(dim);
    for (int i = 0; i < dim; ++i) col[i] = to_ll(m.at(i, kcol));
    cols.push_back(std::move(col));
    pivot_rows.push_back(r);
  }
  return Lattice(dim, std::move(cols), std::move(pivot_rows));
}

}  // namespace hk
