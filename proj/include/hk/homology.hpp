#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "hk/mesh.hpp"

namespace hk {

using BigInt = boost::multiprecision::cpp_int;

// Dense arbitrary-precision integer matrix. Everything in this module is
// exact; no floating point anywhere.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;
  bool is_zero() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> a_;
};

// U * A * V = D with D diagonal, d_i | d_{i+1}, d_i >= 0, and U, V
// unimodular. The inverses are maintained alongside the elementary
// operations, so unimodularity holds by exact reconstruction.
struct SnfResult {
  IntMatrix u, v, d;
  IntMatrix u_inv, v_inv;
  int rank = 0;
  std::vector<BigInt> diagonal() const;
};

SnfResult smith_normal_form(const IntMatrix& a);

struct HomologySummary {
  long betti = 0;
  std::vector<long long> torsion;  // each >= 2, each dividing the next
};

// H_k of a chain complex given the boundary maps d_{k+1}: C_{k+1} -> C_k and
// d_k: C_k -> C_{k-1}. Throws NotAComplex unless d_k . d_{k+1} = 0.
HomologySummary homology(const IntMatrix& d_kplus1, const IntMatrix& d_k);

// Boundary operator of the mesh in the sorted-simplex convention;
// k in 0..4 (d_0 and d_4 are the trivial maps with an empty side).
IntMatrix boundary_matrix(const SimplicialComplex3& c, int k);

// H_0..H_3 of the mesh.
std::vector<HomologySummary> mesh_homology(const SimplicialComplex3& c);

// Integer 2-cycles whose classes freely generate H_2(M,Z)/torsion.
// Periodic meshes take a verified coordinate-plane fast path; everything
// else goes through the Smith-normal-form kernel route.
std::vector<TwoCycle> two_cycle_basis(const SimplicialComplex3& c);

// Integer lattice in Z^dim given by a column Hermite-normal-form basis.
class Lattice {
public:
  Lattice() = default;
  Lattice(int dim, std::vector<std::vector<long long>> hnf_columns,
          std::vector<int> pivot_rows)
      : dim_(dim), basis_(std::move(hnf_columns)), pivot_rows_(std::move(pivot_rows)) {}

  int dim() const { return dim_; }
  const std::vector<std::vector<long long>>& basis() const { return basis_; }
  bool contains(const std::vector<long long>& v) const;
  // Canonical coset representative of v modulo the lattice.
  std::vector<long long> reduce(const std::vector<long long>& v) const;

private:
  int dim_ = 0;
  std::vector<std::vector<long long>> basis_;  // columns
  std::vector<int> pivot_rows_;
};

Lattice lattice_from_vectors(int dim, const std::vector<std::vector<long long>>& generators);

}  // namespace hk
