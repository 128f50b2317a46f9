#include "hk/invariants.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <cmath>
#include <mutex>
#include <numbers>

#include "hk/errors.hpp"
#include "hk/util.hpp"

namespace hk {

using std::numbers::pi;
using Complex = std::complex<double>;

double triangle_flux(const CosetMap& phi, Index triangle, int k) {
  const auto& tri = phi.complex->triangles[triangle];
  const Complex overlap = (phi.values[tri[0]][k] * phi.values[tri[1]][k] * phi.values[tri[2]][k])
                              .trace();
  if (std::abs(overlap) < 1e-9)
    throw DegenerateTriangle("triangle_flux: triple overlap below 1e-9; map under-resolved",
                             triangle);
  return std::arg(overlap) / (2.0 * pi);
}

PrimaryInvariant primary_invariant(const CosetMap& phi, const std::vector<TwoCycle>& basis,
                                   const InvariantOptions& opt) {
  const int np = phi.group.total_projectors();
  PrimaryInvariant out;
  for (const auto& cycle : basis) {
    if (cycle.complex_id != phi.complex->id)
      throw MeshMismatch("primary_invariant: cycle from a different complex");
    if (cycle.coeff.size() != phi.complex->num_triangles())
      throw SizeMismatch("primary_invariant: cycle length != triangle count");
    std::vector<double> row(np, 0.0);
    std::vector<std::vector<double>> contributions(np);
    for (std::size_t f = 0; f < cycle.coeff.size(); ++f) {
      if (cycle.coeff[f] == 0) continue;
      for (int k = 0; k < np; ++k)
        contributions[k].push_back(cycle.coeff[f] * triangle_flux(phi, static_cast<Index>(f), k));
    }
    for (int k = 0; k < np; ++k) row[k] = pairwise_sum(contributions[k]);
    out.raw.push_back(std::move(row));
  }

  for (const auto& row : out.raw) {
    std::vector<long long> irow;
    for (double x : row) {
      const double r = std::round(x);
      out.gap = std::max(out.gap, std::abs(x - r));
      irow.push_back(static_cast<long long>(r));
    }
    out.fluxes.push_back(std::move(irow));
  }
  if (opt.enforce_gap && out.gap >= opt.gap_tolerance)
    throw GapTooLarge("primary_invariant: flux too far from an integer", out.gap);

  // Sum P_k = I forces the per-factor flux sum to vanish.
  for (const auto& irow : out.fluxes)
    for (int f = 0; f < phi.group.num_factors(); ++f) {
      long long s = 0;
      const int off = phi.group.projector_offset(f);
      for (int k = 0; k < phi.group.factors[f]; ++k) s += irow[off + k];
      if (s != 0) throw Error("primary_invariant: flux row does not sum to zero");
    }
  return out;
}

std::vector<std::vector<long long>> primary_difference(const CosetMap& phi, const CosetMap& psi,
                                                       const std::vector<TwoCycle>& basis,
                                                       const InvariantOptions& opt) {
  require_same_mesh(phi, psi);
  const auto a = primary_invariant(phi, basis, opt);
  const auto b = primary_invariant(psi, basis, opt);
  std::vector<std::vector<long long>> out = a.fluxes;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] -= b.fluxes[i][j];
  return out;
}

bool is_2_homotopic(const CosetMap& phi, const CosetMap& psi, const InvariantOptions& opt) {
  require_same_mesh(phi, psi);
  const auto basis = two_cycle_basis(*phi.complex);
  if (basis.empty()) return true;  // H^2 carries no free flux to compare
  const auto diff = primary_difference(phi, psi, basis, opt);
  for (const auto& row : diff)
    for (long long x : row)
      if (x != 0) return false;
  return true;
}

std::vector<double> wz_density(const GroupMap& u, int factor) {
  const auto& c = *u.complex;
  std::vector<double> density(c.num_tets());
  std::exception_ptr branch_error;
  std::mutex branch_mutex;
  parallel_for(c.num_tets(), [&](std::size_t t) {
    const auto& tet = c.tets[t];
    try {
      density[t] = wz_tet(u.group, u.values[tet.v[0]], u.values[tet.v[1]], u.values[tet.v[2]],
                          u.values[tet.v[3]], tet.orient, factor);
    } catch (const BranchCut& e) {
      std::lock_guard<std::mutex> lock(branch_mutex);
      if (!branch_error)
        branch_error = std::make_exception_ptr(
            BranchCut(std::string(e.what()) + " (tet " + std::to_string(t) + ")",
                      static_cast<std::ptrdiff_t>(t)));
    }
  });
  if (branch_error) std::rethrow_exception(branch_error);
  return density;
}

SecondaryInvariant secondary_invariant(const GroupMap& u, const InvariantOptions& opt) {
  SecondaryInvariant out;
  for (int f = 0; f < u.group.num_factors(); ++f) {
    const auto density = wz_density(u, f);
    const double raw = integrate_3form(*u.complex, density);
    const double r = std::round(raw);
    out.raw.push_back(raw);
    out.value.push_back(static_cast<long long>(r));
    out.gap = std::max(out.gap, std::abs(raw - r));
  }
  if (opt.enforce_gap && out.gap >= opt.gap_tolerance)
    throw GapTooLarge("secondary_invariant: integral too far from an integer", out.gap);
  return out;
}

double whitehead_hopf(const CosetMap& phi) {
  const auto& c = *phi.complex;
  if (c.known_betti2) {
    if (*c.known_betti2 != 0) throw Error("whitehead_hopf: mesh must have betti_2 = 0");
  } else {
    const auto h = mesh_homology(c);
    if (h[2].betti != 0) throw Error("whitehead_hopf: mesh must have betti_2 = 0");
  }

  // Flux 2-cochain of the first projector.
  std::vector<double> flux(c.num_triangles());
  parallel_for(c.num_triangles(), [&](std::size_t f) {
    flux[f] = triangle_flux(phi, static_cast<Index>(f), 0);
  });

  // delta^1 = transpose of the triangle boundary operator.
  Eigen::SparseMatrix<double> delta(static_cast<Eigen::Index>(c.num_triangles()),
                                    static_cast<Eigen::Index>(c.num_edges()));
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(3 * c.num_triangles());
    for (std::size_t f = 0; f < c.num_triangles(); ++f)
      for (const auto& [e, s] : c.tri_edges[f])
        trips.emplace_back(static_cast<int>(f), e, static_cast<double>(s));
    delta.setFromTriplets(trips.begin(), trips.end());
  }

  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(flux.data(), flux.size());
  Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> solver;
  solver.setTolerance(1e-14);
  solver.setMaxIterations(20000);
  solver.compute(delta);
  Eigen::VectorXd alpha = solver.solve(rhs);
  const double residual = (delta * alpha - rhs).norm();
  if (residual > 1e-8)
    throw SolveFailed("whitehead_hopf: residual " + std::to_string(residual) +
                      " > 1e-8; flux cochain is not closed");

  // Cup pairing <alpha cup F, [M]> in the sorted-vertex convention:
  // (alpha cup F)([w0 w1 w2 w3]) = alpha([w0 w1]) * F([w1 w2 w3]).
  std::vector<double> contrib(c.num_tets());
  parallel_for(c.num_tets(), [&](std::size_t t) {
    std::array<Index, 4> w = c.tets[t].v;
    int parity = 1;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3 - i; ++j)
        if (w[j] > w[j + 1]) {
          std::swap(w[j], w[j + 1]);
          parity = -parity;
        }
    const int sign = c.tets[t].orient * parity;
    const Index front = c.edge_index(w[0], w[1]);
    const Index back = c.triangle_index(w[1], w[2], w[3]);
    if (front < 0 || back < 0) throw Error("whitehead_hopf: missing face in cup product");
    const double a01 = alpha[front];
    contrib[t] = sign * a01 * flux[back];
  });
  // Pairing sign fixed so the degree-1 Hopf fixture evaluates to +1, the
  // same orientation convention the calibrated Wess-Zumino integral uses.
  return -pairwise_sum(contrib);
}

Lattice stabilizer_lattice(const CosetMap& phi, const std::vector<GroupMap>& generators,
                           const InvariantOptions& opt) {
  const int dim = phi.group.num_factors();
  std::vector<std::vector<long long>> values;
  for (const auto& w : generators) {
    if (w.complex->id != phi.complex->id || !w.group.same_group(phi.group))
      throw MeshMismatch("stabilizer_lattice: generator on a different mesh or group");
    const double moved = action_distance(w, phi, phi);
    if (moved > 1e-8)
      throw NotAStabilizer("stabilizer_lattice: generator moves phi by " + std::to_string(moved));
    values.push_back(secondary_invariant(w, opt).value);
  }
  return lattice_from_vectors(dim, values);
}

double conjugation_invariance_check(const GroupMap& w, const GroupMap& v) {
  require_same_mesh(w, v);
  InvariantOptions raw_only;
  raw_only.enforce_gap = false;
  const auto a = secondary_invariant(pointwise_conjugate(w, v), raw_only);
  const auto b = secondary_invariant(w, raw_only);
  double m = 0.0;
  for (std::size_t k = 0; k < a.raw.size(); ++k) m = std::max(m, std::abs(a.raw[k] - b.raw[k]));
  return m;
}

}  // namespace hk
