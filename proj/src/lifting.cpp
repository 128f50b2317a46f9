#include "hk/lifting.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include "hk/errors.hpp"
#include "hk/util.hpp"

namespace hk {

using std::numbers::pi;
using Complex = std::complex<double>;

GroupElement pointwise_transporter(const GroupSpec& g, const std::vector<Eigen::MatrixXcd>& p,
                                   const std::vector<Eigen::MatrixXcd>& q) {
  GroupElement out;
  for (int f = 0; f < g.num_factors(); ++f) {
    const int n = g.factors[f];
    const int off = g.projector_offset(f);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) a += q[off + k] * p[off + k];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 5e-5)
      throw AntipodalDegenerate("pointwise_transporter: tuples near an eigenvalue crossing");
    Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();
    const double phase = std::arg(w.determinant());
    w *= std::polar(1.0, -phase / n);
    // center representative closest to the identity
    int best_j = 0;
    double best_re = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double re = (w * std::polar(1.0, 2.0 * pi * j / n)).trace().real();
      if (re > best_re) {
        best_re = re;
        best_j = j;
      }
    }
    w *= std::polar(1.0, 2.0 * pi * best_j / n);
    out.blocks.push_back(std::move(w));
  }
  return out;
}

GroupMap stabilizer_projection(const GroupMap& w, const CosetMap& phi) {
  if (w.complex->id != phi.complex->id || !w.group.same_group(phi.group))
    throw MeshMismatch("stabilizer_projection: mismatched maps");
  std::vector<GroupElement> vals(w.values.size());
  parallel_for(vals.size(), [&](std::size_t v) {
    GroupElement e;
    for (int f = 0; f < phi.group.num_factors(); ++f) {
      const int n = phi.group.factors[f];
      const int off = phi.group.projector_offset(f);
      Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(n, n);
      double total_phase = 0.0;
      std::vector<double> phases(n);
      for (int k = 0; k < n; ++k) {
        const Complex c = (phi.values[v][off + k] * w.values[v].blocks[f]).trace();
        if (std::abs(c) < 1e-6)
          throw NotAStabilizer("stabilizer_projection: generator far from the stabilizer torus");
        phases[k] = std::arg(c);
        total_phase += phases[k];
      }
      // det correction spread evenly; phases sum to a multiple of 2 pi
      const double shift = (total_phase - 2.0 * pi * std::round(total_phase / (2.0 * pi))) / n;
      for (int k = 0; k < n; ++k)
        blk += std::polar(1.0, phases[k] - shift) * phi.values[v][off + k];
      e.blocks.push_back(std::move(blk));
    }
    vals[v] = std::move(e);
  });
  return GroupMap::create(w.complex, w.group, std::move(vals));
}

namespace {

struct GaugeState {
  const CosetMap* phi;
  std::vector<GroupElement> cur;  // u_i t_i

  double energy(const SimplicialComplex3& c) const {
    std::vector<double> e(c.num_edges());
    for (std::size_t k = 0; k < c.num_edges(); ++k) {
      const double d = cur[c.edges[k][0]].distance(cur[c.edges[k][1]]);
      e[k] = d * d;
    }
    return pairwise_sum(e);
  }
};

// Exact coordinate maximization of Re tr(t^dag u^dag B) over the stabilizer
// torus of phi(v), by closed-form pair rotations of adjacent angles.
void update_vertex(GaugeState& st, Index v, const std::vector<Index>& neighbors) {
  const GroupSpec& g = st.phi->group;
  GroupElement b;
  for (int f = 0; f < g.num_factors(); ++f)
    b.blocks.push_back(Eigen::MatrixXcd::Zero(g.factors[f], g.factors[f]));
  for (Index j : neighbors)
    for (std::size_t f = 0; f < b.blocks.size(); ++f) b.blocks[f] += st.cur[j].blocks[f];

  for (int f = 0; f < g.num_factors(); ++f) {
    const int n = g.factors[f];
    const int off = g.projector_offset(f);
    const Eigen::MatrixXcd m = st.cur[v].blocks[f].adjoint() * b.blocks[f];
    std::vector<Complex> c(n);
    for (int k = 0; k < n; ++k) c[k] = (st.phi->values[v][off + k] * m).trace();

    std::vector<double> theta(n, 0.0);
    const int rounds = n == 2 ? 1 : 3;
    for (int r = 0; r < rounds; ++r)
      for (int k = 0; k + 1 < n; ++k) {
        const Complex a = std::polar(1.0, -theta[k]) * c[k];
        const Complex bb = std::polar(1.0, -theta[k + 1]) * c[k + 1];
        const double tau = std::atan2(a.imag() - bb.imag(), a.real() + bb.real());
        theta[k] += tau;
        theta[k + 1] -= tau;
      }

    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
      t += std::polar(1.0, theta[k]) * st.phi->values[v][off + k];
    st.cur[v].blocks[f] = st.cur[v].blocks[f] * t;
  }
}

}  // namespace

LiftResult construct_lift(const CosetMap& phi_in, const CosetMap& psi_in, const LiftOptions& opt) {
  require_same_mesh(phi_in, psi_in);

  // Exact flux pre-check; no lift exists when the primary invariants differ.
  {
    const auto basis = two_cycle_basis(*phi_in.complex);
    if (!basis.empty()) {
      const auto diff = primary_difference(phi_in, psi_in, basis);
      for (const auto& row : diff)
        for (long long x : row)
          if (x != 0)
            throw PrimaryMismatch("construct_lift: primary invariants differ; no lift exists");
    }
  }

  CosetMap phi = phi_in, psi = psi_in;
  for (int attempt = 0;; ++attempt) {
    const auto& c = *phi.complex;
    std::vector<GroupElement> transporters(c.num_vertices());
    std::ptrdiff_t degenerate_vertex = -1;
    std::mutex mtx;
    bool degenerate = false;
    parallel_for(c.num_vertices(), [&](std::size_t v) {
      try {
        transporters[v] = pointwise_transporter(phi.group, phi.values[v], psi.values[v]);
      } catch (const AntipodalDegenerate&) {
        std::lock_guard<std::mutex> lock(mtx);
        degenerate = true;
        if (degenerate_vertex < 0) degenerate_vertex = static_cast<std::ptrdiff_t>(v);
      }
    });
    if (degenerate) {
      if (attempt >= opt.max_subdivisions)
        throw AntipodalDegenerate("construct_lift: antipodal pair persisted after " +
                                      std::to_string(attempt) + " subdivisions",
                                  degenerate_vertex);
      const auto sub = subdivide(c);
      phi = resample(phi, sub);
      psi = resample(psi, sub);
      continue;
    }

    // Right-torus gauge smoothing; acts in the fiber over phi, so u . phi
    // stays equal to psi throughout.
    GaugeState st{&phi, std::move(transporters)};
    double energy = st.energy(c);
    int sweeps = 0;
    if (energy > 1e-14) {
      // breadth-first alignment pass from vertex 0
      std::vector<char> seen(c.num_vertices(), 0);
      std::queue<Index> bfs;
      bfs.push(0);
      seen[0] = 1;
      while (!bfs.empty()) {
        const Index v = bfs.front();
        bfs.pop();
        std::vector<Index> fixed;
        for (Index nb : c.vertex_neighbors[v]) {
          if (seen[nb])
            fixed.push_back(nb);
          else {
            seen[nb] = 1;
            bfs.push(nb);
          }
        }
        if (!fixed.empty() && v != 0) update_vertex(st, v, fixed);
      }
      energy = st.energy(c);
      for (; sweeps < opt.max_sweeps; ++sweeps) {
        for (Index v = 0; v < static_cast<Index>(c.num_vertices()); ++v)
          update_vertex(st, v, c.vertex_neighbors[v]);
        const double next = st.energy(c);
        const bool converged = energy - next <= 1e-9 * std::max(1.0, energy);
        energy = next;
        if (converged) {
          ++sweeps;
          break;
        }
      }
    }

    GroupMap u = GroupMap::create(phi.complex, phi.group, std::move(st.cur));
    const double residual = action_distance(u, phi, psi);
    const double bound =
        opt.edge_gap_bound.value_or(std::max(phi.edge_gap, psi.edge_gap) + 0.5);
    if (residual > opt.residual_tol)
      throw NonConvergent("construct_lift: residual " + std::to_string(residual) +
                          " above tolerance");
    if (u.edge_gap > bound) {
      // Smoothing stalled. Fluxes were equal at entry, so this is a
      // numerical failure, not an obstruction.
      const auto basis = two_cycle_basis(*phi.complex);
      if (!basis.empty()) {
        const auto diff = primary_difference(phi, psi, basis);
        for (const auto& row : diff)
          for (long long x : row)
            if (x != 0) throw PrimaryMismatch("construct_lift: primary invariants differ");
      }
      throw NonConvergent("construct_lift: gauge smoothing stalled with edge gap " +
                          std::to_string(u.edge_gap) + " above bound " + std::to_string(bound));
    }

    LiftResult out{std::move(u), phi, psi, residual, 0.0, SmoothingReport{sweeps, energy},
                   attempt};
    out.edge_gap = out.u.edge_gap;
    return out;
  }
}

const char* to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::NotTwoHomotopic: return "NotTwoHomotopic";
    case VerdictTag::Homotopic: return "Homotopic";
    case VerdictTag::NotHomotopic: return "NotHomotopic";
    default: return "Inconclusive";
  }
}

namespace {

bool all_zero(const std::vector<std::vector<long long>>& m) {
  for (const auto& row : m)
    for (long long x : row)
      if (x != 0) return false;
  return true;
}

}  // namespace

Verdict homotopy_verdict(const CosetMap& phi_in, const CosetMap& psi_in,
                         const std::vector<GroupMap>& stabilizer_generators,
                         const VerdictOptions& opt) {
  require_same_mesh(phi_in, psi_in);
  InvariantOptions inv_opt;
  inv_opt.gap_tolerance = opt.gap_tolerance;

  // O_phi depends only on the 2-homotopy class, so the lattice is computed
  // once at the input resolution (refining it would not change the values).
  Verdict verdict;
  Lattice lattice;
  try {
    lattice = stabilizer_lattice(phi_in, stabilizer_generators, inv_opt);
  } catch (const GapTooLarge& e) {
    verdict.tag = VerdictTag::Inconclusive;
    verdict.suggestion = std::string("stabilizer generator gap too large: ") + e.what();
    return verdict;
  }
  verdict.lattice_basis = lattice.basis();

  CosetMap phi = phi_in, psi = psi_in;
  for (int refinement = 0;; ++refinement) {
    try {
      const auto basis = two_cycle_basis(*phi.complex);
      if (!basis.empty()) {
        auto diff = primary_difference(phi, psi, basis, inv_opt);
        if (!all_zero(diff)) {
          verdict.tag = VerdictTag::NotTwoHomotopic;
          verdict.primary_difference = std::move(diff);
          return verdict;
        }
      }

      LiftOptions lift_opt = opt.lift;
      lift_opt.max_subdivisions = 0;  // refinement handled here, in lock step
      const LiftResult lift = construct_lift(phi, psi, lift_opt);
      verdict.lift_residual = lift.residual;
      verdict.lift_edge_gap = lift.edge_gap;

      const SecondaryInvariant sec = secondary_invariant(lift.u, inv_opt);
      verdict.secondary = sec;
      verdict.gaps = {sec.gap};

      if (lattice.contains(sec.value)) {
        verdict.tag = VerdictTag::Homotopic;
        verdict.coset_representative.assign(sec.value.size(), 0);
      } else {
        verdict.tag = VerdictTag::NotHomotopic;
        verdict.coset_representative = lattice.reduce(sec.value);
      }
      return verdict;
    } catch (const Error& e) {
      const bool refinable = dynamic_cast<const GapTooLarge*>(&e) ||
                             dynamic_cast<const BranchCut*>(&e) ||
                             dynamic_cast<const DegenerateTriangle*>(&e) ||
                             dynamic_cast<const AntipodalDegenerate*>(&e) ||
                             dynamic_cast<const NonConvergent*>(&e);
      if (!refinable) throw;
      if (refinement >= opt.max_refinements) {
        verdict.tag = VerdictTag::Inconclusive;
        verdict.suggestion =
            std::string("refine the mesh and resample the maps; blocked by: ") + e.what();
        return verdict;
      }
      const auto sub = subdivide(*phi.complex);
      phi = resample(phi, sub);
      psi = resample(psi, sub);
    }
  }
}

bool is_nullhomotopic(const GroupMap& u, double gap_tolerance) {
  InvariantOptions opt;
  opt.gap_tolerance = gap_tolerance;
  const auto sec = secondary_invariant(u, opt);
  return std::all_of(sec.value.begin(), sec.value.end(), [](long long x) { return x == 0; });
}

}  // namespace hk
