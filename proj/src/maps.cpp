#include "hk/maps.hpp"

#include <cmath>

#include "hk/errors.hpp"
#include "hk/util.hpp"

namespace hk {

namespace {

double group_edge_gap(const SimplicialComplex3& c, const std::vector<GroupElement>& vals) {
  double gap = 0.0;
  for (const auto& e : c.edges) gap = std::max(gap, vals[e[0]].distance(vals[e[1]]));
  if (!std::isfinite(gap)) throw Error("GroupMap: edge gap is not finite");
  return gap;
}

void validate_tuple(const GroupSpec& g, const std::vector<Eigen::MatrixXcd>& tuple,
                    double tol = 1e-10) {
  if (static_cast<int>(tuple.size()) != g.total_projectors())
    throw Error("CosetMap: tuple has wrong number of projectors");
  for (int f = 0; f < g.num_factors(); ++f) {
    const int n = g.factors[f];
    const int off = g.projector_offset(f);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      const Eigen::MatrixXcd& p = tuple[off + k];
      if (p.rows() != n || p.cols() != n) throw Error("CosetMap: projector has wrong dimension");
      if ((p - p.adjoint()).norm() > tol) throw Error("CosetMap: projector not Hermitian");
      if ((p * p - p).norm() > tol) throw Error("CosetMap: projector not idempotent");
      if (std::abs(p.trace().real() - 1.0) > tol) throw Error("CosetMap: projector not rank 1");
      sum += p;
    }
    if ((sum - Eigen::MatrixXcd::Identity(n, n)).norm() > tol)
      throw Error("CosetMap: projectors do not sum to the identity");
  }
}

}  // namespace

GroupMap GroupMap::create(std::shared_ptr<const SimplicialComplex3> complex, GroupSpec group,
                          std::vector<GroupElement> values) {
  group.validate();
  if (!complex) throw Error("GroupMap: null complex");
  if (values.size() != complex->num_vertices())
    throw SizeMismatch("GroupMap: one value per mesh vertex required");
  for (const auto& v : values) v.validate(group);
  GroupMap m;
  m.complex = std::move(complex);
  m.group = std::move(group);
  m.values = std::move(values);
  m.edge_gap = group_edge_gap(*m.complex, m.values);
  return m;
}

CosetMap CosetMap::create(std::shared_ptr<const SimplicialComplex3> complex, GroupSpec group,
                          std::vector<std::vector<Eigen::MatrixXcd>> values) {
  group.validate();
  if (!complex) throw Error("CosetMap: null complex");
  if (values.size() != complex->num_vertices())
    throw SizeMismatch("CosetMap: one tuple per mesh vertex required");
  for (const auto& t : values) validate_tuple(group, t);
  CosetMap m;
  m.complex = std::move(complex);
  m.group = std::move(group);
  m.values = std::move(values);
  double gap = 0.0;
  for (const auto& e : m.complex->edges)
    gap = std::max(gap, tuple_distance(m.values[e[0]], m.values[e[1]]));
  m.edge_gap = gap;
  return m;
}

double tuple_distance(const std::vector<Eigen::MatrixXcd>& p,
                      const std::vector<Eigen::MatrixXcd>& q) {
  if (p.size() != q.size()) throw SizeMismatch("tuple_distance: tuples of different length");
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]).squaredNorm();
  return std::sqrt(s);
}

std::vector<Eigen::MatrixXcd> act_on_tuple(const GroupSpec& g, const GroupElement& e,
                                           const std::vector<Eigen::MatrixXcd>& tuple) {
  std::vector<Eigen::MatrixXcd> out(tuple.size());
  for (int f = 0; f < g.num_factors(); ++f) {
    const int off = g.projector_offset(f);
    const Eigen::MatrixXcd& u = e.blocks[f];
    for (int k = 0; k < g.factors[f]; ++k) out[off + k] = u * tuple[off + k] * u.adjoint();
  }
  return out;
}

CosetMap act(const GroupMap& w, const CosetMap& phi) {
  if (w.complex->id != phi.complex->id) throw MeshMismatch("act: maps live on different meshes");
  if (!w.group.same_group(phi.group)) throw MeshMismatch("act: maps have different groups");
  std::vector<std::vector<Eigen::MatrixXcd>> vals(phi.values.size());
  parallel_for(vals.size(), [&](std::size_t v) {
    vals[v] = act_on_tuple(phi.group, w.values[v], phi.values[v]);
  });
  return CosetMap::create(phi.complex, phi.group, std::move(vals));
}

double action_distance(const GroupMap& w, const CosetMap& phi, const CosetMap& psi) {
  if (w.complex->id != phi.complex->id || phi.complex->id != psi.complex->id)
    throw MeshMismatch("action_distance: maps live on different meshes");
  std::vector<double> d(phi.values.size());
  parallel_for(phi.values.size(), [&](std::size_t v) {
    d[v] = tuple_distance(act_on_tuple(phi.group, w.values[v], phi.values[v]), psi.values[v]);
  });
  double m = 0.0;
  for (double x : d) m = std::max(m, x);
  return m;
}

namespace {

void require_compatible(const GroupMap& a, const GroupMap& b) {
  if (a.complex->id != b.complex->id) throw MeshMismatch("pointwise op: different meshes");
  if (!a.group.same_group(b.group)) throw MeshMismatch("pointwise op: different groups");
}

}  // namespace

void require_same_mesh(const GroupMap& a, const GroupMap& b) { require_compatible(a, b); }

void require_same_mesh(const CosetMap& a, const CosetMap& b) {
  if (a.complex->id != b.complex->id) throw MeshMismatch("coset maps live on different meshes");
  if (!a.group.same_group(b.group)) throw MeshMismatch("coset maps have different groups");
}

GroupMap pointwise_product(const GroupMap& u, const GroupMap& v) {
  require_compatible(u, v);
  std::vector<GroupElement> vals(u.values.size());
  parallel_for(vals.size(), [&](std::size_t i) { vals[i] = u.values[i] * v.values[i]; });
  return GroupMap::create(u.complex, u.group, std::move(vals));
}

GroupMap pointwise_inverse(const GroupMap& u) {
  std::vector<GroupElement> vals(u.values.size());
  parallel_for(vals.size(), [&](std::size_t i) { vals[i] = u.values[i].adjoint(); });
  return GroupMap::create(u.complex, u.group, std::move(vals));
}

GroupMap pointwise_conjugate(const GroupMap& u, const GroupMap& v) {
  require_compatible(u, v);
  std::vector<GroupElement> vals(u.values.size());
  parallel_for(vals.size(), [&](std::size_t i) {
    vals[i] = v.values[i] * u.values[i] * v.values[i].adjoint();
  });
  return GroupMap::create(u.complex, u.group, std::move(vals));
}

GroupMap resample(const GroupMap& u, const SubdivisionResult& sub) {
  std::vector<GroupElement> vals(sub.mesh->num_vertices());
  parallel_for(vals.size(), [&](std::size_t v) {
    const auto [a, b] = sub.vertex_parents[v];
    if (a == b) {
      vals[v] = u.values[a];
      return;
    }
    GroupElement e;
    for (std::size_t f = 0; f < u.values[a].blocks.size(); ++f)
      e.blocks.push_back(project_unitary(u.values[a].blocks[f] + u.values[b].blocks[f]));
    vals[v] = std::move(e);
  });
  return GroupMap::create(sub.mesh, u.group, std::move(vals));
}

namespace {

// Flag midpoint: average the flag operator sum_k k P_k of both endpoints
// and read the projectors off its eigenvectors, ordered by eigenvalue.
std::vector<Eigen::MatrixXcd> flag_midpoint(const GroupSpec& g,
                                            const std::vector<Eigen::MatrixXcd>& p,
                                            const std::vector<Eigen::MatrixXcd>& q) {
  std::vector<Eigen::MatrixXcd> out(p.size());
  for (int f = 0; f < g.num_factors(); ++f) {
    const int n = g.factors[f];
    const int off = g.projector_offset(f);
    Eigen::MatrixXcd flag = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
      flag += 0.5 * (k + 1.0) * (p[off + k] + q[off + k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(flag);
    if (eig.info() != Eigen::Success) throw Error("flag midpoint: eigensolver failed");
    for (int k = 0; k < n; ++k) {
      // eigenvalues ascending match the projector index ordering
      const Eigen::VectorXcd vec = eig.eigenvectors().col(k);
      out[off + k] = vec * vec.adjoint();
    }
    for (int k = 0; k + 1 < n; ++k)
      if (eig.eigenvalues()[k + 1] - eig.eigenvalues()[k] < 1e-8)
        throw AntipodalDegenerate("flag midpoint: degenerate flag between endpoints");
  }
  return out;
}

}  // namespace

CosetMap resample(const CosetMap& phi, const SubdivisionResult& sub) {
  std::vector<std::vector<Eigen::MatrixXcd>> vals(sub.mesh->num_vertices());
  parallel_for(vals.size(), [&](std::size_t v) {
    const auto [a, b] = sub.vertex_parents[v];
    if (a == b)
      vals[v] = phi.values[a];
    else
      vals[v] = flag_midpoint(phi.group, phi.values[a], phi.values[b]);
  });
  return CosetMap::create(sub.mesh, phi.group, std::move(vals));
}

}  // namespace hk
