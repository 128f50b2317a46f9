#include "hk/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "hk/errors.hpp"
#include "hk/util.hpp"

namespace hk {

using std::numbers::pi;
using Complex = std::complex<double>;

Eigen::Matrix2cd su2_from_quaternion(double a, double b, double c, double d) {
  Eigen::Matrix2cd m;
  m << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return m;
}

Eigen::Matrix2cd projector_from_unit_vector(double nx, double ny, double nz) {
  Eigen::Matrix2cd p;
  p << Complex(0.5 * (1.0 + nz), 0.0), Complex(0.5 * nx, -0.5 * ny),
      Complex(0.5 * nx, 0.5 * ny), Complex(0.5 * (1.0 - nz), 0.0);
  return p;
}

GroupMap quaternion_power_map(std::shared_ptr<const SimplicialComplex3> mesh, int k,
                              bool reflect) {
  if (!mesh || mesh->dim_embed != 4)
    throw Error("quaternion_power_map: needs a sphere mesh in R^4");
  GroupSpec g = GroupSpec::su({2});
  std::vector<GroupElement> vals(mesh->num_vertices());
  parallel_for(mesh->num_vertices(), [&](std::size_t v) {
    auto x = mesh->vertices[v];
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (std::abs(r - 1.0) > 1e-9)
      throw Error("quaternion_power_map: vertex not on the unit sphere");
    if (reflect) x[0] = -x[0];
    Eigen::Matrix2cd q = su2_from_quaternion(x[0] / r, x[1] / r, x[2] / r, x[3] / r);
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd base = q;
    if (k < 0) base = q.adjoint();
    for (int i = 0; i < std::abs(k); ++i) acc = acc * base;
    vals[v].blocks.push_back(acc);
  });
  return GroupMap::create(std::move(mesh), std::move(g), std::move(vals));
}

GroupMap embed_su2(const GroupMap& u, int n) {
  if (u.group.factors != std::vector<int>{2})
    throw Error("embed_su2: input must be a single-factor SU(2) map");
  if (n < 2) throw Error("embed_su2: N must be >= 2");
  GroupSpec g = GroupSpec::su({n});
  std::vector<GroupElement> vals(u.values.size());
  parallel_for(vals.size(), [&](std::size_t v) {
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Identity(n, n);
    blk.topLeftCorner<2, 2>() = u.values[v].blocks[0];
    vals[v].blocks.push_back(std::move(blk));
  });
  return GroupMap::create(u.complex, std::move(g), std::move(vals));
}

CosetMap coset_projection(const GroupMap& u) {
  std::vector<std::vector<Eigen::MatrixXcd>> vals(u.values.size());
  parallel_for(vals.size(), [&](std::size_t v) {
    std::vector<Eigen::MatrixXcd> tuple;
    tuple.reserve(u.group.total_projectors());
    for (int f = 0; f < u.group.num_factors(); ++f) {
      const int n = u.group.factors[f];
      const Eigen::MatrixXcd& blk = u.values[v].blocks[f];
      for (int k = 0; k < n; ++k) {
        const Eigen::VectorXcd col = blk.col(k);
        tuple.push_back(col * col.adjoint());
      }
    }
    vals[v] = std::move(tuple);
  });
  return CosetMap::create(u.complex, u.group, std::move(vals));
}

CosetMap hopf_projection(const GroupMap& u) {
  if (u.group.factors != std::vector<int>{2})
    throw Error("hopf_projection: group must be single-factor SU(2)");
  return coset_projection(u);
}

GroupMap constant_group_map(std::shared_ptr<const SimplicialComplex3> mesh, GroupSpec group) {
  std::vector<GroupElement> vals(mesh->num_vertices(), GroupElement::identity(group));
  return GroupMap::create(std::move(mesh), std::move(group), std::move(vals));
}

CosetMap constant_coset_map(std::shared_ptr<const SimplicialComplex3> mesh, GroupSpec group) {
  std::vector<Eigen::MatrixXcd> base;
  for (int f = 0; f < group.num_factors(); ++f) {
    const int n = group.factors[f];
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
      p(k, k) = 1.0;
      base.push_back(std::move(p));
    }
  }
  std::vector<std::vector<Eigen::MatrixXcd>> vals(mesh->num_vertices(), base);
  return CosetMap::create(std::move(mesh), std::move(group), std::move(vals));
}

namespace {

double wrap_diff(double x, double c) {
  double d = x - c;
  d -= std::round(d);
  return d;
}

// Up to three disjoint unit-degree tent bumps in the unit square.
struct Bump {
  double cx, cy, radius;
};

std::vector<Bump> bump_layout(int count) {
  switch (count) {
    case 1: return {{0.5, 0.5, 0.42}};
    case 2: return {{0.25, 0.5, 0.22}, {0.75, 0.5, 0.22}};
    case 3: return {{0.25, 0.25, 0.2}, {0.75, 0.25, 0.2}, {0.5, 0.75, 0.2}};
    default: return {};
  }
}

}  // namespace

CosetMap torus_degree_map(std::shared_ptr<const SimplicialComplex3> mesh, int degree) {
  if (!mesh || !mesh->periodic) throw Error("torus_degree_map: needs a periodic mesh");
  if (std::abs(degree) > 3) throw Error("torus_degree_map: |degree| <= 3 supported");
  const auto bumps = bump_layout(std::abs(degree));
  const double chirality = degree >= 0 ? 1.0 : -1.0;

  GroupSpec g = GroupSpec::su({2});
  std::vector<std::vector<Eigen::MatrixXcd>> vals(mesh->num_vertices());
  parallel_for(mesh->num_vertices(), [&](std::size_t v) {
    const double x = mesh->vertices[v][0], y = mesh->vertices[v][1];
    double nx = 0.0, ny = 0.0, nz = -1.0;  // south pole outside every bump
    for (const auto& b : bumps) {
      const double dx = wrap_diff(x, b.cx), dy = wrap_diff(y, b.cy);
      const double rho = std::sqrt(dx * dx + dy * dy);
      if (rho >= b.radius) continue;
      const double theta = pi * rho / b.radius;  // tent profile
      const double phi_az = std::atan2(dy, dx);
      nx = std::sin(theta) * std::cos(phi_az);
      ny = chirality * std::sin(theta) * std::sin(phi_az);
      nz = std::cos(theta);
      break;
    }
    const Eigen::Matrix2cd p = projector_from_unit_vector(nx, ny, nz);
    vals[v] = {p, Eigen::Matrix2cd::Identity() - p};
  });
  return CosetMap::create(std::move(mesh), std::move(g), std::move(vals));
}

GroupMap random_gauge_map(std::shared_ptr<const SimplicialComplex3> mesh, const GroupSpec& group,
                          std::uint64_t seed, double amplitude) {
  // A few fixed low-frequency scalar shapes combined with random
  // coefficients per su(N) basis direction.
  Rng rng(seed);
  const int num_shapes = 4;
  struct Term {
    int factor, row, col;
    int kind;  // 0 diag-pair, 1 real off-diag, 2 imag off-diag
    std::vector<double> coeff;
  };
  std::vector<Term> terms;
  for (int f = 0; f < group.num_factors(); ++f) {
    const int n = group.factors[f];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (i == j && i == n - 1) continue;  // tracelessness handled pairwise
        for (int kind = (i == j ? 0 : 1); kind <= (i == j ? 0 : 2); ++kind) {
          Term t{f, i, j, kind, {}};
          for (int s = 0; s < num_shapes; ++s) t.coeff.push_back(rng.next_symmetric());
          terms.push_back(std::move(t));
        }
      }
  }

  auto shapes = [&](const std::array<double, 4>& x, bool is_periodic) {
    std::array<double, 4> s{};
    if (is_periodic) {
      s[0] = std::sin(2 * pi * x[0]);
      s[1] = std::cos(2 * pi * x[1]);
      s[2] = std::sin(2 * pi * (x[0] + x[2]));
      s[3] = std::cos(2 * pi * (x[1] + x[2]));
    } else {
      s[0] = x[0];
      s[1] = x[1] * x[2];
      s[2] = x[2];
      s[3] = x[3] * x[0];
    }
    return s;
  };

  std::vector<GroupElement> vals(mesh->num_vertices());
  const bool is_periodic = mesh->periodic;
  parallel_for(mesh->num_vertices(), [&](std::size_t v) {
    const auto s = shapes(mesh->vertices[v], is_periodic);
    GroupElement e;
    for (int f = 0; f < group.num_factors(); ++f) {
      const int n = group.factors[f];
      Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& t : terms) {
        if (t.factor != f) continue;
        double a = 0.0;
        for (int k = 0; k < num_shapes; ++k) a += t.coeff[k] * s[k];
        a *= amplitude;
        if (t.kind == 0) {
          x(t.row, t.row) += Complex(0, a);
          x(t.row + 1, t.row + 1) -= Complex(0, a);
        } else if (t.kind == 1) {
          x(t.row, t.col) += Complex(0, a);
          x(t.col, t.row) += Complex(0, a);
        } else {
          x(t.row, t.col) += Complex(a, 0);
          x(t.col, t.row) -= Complex(a, 0);
        }
      }
      // unitary by construction: exp of skew-Hermitian traceless
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Complex(0, -1) * x);
      Eigen::VectorXcd phases(n);
      for (int k = 0; k < n; ++k) phases[k] = std::polar(1.0, eig.eigenvalues()[k]);
      e.blocks.push_back(eig.eigenvectors() * phases.asDiagonal() *
                         eig.eigenvectors().adjoint());
    }
    vals[v] = std::move(e);
  });
  return GroupMap::create(mesh, group, std::move(vals));
}

GroupMap winding_stabilizer(const CosetMap& phi, int factor, int n) {
  if (!phi.complex->periodic) throw Error("winding_stabilizer: needs a periodic mesh");
  if (factor < 0 || factor >= phi.group.num_factors())
    throw Error("winding_stabilizer: factor out of range");
  if (phi.group.factors[factor] < 2) throw Error("winding_stabilizer: factor too small");

  std::vector<GroupElement> vals(phi.values.size());
  parallel_for(phi.values.size(), [&](std::size_t v) {
    const double z = phi.complex->vertices[v][2];
    GroupElement e;
    for (int f = 0; f < phi.group.num_factors(); ++f) {
      const int nf = phi.group.factors[f];
      if (f != factor) {
        e.blocks.push_back(Eigen::MatrixXcd::Identity(nf, nf));
        continue;
      }
      const int off = phi.group.projector_offset(f);
      const Complex w0 = std::polar(1.0, 2.0 * pi * n * z);
      Eigen::MatrixXcd blk = w0 * phi.values[v][off] + std::conj(w0) * phi.values[v][off + 1];
      for (int k = 2; k < nf; ++k) blk += phi.values[v][off + k];
      e.blocks.push_back(std::move(blk));
    }
    vals[v] = std::move(e);
  });
  return GroupMap::create(phi.complex, phi.group, std::move(vals));
}

}  // namespace hk
