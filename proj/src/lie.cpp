#include "hk/lie.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hk/errors.hpp"
#include "hk/mesh.hpp"
#include "hk/util.hpp"

namespace hk {

using std::numbers::pi;
using Complex = std::complex<double>;

double su_wz_constant(int n) { return -1.0 / (96.0 * pi * pi * n); }

GroupSpec GroupSpec::su(std::vector<int> ns) {
  GroupSpec g = su_raw(std::move(ns));
  for (std::size_t k = 0; k < g.factors.size(); ++k)
    g.calibration[k] = calibration_for(g.factors[k]);
  return g;
}

GroupSpec GroupSpec::su_raw(std::vector<int> ns) {
  GroupSpec g;
  g.factors = std::move(ns);
  for (int n : g.factors) {
    g.wz_constants.push_back(su_wz_constant(n));
    g.calibration.push_back(1.0);
  }
  g.validate();
  return g;
}

void GroupSpec::validate() const {
  if (factors.empty()) throw Error("GroupSpec: factor list must be nonempty");
  for (int n : factors)
    if (n < 2) throw Error("GroupSpec: every factor needs N >= 2");
  if (wz_constants.size() != factors.size() || calibration.size() != factors.size())
    throw Error("GroupSpec: per-factor constant lists have wrong length");
  for (double c : wz_constants)
    if (!std::isfinite(c) || c == 0.0) throw Error("GroupSpec: wz constant must be finite and nonzero");
}

int GroupSpec::total_projectors() const {
  int s = 0;
  for (int n : factors) s += n;
  return s;
}

int GroupSpec::projector_offset(int factor) const {
  int s = 0;
  for (int k = 0; k < factor; ++k) s += factors[k];
  return s;
}

GroupElement GroupElement::identity(const GroupSpec& g) {
  GroupElement e;
  for (int n : g.factors) e.blocks.push_back(Eigen::MatrixXcd::Identity(n, n));
  return e;
}

double GroupElement::distance(const GroupElement& o) const {
  double s = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) s += (blocks[k] - o.blocks[k]).squaredNorm();
  return std::sqrt(s);
}

GroupElement GroupElement::adjoint() const {
  GroupElement e;
  for (const auto& b : blocks) e.blocks.push_back(b.adjoint());
  return e;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  GroupElement e;
  for (std::size_t k = 0; k < blocks.size(); ++k) e.blocks.push_back(blocks[k] * o.blocks[k]);
  return e;
}

void GroupElement::validate(const GroupSpec& g, double tol) const {
  if (blocks.size() != g.factors.size()) throw Error("GroupElement: wrong number of blocks");
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int n = g.factors[k];
    if (blocks[k].rows() != n || blocks[k].cols() != n)
      throw Error("GroupElement: block has wrong dimension");
    const double uerr =
        (blocks[k].adjoint() * blocks[k] - Eigen::MatrixXcd::Identity(n, n)).norm();
    if (uerr > tol) throw Error("GroupElement: block is not unitary to tolerance");
    if (std::abs(blocks[k].determinant() - Complex(1.0, 0.0)) > tol)
      throw Error("GroupElement: block determinant is not 1 to tolerance");
  }
}

Eigen::MatrixXcd project_unitary(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() <= 1e-12)
    throw SingularInput("project_unitary: smallest singular value <= 1e-12");
  Eigen::MatrixXcd w = svd.matrixU() * svd.matrixV().adjoint();
  const double phase = std::arg(w.determinant());
  w *= std::polar(1.0, -phase / static_cast<double>(n));
  return w;
}

namespace {

Eigen::Matrix2cd principal_log_su2(const Eigen::Matrix2cd& u) {
  // U = a + i (b . sigma) with a^2 + |b|^2 = 1
  const double a = 0.5 * (u(0, 0).real() + u(1, 1).real());
  const double b1 = 0.5 * (u(0, 1).imag() + u(1, 0).imag());
  const double b2 = 0.5 * (u(0, 1).real() - u(1, 0).real());
  const double b3 = 0.5 * (u(0, 0).imag() - u(1, 1).imag());
  const double bn = std::sqrt(b1 * b1 + b2 * b2 + b3 * b3);
  const double theta = std::atan2(bn, a);
  if (pi - theta < 1e-6)
    throw BranchCut("principal_log: eigenvalue within 1e-6 of -1");
  Eigen::Matrix2cd l = Eigen::Matrix2cd::Zero();
  if (bn < 1e-300) return l;
  const double s = theta / bn;
  l(0, 0) = Complex(0, s * b3);
  l(1, 1) = Complex(0, -s * b3);
  l(0, 1) = Complex(s * b2, s * b1);
  l(1, 0) = Complex(-s * b2, s * b1);
  return l;
}

}  // namespace

Eigen::MatrixXcd principal_log(const Eigen::MatrixXcd& u) {
  const auto n = u.rows();
  if (n == 2) return principal_log_su2(u);

  // Unitary matrices are normal, so the Schur form is diagonal; read the
  // eigenphases off the diagonal of T.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  if (schur.info() != Eigen::Success) throw Error("principal_log: Schur decomposition failed");
  const Eigen::MatrixXcd& q = schur.matrixU();
  Eigen::VectorXd theta(n);
  double winding = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    theta[j] = std::arg(schur.matrixT()(j, j));
    if (pi - std::abs(theta[j]) < 1e-6)
      throw BranchCut("principal_log: eigenvalue within 1e-6 of -1");
    winding += theta[j];
  }
  // det = 1 forces the principal phases to sum to a multiple of 2 pi; a
  // nonzero multiple means the matrix is too far from the identity for a
  // traceless principal branch.
  if (std::abs(winding) > pi)
    throw BranchCut("principal_log: eigenphases wind around the circle; refine the mesh");

  Eigen::MatrixXcd l = q * (Complex(0, 1) * theta.cast<Complex>()).asDiagonal() * q.adjoint();
  l = 0.5 * (l - l.adjoint().eval());
  const Complex tr = l.trace();
  l -= (tr / static_cast<double>(n)) * Eigen::MatrixXcd::Identity(n, n);
  return l;
}

double wz_tet(const GroupSpec& g, const GroupElement& u0, const GroupElement& u1,
              const GroupElement& u2, const GroupElement& u3, int orientation, int factor) {
  const Eigen::MatrixXcd inv0 = u0.blocks[factor].adjoint();
  const Eigen::MatrixXcd a1 = principal_log(inv0 * u1.blocks[factor]);
  const Eigen::MatrixXcd a2 = principal_log(inv0 * u2.blocks[factor]);
  const Eigen::MatrixXcd a3 = principal_log(inv0 * u3.blocks[factor]);
  const double alt = ((a1 * (a2 * a3 - a3 * a2)).trace()).real();
  return orientation * g.calibration[factor] * g.wz_constants[factor] * alt;
}

namespace {

Eigen::Matrix2cd quaternion_matrix(double a, double b, double c, double d) {
  Eigen::Matrix2cd m;
  m << Complex(a, b), Complex(c, d), Complex(-c, d), Complex(a, -b);
  return m;
}

// Raw (calibration = 1) integral of the embedded degree-1 quaternion map.
double raw_generator_integral(int n, int level) {
  const auto mesh = build_s3(level);
  GroupSpec g = GroupSpec::su_raw({n});
  std::vector<GroupElement> vals(mesh->num_vertices());
  for (std::size_t v = 0; v < mesh->num_vertices(); ++v) {
    const auto& x = mesh->vertices[v];
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Identity(n, n);
    blk.topLeftCorner<2, 2>() = quaternion_matrix(x[0] / r, x[1] / r, x[2] / r, x[3] / r);
    vals[v].blocks.push_back(std::move(blk));
  }
  std::vector<double> density(mesh->num_tets());
  parallel_for(mesh->num_tets(), [&](std::size_t t) {
    const auto& tet = mesh->tets[t];
    density[t] = wz_tet(g, vals[tet.v[0]], vals[tet.v[1]], vals[tet.v[2]], vals[tet.v[3]],
                        tet.orient, 0);
  });
  return integrate_3form(*mesh, density);
}

std::mutex g_calibration_mutex;
std::map<int, CalibrationReport> g_calibration_cache;

}  // namespace

CalibrationReport calibration_report(int n) {
  if (n < 2) throw Error("calibration: N must be >= 2");
  {
    std::lock_guard<std::mutex> lock(g_calibration_mutex);
    auto it = g_calibration_cache.find(n);
    if (it != g_calibration_cache.end()) return it->second;
  }

  const double r2 = raw_generator_integral(n, 2);
  const double r3 = raw_generator_integral(n, 3);
  const double r4 = raw_generator_integral(n, 4);
  double order = 1.0;
  const double num = r2 - r3, den = r3 - r4;
  if (den != 0.0 && num / den > 0.0) order = std::log2(num / den);
  order = std::clamp(order, 0.5, 3.0);
  const double limit = r4 + (r4 - r3) / (std::pow(2.0, order) - 1.0);
  if (!std::isfinite(limit) || limit == 0.0)
    throw Error("calibration: generator integral did not converge");

  CalibrationReport rep;
  rep.n = n;
  rep.paper_constant = su_wz_constant(n);
  rep.extrapolated_raw = limit;
  rep.observed_order = order;
  rep.calibration = 1.0 / limit;

  std::lock_guard<std::mutex> lock(g_calibration_mutex);
  g_calibration_cache.emplace(n, rep);
  return rep;
}

double calibration_for(int n) { return calibration_report(n).calibration; }

}  // namespace hk
