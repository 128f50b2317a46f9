#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace hk {

// Product of simple factors SU(N_1) x ... x SU(N_m) together with the
// per-factor Wess-Zumino normalization constants and the self-calibration
// multipliers that anchor the discretized integral to integers.
struct GroupSpec {
  std::vector<int> factors;
  std::vector<double> wz_constants;
  std::vector<double> calibration;

  // Paper constants and self-calibrated multipliers.
  static GroupSpec su(std::vector<int> ns);
  // Paper constants, calibration left at 1.
  static GroupSpec su_raw(std::vector<int> ns);

  void validate() const;
  bool same_group(const GroupSpec& o) const { return factors == o.factors; }
  int num_factors() const { return static_cast<int>(factors.size()); }
  int total_projectors() const;
  int projector_offset(int factor) const;
};

// Default Wess-Zumino constant for SU(N): -1/(96 pi^2 N).
double su_wz_constant(int n);

// Block-diagonal element, one unitary determinant-1 block per factor.
struct GroupElement {
  std::vector<Eigen::MatrixXcd> blocks;

  static GroupElement identity(const GroupSpec& g);
  // Frobenius distance, summed over blocks in quadrature.
  double distance(const GroupElement& o) const;
  GroupElement adjoint() const;
  GroupElement operator*(const GroupElement& o) const;
  void validate(const GroupSpec& g, double tol = 1e-10) const;
};

struct AlgebraElement {
  std::vector<Eigen::MatrixXcd> blocks;
};

// Polar factor of an invertible matrix, phase-corrected by the principal
// N-th root of the determinant so the result lands in SU(N). Throws
// SingularInput when the smallest singular value is <= 1e-12.
Eigen::MatrixXcd project_unitary(const Eigen::MatrixXcd& a);

// Principal matrix logarithm of a special unitary matrix: skew-Hermitian,
// exactly traceless, eigenvalue phases in (-pi, pi). Throws BranchCut when
// an eigenvalue sits within angular distance 1e-6 of -1, or when the
// principal eigenphases wind (their sum is a nonzero multiple of 2 pi).
Eigen::MatrixXcd principal_log(const Eigen::MatrixXcd& u);

// First-order discretization of c_G tr((u^-1 du)^3) on one oriented
// tetrahedron carrying the four values u0..u3, for the given factor:
// the edge logs a_i = log(u0^-1 u_i) contracted with the alternating
// three-form, times orientation, the paper constant and the calibration
// multiplier.
double wz_tet(const GroupSpec& g, const GroupElement& u0, const GroupElement& u1,
              const GroupElement& u2, const GroupElement& u3, int orientation, int factor);

// Self-calibration for SU(N): Richardson-extrapolated raw integral of the
// generator of pi_3 (the top-left embedded quaternion map on S^3), inverted
// so the calibrated generator integral is exactly 1. Cached per N.
double calibration_for(int n);

struct CalibrationReport {
  int n = 0;
  double paper_constant = 0;      // c_{SU_N}
  double calibration = 0;         // multiplier applied on top of c_{SU_N}
  double extrapolated_raw = 0;    // limit of the raw generator integral
  double observed_order = 0;      // estimated convergence order
};
CalibrationReport calibration_report(int n);

}  // namespace hk
