#pragma once

#include <optional>
#include <string>

#include "hk/invariants.hpp"

namespace hk {

// Minimal-geodesic conjugator g with g p g^-1 = q: the polar factor of the
// tuple transition operator sum_k Q_k P_k, det-corrected into SU(N) and
// center-shifted closest to the identity. Throws AntipodalDegenerate when
// the transition operator is close to singular.
GroupElement pointwise_transporter(const GroupSpec& g, const std::vector<Eigen::MatrixXcd>& p,
                                   const std::vector<Eigen::MatrixXcd>& q);

// Nearest stabilizer section of phi to w: per factor, the phases of
// tr(P_k w) recombined on phi's projectors, det-corrected. Used to keep
// caller-supplied stabilizer generators exact after resampling.
GroupMap stabilizer_projection(const GroupMap& w, const CosetMap& phi);

struct SmoothingReport {
  int iterations = 0;
  double final_energy = 0.0;
};

struct LiftResult {
  GroupMap u;
  // The maps the lift refers to; differ from the inputs only when the
  // antipodal policy subdivided.
  CosetMap phi, psi;
  double residual = 0.0;
  double edge_gap = 0.0;
  SmoothingReport smoothing;
  int subdivisions_used = 0;
};

struct LiftOptions {
  double residual_tol = 1e-8;
  // Default bound: max edge gap of psi and phi plus 0.5.
  std::optional<double> edge_gap_bound;
  int max_subdivisions = 2;
  int max_sweeps = 200;
  double gap_tolerance = 0.25;
};

// Lift u with u . phi = psi (Theorem level: exists iff the primary
// invariants agree). Vertexwise transporters followed by right-torus gauge
// smoothing, which leaves u . phi unchanged. Errors: PrimaryMismatch when
// the fluxes differ, AntipodalDegenerate after max_subdivisions,
// NonConvergent when smoothing stalls above the edge-gap bound.
LiftResult construct_lift(const CosetMap& phi, const CosetMap& psi, const LiftOptions& opt = {});

enum class VerdictTag { NotTwoHomotopic, Homotopic, NotHomotopic, Inconclusive };

const char* to_string(VerdictTag tag);

struct Verdict {
  VerdictTag tag = VerdictTag::Inconclusive;
  std::vector<std::vector<long long>> primary_difference;
  std::optional<SecondaryInvariant> secondary;  // of the lift
  std::optional<double> lift_residual;
  std::optional<double> lift_edge_gap;
  std::vector<std::vector<long long>> lattice_basis;  // columns of O_phi
  std::vector<long long> coset_representative;        // value mod O_phi
  std::vector<double> gaps;
  std::string suggestion;  // filled for Inconclusive
};

struct VerdictOptions {
  LiftOptions lift;
  double gap_tolerance = 0.25;
  int max_refinements = 2;
};

// Full classification pipeline: primary difference, lift, secondary
// invariant, stabilizer lattice membership. Numerical rounding is never
// promoted to a topological claim; unresolved gaps yield Inconclusive.
Verdict homotopy_verdict(const CosetMap& phi, const CosetMap& psi,
                         const std::vector<GroupMap>& stabilizer_generators,
                         const VerdictOptions& opt = {});

// secondary_invariant(u).value == 0 with a trusted gap; GapTooLarge
// propagates as an error rather than a boolean.
bool is_nullhomotopic(const GroupMap& u, double gap_tolerance = 0.25);

}  // namespace hk
