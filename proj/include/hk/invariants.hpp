#pragma once

#include "hk/homology.hpp"
#include "hk/maps.hpp"

namespace hk {

// Integer fluxes of the projector curvatures over a 2-cycle basis: the
// pullback of the basic class of G/T in zero-sum coordinates.
struct PrimaryInvariant {
  std::vector<std::vector<long long>> fluxes;  // rows: basis cycles, cols: projectors
  std::vector<std::vector<double>> raw;
  double gap = 0.0;
};

// The integrated Wess-Zumino form of a group map, one entry per factor.
struct SecondaryInvariant {
  std::vector<double> raw;
  std::vector<long long> value;
  double gap = 0.0;
};

struct InvariantOptions {
  double gap_tolerance = 0.25;
  // When false the gap is recorded but not enforced; used by refinement
  // studies that need raw values on coarse meshes.
  bool enforce_gap = true;
};

// Berry-phase flux of projector k through one triangle, in units of 2 pi:
// Im log tr(P_k(v0) P_k(v1) P_k(v2)) / (2 pi) over the sorted vertices.
// k indexes the flattened projector tuple.
double triangle_flux(const CosetMap& phi, Index triangle, int k);

PrimaryInvariant primary_invariant(const CosetMap& phi, const std::vector<TwoCycle>& basis,
                                   const InvariantOptions& opt = {});

std::vector<std::vector<long long>> primary_difference(const CosetMap& phi, const CosetMap& psi,
                                                       const std::vector<TwoCycle>& basis,
                                                       const InvariantOptions& opt = {});

// Theorem-level 2-homotopy decision: equal primary invariants over the
// 2-cycle basis of the common mesh.
bool is_2_homotopic(const CosetMap& phi, const CosetMap& psi, const InvariantOptions& opt = {});

// Per-tet calibrated Wess-Zumino densities of one factor.
std::vector<double> wz_density(const GroupMap& u, int factor);

SecondaryInvariant secondary_invariant(const GroupMap& u, const InvariantOptions& opt = {});

// Independent Hopf oracle on a 2-sphere-valued map over an S^3 mesh: solve
// delta alpha = F for the flux cochain F and return the cup pairing
// <alpha cup F, [M]>.
double whitehead_hopf(const CosetMap& phi);

// Hermite-normal-form lattice of the secondary invariants of verified
// stabilizer generators.
Lattice stabilizer_lattice(const CosetMap& phi, const std::vector<GroupMap>& generators,
                           const InvariantOptions& opt = {});

// |secondary(v w v^-1).raw - secondary(w).raw|_inf.
double conjugation_invariance_check(const GroupMap& w, const GroupMap& v);

}  // namespace hk
