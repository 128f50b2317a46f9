#pragma once

#include "hk/maps.hpp"

namespace hk {

// SU(2) matrix of the unit quaternion a + bi + cj + dk.
Eigen::Matrix2cd su2_from_quaternion(double a, double b, double c, double d);

// Rank-1 projector (I + n.sigma)/2 of a unit vector on S^2.
Eigen::Matrix2cd projector_from_unit_vector(double nx, double ny, double nz);

// Vertex (a,b,c,d) on the unit sphere mapped to its quaternion k-th power.
// k = 0 is the constant identity; negative k uses the inverse. The optional
// reflect flag negates the first coordinate before mapping (an
// orientation-reversing isometry of S^3).
GroupMap quaternion_power_map(std::shared_ptr<const SimplicialComplex3> mesh, int k,
                              bool reflect = false);

// Generic element embedding SU(2) into the top-left block of SU(N).
GroupMap embed_su2(const GroupMap& u, int n);

// u -> (P, I-P) with P = u E11 u^dagger; the Hopf map when composed with
// the degree-1 quaternion map. Requires a single SU(2) factor.
CosetMap hopf_projection(const GroupMap& u);

// The quotient map G -> G/T for any product of SU(N) factors:
// P_k = u E_kk u^dagger blockwise.
CosetMap coset_projection(const GroupMap& u);

GroupMap constant_group_map(std::shared_ptr<const SimplicialComplex3> mesh, GroupSpec group);
// Base-point flag (E_11, ..., E_NN) at every vertex.
CosetMap constant_coset_map(std::shared_ptr<const SimplicialComplex3> mesh, GroupSpec group);

// S^2-valued map on T^3: d disjoint tent bumps of degree one in the (x,y)
// coordinates, constant in z. Degree-d when d >= 1; constant for d = 0.
// Negative d reverses orientation.
CosetMap torus_degree_map(std::shared_ptr<const SimplicialComplex3> mesh, int degree);

// exp of a low-frequency random su(N) field; nullhomotopic by construction
// (amplitude small enough to retract along exp). Deterministic in the seed.
GroupMap random_gauge_map(std::shared_ptr<const SimplicialComplex3> mesh, const GroupSpec& group,
                          std::uint64_t seed, double amplitude);

// Stabilizer of phi on a periodic mesh: w = sum_k exp(2 pi i m_k z) P_k in
// phi's frame with weights m = (n, -n, 0, ...) on the given factor. Fixes
// phi exactly and winds n times around the torus in z.
GroupMap winding_stabilizer(const CosetMap& phi, int factor, int n);

}  // namespace hk
