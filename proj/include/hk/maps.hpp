#pragma once

#include <memory>
#include <vector>

#include "hk/lie.hpp"
#include "hk/mesh.hpp"

namespace hk {

// Per-vertex assignment of group elements u: M -> G.
struct GroupMap {
  std::shared_ptr<const SimplicialComplex3> complex;
  GroupSpec group;
  std::vector<GroupElement> values;  // one per vertex
  double edge_gap = 0.0;             // max over edges of ||U_i - U_j||_F

  static GroupMap create(std::shared_ptr<const SimplicialComplex3> complex, GroupSpec group,
                         std::vector<GroupElement> values);
};

// Per-vertex point of X = G/T, stored as the ordered tuple of rank-1
// orthogonal projectors of every factor, flattened in factor order.
struct CosetMap {
  std::shared_ptr<const SimplicialComplex3> complex;
  GroupSpec group;
  // values[v] holds total_projectors() matrices: factor f occupies
  // [projector_offset(f), projector_offset(f) + N_f).
  std::vector<std::vector<Eigen::MatrixXcd>> values;
  double edge_gap = 0.0;  // max over edges of the tuple distance

  static CosetMap create(std::shared_ptr<const SimplicialComplex3> complex, GroupSpec group,
                         std::vector<std::vector<Eigen::MatrixXcd>> values);
};

// Frobenius distance between projector tuples, summed over the tuple in
// quadrature.
double tuple_distance(const std::vector<Eigen::MatrixXcd>& p,
                      const std::vector<Eigen::MatrixXcd>& q);

// Simultaneous conjugation action of g on a projector tuple.
std::vector<Eigen::MatrixXcd> act_on_tuple(const GroupSpec& g, const GroupElement& e,
                                           const std::vector<Eigen::MatrixXcd>& tuple);

// w . phi, vertexwise.
CosetMap act(const GroupMap& w, const CosetMap& phi);

// max over vertices of the tuple distance between (w . phi)(m) and psi(m).
double action_distance(const GroupMap& w, const CosetMap& phi, const CosetMap& psi);

GroupMap pointwise_product(const GroupMap& u, const GroupMap& v);
GroupMap pointwise_inverse(const GroupMap& u);
// v u v^-1, vertexwise.
GroupMap pointwise_conjugate(const GroupMap& u, const GroupMap& v);

// Midpoint resampling onto a subdivided mesh: group values through the
// polar projection of the block mean, coset tuples through the eigenflag of
// the averaged flag operator.
GroupMap resample(const GroupMap& u, const SubdivisionResult& sub);
CosetMap resample(const CosetMap& phi, const SubdivisionResult& sub);

void require_same_mesh(const GroupMap& a, const GroupMap& b);
void require_same_mesh(const CosetMap& a, const CosetMap& b);

}  // namespace hk
