#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hk {

using Index = std::int32_t;

// Oriented tetrahedral mesh of a closed oriented 3-manifold together with
// geometric vertex coordinates: R^4 coordinates on the unit sphere for S^3
// meshes, unit-cube periodic coordinates for T^3 meshes. Derived incidence
// tables (edges, triangles, boundary operators) are built once and the
// closed-manifold invariants are checked in exact integer arithmetic.
class SimplicialComplex3 {
public:
  struct Tet {
    std::array<Index, 4> v;  // vertex indices as constructed
    int orient;              // +-1; oriented chain is orient * [v0 v1 v2 v3]
  };

  int dim_embed = 0;
  bool periodic = false;  // unit box [0,1)^3
  std::vector<std::array<double, 4>> vertices;  // unused trailing coords are 0
  std::vector<Tet> tets;

  // Periodic meshes: unwrapped chart positions of the four tet vertices,
  // set by the builders. Distinguishes parallel copies of simplices that
  // share a vertex tuple (they exist for T^3 at n = 2) and fixes how maps
  // with winding are sampled.
  std::vector<std::array<std::array<double, 3>, 4>> tet_chart_;

  // Derived tables (filled by finalize()).
  std::vector<std::array<Index, 2>> edges;               // sorted pairs a < b
  std::vector<std::array<Index, 3>> triangles;           // sorted triples
  std::vector<std::array<double, 3>> edge_disp;          // periodic meshes only
  std::vector<std::array<std::array<Index, 2>, 4>> tet_faces;  // (triangle, sign) per face
  std::vector<std::array<std::array<Index, 2>, 3>> tri_edges;  // (edge, sign) per edge
  std::vector<std::vector<Index>> vertex_neighbors;

  std::string id;  // content hash, set by finalize()

  // Second Betti number when known from provenance: set by the builders and
  // carried through subdivision (which preserves Betti numbers). File-loaded
  // complexes leave it unset and pay for the Smith-normal-form computation.
  std::optional<long> known_betti2;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  std::size_t num_tets() const { return tets.size(); }

  Index edge_index(Index a, Index b) const;        // -1 if absent
  Index triangle_index(Index a, Index b, Index c) const;  // -1 if absent

  // Displacement from vertex a to vertex b along an existing edge; respects
  // the stored periodic representative. Requires dim_embed == 3.
  std::array<double, 3> displacement(Index a, Index b) const;

  // Builds incidence tables, verifies the closed-oriented-manifold
  // invariants (each triangle in exactly two tets with opposite induced
  // orientations, d.d = 0, Euler characteristic 0) and assigns the id.
  void finalize();

private:
  std::map<std::array<Index, 2>, Index> edge_lookup_;
  std::map<std::array<Index, 3>, Index> tri_lookup_;
};

// Integer 2-chain with zero boundary, indexed by the triangle table of the
// complex it belongs to.
struct TwoCycle {
  std::string complex_id;
  std::vector<std::int64_t> coeff;  // one per triangle
};

// Exact check that the chain has zero boundary.
bool is_two_cycle(const SimplicialComplex3& c, const TwoCycle& z);

// Boundary of the standard 4-simplex, edge-subdivided `level` times, with
// all vertices radially projected to the unit sphere in R^4.
std::shared_ptr<const SimplicialComplex3> build_s3(int level);

// n x n x n periodic grid, each cube split into 6 tets by the Kuhn
// triangulation. Coordinates in [0,1)^3; per-edge displacement vectors are
// stored so maps with winding sample consistently.
std::shared_ptr<const SimplicialComplex3> build_t3(int n);

std::shared_ptr<const SimplicialComplex3> from_mesh_data(
    int dim_embed, std::vector<std::array<double, 4>> vertices,
    std::vector<SimplicialComplex3::Tet> tets, bool periodic,
    std::vector<std::array<double, 3>> edge_disp_hint = {});

struct SubdivisionResult {
  std::shared_ptr<const SimplicialComplex3> mesh;
  // Per new-mesh vertex: the parent pair (i,i) for kept vertices, (i,j) for
  // edge midpoints. Used by the map resampling hooks.
  std::vector<std::array<Index, 2>> vertex_parents;
};

// Global edge subdivision: each tet splits into 8. S^3 meshes reproject new
// vertices to the unit sphere; periodic meshes derive child displacements
// from the parent tet chart.
SubdivisionResult subdivide(const SimplicialComplex3& c);

// Sum of per-tet density values with deterministic pairwise accumulation.
// Orientation signs are expected to be inside the densities already.
double integrate_3form(const SimplicialComplex3& c, std::span<const double> density);

}  // namespace hk
