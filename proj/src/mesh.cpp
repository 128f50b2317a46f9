#include "hk/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>

#include "hk/errors.hpp"
#include "hk/util.hpp"

namespace hk {

namespace {

constexpr std::size_t kMaxTets = 3'000'000;

int sort4_sign(std::array<Index, 4>& a) {
  int sign = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3 - i; ++j)
      if (a[j] > a[j + 1]) {
        std::swap(a[j], a[j + 1]);
        sign = -sign;
      }
  return sign;
}

double wrap01(double x) {
  x -= std::floor(x);
  if (x >= 1.0) x -= 1.0;
  return x;
}

// Quantized location key; 2^20 buckets per unit, wrapped for periodic
// meshes. Construction coordinates are rationals k/(n*2^s), far from bucket
// boundaries, so keys computed from different tet charts agree.
std::array<std::int64_t, 3> location_key(const std::array<double, 3>& p, bool periodic) {
  std::array<std::int64_t, 3> q{};
  for (int i = 0; i < 3; ++i) {
    double x = periodic ? wrap01(p[i]) : p[i];
    std::int64_t v = std::llround(x * 1048576.0);
    if (periodic && v == 1048576) v = 0;
    q[i] = v;
  }
  return q;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

double det3(const std::array<double, 3>& a, const std::array<double, 3>& b,
            const std::array<double, 3>& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

Index SimplicialComplex3::edge_index(Index a, Index b) const {
  if (a > b) std::swap(a, b);
  auto it = edge_lookup_.find({a, b});
  return it == edge_lookup_.end() ? -1 : it->second;
}

Index SimplicialComplex3::triangle_index(Index a, Index b, Index c) const {
  std::array<Index, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  auto it = tri_lookup_.find(t);
  return it == tri_lookup_.end() ? -1 : it->second;
}

std::array<double, 3> SimplicialComplex3::displacement(Index a, Index b) const {
  if (!periodic) {
    std::array<double, 3> d{};
    for (int i = 0; i < std::min(dim_embed, 3); ++i) d[i] = vertices[b][i] - vertices[a][i];
    return d;
  }
  Index e = edge_index(a, b);
  if (e < 0) throw Error("displacement: no edge between the given vertices");
  std::array<double, 3> d = edge_disp[e];
  if (a > b)
    for (double& x : d) x = -x;
  return d;
}

void SimplicialComplex3::finalize() {
  const std::size_t nv = vertices.size();
  const std::size_t nt = tets.size();
  if (nt == 0) throw Error("mesh has no tets");
  if (periodic && tet_chart_.size() != nt)
    throw Error("periodic mesh finalize requires per-tet charts");

  // Chart positions per tet (raw coordinates for non-periodic meshes).
  auto chart_pos = [&](std::size_t t, int slot) -> std::array<double, 3> {
    if (periodic) return tet_chart_[t][slot];
    const auto& v = vertices[tets[t].v[slot]];
    return {v[0], v[1], v[2]};
  };
  // 4D meshes key faces by vertex tuple alone (tuples are unique there);
  // 3D periodic meshes need the geometric key to keep parallel copies apart.
  const bool use_location = (dim_embed == 3);

  struct TriKey {
    std::array<Index, 3> v;
    std::array<std::int64_t, 3> loc;
    bool operator<(const TriKey& o) const {
      if (v != o.v) return v < o.v;
      return loc < o.loc;
    }
  };

  triangles.clear();
  tet_faces.assign(nt, {});
  std::map<TriKey, Index> tri_map;
  std::vector<std::array<std::array<double, 3>, 3>> tri_chart;  // sorted-vertex order
  std::vector<int> tri_use(0);

  for (std::size_t t = 0; t < nt; ++t) {
    std::array<Index, 4> sorted = tets[t].v;
    int parity = sort4_sign(sorted);
    std::array<std::array<double, 3>, 4> spos{};
    for (int s = 0; s < 4; ++s) {
      // position of sorted[s] within this tet's chart
      for (int k = 0; k < 4; ++k)
        if (tets[t].v[k] == sorted[s]) spos[s] = chart_pos(t, k);
    }
    for (int i = 0; i < 4; ++i) {
      std::array<Index, 3> face{};
      std::array<std::array<double, 3>, 3> fpos{};
      int w = 0;
      for (int s = 0; s < 4; ++s) {
        if (s == i) continue;
        face[w] = sorted[s];
        fpos[w] = spos[s];
        ++w;
      }
      std::array<double, 3> centroid{};
      for (int k = 0; k < 3; ++k)
        centroid[k] = (fpos[0][k] + fpos[1][k] + fpos[2][k]) / 3.0;
      TriKey key{face, use_location ? location_key(centroid, periodic)
                                    : std::array<std::int64_t, 3>{}};
      auto [it, fresh] = tri_map.try_emplace(key, static_cast<Index>(triangles.size()));
      if (fresh) {
        triangles.push_back(face);
        tri_chart.push_back(fpos);
        tri_use.push_back(0);
      }
      const Index tri = it->second;
      const int sign = tets[t].orient * parity * ((i % 2 == 0) ? 1 : -1);
      if (tri_use[tri] >= 2)
        throw Error("mesh is not a closed 3-manifold: triangle in more than two tets");
      tet_faces[t][i] = {tri, sign};
      ++tri_use[tri];
    }
  }

  // Closed oriented manifold: every triangle in exactly two tets with
  // opposite induced orientations.
  {
    std::vector<int> sign_sum(triangles.size(), 0);
    std::vector<int> count(triangles.size(), 0);
    for (std::size_t t = 0; t < nt; ++t)
      for (const auto& [tri, sign] : tet_faces[t]) {
        sign_sum[tri] += sign;
        ++count[tri];
      }
    for (std::size_t f = 0; f < triangles.size(); ++f) {
      if (count[f] != 2)
        throw Error("mesh is not a closed 3-manifold: triangle not shared by two tets");
      if (sign_sum[f] != 0)
        throw Error("mesh is not consistently oriented: induced orientations agree");
    }
  }

  // Edge table from triangle charts.
  struct EdgeKey {
    std::array<Index, 2> v;
    std::array<std::int64_t, 3> loc;
    bool operator<(const EdgeKey& o) const {
      if (v != o.v) return v < o.v;
      return loc < o.loc;
    }
  };
  edges.clear();
  edge_disp.clear();
  tri_edges.assign(triangles.size(), {});
  std::map<EdgeKey, Index> edge_map;
  // boundary of sorted triangle [a b c]: +[b c] - [a c] + [a b]
  static constexpr int pair_of[3][2] = {{1, 2}, {0, 2}, {0, 1}};
  static constexpr int edge_sign[3] = {1, -1, 1};
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int ia = pair_of[k][0], ib = pair_of[k][1];
      std::array<Index, 2> e{triangles[f][ia], triangles[f][ib]};
      std::array<double, 3> mid{}, disp{};
      for (int c = 0; c < 3; ++c) {
        mid[c] = (tri_chart[f][ia][c] + tri_chart[f][ib][c]) / 2.0;
        disp[c] = tri_chart[f][ib][c] - tri_chart[f][ia][c];
      }
      EdgeKey key{e, use_location ? location_key(mid, periodic)
                                  : std::array<std::int64_t, 3>{}};
      auto [it, fresh] = edge_map.try_emplace(key, static_cast<Index>(edges.size()));
      if (fresh) {
        edges.push_back(e);
        edge_disp.push_back(disp);
      }
      tri_edges[f][k] = {it->second, edge_sign[k]};
    }
  }
  if (!periodic) edge_disp.assign(edges.size(), {});

  // d2 . d3 = 0, in exact integer arithmetic.
  {
    std::map<Index, long> acc;
    for (std::size_t t = 0; t < nt; ++t) {
      acc.clear();
      for (const auto& [tri, fs] : tet_faces[t])
        for (const auto& [e, es] : tri_edges[tri]) acc[e] += static_cast<long>(fs) * es;
      for (const auto& [e, v] : acc)
        if (v != 0) throw Error("boundary operators do not compose to zero");
    }
  }

  if (static_cast<long>(nv) - static_cast<long>(edges.size()) +
          static_cast<long>(triangles.size()) - static_cast<long>(nt) !=
      0)
    throw Error("Euler characteristic of a closed 3-manifold must be 0");

  vertex_neighbors.assign(nv, {});
  for (const auto& e : edges) {
    vertex_neighbors[e[0]].push_back(e[1]);
    vertex_neighbors[e[1]].push_back(e[0]);
  }

  edge_lookup_.clear();
  for (std::size_t e = 0; e < edges.size(); ++e)
    edge_lookup_.try_emplace(edges[e], static_cast<Index>(e));
  tri_lookup_.clear();
  for (std::size_t f = 0; f < triangles.size(); ++f)
    tri_lookup_.try_emplace(triangles[f], static_cast<Index>(f));

  // Content hash.
  std::uint64_t h = 1469598103934665603ull;
  std::int32_t meta[2] = {dim_embed, periodic ? 1 : 0};
  h = fnv1a(meta, sizeof meta, h);
  for (const auto& v : vertices) h = fnv1a(v.data(), sizeof(double) * 4, h);
  for (const auto& t : tets) {
    h = fnv1a(t.v.data(), sizeof(Index) * 4, h);
    h = fnv1a(&t.orient, sizeof t.orient, h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  id = buf;
}

bool is_two_cycle(const SimplicialComplex3& c, const TwoCycle& z) {
  if (z.coeff.size() != c.num_triangles()) throw SizeMismatch("two-cycle length != triangle count");
  std::vector<std::int64_t> acc(c.num_edges(), 0);
  for (std::size_t f = 0; f < z.coeff.size(); ++f) {
    if (z.coeff[f] == 0) continue;
    for (const auto& [e, s] : c.tri_edges[f]) acc[e] += z.coeff[f] * s;
  }
  return std::all_of(acc.begin(), acc.end(), [](std::int64_t v) { return v == 0; });
}

namespace {

// Children of one parent tet under edge subdivision, as barycentric labels:
// 0..3 = parent vertices, pair (i,j) encoded as 4 + pair rank = midpoint.
struct ChildSpec {
  std::array<int, 4> label;
};

constexpr int pair_rank(int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  constexpr int rank[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return 4 + rank[i][j];
}

std::array<double, 4> bary_of_label(int label) {
  std::array<double, 4> b{};
  if (label < 4) {
    b[label] = 1.0;
    return b;
  }
  static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const int* p = pairs[label - 4];
  b[p[0]] = 0.5;
  b[p[1]] = 0.5;
  return b;
}

// Orientation of a child (listed in barycentric labels of the parent frame)
// relative to the parent tuple: sign of the affine determinant.
int child_orientation(const ChildSpec& ch) {
  std::array<std::array<double, 4>, 4> b{};
  for (int k = 0; k < 4; ++k) b[k] = bary_of_label(ch.label[k]);
  std::array<double, 3> d1{}, d2{}, d3{};
  for (int c = 0; c < 3; ++c) {
    d1[c] = b[1][c + 1] - b[0][c + 1];
    d2[c] = b[2][c + 1] - b[0][c + 1];
    d3[c] = b[3][c + 1] - b[0][c + 1];
  }
  const double det = det3(d1, d2, d3);
  return det > 0 ? 1 : -1;
}

const std::array<ChildSpec, 4> kCornerChildren = {{
    {{0, pair_rank(0, 1), pair_rank(0, 2), pair_rank(0, 3)}},
    {{pair_rank(0, 1), 1, pair_rank(1, 2), pair_rank(1, 3)}},
    {{pair_rank(0, 2), pair_rank(1, 2), 2, pair_rank(2, 3)}},
    {{pair_rank(0, 3), pair_rank(1, 3), pair_rank(2, 3), 3}},
}};

// Octahedron split for each of the three diagonals; equator cycles chosen so
// consecutive midpoints share a parent vertex.
std::array<ChildSpec, 4> oct_children(int diagonal) {
  const int m01 = pair_rank(0, 1), m02 = pair_rank(0, 2), m03 = pair_rank(0, 3);
  const int m12 = pair_rank(1, 2), m13 = pair_rank(1, 3), m23 = pair_rank(2, 3);
  int p, q;
  std::array<int, 4> cyc{};
  switch (diagonal) {
    case 0: p = m01, q = m23, cyc = {m02, m03, m13, m12}; break;
    case 1: p = m02, q = m13, cyc = {m01, m03, m23, m12}; break;
    default: p = m03, q = m12, cyc = {m01, m02, m23, m13}; break;
  }
  std::array<ChildSpec, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = ChildSpec{{p, cyc[k], cyc[(k + 1) % 4], q}};
  return out;
}

std::shared_ptr<const SimplicialComplex3> finalize_shared(SimplicialComplex3&& c) {
  auto p = std::make_shared<SimplicialComplex3>(std::move(c));
  p->finalize();
  return p;
}

}  // namespace

std::shared_ptr<const SimplicialComplex3> build_s3(int level) {
  if (level < 0) throw Error("build_s3: level must be >= 0");
  if (level > 6) throw ResourceLimit("build_s3: level > 6");

  SimplicialComplex3 c;
  c.dim_embed = 4;
  c.periodic = false;
  // Regular 4-simplex: vertex i has coordinates given by the Helmert rows,
  // which form an orthonormal basis of the sum-zero hyperplane of R^5.
  for (int i = 0; i < 5; ++i) {
    std::array<double, 4> x{};
    for (int k = 1; k <= 4; ++k) {
      const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
      double entry = 0.0;
      if (i < k)
        entry = 1.0 / norm;
      else if (i == k)
        entry = -static_cast<double>(k) / norm;
      x[k - 1] = entry;
    }
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    for (double& v : x) v /= r;
    c.vertices.push_back(x);
  }
  // Boundary of [0 1 2 3 4]: facet i omits vertex i, with sign (-1)^i.
  for (int i = 0; i < 5; ++i) {
    SimplicialComplex3::Tet t{};
    int w = 0;
    for (int v = 0; v < 5; ++v)
      if (v != i) t.v[w++] = v;
    t.orient = (i % 2 == 0) ? 1 : -1;
    c.tets.push_back(t);
  }
  c.known_betti2 = 0;
  auto mesh = finalize_shared(std::move(c));
  for (int l = 0; l < level; ++l) mesh = subdivide(*mesh).mesh;
  return mesh;
}

std::shared_ptr<const SimplicialComplex3> build_t3(int n) {
  if (n < 2) throw Error("build_t3: n must be >= 2");
  if (n > 32) throw ResourceLimit("build_t3: n > 32");

  SimplicialComplex3 c;
  c.dim_embed = 3;
  c.periodic = true;
  const double h = 1.0 / n;
  auto vid = [n](int i, int j, int k) {
    return static_cast<Index>(((i % n + n) % n) + n * (((j % n + n) % n) + n * ((k % n + n) % n)));
  };
  c.vertices.resize(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) c.vertices[vid(i, j, k)] = {i * h, j * h, k * h, 0.0};

  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static constexpr int perm_sign[6] = {1, -1, -1, 1, 1, -1};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < 6; ++p) {
          // Kuhn path 0 -> e_p0 -> e_p0 + e_p1 -> (1,1,1) through the cube.
          std::array<std::array<int, 3>, 4> corner{};
          corner[0] = {0, 0, 0};
          corner[1] = corner[0];
          corner[1][perms[p][0]] += 1;
          corner[2] = corner[1];
          corner[2][perms[p][1]] += 1;
          corner[3] = {1, 1, 1};
          SimplicialComplex3::Tet t{};
          std::array<std::array<double, 3>, 4> chart{};
          for (int s = 0; s < 4; ++s) {
            t.v[s] = vid(i + corner[s][0], j + corner[s][1], k + corner[s][2]);
            chart[s] = {(i + corner[s][0]) * h, (j + corner[s][1]) * h, (k + corner[s][2]) * h};
          }
          t.orient = perm_sign[p];
          c.tets.push_back(t);
          c.tet_chart_.push_back(chart);
        }
  c.known_betti2 = 3;
  return finalize_shared(std::move(c));
}

std::shared_ptr<const SimplicialComplex3> from_mesh_data(
    int dim_embed, std::vector<std::array<double, 4>> vertices,
    std::vector<SimplicialComplex3::Tet> tets, bool periodic,
    std::vector<std::array<double, 3>> edge_disp_hint) {
  SimplicialComplex3 c;
  c.dim_embed = dim_embed;
  c.periodic = periodic;
  c.vertices = std::move(vertices);
  c.tets = std::move(tets);
  if (periodic) {
    if (dim_embed != 3) throw Error("periodic meshes must have dim_embed == 3");
    if (!edge_disp_hint.empty()) {
      if (edge_disp_hint.size() != c.tets.size() * 3)
        throw SizeMismatch("tet chart hint must hold 3 displacement vectors per tet");
      for (std::size_t t = 0; t < c.tets.size(); ++t) {
        std::array<std::array<double, 3>, 4> chart{};
        const auto& v0 = c.vertices[c.tets[t].v[0]];
        chart[0] = {v0[0], v0[1], v0[2]};
        for (int s = 1; s < 4; ++s)
          for (int k = 0; k < 3; ++k) chart[s][k] = chart[0][k] + edge_disp_hint[3 * t + s - 1][k];
        c.tet_chart_.push_back(chart);
      }
    } else {
      // Reconstruct charts by the shortest periodic representative,
      // breaking exact half-box ties toward the positive direction.
      for (const auto& t : c.tets) {
        std::array<std::array<double, 3>, 4> chart{};
        const auto& v0 = c.vertices[t.v[0]];
        chart[0] = {v0[0], v0[1], v0[2]};
        for (int s = 1; s < 4; ++s)
          for (int k = 0; k < 3; ++k) {
            double d = c.vertices[t.v[s]][k] - v0[k];
            d -= std::round(d);
            if (d <= -0.5) d += 1.0;
            chart[s][k] = chart[0][k] + d;
          }
        c.tet_chart_.push_back(chart);
      }
    }
  }
  return finalize_shared(std::move(c));
}

SubdivisionResult subdivide(const SimplicialComplex3& c) {
  if (c.num_tets() * 8 > kMaxTets) throw ResourceLimit("subdivide: refined mesh too large");

  const Index nv = static_cast<Index>(c.num_vertices());
  bool sphere = false;
  if (!c.periodic && c.dim_embed == 4) {
    sphere = true;
    for (const auto& v : c.vertices) {
      const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
      if (std::abs(r2 - 1.0) > 1e-9) {
        sphere = false;
        break;
      }
    }
  }

  SimplicialComplex3 out;
  out.dim_embed = c.dim_embed;
  out.periodic = c.periodic;
  out.known_betti2 = c.known_betti2;
  out.vertices = c.vertices;
  SubdivisionResult result;
  result.vertex_parents.reserve(nv + c.num_edges());
  for (Index i = 0; i < nv; ++i) result.vertex_parents.push_back({i, i});

  for (std::size_t e = 0; e < c.num_edges(); ++e) {
    const Index a = c.edges[e][0], b = c.edges[e][1];
    std::array<double, 4> m{};
    if (c.periodic) {
      for (int k = 0; k < 3; ++k) m[k] = wrap01(c.vertices[a][k] + 0.5 * c.edge_disp[e][k]);
    } else {
      for (int k = 0; k < 4; ++k) m[k] = 0.5 * (c.vertices[a][k] + c.vertices[b][k]);
      if (sphere) {
        const double r = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
        for (double& x : m) x /= r;
      }
    }
    out.vertices.push_back(m);
    result.vertex_parents.push_back({a, b});
  }

  for (std::size_t t = 0; t < c.num_tets(); ++t) {
    const auto& tet = c.tets[t];
    // This tet's own edge copies, resolved through its faces.
    std::map<std::array<Index, 2>, Index> local_edge;
    for (const auto& [tri, fs] : c.tet_faces[t]) {
      (void)fs;
      for (const auto& [e, es] : c.tri_edges[tri]) {
        (void)es;
        local_edge[c.edges[e]] = e;
      }
    }
    auto edge_of = [&](int i, int j) {
      std::array<Index, 2> key{tet.v[i], tet.v[j]};
      if (key[0] > key[1]) std::swap(key[0], key[1]);
      return local_edge.at(key);
    };

    // Global vertex index of a barycentric label.
    auto vertex_of_label = [&](int label) -> Index {
      if (label < 4) return tet.v[label];
      static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
      const int* p = pairs[label - 4];
      return nv + static_cast<Index>(edge_of(p[0], p[1]));
    };

    // Chart position of a barycentric label within this tet.
    std::array<std::array<double, 3>, 4> pchart{};
    if (c.periodic) {
      pchart = c.tet_chart_[t];
    } else {
      for (int s = 0; s < 4; ++s) {
        const auto& v = c.vertices[tet.v[s]];
        pchart[s] = {v[0], v[1], v[2]};
      }
    }
    auto chart_of_label = [&](int label) -> std::array<double, 3> {
      const auto b = bary_of_label(label);
      std::array<double, 3> p{};
      for (int s = 0; s < 4; ++s)
        for (int k = 0; k < 3; ++k) p[k] += b[s] * pchart[s][k];
      return p;
    };

    // Shortest octahedron diagonal, ambient metric, fixed tie-break order.
    int best_diag = 0;
    double best_len = std::numeric_limits<double>::infinity();
    static constexpr int diag_pairs[3][2] = {{pair_rank(0, 1), pair_rank(2, 3)},
                                             {pair_rank(0, 2), pair_rank(1, 3)},
                                             {pair_rank(0, 3), pair_rank(1, 2)}};
    for (int d = 0; d < 3; ++d) {
      double len = 0.0;
      if (!c.periodic && c.dim_embed == 4) {
        const Index va = vertex_of_label(diag_pairs[d][0]);
        const Index vb = vertex_of_label(diag_pairs[d][1]);
        for (int k = 0; k < 4; ++k) {
          const double dd = out.vertices[va][k] - out.vertices[vb][k];
          len += dd * dd;
        }
      } else {
        const auto pa = chart_of_label(diag_pairs[d][0]);
        const auto pb = chart_of_label(diag_pairs[d][1]);
        for (int k = 0; k < 3; ++k) {
          const double dd = pa[k] - pb[k];
          len += dd * dd;
        }
      }
      if (len < best_len - 1e-15) {
        best_len = len;
        best_diag = d;
      }
    }

    auto emit = [&](const ChildSpec& ch) {
      SimplicialComplex3::Tet child{};
      for (int k = 0; k < 4; ++k) child.v[k] = vertex_of_label(ch.label[k]);
      child.orient = tet.orient * child_orientation(ch);
      out.tets.push_back(child);
      if (c.periodic) {
        std::array<std::array<double, 3>, 4> chart{};
        for (int k = 0; k < 4; ++k) chart[k] = chart_of_label(ch.label[k]);
        out.tet_chart_.push_back(chart);
      }
    };
    for (const auto& ch : kCornerChildren) emit(ch);
    for (const auto& ch : oct_children(best_diag)) emit(ch);
  }

  result.mesh = finalize_shared(std::move(out));
  return result;
}

double integrate_3form(const SimplicialComplex3& c, std::span<const double> density) {
  if (density.size() != c.num_tets())
    throw SizeMismatch("integrate_3form: one density value per tet required");
  return pairwise_sum(density);
}

}  // namespace hk
