#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "wentzell/errors.hpp"
#include "wentzell/fem/boundary_coefficient.hpp"
#include "wentzell/mesh/tri_mesh.hpp"
#include "wentzell/sparse/csr.hpp"
#include "wentzell/sparse/lu.hpp"

namespace wentzell {

enum class MassLumping { consistent, lumped };

/// Assembled P1 matrices for the Wentzell form
///   a(u, v) = int_Omega grad u . conj(grad v) + int_Gamma beta u conj(v)
/// and for the inner product of L2(Omega) + L2(Gamma) pulled back through
/// j(u) = (u, u|_Gamma). Nodal vectors represent conforming P1 functions, so the
/// boundary component of a state is always the restriction of its nodal values.
///
/// `mass()`, `boundary_mass()`, `beta_mass()` and `gram()` follow the lumping
/// choice made at assembly; the consistent and lumped interior mass matrices
/// are both kept.
struct OperatorBundle {
  std::shared_ptr<const TriMesh> mesh;
  BoundaryCoefficient beta;
  MassLumping lumping = MassLumping::consistent;

  CsrMatrix stiffness;                 // K
  CsrMatrix mass_consistent;           // int phi_i phi_j
  CsrMatrix mass_lumped;               // row sums of the above on the diagonal
  CsrMatrix boundary_mass_consistent;  // int_Gamma phi_i phi_j
  CsrMatrix boundary_mass_lumped;
  CsrMatrix beta_mass;                 // int_Gamma beta phi_i phi_j (active lumping)
  CsrMatrix gram;                      // G = M + B (active lumping)

  std::shared_ptr<const std::vector<std::size_t>> boundary_nodes;
  std::vector<std::ptrdiff_t> boundary_index;  // node -> position in boundary_nodes, or -1
  std::vector<double> interior_weights;        // lumped int_Omega phi_i
  std::vector<double> boundary_weights;        // lumped int_Gamma phi_i (0 off Gamma)

  bool lumped() const noexcept { return lumping == MassLumping::lumped; }
  const CsrMatrix& mass() const noexcept { return lumped() ? mass_lumped : mass_consistent; }
  const CsrMatrix& boundary_mass() const noexcept {
    return lumped() ? boundary_mass_lumped : boundary_mass_consistent;
  }
  std::size_t n_total() const noexcept { return mesh->num_vertices(); }
  std::size_t n_boundary() const noexcept { return boundary_nodes->size(); }

  /// Gram matrix of the H^1(Omega) norm, K + consistent mass.
  CsrMatrix h1_gram() const { return stiffness + mass_consistent; }

  /// Boundary-node block of the active boundary mass.
  CsrMatrix boundary_block() const {
    return boundary_mass().submatrix(*boundary_nodes, *boundary_nodes);
  }

  Vector restrict_to_boundary(std::span<const cplx> u) const {
    require_same_size(u.size(), n_total(), "restrict_to_boundary");
    Vector r;
    r.reserve(n_boundary());
    for (auto v : *boundary_nodes) r.push_back(u[v]);
    return r;
  }

  /// Extends boundary values by zero to a full nodal vector.
  Vector extend_from_boundary(std::span<const cplx> g) const {
    require_same_size(g.size(), n_boundary(), "extend_from_boundary");
    Vector r(n_total(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) r[(*boundary_nodes)[k]] = g[k];
    return r;
  }
};

namespace detail {

struct ElementGeometry {
  double area;
  std::array<std::array<double, 2>, 3> grad;  // gradients of barycentric coordinates
};

inline ElementGeometry element_geometry(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const auto& v = mesh.vertices();
  ElementGeometry g{};
  g.area = mesh.triangle_area(t);
  for (int i = 0; i < 3; ++i) {
    const Point& pj = v[tri[(i + 1) % 3]];
    const Point& pk = v[tri[(i + 2) % 3]];
    g.grad[i] = {(pj.y - pk.y) / (2.0 * g.area), (pk.x - pj.x) / (2.0 * g.area)};
  }
  return g;
}

}  // namespace detail

/// Exact P1 integrals. Element stiffness from barycentric gradients, element
/// mass area/12 (1 + delta_ij) (lumped: area/3), boundary edge mass L/6 [2 1; 1 2]
/// (lumped: L/2), beta constant on each edge.
inline OperatorBundle assemble(std::shared_ptr<const TriMesh> mesh, BoundaryCoefficient beta,
                               MassLumping lumping) {
  if (!mesh) throw InvalidArgument("assemble: null mesh");
  if (beta.size() != mesh->boundary_edges().size())
    throw InvalidArgument("assemble: beta has " + std::to_string(beta.size()) + " values but mesh has " +
                          std::to_string(mesh->boundary_edges().size()) + " boundary edges");
  const std::size_t n = mesh->num_vertices();
  OperatorBundle b;
  b.mesh = mesh;
  b.beta = std::move(beta);
  b.lumping = lumping;

  std::vector<Triplet> kt, mt, ml;
  kt.reserve(9 * mesh->num_triangles());
  mt.reserve(9 * mesh->num_triangles());
  b.interior_weights.assign(n, 0.0);
  for (std::size_t t = 0; t < mesh->num_triangles(); ++t) {
    const auto g = detail::element_geometry(*mesh, t);
    const auto& tri = mesh->triangles()[t];
    for (int i = 0; i < 3; ++i) {
      b.interior_weights[tri[i]] += g.area / 3.0;
      for (int j = 0; j < 3; ++j) {
        const double k = g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        kt.push_back({tri[i], tri[j], k});
        mt.push_back({tri[i], tri[j], g.area / 12.0 * (i == j ? 2.0 : 1.0)});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) ml.push_back({i, i, b.interior_weights[i]});
  b.stiffness = CsrMatrix::from_triplets(n, n, std::move(kt));
  b.mass_consistent = CsrMatrix::from_triplets(n, n, std::move(mt));
  b.mass_lumped = CsrMatrix::from_triplets(n, n, std::move(ml));

  std::vector<Triplet> bc, bl, betat;
  b.boundary_weights.assign(n, 0.0);
  const bool lump = lumping == MassLumping::lumped;
  for (std::size_t e = 0; e < mesh->boundary_edges().size(); ++e) {
    const auto& edge = mesh->boundary_edges()[e];
    const double len = mesh->boundary_edge_length(e);
    const std::array<std::size_t, 2> nodes{edge.a, edge.b};
    const cplx be = b.beta[e];
    b.boundary_weights[edge.a] += len / 2.0;
    b.boundary_weights[edge.b] += len / 2.0;
    for (int i = 0; i < 2; ++i) {
      bl.push_back({nodes[i], nodes[i], len / 2.0});
      if (lump) betat.push_back({nodes[i], nodes[i], be * (len / 2.0)});
      for (int j = 0; j < 2; ++j) {
        const double c = len / 6.0 * (i == j ? 2.0 : 1.0);
        bc.push_back({nodes[i], nodes[j], c});
        if (!lump) betat.push_back({nodes[i], nodes[j], be * c});
      }
    }
  }
  b.boundary_mass_consistent = CsrMatrix::from_triplets(n, n, std::move(bc));
  b.boundary_mass_lumped = CsrMatrix::from_triplets(n, n, std::move(bl));
  b.beta_mass = CsrMatrix::from_triplets(n, n, std::move(betat));
  b.gram = b.mass() + b.boundary_mass();

  b.boundary_nodes = std::make_shared<const std::vector<std::size_t>>(mesh->boundary_vertices());
  b.boundary_index.assign(n, -1);
  for (std::size_t k = 0; k < b.boundary_nodes->size(); ++k)
    b.boundary_index[(*b.boundary_nodes)[k]] = static_cast<std::ptrdiff_t>(k);
  return b;
}

inline OperatorBundle assemble(const TriMesh& mesh, BoundaryCoefficient beta, MassLumping lumping) {
  return assemble(std::make_shared<const TriMesh>(mesh), std::move(beta), lumping);
}

/// S_omega = K + B_beta + omega G; a_omega(u, v) = v^* S_omega u.
inline CsrMatrix shifted_form_matrix(const OperatorBundle& b, double omega) {
  return linear_combination(1.0, b.stiffness + b.beta_mass, omega, b.gram);
}

/// Discrete Green-formula flux: solves B_GG h = (K u + M f) restricted to the
/// boundary test functions, where f is the nodal representation of Delta u.
/// Returns h on the boundary nodes (ordered as `boundary_nodes`).
inline Vector discrete_normal_derivative(const OperatorBundle& b, std::span<const cplx> u,
                                         std::span<const cplx> laplacian) {
  require_same_size(u.size(), b.n_total(), "discrete_normal_derivative(u)");
  require_same_size(laplacian.size(), b.n_total(), "discrete_normal_derivative(f)");
  if (b.n_boundary() == 0) throw InvalidState("discrete_normal_derivative: mesh has no boundary nodes");
  const Vector ku = spmv(b.stiffness, u);
  const Vector mf = spmv(b.mass(), laplacian);
  Vector r(b.n_boundary());
  for (std::size_t k = 0; k < b.n_boundary(); ++k) {
    const auto v = (*b.boundary_nodes)[k];
    r[k] = ku[v] + mf[v];
  }
  const auto f = lu_factor(b.boundary_block());
  return f.solve(r);
}

}  // namespace wentzell
