#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wentzell/fem/assembly.hpp"
#include "wentzell/fem/norms.hpp"
#include "wentzell/fem/product_state.hpp"
#include "wentzell/mesh/generate.hpp"
#include "wentzell/sparse/matrix_market.hpp"

using namespace wentzell;

namespace {

std::shared_ptr<const TriMesh> square(std::size_t n) {
  return std::make_shared<const TriMesh>(generate_rectangle(1, 1, n, n));
}

OperatorBundle bundle(std::shared_ptr<const TriMesh> m, cplx beta, MassLumping l = MassLumping::consistent) {
  return assemble(m, BoundaryCoefficient::constant(*m, beta), l);
}

Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(n);
  for (auto& z : x) z = cplx(u(rng), u(rng));
  return x;
}

Vector random_real(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(n);
  for (auto& z : x) z = u(rng);
  return x;
}

double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b) {
  const auto da = a.to_dense(), db = b.to_dense();
  double d = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) d = std::max(d, std::abs(da[i] - db[i]));
  return d;
}

}  // namespace

TEST(Assemble, UnitSquareTwoTriangles) {
  const auto b = bundle(square(1), 0.0);
  const Vector one = ones(4);
  EXPECT_LE(norm_inf(spmv(b.stiffness, one)), 1e-12 * b.stiffness.max_abs());
  EXPECT_NEAR(quadratic_form(b.mass(), one, one).real(), 1.0, 1e-14);
  EXPECT_NEAR(quadratic_form(b.boundary_mass(), one, one).real(), 4.0, 1e-14);
}

TEST(Assemble, ReferenceTriangleStiffnessByHand) {
  // grad phi_0 = (-1,-1), grad phi_1 = (1,0), grad phi_2 = (0,1), area 1/2.
  const auto m = std::make_shared<const TriMesh>(TriMesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
  const auto b = bundle(m, 0.0);
  const double expect[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(b.stiffness.at(i, j) - expect[i][j]), 0.0, 1e-15);
  // Consistent mass: area/12 * (1 + delta_ij).
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(b.mass_consistent.at(i, j).real(), (i == j ? 2.0 : 1.0) / 24.0, 1e-15);
  // Boundary mass on the hypotenuse (length sqrt 2): len/6 * (2, 1; 1, 2).
  EXPECT_NEAR(b.boundary_mass_consistent.at(1, 2).real(), std::sqrt(2.0) / 6.0, 1e-15);
}

TEST(Assemble, ConstantBetaScalesBoundaryMass) {
  for (auto l : {MassLumping::consistent, MassLumping::lumped}) {
    const auto b = bundle(square(6), cplx(1, 2), l);
    EXPECT_EQ(max_abs_diff(b.beta_mass, b.boundary_mass().scaled(cplx(1, 2))), 0.0);
  }
}

TEST(Assemble, BetaSizeMismatch) {
  const auto m = square(3);
  EXPECT_THROW(assemble(m, BoundaryCoefficient(std::vector<cplx>(5, 1.0)), MassLumping::consistent),
               InvalidArgument);
}

TEST(Assemble, StructuralInvariants) {
  std::mt19937_64 rng(1);
  for (auto l : {MassLumping::consistent, MassLumping::lumped}) {
    for (auto mesh : {square(5), std::make_shared<const TriMesh>(generate_lshape(3))}) {
      const auto b = bundle(mesh, 0.7, l);
      EXPECT_TRUE(b.stiffness.is_hermitian());
      EXPECT_TRUE(b.mass().is_hermitian());
      EXPECT_TRUE(b.boundary_mass().is_hermitian());
      EXPECT_TRUE(b.gram.is_hermitian());
      EXPECT_TRUE(b.beta_mass.is_hermitian());  // beta real
      EXPECT_EQ(max_abs_diff(b.gram, b.mass() + b.boundary_mass()), 0.0);
      for (int s = 0; s < 20; ++s) {
        const Vector v = random_vector(rng, b.n_total());
        EXPECT_GE(quadratic_form(b.stiffness, v, v).real(), -1e-13);
        EXPECT_GE(quadratic_form(b.mass(), v, v).real(), 0.0);
        EXPECT_GE(quadratic_form(b.boundary_mass(), v, v).real(), -1e-15);
        EXPECT_GT(quadratic_form(b.gram, v, v).real(), 0.0);
      }
      // Row sums of B are the boundary hat integrals and add up to the perimeter.
      const Vector rs = b.boundary_mass().row_sums();
      double total = 0.0;
      for (std::size_t i = 0; i < rs.size(); ++i) {
        EXPECT_NEAR(rs[i].real(), b.boundary_weights[i], 1e-15);
        total += rs[i].real();
      }
      EXPECT_NEAR(total, mesh->perimeter(), 1e-12);
    }
  }
}

TEST(Assemble, BoundaryMassSupportedOnBoundaryNodes) {
  const auto b = bundle(square(4), 1.0);
  for (std::size_t i = 0; i < b.n_total(); ++i) {
    if (b.boundary_index[i] >= 0) continue;
    EXPECT_EQ(b.boundary_mass().row_sums()[i], cplx(0.0));
    EXPECT_EQ(b.boundary_weights[i], 0.0);
  }
}

TEST(Assemble, LumpedAndConsistentMassAgreeOnConstants) {
  for (auto mesh : {square(7), std::make_shared<const TriMesh>(generate_lshape(2))}) {
    const auto b = bundle(mesh, 0.0);
    const Vector one = ones(b.n_total());
    EXPECT_NEAR(quadratic_form(b.mass_consistent, one, one).real(),
                quadratic_form(b.mass_lumped, one, one).real(), 1e-14);
    EXPECT_NEAR(quadratic_form(b.mass_lumped, one, one).real(), mesh->area(), 1e-14);
    EXPECT_NEAR(quadratic_form(b.boundary_mass_consistent, one, one).real(),
                quadratic_form(b.boundary_mass_lumped, one, one).real(), 1e-13);
  }
}

TEST(Assemble, CornerNodesTakeBetaFromBothAdjacentEdges) {
  const auto m = square(2);
  const auto beta = BoundaryCoefficient::per_arc(*m, {{0, 1.0}, {1, 10.0}, {2, 100.0}, {3, 1000.0}});
  const auto b = assemble(m, beta, MassLumping::lumped);
  // Corner (1,0) is vertex 2 in row-major order; half an edge (0.25) from arcs 0 and 1.
  ASSERT_EQ(m->vertices()[2], (Point{1, 0}));
  EXPECT_NEAR(b.beta_mass.at(2, 2).real(), 0.25 * 1.0 + 0.25 * 10.0, 1e-15);
}

TEST(ShiftedForm, OmegaZeroIsKPlusBbeta) {
  const auto b = bundle(square(4), cplx(0.3, -2));
  EXPECT_EQ(max_abs_diff(shifted_form_matrix(b, 0.0), b.stiffness + b.beta_mass), 0.0);
}

TEST(ShiftedForm, HermitianPositiveDefiniteForZeroBeta) {
  const auto b = bundle(square(5), 0.0);
  const CsrMatrix s1 = shifted_form_matrix(b, 1.0);
  EXPECT_TRUE(s1.is_hermitian());
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const Vector v = random_vector(rng, b.n_total());
    EXPECT_GT(quadratic_form(s1, v, v).real(), 0.0);
  }
  EXPECT_NO_THROW((void)lu_factor(s1));
}

TEST(ShiftedForm, ConstantsGiveExactIntegral) {
  // 1^T S_omega 1 = omega (|Omega| + sigma(Gamma)) + int_Gamma beta
  for (auto l : {MassLumping::consistent, MassLumping::lumped}) {
    const auto m = std::make_shared<const TriMesh>(generate_lshape(3));
    const std::map<int, cplx> arcs{{0, cplx(1, 1)}, {1, -2.0}, {2, cplx(0, 3)}, {3, 0.5}, {4, 0.0}, {5, cplx(2, -1)}};
    const auto b = assemble(m, BoundaryCoefficient::per_arc(*m, arcs), l);
    // Arc lengths along the L polygon: 1, 1/2, 1/2, 1/2, 1/2, 1.
    const double len[6] = {1.0, 0.5, 0.5, 0.5, 0.5, 1.0};
    cplx beta_integral = 0.0;
    for (int a = 0; a < 6; ++a) beta_integral += len[a] * arcs.at(a);
    for (double omega : {0.0, 1.0, 3.5}) {
      const Vector one = ones(b.n_total());
      const cplx got = quadratic_form(shifted_form_matrix(b, omega), one, one);
      const cplx expect = omega * (0.75 + 4.0) + beta_integral;
      EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-12);
    }
  }
}

TEST(ShiftedForm, StiffnessAnnihilatesConstants) {
  const auto b = bundle(square(6), cplx(2, -1));
  const Vector one = ones(b.n_total());
  const Vector lhs = spmv(shifted_form_matrix(b, 0.0), one);
  const Vector rhs = spmv(b.beta_mass, one);
  EXPECT_LE(norm_inf(subtract(lhs, rhs)), 1e-12);
}

TEST(ShiftedForm, NonnegativeForRealNonnegativeBeta) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 5.0);
  const auto m = square(6);
  for (int k = 0; k < 20; ++k) {
    const auto beta = BoundaryCoefficient::sampled(*m, [&](Point, int) { return cplx(pos(rng)); });
    const auto b = assemble(m, beta, MassLumping::consistent);
    const Vector u = random_real(rng, b.n_total());
    EXPECT_GE(quadratic_form(b.stiffness + b.beta_mass, u, u).real(), -1e-13);
  }
}

TEST(NormalDerivative, LinearFunctionX) {
  const auto m = square(8);
  const auto b = bundle(m, 0.0, MassLumping::lumped);
  const Vector u = interpolate(*m, [](Point p) { return cplx(p.x); });
  const Vector h = discrete_normal_derivative(b, u, Vector(b.n_total(), 0.0));
  for (std::size_t k = 0; k < b.n_boundary(); ++k) {
    const Point p = m->vertices()[(*b.boundary_nodes)[k]];
    const bool corner = (p.x == 0 || p.x == 1) && (p.y == 0 || p.y == 1);
    double expect = p.x == 1 ? 1.0 : (p.x == 0 ? -1.0 : 0.0);
    if (corner) expect /= 2;  // average of the two adjacent edge normals
    EXPECT_NEAR(h[k].real(), expect, 1e-12) << p.x << "," << p.y;
    EXPECT_NEAR(h[k].imag(), 0.0, 1e-12);
  }
}

TEST(NormalDerivative, ConstantHasZeroFlux) {
  for (auto l : {MassLumping::consistent, MassLumping::lumped}) {
    const auto b = bundle(square(5), 1.0, l);
    const Vector h = discrete_normal_derivative(b, Vector(b.n_total(), 3.0), Vector(b.n_total(), 0.0));
    EXPECT_LE(norm_inf(h), 1e-12);
  }
}

TEST(NormalDerivative, ManufacturedQuadraticConvergesAtFirstOrder) {
  // u = x^2 + y^2, Laplacian 4, flux 2x nu_1 + 2y nu_2; corners take the mean of both sides.
  std::vector<double> errors;
  for (std::size_t n : {8, 16, 32, 64}) {
    const auto m = square(n);
    const auto b = bundle(m, 0.0, MassLumping::lumped);
    const Vector u = interpolate(*m, [](Point p) { return cplx(p.x * p.x + p.y * p.y); });
    const Vector h = discrete_normal_derivative(b, u, Vector(b.n_total(), 4.0));
    double err2 = 0.0;
    for (std::size_t k = 0; k < b.n_boundary(); ++k) {
      const auto v = (*b.boundary_nodes)[k];
      const Point p = m->vertices()[v];
      double sum = 0.0;
      int sides = 0;
      if (p.x == 1) sum += 2, ++sides;
      if (p.x == 0) sum += 0, ++sides;
      if (p.y == 1) sum += 2, ++sides;
      if (p.y == 0) sum += 0, ++sides;
      err2 += b.boundary_weights[v] * std::norm(h[k] - sum / sides);
    }
    errors.push_back(std::sqrt(err2));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double order = std::log2(errors[i - 1] / errors[i]);
    EXPECT_GT(order, 0.9) << "level " << i;
  }
  EXPECT_LT(errors.back(), 0.03);
}

TEST(NormalDerivative, GreenCompatibilityIdentity) {
  // With f the discrete Laplacian on interior rows, v^T(K u + M f) = v_G^T B_GG h for every v.
  std::mt19937_64 rng(4);
  for (auto mesh : {square(6), std::make_shared<const TriMesh>(generate_lshape(3))}) {
    const auto b = bundle(mesh, 0.0, MassLumping::lumped);
    const Vector u = random_vector(rng, b.n_total());
    const Vector ku = spmv(b.stiffness, u);
    Vector f = random_vector(rng, b.n_total());  // boundary rows arbitrary
    for (std::size_t i = 0; i < b.n_total(); ++i)
      if (b.boundary_index[i] < 0) f[i] = -ku[i] / b.mass_lumped.at(i, i);
    const Vector h = discrete_normal_derivative(b, u, f);
    const Vector kumf = axpby(1.0, ku, 1.0, spmv(b.mass(), f));
    const Vector bh = spmv(b.boundary_block(), h);
    for (int s = 0; s < 10; ++s) {
      const Vector v = random_vector(rng, b.n_total());
      const cplx lhs = dot(v, kumf);
      const cplx rhs = dot(b.restrict_to_boundary(v), bh);
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * (1 + std::abs(lhs)));
    }
  }
}

TEST(NormalDerivative, SizeMismatchThrows) {
  const auto b = bundle(square(2), 0.0);
  EXPECT_THROW(discrete_normal_derivative(b, Vector(3), Vector(b.n_total())), InvalidArgument);
}

TEST(ProductState, TraceIsRestriction) {
  const auto b = bundle(std::make_shared<const TriMesh>(generate_lshape(2)), 0.0);
  std::mt19937_64 rng(5);
  const ProductState s(b, random_vector(rng, b.n_total()));
  const Vector tr = s.boundary_trace();
  ASSERT_EQ(tr.size(), b.n_boundary());
  for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_EQ(tr[k], s[(*b.boundary_nodes)[k]]);
  EXPECT_EQ(tr, b.restrict_to_boundary(s.coeffs()));
  EXPECT_THROW(ProductState(b, Vector(3)), InvalidArgument);
}

TEST(ProductState, ExtendThenRestrictIsIdentity) {
  const auto b = bundle(square(3), 0.0);
  std::mt19937_64 rng(6);
  const Vector g = random_vector(rng, b.n_boundary());
  EXPECT_EQ(b.restrict_to_boundary(b.extend_from_boundary(g)), g);
}

TEST(Norms, ConstantsAndLinearInterpolation) {
  const auto m = square(4);
  const auto b = bundle(m, 0.0);
  const Vector two(b.n_total(), 2.0);
  EXPECT_NEAR(lp_norm_interior(b, two, 4.0), 2.0, 1e-14);
  EXPECT_NEAR(lp_norm_boundary(b, Vector(b.n_boundary(), 2.0), 3.0), 2.0 * std::pow(4.0, 1.0 / 3), 1e-13);
  EXPECT_NEAR(trace_ls_norm(b, two, 2.0), 2.0 * 2.0, 1e-13);
  EXPECT_NEAR(std::abs(total_mass(b, two) - 10.0), 0.0, 1e-13);
  EXPECT_NEAR(gram_norm(b, two), std::sqrt(4.0 * 5.0), 1e-13);
  EXPECT_NEAR(h1_norm(b, two), 2.0, 1e-13);
  const auto lin = [](Point p) { return cplx(1 + 2 * p.x - p.y, p.y); };
  const Vector u = interpolate(*m, lin);
  EXPECT_LE(l2_error(*m, u, lin), 1e-14);
  EXPECT_LE(h1_seminorm_error(*m, u, [](Point) { return std::array<cplx, 2>{2.0, cplx(-1, 1)}; }), 1e-13);
}

TEST(Norms, QuadratureLoadMatchesMassForLinearData) {
  const auto m = square(5);
  const auto b = bundle(m, 0.0);
  const auto lin = [](Point p) { return cplx(p.x + 3 * p.y, -p.x); };
  const Vector a = interior_load_quadrature(b, lin);
  const Vector c = interior_load(b, interpolate(*m, lin));
  EXPECT_LE(norm_inf(subtract(a, c)), 1e-14);
}

TEST(MatrixMarketExport, StiffnessRoundTrips) {
  const auto b = bundle(square(4), cplx(1, 1));
  std::stringstream ss;
  write_matrix_market(ss, b.beta_mass);
  EXPECT_EQ(max_abs_diff(read_matrix_market(ss), b.beta_mass), 0.0);
}
