#include <catch2/catch_amalgamated.hpp>

#include <duet/ops.hpp>

#include <random>

using namespace duet;

namespace {

std::mt19937_64 rng(12345);

Matrix random_hermitian(int d, double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  Matrix h = 0.5 * (m + m.adjoint());
  return h * (scale / std::max(h.norm(), 1e-300));
}

Vector random_state(int d) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(dist(rng), dist(rng));
  return v / v.norm();
}

}  // namespace

TEST_CASE("flat indexing is row-major with the first factor slowest") {
  HilbertSpace s{2, 3, 4};
  REQUIRE(s.dim() == 24);
  REQUIRE(s.index({0, 0, 0}) == 0);
  REQUIRE(s.index({0, 0, 1}) == 1);
  REQUIRE(s.index({0, 1, 0}) == 4);
  REQUIRE(s.index({1, 0, 0}) == 12);
  REQUIRE(s.index({1, 2, 3}) == 23);
  for (int flat = 0; flat < s.dim(); ++flat)
    REQUIRE(s.index(s.unravel(flat)) == flat);
  REQUIRE_THROWS(s.index({2, 0, 0}));
  REQUIRE_THROWS(s.index({0, 0}));
  REQUIRE_THROWS(HilbertSpace(std::vector<int>{}));
  REQUIRE_THROWS(HilbertSpace({2, 0}));
}

TEST_CASE("annihilation entries are sqrt(n) on the superdiagonal") {
  Matrix a = annihilation(5);
  for (int n = 1; n < 5; ++n) {
    REQUIRE(a(n - 1, n).real() == Catch::Approx(std::sqrt(double(n))).epsilon(0));
    REQUIRE(a(n - 1, n).imag() == 0.0);
  }
  REQUIRE(a.norm() == Catch::Approx(std::sqrt(1.0 + 2.0 + 3.0 + 4.0)));
}

TEST_CASE("truncated commutator is I - d |d-1><d-1| up to sqrt rounding") {
  for (int d : {2, 3, 7}) {
    Matrix a = annihilation(d);
    Matrix comm = a * a.adjoint() - a.adjoint() * a;
    Matrix expect = identity(d);
    expect(d - 1, d - 1) = 1.0 - double(d);
    REQUIRE((comm - expect).norm() < 1e-14 * expect.norm());
  }
}

TEST_CASE("number operator matches adag a on the truncation") {
  Matrix a = annihilation(6);
  REQUIRE((a.adjoint() * a - number_op(6)).norm() < 1e-14 * number_op(6).norm());
}

TEST_CASE("tensor product is associative to 1e-14") {
  Matrix a = random_hermitian(2, 3.0);
  Matrix b = random_hermitian(3, 2.0);
  Matrix c = random_hermitian(4, 1.5);
  Matrix left = tensor(tensor(a, b), c);
  Matrix right = tensor(a, tensor(b, c));
  REQUIRE((left - right).norm() / left.norm() < 1e-14);
  REQUIRE((tensor({a, b, c}) - left).norm() == 0.0);
}

TEST_CASE("tensor respects the flat index convention") {
  HilbertSpace s{2, 3};
  Matrix q = random_hermitian(2, 1.0);
  Matrix m = random_hermitian(3, 1.0);
  Matrix t = tensor(q, m);
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i1 = 0; i1 < 3; ++i1)
      for (int j0 = 0; j0 < 2; ++j0)
        for (int j1 = 0; j1 < 3; ++j1)
          REQUIRE(t(s.index({i0, i1}), s.index({j0, j1})) ==
                  q(i0, j0) * m(i1, j1));
}

TEST_CASE("embed places the operator on the requested factor only") {
  HilbertSpace s{2, 3, 4};
  Matrix m = random_hermitian(3, 1.0);
  Matrix e = embed(m, s, 1);
  REQUIRE((e - tensor({identity(2), m, identity(4)})).norm() == 0.0);
  // embedded operators on different factors commute
  Matrix q = random_hermitian(2, 1.0);
  Matrix eq = embed(q, s, 0);
  REQUIRE((eq * e - e * eq).norm() / (eq * e).norm() < 1e-15);
  REQUIRE_THROWS(embed(m, s, 0));
  REQUIRE_THROWS(embed(m, s, 3));
}

TEST_CASE("propagator_exact is unitary to 1e-10 for ||H t|| up to 50") {
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + int(rng() % 15);
    double t = 0.1 + double(rng() % 100) / 10.0;
    Matrix h = random_hermitian(d, 50.0 / t);
    Matrix u = propagator_exact(h, t);
    REQUIRE((u * u.adjoint() - identity(d)).norm() < 1e-10);
  }
}

TEST_CASE("propagator_exact reproduces the analytic two-level rotation") {
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  double g = 0.7, t = 2.3;
  Matrix u = propagator_exact(g * sx, t);
  Matrix expect(2, 2);
  expect << std::cos(g * t), -iu * std::sin(g * t),
            -iu * std::sin(g * t), std::cos(g * t);
  REQUIRE((u - expect).norm() < 1e-13);
}

TEST_CASE("propagator_exact composes: U(t1+t2) = U(t2) U(t1)") {
  Matrix h = random_hermitian(6, 4.0);
  Matrix u1 = propagator_exact(h, 0.7);
  Matrix u2 = propagator_exact(h, 1.9);
  Matrix u12 = propagator_exact(h, 2.6);
  REQUIRE((u2 * u1 - u12).norm() < 1e-12);
}

TEST_CASE("propagator_exact rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  REQUIRE_THROWS(propagator_exact(m, 1.0));
}

TEST_CASE("expectation agrees between state and density forms") {
  HilbertSpace s{2, 4};
  Matrix op = random_hermitian(s.dim(), 2.0);
  Vector psi = random_state(s.dim());
  Matrix rho = psi * psi.adjoint();
  Complex ev = expectation(op, psi);
  Complex er = expectation(op, rho);
  REQUIRE(std::abs(ev - er) < 1e-13);
  REQUIRE(std::abs(ev.imag()) < 1e-13);  // Hermitian observable
}

TEST_CASE("partial_trace preserves trace and hermiticity to 1e-12") {
  HilbertSpace s{2, 3, 4};
  Vector psi = random_state(s.dim());
  Matrix rho = psi * psi.adjoint();
  for (auto keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}) {
    Matrix red = partial_trace(rho, s, keep);
    REQUIRE(std::abs(red.trace().real() - 1.0) < 1e-12);
    REQUIRE(std::abs(red.trace().imag()) < 1e-12);
    REQUIRE(hermiticity_defect(red) < 1e-12);
  }
}

TEST_CASE("partial_trace of a product state factorizes") {
  HilbertSpace s{2, 3};
  Vector q = random_state(2), m = random_state(3);
  Vector psi(s.dim());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) psi(s.index({i, j})) = q(i) * m(j);
  Matrix rho = psi * psi.adjoint();
  Matrix rq = partial_trace(rho, s, {0});
  Matrix rm = partial_trace(rho, s, {1});
  REQUIRE((rq - Matrix(q * q.adjoint())).norm() < 1e-14);
  REQUIRE((rm - Matrix(m * m.adjoint())).norm() < 1e-14);
}

TEST_CASE("partial_trace over everything-but-one matches direct marginals") {
  HilbertSpace s{2, 2};
  // Bell pair: both marginals maximally mixed
  Vector psi = Vector::Zero(4);
  psi(s.index({0, 0})) = 1.0 / std::sqrt(2.0);
  psi(s.index({1, 1})) = 1.0 / std::sqrt(2.0);
  Matrix rho = psi * psi.adjoint();
  for (int f : {0, 1}) {
    Matrix red = partial_trace(rho, s, {f});
    REQUIRE((red - 0.5 * identity(2)).norm() < 1e-14);
  }
}

TEST_CASE("state and density wrappers reject invalid input") {
  REQUIRE_NOTHROW(StateVector(random_state(5)));
  REQUIRE_THROWS(StateVector(Vector::Zero(5)));
  Vector big = 1.5 * random_state(3);
  REQUIRE_THROWS(StateVector(big));

  Vector psi = random_state(4);
  REQUIRE_NOTHROW(DensityMatrix(psi * psi.adjoint()));
  REQUIRE_THROWS(DensityMatrix(Matrix(2.0 * psi * psi.adjoint())));
  Matrix notherm = Matrix::Zero(2, 2);
  notherm(0, 1) = 1.0;
  notherm(0, 0) = 1.0;
  REQUIRE_THROWS(DensityMatrix(notherm));
  // negative eigenvalue, unit trace, Hermitian
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  REQUIRE_THROWS(DensityMatrix(neg));
}
