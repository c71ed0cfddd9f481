#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussian_fixtures.hpp"
#include "optoring/gaussian_cv.hpp"

using namespace optoring::gaussian_cv;
using optoring::numerics::RealMatrix;
using doctest::Approx;

TEST_CASE("CovarianceMatrix construction") {
  CHECK_THROWS_AS(CovarianceMatrix(RealMatrix(3, 3)), ArgumentError);
  CHECK_THROWS_AS(CovarianceMatrix(RealMatrix(2, 4)), ArgumentError);
  CHECK_THROWS_AS(CovarianceMatrix(RealMatrix{{1, 0.1}, {0.2, 1}}), ArgumentError);
  CHECK(CovarianceMatrix::vacuum(3).n_modes() == 3);
}

TEST_CASE("symplectic form") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const RealMatrix omega = symplectic_form(n);
    CHECK(omega * omega == -1.0 * RealMatrix::identity(2 * n));
    CHECK(omega.transpose() == -1.0 * omega);
  }
}

TEST_CASE("fixture maps are symplectic") {
  std::mt19937_64 rng(1);
  const RealMatrix s = fixtures::random_symplectic(3, rng);
  CHECK((s * symplectic_form(3) * s.transpose() - symplectic_form(3)).max_abs() < 1e-9);
}

TEST_CASE("reduce") {
  std::mt19937_64 rng(2);
  SUBCASE("block diagonal") {
    const auto c = CovarianceMatrix::thermal({1.0, 2.0, 3.0});
    CHECK(reduce(c, 0, 1).matrix() == CovarianceMatrix::thermal({1.0, 2.0}).matrix());
  }
  SUBCASE("index bookkeeping, lower index first") {
    RealMatrix m(6, 6);
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t k = 0; k < 6; ++k) m(r, k) = 10.0 * std::min(r, k) + std::max(r, k);
    const CovarianceMatrix c(m);
    const auto sub = reduce(c, 2, 0);
    const std::size_t idx[4] = {0, 1, 4, 5};
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t k = 0; k < 4; ++k) CHECK(sub(r, k) == c(idx[r], idx[k]));
  }
  SUBCASE("physical in, physical out") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto c = fixtures::random_physical(3, rng);
      REQUIRE(check_physical(c).physical);
      for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) CHECK(check_physical(reduce(c, i, j)).physical);
    }
  }
  SUBCASE("errors") {
    const auto c = CovarianceMatrix::vacuum(3);
    CHECK_THROWS_AS(reduce(c, 1, 1), ArgumentError);
    CHECK_THROWS_AS(reduce(c, 0, 3), ArgumentError);
    CHECK_THROWS_AS(reduce(CovarianceMatrix::vacuum(2), 0, 1), ArgumentError);
  }
}

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(3);
  CHECK(partial_transpose(CovarianceMatrix::vacuum(2), 1).matrix() == CovarianceMatrix::vacuum(2).matrix());
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = fixtures::random_physical(3, rng);
    for (std::size_t k = 0; k < 3; ++k) {
      const auto pt = partial_transpose(c, k);
      CHECK(partial_transpose(pt, k).matrix() == c.matrix());
      const std::size_t p = 2 * k + 1;
      for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t col = 0; col < 6; ++col) {
          const bool flipped = (r == p) != (col == p);
          CHECK(pt(r, col) == (flipped ? -c(r, col) : c(r, col)));
        }
    }
  }
  CHECK_THROWS_AS(partial_transpose(CovarianceMatrix::vacuum(2), 2), ArgumentError);
}

TEST_CASE("symplectic eigenvalues of analytic states") {
  const auto vac = symplectic_eigenvalues(CovarianceMatrix::vacuum(3));
  REQUIRE(vac.size() == 3);
  for (double v : vac) CHECK(v == Approx(0.5).epsilon(1e-14));

  const auto th = symplectic_eigenvalues(CovarianceMatrix::thermal({0.3, 2.0}));
  CHECK(th[0] == Approx(0.8).epsilon(1e-14));
  CHECK(th[1] == Approx(2.5).epsilon(1e-14));

  // TMSV blocks A = B = cosh(2r)/2, K = sinh(2r)/2 diag(1, -1). After flipping p2,
  // Omega c splits into (q1,p2) and (p1,q2) pairs with moduli (cosh 2r -/+ sinh 2r)/2.
  for (double r : {0.1, 0.5, 1.0}) {
    const auto tmsv = CovarianceMatrix::two_mode_squeezed(r);
    const auto nu = symplectic_eigenvalues(tmsv);
    CHECK(nu[0] == Approx(0.5).epsilon(1e-12));
    CHECK(nu[1] == Approx(0.5).epsilon(1e-12));
    const auto nu_pt = symplectic_eigenvalues(partial_transpose(tmsv, 1));
    CHECK(nu_pt[0] == Approx(std::exp(-2 * r) / 2).epsilon(1e-12));
    CHECK(nu_pt[1] == Approx(std::exp(2 * r) / 2).epsilon(1e-12));
  }
}

TEST_CASE("log negativity") {
  for (double r : {0.1, 0.5, 1.0}) {
    const auto tmsv = CovarianceMatrix::two_mode_squeezed(r);
    CHECK(std::abs(log_negativity(tmsv, Partition::M1M2) - 2 * r) <= 1e-10);
    CHECK(std::abs(two_mode_logneg_invariant(tmsv) - 2 * r) <= 1e-10);
  }
  CHECK(log_negativity(CovarianceMatrix::vacuum(2), Partition::CM1) == 0.0);
  CHECK(log_negativity(CovarianceMatrix::thermal({0.5, 1.5}), Partition::CM2) == 0.0);
  CHECK(log_negativity(CovarianceMatrix::thermal({0.5, 1.5, 0.0}), Partition::Split2v31) == 0.0);
  CHECK(two_mode_logneg_invariant(CovarianceMatrix::vacuum(2)) == 0.0);

  CHECK_THROWS_AS(log_negativity(CovarianceMatrix::vacuum(3), Partition::M1M2), ArgumentError);
  CHECK_THROWS_AS(log_negativity(CovarianceMatrix::vacuum(2), Partition::Split1v23), ArgumentError);
  CHECK_THROWS_AS(two_mode_logneg_invariant(CovarianceMatrix::vacuum(3)), ArgumentError);
}

TEST_CASE("log negativity properties on random physical two-mode states") {
  std::mt19937_64 rng(4);
  int entangled = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = fixtures::random_physical(2, rng);
    const double en = log_negativity(c, Partition::M1M2);
    CHECK(en >= 0.0);
    // Which side gets transposed is irrelevant.
    CHECK(std::abs(en - log_negativity(c, std::size_t{1})) <= 1e-9);
    // Determinant-invariant route.
    CHECK(std::abs(en - two_mode_logneg_invariant(c)) <= 1e-9);
    // Simon criterion consistency.
    const double mu = symplectic_eigenvalues(partial_transpose(c, 0)).front();
    CHECK((en > 0.0) == (mu < 0.5 - 1e-12));
    entangled += en > 0.0;
    // Isotropic added noise never increases entanglement.
    double previous = en;
    for (double t : {0.01, 0.05, 0.1, 0.3, 1.0}) {
      const double noisy = log_negativity(CovarianceMatrix(c.matrix() + t * RealMatrix::identity(4)), Partition::M1M2);
      CHECK(noisy <= previous + 1e-12);
      previous = noisy;
    }
  }
  CHECK(entangled > 30);
}

TEST_CASE("residual contangle") {
  SUBCASE("product state") {
    const auto rc = residual_contangle(CovarianceMatrix::thermal({0.0, 1.0, 2.0}));
    CHECK(rc.r_1 == 0.0);
    CHECK(rc.r_2 == 0.0);
    CHECK(rc.r_3 == 0.0);
    CHECK(rc.r_min == 0.0);
  }
  SUBCASE("TMSV on modes 1-2, vacuum on 3") {
    // E_{1|23} = E_{1|2} = 2r, E_{1|3} = 0 -> R_1 = 0; same for R_2; mode 3 is
    // a product factor so R_3 = 0.
    const double r = 0.5;
    const auto c = fixtures::direct_sum(CovarianceMatrix::two_mode_squeezed(r), CovarianceMatrix::vacuum(1));
    const auto rc = residual_contangle(c);
    CHECK(rc.e_12 == Approx(2 * r).epsilon(1e-10));
    CHECK(rc.e_1v23 == Approx(2 * r).epsilon(1e-10));
    CHECK(rc.e_3v12 == 0.0);
    CHECK(std::abs(rc.r_1) < 1e-9);
    CHECK(std::abs(rc.r_2) < 1e-9);
    CHECK(rc.r_3 == 0.0);
    CHECK(rc.r_min == std::min({rc.r_1, rc.r_2, rc.r_3}));
  }
  SUBCASE("index convention") {
    std::mt19937_64 rng(6);
    const auto c = fixtures::random_physical(3, rng);
    const auto rc = residual_contangle(c);
    const auto sq = [](double x) { return x * x; };
    CHECK(rc.r_2 == Approx(sq(log_negativity(c, std::size_t{1})) - sq(log_negativity(reduce(c, 1, 2), std::size_t{0})) -
                           sq(log_negativity(reduce(c, 0, 1), std::size_t{1}))));
  }
}

TEST_CASE("check_physical") {
  const auto vac = check_physical(CovarianceMatrix::vacuum(1));
  CHECK(vac.physical);
  CHECK(std::abs(vac.margin) < 1e-15);
  CHECK_FALSE(check_physical(CovarianceMatrix(RealMatrix::diagonal({0.1, 0.1}))).physical);
  // Squeezed below vacuum in one quadrature but still physical.
  CHECK(check_physical(CovarianceMatrix(RealMatrix::diagonal({0.25, 1.0}))).physical);
  // A partially transposed TMSV is not a physical state.
  CHECK_FALSE(check_physical(partial_transpose(CovarianceMatrix::two_mode_squeezed(0.5), 0)).physical);
}
