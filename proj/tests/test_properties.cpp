#include <doctest.h>

#include "property_checks.hpp"

namespace {

void require(const ma::props::CheckResult& r) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
}

}  // namespace

TEST_CASE("second differences are exact on quadratics") { require(ma::props::stencil_quadratic_exactness()); }
TEST_CASE("lambda_max satisfies the 2x2 eigenvalue identities") { require(ma::props::lambda_eigen_identities()); }
TEST_CASE("Laplacian is symmetric positive definite") { require(ma::props::laplacian_spd_dense()); }
TEST_CASE("Green's matrix is symmetric") { require(ma::props::greens_matrix_symmetry()); }
TEST_CASE("V-cycle is linear and symmetric") { require(ma::props::vcycle_linearity_and_symmetry()); }
TEST_CASE("CG residual does not increase") { require(ma::props::cg_residual_monotone()); }
