#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "tscontrol/dynamics.hpp"
#include "tscontrol/gramian.hpp"

using namespace tsc;

namespace {

LinearSystem example_system() {
    return LinearSystem::constant(oracle::example_A(), oracle::example_B(), oracle::example_C());
}

LinearSystem scalar_system(double a) {
    Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1);
    A << a;
    B << 1;
    C << 1;
    return LinearSystem::constant(A, B, C);
}

} // namespace

TEST_CASE("controllability Gramian of the integrator on Z counts the atoms") {
    auto g = TimeScaleGrid::integers(0, 6);
    auto G = controllability_gramian(scalar_system(0.0), g, 0, 6);
    CHECK(G.matrix(0, 0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(G.invertible);
}

TEST_CASE("observability Gramian of the integrator on Z counts the atoms") {
    auto g = TimeScaleGrid::integers(0, 4);
    auto G = observability_gramian(scalar_system(0.0), g, 0, 4);
    CHECK(G.matrix(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("Z-grid controllability Gramian equals the brute-force sum") {
    auto g = TimeScaleGrid::integers(0, 5);
    auto sys = example_system();
    auto G = controllability_gramian(sys, g, 0, 5);

    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2) + oracle::example_A();
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd Minv = M.inverse();
    for (int t = 0; t < 5; ++t) {
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
        for (int j = 0; j <= t; ++j)
            P = P * Minv; // Phi(0, sigma(t)) = (I+A)^-(t+1)
        Eigen::MatrixXd v = P * oracle::example_B();
        want += v * v.transpose();
    }
    CHECK((G.matrix - want).norm() <= 1e-13 * want.norm());
}

TEST_CASE("Z-grid observability Gramian equals the brute-force sum") {
    auto g = TimeScaleGrid::integers(0, 4);
    auto sys = example_system();
    auto G = observability_gramian(sys, g, 0, 4);

    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2) + oracle::example_A();
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
    for (int t = 0; t < 4; ++t) {
        Eigen::MatrixXd v = oracle::example_C() * P;
        want += v.transpose() * v;
        P = M * P;
    }
    CHECK((G.matrix - want).norm() <= 1e-13 * want.norm());
}

TEST_CASE("Gramians are symmetric positive semidefinite on mixed grids") {
    std::mt19937 rng(42);
    auto g = TimeScaleGrid::from_text("interval 0 1 0.02\npoints 1.5 2.25 3\n");
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        int m = 1 + static_cast<int>(rng() % n);
        Eigen::MatrixXd A = oracle::randn(n, n, rng, 0.4);
        Eigen::MatrixXd B = oracle::randn(n, m, rng);
        Eigen::MatrixXd C = oracle::randn(1, n, rng);
        auto sys = LinearSystem::constant(A, B, C);
        auto G = controllability_gramian(sys, g, 0, 3);
        CHECK((G.matrix - G.matrix.transpose()).norm() == 0.0);
        CHECK(G.eig_min >= -1e-12 * std::max(1.0, G.eig_max));
        auto H = observability_gramian(sys, g, 0, 3);
        CHECK((H.matrix - H.matrix.transpose()).norm() == 0.0);
        CHECK(H.eig_min >= -1e-12 * std::max(1.0, H.eig_max));
    }
}

TEST_CASE("unreachable block makes the controllability Gramian singular") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    A << -0.2, 0.1, 0, 0, -0.3, 0, 0, 0, -0.4; // third state decoupled
    Eigen::MatrixXd B(3, 1);
    B << 1, 0.5, 0; // never excites state 3
    Eigen::MatrixXd C = Eigen::MatrixXd::Ones(1, 3);
    auto sys = LinearSystem::constant(A, B, C);
    auto g = TimeScaleGrid::integers(0, 6);
    auto G = controllability_gramian(sys, g, 0, 6);
    CHECK(!G.invertible);
    CHECK_THROWS_AS(min_energy_input(sys, g, 0, 6, Eigen::Vector3d(1, 1, 1), Eigen::Vector3d::Zero()),
                    PreconditionError);
}

TEST_CASE("minimum-energy steering on Z drives the example state to zero") {
    auto g = TimeScaleGrid::integers(0, 4);
    auto sys = example_system();
    Eigen::VectorXd xf = Eigen::VectorXd::Zero(2);
    auto u = min_energy_input(sys, g, 0, 4, oracle::example_x0(), xf);
    REQUIRE(u.times.size() == 4);
    auto res = simulate(sys, g, oracle::example_x0(), &u, 0, 4);
    CHECK((res.state.values.back() - xf).norm() <= 1e-8);
}

TEST_CASE("minimum-energy steering on a continuous grid meets the tight bound") {
    auto g = TimeScaleGrid::continuous(0, 1, 1e-3);
    auto sys = example_system();
    Eigen::VectorXd xf = Eigen::VectorXd::Zero(2);
    auto u = min_energy_input(sys, g, 0, 1, oracle::example_x0(), xf);
    auto res = simulate(sys, g, oracle::example_x0(), &u, 0, 1);
    CHECK((res.state.values.back() - xf).norm() <= 1e-5);
}

TEST_CASE("steering reaches arbitrary targets on mixed grids") {
    std::mt19937 rng(7);
    auto g = TimeScaleGrid::from_text("interval 0 1 0.005\npoints 1.25 1.5 2\n");
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);
        Eigen::MatrixXd A = oracle::randn(n, n, rng, 0.3);
        Eigen::MatrixXd B = oracle::randn(n, n, rng); // full input: well conditioned
        Eigen::MatrixXd C = oracle::randn(1, n, rng);
        auto sys = LinearSystem::constant(A, B, C);
        Eigen::VectorXd x0 = oracle::randn(n, 1, rng).col(0);
        Eigen::VectorXd xf = oracle::randn(n, 1, rng).col(0);
        auto u = min_energy_input(sys, g, 0, 2, x0, xf);
        auto res = simulate(sys, g, x0, &u, 0, 2);
        CHECK((res.state.values.back() - xf).norm() <= 1e-6 * std::max(1.0, xf.norm()));
    }
}

TEST_CASE("reconstruction: integrator observed directly returns its initial value") {
    auto g = TimeScaleGrid::integers(0, 3);
    auto sys = scalar_system(0.0);
    Eigen::VectorXd x0(1);
    x0 << 2.5;
    auto res = simulate(sys, g, x0, nullptr, 0, 3);
    Eigen::VectorXd rec = reconstruct_initial_state(sys, g, 0, 3, res.output);
    CHECK(std::abs(rec(0) - 2.5) <= 1e-12);
}

TEST_CASE("reconstruction round-trip recovers the example initial state") {
    auto g = TimeScaleGrid::integers(0, 4);
    auto sys = example_system();
    auto res = simulate(sys, g, oracle::example_x0(), nullptr, 0, 4);
    Eigen::VectorXd rec = reconstruct_initial_state(sys, g, 0, 4, res.output);
    CHECK((rec - oracle::example_x0()).norm() <= 1e-8);
}

TEST_CASE("reconstruction round-trip works on mixed grids too") {
    auto g = TimeScaleGrid::from_text("interval 0 1 0.01\npoints 1.5 2\n");
    auto sys = example_system();
    auto res = simulate(sys, g, oracle::example_x0(), nullptr, 0, 2);
    Eigen::VectorXd rec = reconstruct_initial_state(sys, g, 0, 2, res.output);
    CHECK((rec - oracle::example_x0()).norm() <= 1e-8);
}

TEST_CASE("time-varying input matrix: Gramian stays PSD and steering works") {
    auto Afn = [](double) {
        Eigen::MatrixXd m(2, 2);
        m << -2, 1, -1, -2;
        return m;
    };
    auto Bfn = [](double t) {
        Eigen::MatrixXd b(2, 1);
        b << std::cos(t), std::sin(t);
        return b;
    };
    auto Cfn = [](double) { return Eigen::MatrixXd::Ones(1, 2); };
    auto sys = LinearSystem::varying(2, 1, 1, Afn, Bfn, Cfn);
    auto g = TimeScaleGrid::from_text("interval 0 2 0.002\n");
    auto G = controllability_gramian(sys, g, 0, 2);
    CHECK(G.invertible);
    Eigen::VectorXd x0(2), xf(2);
    x0 << 1, -1;
    xf << 0.5, 0.25;
    auto u = min_energy_input(sys, g, 0, 2, x0, xf);
    auto res = simulate(sys, g, x0, &u, 0, 2);
    CHECK((res.state.values.back() - xf).norm() <= 1e-6);
}
