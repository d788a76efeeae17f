#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oseen/quadrature.hpp"

using namespace oseen;

namespace {
double integrate(const Rule1D& r, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * f(r.nodes[i]);
    return acc;
}
}  // namespace

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 4, 8, 16}) {
        Rule1D r = gauss_legendre(n);
        int dmax = 2 * n - 1;
        for (int d = 0; d <= dmax; ++d) {
            double exact = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
            double got = integrate(r, [d](double x) { return std::pow(x, d); });
            REQUIRE(got == Catch::Approx(exact).margin(1e-13));
        }
    }
}

TEST_CASE("mapped gauss-legendre on [0,3]") {
    Rule1D r = gauss_legendre(12, 0.0, 3.0);
    double got = integrate(r, [](double x) { return std::exp(-x); });
    REQUIRE(got == Catch::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
    Rule1D r = tanh_sinh(40, 0.0, 1.0);
    // int_0^1 x^{-1/2} dx = 2
    double got = integrate(r, [](double x) { return 1.0 / std::sqrt(x); });
    REQUIRE(got == Catch::Approx(2.0).epsilon(1e-10));
    // int_0^1 sqrt(1-x^2)-type half-circle mass
    Rule1D r2 = tanh_sinh(40, -1.0, 1.0);
    double area = integrate(r2, [](double x) { return std::sqrt(1.0 - x * x); });
    REQUIRE(area == Catch::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("tanh-sinh weights positive and within interval") {
    Rule1D r = tanh_sinh(30, 2.0, 5.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        REQUIRE(r.weights[i] > 0.0);
        REQUIRE(r.nodes[i] > 2.0);
        REQUIRE(r.nodes[i] < 5.0);
    }
}

TEST_CASE("line operators: partial integrals and derivative on [0,1] nodes") {
    Rule1D gl = gauss_legendre(10, 0.0, 1.0);
    LineOperators ops(gl.nodes);
    const auto n = gl.nodes.size();

    Eigen::VectorXd fv(n), exact_int(n), exact_der(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = gl.nodes[i];
        fv(i) = 3.0 * x * x - 2.0 * x + 1.0;      // f
        exact_int(i) = x * x * x - x * x + x;     // int_0^x f
        exact_der(i) = 6.0 * x - 2.0;             // f'
    }
    Eigen::VectorXd got_int = ops.partial_integrals() * fv;
    Eigen::VectorXd got_der = ops.derivative() * fv;
    REQUIRE((got_int - exact_int).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE((got_der - exact_der).cwiseAbs().maxCoeff() < 1e-11);

    double full = (ops.full_integral() * fv)(0);
    REQUIRE(full == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("line operators: partial_row evaluates antiderivative off the nodes") {
    Rule1D gl = gauss_legendre(12, 0.0, 1.0);
    LineOperators ops(gl.nodes);
    Eigen::VectorXd fv(static_cast<Eigen::Index>(gl.size()));
    for (std::size_t i = 0; i < gl.size(); ++i) fv(static_cast<Eigen::Index>(i)) = std::exp(gl.nodes[i]);
    for (double s : {0.1, 0.37, 0.75, 1.0}) {
        double got = (ops.partial_row(s) * fv)(0);
        REQUIRE(got == Catch::Approx(std::exp(s) - 1.0).epsilon(1e-12));
    }
}
