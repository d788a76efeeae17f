#pragma once
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oseen {

/// One-dimensional quadrature rule: nodes and positive weights on some interval.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1,1]. Exact for polynomials of degree 2n-1.
/// Nodes by Newton iteration from the Chebyshev initial guess.
inline Rule1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P_{n-1}(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// Gauss-Legendre rule mapped to [a,b].
inline Rule1D gauss_legendre(int n, double a, double b) {
    Rule1D r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

/// tanh-sinh (double exponential) rule on [-1,1] with 2m+1 levels.
/// Converges superalgebraically even when the integrand has algebraic
/// endpoint singularities, which Gauss rules handle poorly.
inline Rule1D tanh_sinh(int m, double t_max = 3.15) {
    if (m < 2) throw std::invalid_argument("tanh_sinh: m must be >= 2");
    Rule1D r;
    const double h = t_max / m;
    for (int j = -m; j <= m; ++j) {
        const double t = j * h;
        const double u = 0.5 * M_PI * std::sinh(t);
        const double x = std::tanh(u);
        const double ch = std::cosh(u);
        const double w = h * 0.5 * M_PI * std::cosh(t) / (ch * ch);
        if (w < 1e-300) continue;
        r.nodes.push_back(x);
        r.weights.push_back(w);
    }
    return r;
}

/// tanh-sinh rule mapped to (a,b); endpoints are approached but never hit.
inline Rule1D tanh_sinh(int m, double a, double b, double t_max = 3.15) {
    Rule1D r = tanh_sinh(m, t_max);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

/// Spectral operators on a fixed set of 1D nodes in [0,1]: given values of a
/// function at the nodes, PartialIntegrals returns values of x -> int_0^x f,
/// and Derivative returns values of f', both through the Lagrange interpolant.
/// Exact for polynomials of degree < n.
class LineOperators {
public:
    explicit LineOperators(const std::vector<double>& nodes) : n_(nodes.size()), nodes_(nodes) {
        build(nodes);
    }

    /// K * f_values = values of the antiderivative vanishing at 0.
    const Eigen::MatrixXd& partial_integrals() const { return K_; }
    /// D * f_values = values of the derivative of the interpolant.
    const Eigen::MatrixXd& derivative() const { return D_; }
    /// Row vector integrating over the whole of [0,1].
    const Eigen::RowVectorXd& full_integral() const { return Q_; }

    /// Weights of the interpolatory evaluation of int_0^s f at arbitrary s.
    Eigen::RowVectorXd partial_row(double s) const {
        Eigen::RowVectorXd row(n_);
        Rule1D gl = gauss_legendre(static_cast<int>(n_), 0.0, s);
        for (std::size_t m = 0; m < n_; ++m) {
            double acc = 0.0;
            for (std::size_t g = 0; g < gl.size(); ++g) acc += gl.weights[g] * lagrange(m, gl.nodes[g]);
            row(static_cast<Eigen::Index>(m)) = acc;
        }
        return row;
    }

private:
    double lagrange(std::size_t m, double x) const {
        double v = 1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == m) continue;
            v *= (x - nodes_[j]) / (nodes_[m] - nodes_[j]);
        }
        return v;
    }

    void build(const std::vector<double>& nodes) {
        K_.resize(n_, n_);
        D_.resize(n_, n_);
        Q_.resize(n_);
        // partial integrals: integrate each Lagrange basis polynomial exactly
        for (std::size_t i = 0; i < n_; ++i) {
            Rule1D gl = gauss_legendre(static_cast<int>(n_), 0.0, nodes[i]);
            for (std::size_t m = 0; m < n_; ++m) {
                double acc = 0.0;
                for (std::size_t g = 0; g < gl.size(); ++g)
                    acc += gl.weights[g] * lagrange(m, gl.nodes[g]);
                K_(i, m) = acc;
            }
        }
        Rule1D gl = gauss_legendre(static_cast<int>(n_), 0.0, 1.0);
        for (std::size_t m = 0; m < n_; ++m) {
            double acc = 0.0;
            for (std::size_t g = 0; g < gl.size(); ++g) acc += gl.weights[g] * lagrange(m, gl.nodes[g]);
            Q_(static_cast<Eigen::Index>(m)) = acc;
        }
        // derivative of the Lagrange interpolant at the nodes
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t m = 0; m < n_; ++m) {
                double acc = 0.0;
                if (m == i) {
                    for (std::size_t j = 0; j < n_; ++j)
                        if (j != i) acc += 1.0 / (nodes[i] - nodes[j]);
                } else {
                    double prod = 1.0 / (nodes[m] - nodes[i]);
                    for (std::size_t j = 0; j < n_; ++j) {
                        if (j == m || j == i) continue;
                        prod *= (nodes[i] - nodes[j]) / (nodes[m] - nodes[j]);
                    }
                    acc = prod;
                }
                D_(i, m) = acc;
            }
        }
    }

    std::size_t n_;
    std::vector<double> nodes_;
    Eigen::MatrixXd K_, D_;
    Eigen::RowVectorXd Q_;
};

}  // namespace oseen
