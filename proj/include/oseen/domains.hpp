#pragma once
#include <cmath>
#include <memory>
#include <string>

#include "geometry.hpp"

namespace oseen {

namespace detail {

/// Even profile u: [-a,a] -> [0,1] with u(0)=0, u(+-a)=1, u convex.
/// The boundary of the cap family is x2 = cy +- b*sqrt(1-u(x1-cx)); the cap
/// flatness near the singularity points is governed by u's behaviour at 0.
struct CapProfile {
    double a = 1.0;
    virtual ~CapProfile() = default;
    virtual double u(double x) const = 0;
    virtual double du(double x) const = 0;
    virtual double d2u(double x) const = 0;
    virtual double d3u(double x) const = 0;
    /// ln u(a - z), stable for small z (no 1-u style cancellation).
    virtual double lnu_from_z(double z) const = 0;
};

/// u(x) = (x/a)^2 : the ellipse body itself (effective flatness exponent 2).
struct EllipseProfile final : CapProfile {
    explicit EllipseProfile(double a_) { a = a_; }
    double u(double x) const override { return (x / a) * (x / a); }
    double du(double x) const override { return 2.0 * x / (a * a); }
    double d2u(double) const override { return 2.0 / (a * a); }
    double d3u(double) const override { return 0.0; }
    double lnu_from_z(double z) const override { return 2.0 * std::log1p(-z / a); }
};

/// u(x) = C * |x|^q * (x^2+h^2)^{-(q-2)/2}, normalized so u(a)=1.
/// Near 0: u ~ c|x|^q (flatness exponent q); for |x| >> h: u ~ (x/a)^2.
/// Strictly convex for q > 1.
struct PowerCapProfile final : CapProfile {
    double q, h;
    PowerCapProfile(double a_, double q_, double h_) : q(q_), h(h_) { a = a_; }

    double raw(double x) const {
        double ax = std::abs(x);
        if (ax == 0.0) return 0.0;
        double r = q - 2.0;
        return std::pow(ax, q) * std::pow(x * x + h * h, -0.5 * r);
    }
    double norm() const { return raw(a); }

    double u(double x) const override { return raw(x) / norm(); }
    double du(double x) const override {
        if (x == 0.0) return 0.0;
        return u(x) * logderiv(x);
    }
    double d2u(double x) const override {
        if (x == 0.0) return 0.0;
        double A = logderiv(x);
        return u(x) * (A * A + dlogderiv(x));
    }
    double d3u(double x) const override {
        if (x == 0.0) return 0.0;
        double A = logderiv(x), A1 = dlogderiv(x), A2 = d2logderiv(x);
        return u(x) * (A * A * A + 3.0 * A * A1 + A2);
    }
    double lnu_from_z(double z) const override {
        double x = a - z;
        double r = q - 2.0;
        // ln u = q ln(x/a) - (r/2) ln((x^2+h^2)/(a^2+h^2))
        double t1 = q * std::log1p(-z / a);
        double t2 = -0.5 * r * std::log1p(-z * (2.0 * a - z) / (a * a + h * h));
        return t1 + t2;
    }

private:
    // d/dx ln u and its derivatives (x > 0 branch; u even)
    double logderiv(double x) const {
        double s = x >= 0 ? 1.0 : -1.0;
        double ax = std::abs(x);
        double r = q - 2.0;
        return s * (q / ax - r * ax / (ax * ax + h * h));
    }
    double dlogderiv(double x) const {
        double ax = std::abs(x);
        double r = q - 2.0;
        double d = ax * ax + h * h;
        return -q / (ax * ax) - r * (h * h - ax * ax) / (d * d);
    }
    double d2logderiv(double x) const {
        double s = x >= 0 ? 1.0 : -1.0;
        double ax = std::abs(x);
        double r = q - 2.0;
        double d = ax * ax + h * h;
        return s * (2.0 * q / (ax * ax * ax) + 2.0 * r * ax * (3.0 * h * h - ax * ax) / (d * d * d));
    }
};

/// u(x) = |x|^3 * L(x) / (a^3 L(a)), L(x) = 0.5*ln(1+s^2/x^2) + c0.
/// Near 0: u ~ c|x|^3 |ln|x||, the log-limit boundary flatness.
struct LogCapProfile final : CapProfile {
    double s, c0;
    LogCapProfile(double a_, double s_, double c0_) : s(s_), c0(c0_) { a = a_; }

    double L(double x) const { return 0.5 * std::log1p(s * s / (x * x)) + c0; }
    double dL(double x) const { return -s * s / (x * (x * x + s * s)); }  // x>0
    double d2L(double x) const {
        double d = x * (x * x + s * s);
        return s * s * (3.0 * x * x + s * s) / (d * d);
    }
    double d3L(double x) const {
        double d = x * (x * x + s * s);
        return s * s * (6.0 * x * d - 2.0 * (3.0 * x * x + s * s) * (3.0 * x * x + s * s)) / (d * d * d);
    }
    double norm() const { return a * a * a * L(a); }

    double u(double x) const override {
        double ax = std::abs(x);
        if (ax == 0.0) return 0.0;
        return ax * ax * ax * L(ax) / norm();
    }
    double du(double x) const override {
        double sgn = x >= 0 ? 1.0 : -1.0;
        double ax = std::abs(x);
        if (ax == 0.0) return 0.0;
        return sgn * (3.0 * ax * ax * L(ax) + ax * ax * ax * dL(ax)) / norm();
    }
    double d2u(double x) const override {
        double ax = std::abs(x);
        if (ax == 0.0) return 0.0;
        return (6.0 * ax * L(ax) + 6.0 * ax * ax * dL(ax) + ax * ax * ax * d2L(ax)) / norm();
    }
    double d3u(double x) const override {
        double sgn = x >= 0 ? 1.0 : -1.0;
        double ax = std::abs(x);
        if (ax == 0.0) return 0.0;
        return sgn * (6.0 * L(ax) + 18.0 * ax * dL(ax) + 9.0 * ax * ax * d2L(ax) +
                      ax * ax * ax * d3L(ax)) / norm();
    }
    double lnu_from_z(double z) const override {
        double x = a - z;
        // ln u = 3 ln(x/a) + ln(L(x)/L(a))
        double dLval = 0.5 * std::log1p(-z * (2.0 * a - z) / (a * a + s * s)) - std::log1p(-z / a);
        return 3.0 * std::log1p(-z / a) + std::log1p(dLval / L(a));
    }
};

/// Builds the closed curve x(th) = (cx + a cos th, cy + sgn(sin th) b sqrt(1-u(a cos th))),
/// th = 2 pi t, with numerically stable evaluation near the four special
/// points (two caps, two seams where the upper and lower graphs meet).
class CapCurveEval {
public:
    CapCurveEval(std::shared_ptr<const CapProfile> prof, double b, Vec2 center)
        : p_(std::move(prof)), b_(b), c_(center) {}

    Vec2 position(double t) const {
        double th = 2.0 * M_PI * t;
        Fold f = fold(th);
        double S = std::sin(th);
        double x2 = sgn(S) * b_ * std::sqrt(f.z * hsq(f.z));
        return Vec2(c_.x() + p_->a * std::cos(th), c_.y() + x2);
    }

    Vec2 d1(double t) const {
        double th = 2.0 * M_PI * t;
        double S = std::sin(th), C = std::cos(th);
        Fold f = fold(th);
        double a = p_->a;
        double up = p_->du(a - f.z);  // u'(|x1|) >= 0
        // dx2/dth = sgn(C) * (a b / 2) * u'(|x1|) * |S|/sqrt(N); the ratio
        // |S|/sqrt(N) = sqrt((1+|C|)/(a*Hsq)) stays stable through the seams.
        double ratio = std::sqrt((1.0 + f.absC) / (a * hsq(f.z)));
        double dy = sgn(C) * 0.5 * a * b_ * up * ratio;
        return 2.0 * M_PI * Vec2(-a * S, dy);
    }

    Vec2 d2(double t) const {
        double th = 2.0 * M_PI * t;
        double S = std::sin(th), C = std::cos(th);
        Fold f = fold(th);
        double a = p_->a;
        double z = f.z;
        double H = hsq(z);
        double up = p_->du(a - z);
        double upp = p_->d2u(a - z);
        // d2x2/dth2 = sgn(S) [ a u' n1 / (4 N^{3/2}) - a^2 S^2 u'' / (2 sqrt N) ],
        // n1 = 2N|C| - a S^2 u'; n1 cancels to O(z^2) at the seams, so use the
        // seam series there. S^2 = (z/a)(1+|C|) exactly.
        double n1;
        if (z < 1e-4 * a) {
            double alpha = p_->du(a), beta = p_->d2u(a), d3 = p_->d3u(a);
            n1 = (beta - alpha / a) * z * z - (2.0 / 3.0) * d3 * z * z * z;
        } else {
            double S2 = (z / a) * (1.0 + f.absC);
            n1 = 2.0 * (z * H) * f.absC - a * S2 * up;
        }
        double sqz = std::sqrt(z);
        double termA = (z > 0) ? a * up * n1 / (4.0 * z * sqz * H * std::sqrt(H)) : 0.0;
        double termB = a * (1.0 + f.absC) * upp * sqz / (2.0 * std::sqrt(H));
        double sign = (S != 0.0) ? sgn(S) : ((C > 0) ? 1.0 : -1.0) * 0.0;
        double w = 4.0 * M_PI * M_PI;
        return w * Vec2(-a * std::cos(th), sign * b_ * (termA - termB));
    }

private:
    static double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

    struct Fold {
        double absC;  // |cos th|
        double z;     // a (1 - |cos th|), computed without cancellation
    };

    Fold fold(double th) const {
        double m = std::fmod(std::abs(th), M_PI);
        double d = std::min(m, M_PI - m);  // distance to nearest seam angle
        double sh = std::sin(0.5 * d);
        return {std::cos(d), 2.0 * p_->a * sh * sh};
    }

    // Hsq(z) = N(z)/z with N = 1 - u(a - z); limit u'(a) at z = 0.
    double hsq(double z) const {
        double a = p_->a;
        if (z < 1e-280) return p_->du(a);
        double N = (z > 0.25 * a) ? 1.0 - p_->u(a - z) : -std::expm1(p_->lnu_from_z(z));
        return N / z;
    }

    std::shared_ptr<const CapProfile> p_;
    double b_;
    Vec2 c_;
};

inline ConvexDomain make_cap_domain(std::shared_ptr<const CapProfile> prof, double b, Vec2 center,
                                    const std::string& label) {
    auto ev = std::make_shared<CapCurveEval>(prof, b, center);
    BoundaryCurve curve;
    curve.position = [ev](double t) { return ev->position(t); };
    curve.d1 = [ev](double t) { return ev->d1(t); };
    curve.d2 = [ev](double t) { return ev->d2(t); };
    ConvexDomain dom = ConvexDomain::analyze(std::move(curve));

    // bubble: rho(x1)^2 - (x2-cy)^2 = b^2 (1-u(x1-cx)) - (x2-cy)^2, zero on the boundary
    double bb = b;
    Vec2 c = center;
    auto pr = prof;
    Bubble bub;
    bub.value = [pr, bb, c](const Vec2& x) {
        double xt = x.x() - c.x(), yt = x.y() - c.y();
        return bb * bb * (1.0 - pr->u(xt)) - yt * yt;
    };
    bub.grad = [pr, bb, c](const Vec2& x) {
        double xt = x.x() - c.x(), yt = x.y() - c.y();
        return Vec2(-bb * bb * pr->du(xt), -2.0 * yt);
    };
    bub.hess = [pr, bb, c](const Vec2& x) {
        double xt = x.x() - c.x();
        Mat2 h;
        h << -bb * bb * pr->d2u(xt), 0.0, 0.0, -2.0;
        return h;
    };
    bub.third = [pr, bb, c](const Vec2& x) {
        double xt = x.x() - c.x();
        return std::array<double, 4>{-bb * bb * pr->d3u(xt), 0.0, 0.0, 0.0};
    };
    dom.attach_bubble(std::move(bub));

    // analytic cap charts: l(dx1) = b*(1 - sqrt(1-u)) = b*u/(1+sqrt(1-u))
    auto mk_chart = [pr, bb]() {
        CapChart chart;
        chart.halfwidth = 0.6 * pr->a;
        chart.l = [pr, bb](double dx1) {
            double u = pr->u(dx1);
            return bb * u / (1.0 + std::sqrt(std::max(0.0, 1.0 - u)));
        };
        chart.dl = [pr, bb](double dx1) {
            double u = pr->u(dx1);
            return bb * pr->du(dx1) / (2.0 * std::sqrt(std::max(1e-300, 1.0 - u)));
        };
        return chart;
    };
    dom.attach_cap_chart(CapSide::Lower, mk_chart());
    dom.attach_cap_chart(CapSide::Upper, mk_chart());
    dom.set_label(label);
    return dom;
}

}  // namespace detail

/// Axis-aligned ellipse with semi-axes (a, b).
inline ConvexDomain make_ellipse(double a, double b, Vec2 center = Vec2::Zero()) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("make_ellipse: semi-axes must be positive");
    BoundaryCurve curve;
    curve.position = [a, b, center](double t) {
        double th = 2.0 * M_PI * t;
        return Vec2(center.x() + a * std::cos(th), center.y() + b * std::sin(th));
    };
    curve.d1 = [a, b](double t) {
        double th = 2.0 * M_PI * t;
        return Vec2(-2.0 * M_PI * a * std::sin(th), 2.0 * M_PI * b * std::cos(th));
    };
    curve.d2 = [a, b](double t) {
        double th = 2.0 * M_PI * t;
        double w = 4.0 * M_PI * M_PI;
        return Vec2(-w * a * std::cos(th), -w * b * std::sin(th));
    };
    ConvexDomain dom = ConvexDomain::analyze(std::move(curve));

    Bubble bub;
    bub.value = [a, b, center](const Vec2& x) {
        double xt = (x.x() - center.x()) / a, yt = (x.y() - center.y()) / b;
        return 1.0 - xt * xt - yt * yt;
    };
    bub.grad = [a, b, center](const Vec2& x) {
        return Vec2(-2.0 * (x.x() - center.x()) / (a * a), -2.0 * (x.y() - center.y()) / (b * b));
    };
    bub.hess = [a, b](const Vec2&) {
        Mat2 h;
        h << -2.0 / (a * a), 0.0, 0.0, -2.0 / (b * b);
        return h;
    };
    bub.third = [](const Vec2&) { return std::array<double, 4>{0, 0, 0, 0}; };
    dom.attach_bubble(std::move(bub));

    auto mk_chart = [a, b]() {
        CapChart chart;
        chart.halfwidth = 0.6 * a;
        chart.l = [a, b](double dx1) {
            double u = (dx1 / a) * (dx1 / a);
            return b * u / (1.0 + std::sqrt(std::max(0.0, 1.0 - u)));
        };
        chart.dl = [a, b](double dx1) {
            double u = (dx1 / a) * (dx1 / a);
            return b * (2.0 * dx1 / (a * a)) / (2.0 * std::sqrt(std::max(1e-300, 1.0 - u)));
        };
        return chart;
    };
    dom.attach_cap_chart(CapSide::Lower, mk_chart());
    dom.attach_cap_chart(CapSide::Upper, mk_chart());
    dom.set_label("ellipse");
    return dom;
}

inline ConvexDomain make_circle(double radius, Vec2 center = Vec2::Zero()) {
    ConvexDomain d = make_ellipse(radius, radius, center);
    d.set_label("circle");
    return d;
}

/// Cap domain whose boundary near the singularity points behaves like
/// kappa*|x1|^q, blended into an ellipse-like body of half-axes (a,b).
/// h is the blend half-width.
inline ConvexDomain make_power_cap(double a, double b, double q, double h,
                                   Vec2 center = Vec2::Zero()) {
    if (q <= 2.0) throw std::invalid_argument("make_power_cap: q must exceed 2");
    if (h <= 0 || h >= a) throw std::invalid_argument("make_power_cap: need 0 < h < a");
    auto prof = std::make_shared<detail::PowerCapProfile>(a, q, h);
    return detail::make_cap_domain(prof, b, center, "power_cap(q=" + std::to_string(q) + ")");
}

/// Cap domain with boundary flatness |x1|^3 |ln|x1|| at the singularity points.
inline ConvexDomain make_log_cap(double a, double b, double s = 0.5, double c0 = 0.5,
                                 Vec2 center = Vec2::Zero()) {
    auto prof = std::make_shared<detail::LogCapProfile>(a, s, c0);
    return detail::make_cap_domain(prof, b, center, "log_cap");
}

/// Mirror image about the x2-axis (parametrization reversed to stay ccw).
inline BoundaryCurve reflect_x1(const BoundaryCurve& c) {
    BoundaryCurve r;
    auto pos = c.position;
    auto d1 = c.d1;
    auto d2 = c.d2;
    r.position = [pos](double t) {
        Vec2 p = pos(1.0 - t);
        return Vec2(-p.x(), p.y());
    };
    r.d1 = [d1](double t) {
        Vec2 v = d1(1.0 - t);
        return Vec2(v.x(), -v.y());
    };
    r.d2 = [d2](double t) {
        Vec2 a2 = d2(1.0 - t);
        return Vec2(-a2.x(), a2.y());
    };
    r.counterclockwise = c.counterclockwise;
    return r;
}

}  // namespace oseen
