#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oseen {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Classification of a boundary point by the sign of the first normal component.
enum class BoundaryRegion { Inflow, Outflow, Star };

/// Dead-band half-width for the Star classification. The n1 = 0 set is
/// measure-zero analytically; a dead-band makes the classification robust.
inline constexpr double kStarDeadBand = 1e-10;

inline BoundaryRegion classify_boundary_point(const Vec2& normal, double tol_n = kStarDeadBand) {
    if (std::abs(normal.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("classify_boundary_point: normal must be a unit vector");
    if (normal.x() < -tol_n) return BoundaryRegion::Inflow;
    if (normal.x() > tol_n) return BoundaryRegion::Outflow;
    return BoundaryRegion::Star;
}

/// Closed parametric boundary curve, t in [0,1). position(0) == position(1-).
struct BoundaryCurve {
    std::function<Vec2(double)> position;
    std::function<Vec2(double)> d1;  // derivative with respect to t
    std::function<Vec2(double)> d2;
    bool counterclockwise = true;
};

enum class CapSide { Lower, Upper };

/// Boundary as a graph x2 = center.y() + offset(x1 - center.x()) near one of
/// the two singularity points, with the offset oriented into the domain
/// (l >= 0, l(0) = 0).
class LocalGraph {
public:
    LocalGraph(Vec2 center, CapSide side, double halfwidth, std::function<double(double)> l,
               std::function<double(double)> dl)
        : center_(center), side_(side), halfwidth_(halfwidth), l_(std::move(l)), dl_(std::move(dl)) {}

    const Vec2& center() const { return center_; }
    CapSide side() const { return side_; }
    double halfwidth() const { return halfwidth_; }

    /// l(dx1): inward offset of the boundary at x1 = center.x() + dx1.
    double operator()(double dx1) const {
        check(dx1);
        return l_(dx1);
    }
    double derivative(double dx1) const {
        check(dx1);
        return dl_(dx1);
    }

private:
    void check(double dx1) const {
        if (std::abs(dx1) > halfwidth_)
            throw std::domain_error("LocalGraph: evaluation outside chart half-width");
    }
    Vec2 center_;
    CapSide side_;
    double halfwidth_;
    std::function<double(double)> l_, dl_;
};

/// Analytic cap chart a domain family may provide (cancellation-free
/// evaluation of the graph arbitrarily close to the singularity point).
struct CapChart {
    double halfwidth = 0.0;
    std::function<double(double)> l;   // offset as a function of dx1
    std::function<double(double)> dl;  // its derivative
};

/// Smooth positive function vanishing on the boundary, with derivatives.
/// Used by the velocity/stream basis construction.
struct Bubble {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> grad;
    std::function<Mat2(const Vec2&)> hess;
    /// Third derivatives ordered (xxx, xxy, xyy, yyy).
    std::function<std::array<double, 4>(const Vec2&)> third;
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Convex domain bounded by a closed regular curve with exactly two points
/// where n1 = 0. Provides the inflow/outflow partition, the horizontal
/// abscissa functions and local cap charts.
class ConvexDomain {
public:
    struct Arc {
        double t0, t1;  // unwrapped, t1 > t0; evaluate curve at fmod(t,1)
    };

    static ConvexDomain analyze(BoundaryCurve curve) {
        ConvexDomain d;
        d.curve_ = std::move(curve);
        d.locate_singularities();
        d.finish_setup();
        return d;
    }

    const BoundaryCurve& curve() const { return curve_; }

    Vec2 position(double t) const { return curve_.position(wrap(t)); }
    Vec2 velocity(double t) const { return curve_.d1(wrap(t)); }
    double speed(double t) const { return velocity(t).norm(); }

    Vec2 tangent(double t) const {
        Vec2 v = velocity(t);
        double s = v.norm();
        if (s <= 0.0) throw GeometryError("ConvexDomain: curve is not regular");
        return v / s;
    }

    /// Outward unit normal (counterclockwise orientation).
    Vec2 normal(double t) const {
        Vec2 tau = tangent(t);
        return Vec2(tau.y(), -tau.x());
    }

    /// Signed curvature; positive for the counterclockwise convex orientation.
    double curvature(double t) const {
        Vec2 v = curve_.d1(wrap(t)), a = curve_.d2(wrap(t));
        double s = v.norm();
        if (s <= 0.0) throw GeometryError("ConvexDomain: curve is not regular");
        return (v.x() * a.y() - v.y() * a.x()) / (s * s * s);
    }

    /// Lower/upper singularity points x_* and x^* (the two n1 = 0 roots).
    const Vec2& lower_point() const { return x_lower_; }
    const Vec2& upper_point() const { return x_upper_; }
    double lower_param() const { return t_lower_; }
    double upper_param() const { return t_upper_; }

    double x2_min() const { return x_lower_.y(); }
    double x2_max() const { return x_upper_.y(); }

    const Arc& inflow_arc() const { return inflow_; }
    const Arc& outflow_arc() const { return outflow_; }

    /// Curve parameter of the inflow boundary point at height x2.
    double inflow_param(double x2) const { return param_on_arc(inflow_, x2); }
    double outflow_param(double x2) const { return param_on_arc(outflow_, x2); }

    /// underline{x1}(x2): the inflow abscissa.
    double inflow_abscissa(double x2) const { return position(inflow_param(x2)).x(); }
    /// overline{x1}(x2): the outflow abscissa.
    double outflow_abscissa(double x2) const { return position(outflow_param(x2)).x(); }

    /// d underline{x1}/d x2 by implicit differentiation of the curve.
    double inflow_abscissa_derivative(double x2) const {
        double t = inflow_param(x2);
        Vec2 v = velocity(t);
        if (std::abs(v.y()) < 1e-300)
            throw std::domain_error("inflow_abscissa_derivative: at singularity point");
        return v.x() / v.y();
    }
    double outflow_abscissa_derivative(double x2) const {
        double t = outflow_param(x2);
        Vec2 v = velocity(t);
        if (std::abs(v.y()) < 1e-300)
            throw std::domain_error("outflow_abscissa_derivative: at singularity point");
        return v.x() / v.y();
    }

    /// Boundary chart near the chosen singularity point.
    LocalGraph local_graph(CapSide side) const {
        const bool lower = side == CapSide::Lower;
        const Vec2& c = lower ? x_lower_ : x_upper_;
        const std::optional<CapChart>& chart = lower ? cap_lower_ : cap_upper_;
        if (chart) {
            return LocalGraph(c, side, chart->halfwidth, chart->l, chart->dl);
        }
        // generic parametric inversion around the singularity parameter
        double tc = lower ? t_lower_ : t_upper_;
        double span = chart_param_span(tc);
        double hw = std::min(std::abs(position(tc + span).x() - c.x()),
                             std::abs(position(tc - span).x() - c.x()));
        const ConvexDomain* self = this;
        auto param_of = [self, tc, span, c](double dx1) {
            double target = c.x() + dx1;
            double lo = tc - span, hi = tc + span;
            // x1(t) is strictly monotone across the cap
            double flo = self->position(lo).x() - target;
            double fmidc = self->position(tc).x() - target;
            double a = lo, b = tc;
            if ((flo < 0) == (fmidc < 0)) {
                a = tc;
                b = hi;
            }
            for (int i = 0; i < 200; ++i) {
                double m = 0.5 * (a + b);
                double fm = self->position(m).x() - target;
                double fa = self->position(a).x() - target;
                if ((fa < 0) == (fm < 0)) a = m;
                else b = m;
                if (b - a < 1e-16) break;
            }
            return 0.5 * (a + b);
        };
        auto l = [self, param_of, c, lower](double dx1) {
            double y = self->position(param_of(dx1)).y();
            return lower ? y - c.y() : c.y() - y;
        };
        auto dl = [self, param_of, lower](double dx1) {
            double t = param_of(dx1);
            Vec2 v = self->velocity(t);
            double g = v.y() / v.x();
            return lower ? g : -g;
        };
        return LocalGraph(c, side, hw, l, dl);
    }

    const Vec2& interior_point() const { return interior_; }

    double diameter() const { return diameter_; }

    bool has_bubble() const { return bubble_.has_value(); }
    const Bubble& bubble() const {
        if (!bubble_) throw GeometryError("ConvexDomain: no bubble function attached");
        return *bubble_;
    }

    /// Family hooks (used by shipped domain constructors).
    void attach_bubble(Bubble b) { bubble_ = std::move(b); }
    void attach_cap_chart(CapSide side, CapChart chart) {
        (side == CapSide::Lower ? cap_lower_ : cap_upper_) = std::move(chart);
    }
    void set_label(std::string s) { label_ = std::move(s); }
    const std::string& label() const { return label_; }

private:
    static double wrap(double t) {
        double w = t - std::floor(t);
        return w;
    }

    double y1(double t) const { return curve_.d1(wrap(t)).y(); }

    void locate_singularities() {
        // find the two roots of y'(t) = 0 (n1 = 0) by sampling + bisection
        const int K = 1024;
        std::vector<double> roots;
        double prev = y1(0.0);
        for (int i = 1; i <= K; ++i) {
            double t = static_cast<double>(i) / K;
            double cur = y1(t);
            if (prev == 0.0) {
                roots.push_back(static_cast<double>(i - 1) / K);
            } else if ((prev < 0) != (cur < 0)) {
                double a = static_cast<double>(i - 1) / K, b = t;
                double fa = prev;
                for (int it = 0; it < 200; ++it) {
                    double m = 0.5 * (a + b), fm = y1(m);
                    if (fm == 0.0) {
                        a = b = m;
                        break;
                    }
                    if ((fa < 0) == (fm < 0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                    if (b - a < 1e-15) break;
                }
                roots.push_back(0.5 * (a + b));
            }
            prev = cur;
        }
        if (roots.size() != 2)
            throw GeometryError("ConvexDomain: expected exactly two n1=0 boundary points, found " +
                                std::to_string(roots.size()));
        Vec2 p0 = position(roots[0]), p1 = position(roots[1]);
        if (p0.y() < p1.y()) {
            t_lower_ = roots[0];
            t_upper_ = roots[1];
            x_lower_ = p0;
            x_upper_ = p1;
        } else {
            t_lower_ = roots[1];
            t_upper_ = roots[0];
            x_lower_ = p1;
            x_upper_ = p0;
        }
        if (!(x_lower_.y() < x_upper_.y()))
            throw GeometryError("ConvexDomain: degenerate singularity points");
    }

    void finish_setup() {
        // two arcs between the singularity parameters; decide which is inflow
        double a = t_upper_, b = t_lower_;
        if (b < a) b += 1.0;
        Arc arc1{a, b};  // from upper point to lower point
        double a2 = t_lower_, b2 = t_upper_;
        if (b2 < a2) b2 += 1.0;
        Arc arc2{a2, b2};
        double tm = 0.5 * (arc1.t0 + arc1.t1);
        if (normal(tm).x() < 0) {
            inflow_ = arc1;
            outflow_ = arc2;
        } else {
            inflow_ = arc2;
            outflow_ = arc1;
        }
        // interior point and diameter from boundary samples
        const int K = 512;
        Vec2 acc = Vec2::Zero();
        std::vector<Vec2> pts(K);
        for (int i = 0; i < K; ++i) {
            pts[i] = position(static_cast<double>(i) / K);
            acc += pts[i];
        }
        interior_ = acc / K;
        double d2max = 0.0;
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) d2max = std::max(d2max, (pts[i] - pts[j]).squaredNorm());
        diameter_ = std::sqrt(d2max);
    }

    double param_on_arc(const Arc& arc, double x2) const {
        if (x2 < x2_min() - 1e-12 || x2 > x2_max() + 1e-12)
            throw std::domain_error("abscissa: x2 outside [x2*, x2^*]");
        double ya = position(arc.t0).y(), yb = position(arc.t1).y();
        bool increasing = yb > ya;
        double lo = arc.t0, hi = arc.t1;
        // clamp to range ends
        if ((increasing && x2 <= ya) || (!increasing && x2 >= ya)) return wrap(lo);
        if ((increasing && x2 >= yb) || (!increasing && x2 <= yb)) return wrap(hi);
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (lo + hi);
            double ym = position(m).y();
            if ((ym < x2) == increasing) lo = m;
            else hi = m;
            if (hi - lo < 1e-16) break;
        }
        return wrap(0.5 * (lo + hi));
    }

    double chart_param_span(double tc) const {
        // largest symmetric parameter window with |tau_1| >= 0.7
        double span = 0.2;
        while (span > 1e-4) {
            bool ok = true;
            for (int i = -8; i <= 8; ++i) {
                double t = tc + span * i / 8.0;
                if (std::abs(tangent(t).x()) < 0.7) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
            span *= 0.7;
        }
        return span;
    }

    BoundaryCurve curve_;
    double t_lower_ = 0, t_upper_ = 0;
    Vec2 x_lower_ = Vec2::Zero(), x_upper_ = Vec2::Zero();
    Arc inflow_{0, 0}, outflow_{0, 0};
    Vec2 interior_ = Vec2::Zero();
    double diameter_ = 0.0;
    std::optional<Bubble> bubble_;
    std::optional<CapChart> cap_lower_, cap_upper_;
    std::string label_;
};

/// (x_*, x^*) ordered by x2.
inline std::pair<Vec2, Vec2> singularity_points(const ConvexDomain& d) {
    return {d.lower_point(), d.upper_point()};
}

}  // namespace oseen
