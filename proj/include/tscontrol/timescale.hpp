#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tscontrol/errors.hpp"

namespace tsc {

// A closed real interval [a, b] discretized with a uniform step. The requested
// step is snapped so that nodes land exactly on both endpoints:
// h_eff = (b - a) / ceil((b - a) / step).
struct ContinuousInterval {
    double a = 0;
    double b = 0;
    double step = 0;
};

// A strictly increasing list of isolated points.
struct DiscretePoints {
    std::vector<double> times;
};

using Segment = std::variant<ContinuousInterval, DiscretePoints>;

// An ordered union of disjoint segments; consecutive segments must be separated
// by a positive gap. Parses from / emits to a line-oriented text form:
//   interval a b h
//   points t1 t2 ... tk
// with '#' comments and blank lines ignored.
struct TimeScaleSpec {
    std::vector<Segment> segments;

    static TimeScaleSpec parse(const std::string& text);
    std::string to_text() const;
    void validate() const;
};

enum class StepKind {
    Dense,     // node lies inside a continuous run; next node is t + h
    Scattered, // right-scattered: sigma(t) jumps to the next node, mu > 0
    Terminal,  // last node of the window (mu = 0, sigma(t) = t by convention)
};

struct GridPoint {
    double t = 0;
    StepKind step = StepKind::Terminal;
    double gap = 0; // distance to the next node (h for dense, mu for scattered, 0 terminal)
};

// The computational form of a time scale: the finite, ordered node set together
// with each node's step classification. All operators (sigma, mu, integrals,
// derivatives, propagation) act on this grid.
class TimeScaleGrid {
  public:
    static TimeScaleGrid build(const TimeScaleSpec& spec);
    static TimeScaleGrid from_text(const std::string& text);
    // Z ∩ [t0, t1] with unit gaps (t1 - t0 must be a positive integer).
    static TimeScaleGrid integers(double t0, double t1);
    static TimeScaleGrid continuous(double a, double b, double step);

    std::size_t size() const { return points_.size(); }
    const GridPoint& point(std::size_t i) const { return points_[i]; }
    const std::vector<GridPoint>& points() const { return points_; }

    double t_min() const { return points_.front().t; }
    double t_max() const { return points_.back().t; }
    double mu_max() const { return mu_max_; }
    const TimeScaleSpec& spec() const { return spec_; }

    // Node lookup with tolerance 1e-12 * max(1, |t|); throws InputError off-grid.
    std::size_t index_of(double t) const;
    bool contains(double t) const;

    // Forward jump and graininess. sigma(t) = t at right-dense nodes and at the
    // terminal node; mu(t) = 0 there.
    double sigma(double t) const;
    double mu(double t) const;

    bool is_scattered(std::size_t i) const { return points_[i].step == StepKind::Scattered; }
    bool is_dense(std::size_t i) const { return points_[i].step == StepKind::Dense; }

    // Visits the delta-integral quadrature weights over [a, b): scattered nodes
    // carry their atom mu(t); dense runs contribute composite-trapezoid weights.
    // fn is called once per node that carries nonzero weight, in time order.
    template <class Fn>
    void for_each_weight(std::size_t ia, std::size_t ib, Fn&& fn) const {
        if (ib > points_.size() || ia > ib)
            throw InputError("for_each_weight: bad index range");
        for (std::size_t i = ia; i <= ib && i < points_.size(); ++i) {
            double w = 0;
            if (i > ia && points_[i - 1].step == StepKind::Dense)
                w += points_[i - 1].gap / 2;
            if (i < ib) {
                if (points_[i].step == StepKind::Dense)
                    w += points_[i].gap / 2;
                else if (points_[i].step == StepKind::Scattered)
                    w += points_[i].gap;
            }
            if (w != 0)
                fn(i, w);
        }
    }

    // Delta integral of f over [a, b), a <= b grid nodes. F may return double,
    // std::complex<double>, or any Eigen type supporting += and scalar *.
    template <class F>
    auto delta_integral(F&& f, double a, double b) const {
        using R = std::decay_t<decltype(f(a))>;
        std::size_t ia = index_of(a), ib = index_of(b);
        if (ia > ib)
            throw InputError("delta_integral: a must not exceed b");
        std::optional<R> acc;
        for_each_weight(ia, ib, [&](std::size_t i, double w) {
            R v = f(points_[i].t);
            if (acc)
                *acc += w * v;
            else
                acc = R(w * v);
        });
        if (!acc)
            return R(0.0 * f(a)); // empty range: zero of the right shape
        return *acc;
    }

    // Delta derivative of f at a non-terminal node: the exact forward quotient
    // (f(sigma(t)) - f(t)) / mu(t) at scattered nodes; a finite difference with
    // the local step at dense nodes (central in the interior of a dense run,
    // second-order one-sided at its left boundary).
    template <class F>
    auto delta_derivative(F&& f, double t) const {
        using R = std::decay_t<decltype(f(t))>;
        std::size_t i = index_of(t);
        if (points_[i].step == StepKind::Terminal)
            throw InputError("delta_derivative: t is the final grid point");
        if (points_[i].step == StepKind::Scattered) {
            double mu = points_[i].gap;
            return R((f(points_[i + 1].t) - f(t)) * (1.0 / mu));
        }
        double h = points_[i].gap;
        bool left_dense = i > 0 && points_[i - 1].step == StepKind::Dense;
        if (left_dense) {
            return R((f(points_[i + 1].t) - f(points_[i - 1].t)) * (1.0 / (points_[i + 1].t - points_[i - 1].t)));
        }
        bool two_ahead = points_[i + 1].step == StepKind::Dense;
        if (two_ahead) {
            return R((-3.0 * f(t) + 4.0 * f(points_[i + 1].t) - f(points_[i + 2].t)) * (1.0 / (2 * h)));
        }
        return R((f(points_[i + 1].t) - f(t)) * (1.0 / h));
    }

  private:
    std::vector<GridPoint> points_;
    double mu_max_ = 0;
    TimeScaleSpec spec_;
};

} // namespace tsc
