#include "tscontrol/timescale.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace tsc {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double_token(const std::string& tok, const char* ctx) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    double v = 0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(v))
        throw InputError(std::string(ctx) + ": bad number '" + tok + "'");
    return v;
}

double seg_start(const Segment& s) {
    if (auto* c = std::get_if<ContinuousInterval>(&s))
        return c->a;
    return std::get<DiscretePoints>(s).times.front();
}

double seg_end(const Segment& s) {
    if (auto* c = std::get_if<ContinuousInterval>(&s))
        return c->b;
    return std::get<DiscretePoints>(s).times.back();
}

} // namespace

TimeScaleSpec TimeScaleSpec::parse(const std::string& text) {
    TimeScaleSpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind))
            continue;
        if (kind == "interval") {
            std::string sa, sb, sh, extra;
            if (!(ls >> sa >> sb >> sh) || (ls >> extra))
                throw InputError("time scale: 'interval' takes exactly a b h");
            spec.segments.push_back(ContinuousInterval{parse_double_token(sa, "interval"),
                                                       parse_double_token(sb, "interval"),
                                                       parse_double_token(sh, "interval")});
        } else if (kind == "points") {
            DiscretePoints pts;
            std::string tok;
            while (ls >> tok)
                pts.times.push_back(parse_double_token(tok, "points"));
            if (pts.times.empty())
                throw InputError("time scale: 'points' needs at least one value");
            spec.segments.push_back(std::move(pts));
        } else {
            throw InputError("time scale: unknown segment kind '" + kind + "'");
        }
    }
    spec.validate();
    return spec;
}

std::string TimeScaleSpec::to_text() const {
    std::string out;
    for (const auto& seg : segments) {
        if (auto* c = std::get_if<ContinuousInterval>(&seg)) {
            out += "interval " + fmt_double(c->a) + " " + fmt_double(c->b) + " " + fmt_double(c->step) + "\n";
        } else {
            out += "points";
            for (double t : std::get<DiscretePoints>(seg).times)
                out += " " + fmt_double(t);
            out += "\n";
        }
    }
    return out;
}

void TimeScaleSpec::validate() const {
    if (segments.empty())
        throw InputError("time scale: no segments");
    for (const auto& seg : segments) {
        if (auto* c = std::get_if<ContinuousInterval>(&seg)) {
            if (!(c->b > c->a))
                throw InputError("time scale: interval needs a < b");
            if (!(c->step > 0) || c->step > c->b - c->a)
                throw InputError("time scale: interval step must satisfy 0 < h <= b - a");
        } else {
            const auto& ts = std::get<DiscretePoints>(seg).times;
            for (std::size_t i = 1; i < ts.size(); ++i)
                if (!(ts[i] > ts[i - 1]))
                    throw InputError("time scale: points must be strictly increasing");
        }
    }
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (!(seg_start(segments[i]) > seg_end(segments[i - 1])))
            throw InputError("time scale: segments must be ordered with a positive gap");
    }
}

TimeScaleGrid TimeScaleGrid::build(const TimeScaleSpec& spec) {
    spec.validate();
    TimeScaleGrid g;
    g.spec_ = spec;
    for (const auto& seg : spec.segments) {
        std::size_t seg_first = g.points_.size();
        if (!g.points_.empty()) {
            // gap from the previous segment's last node
            auto& prev = g.points_.back();
            prev.step = StepKind::Scattered;
            prev.gap = seg_start(seg) - prev.t;
        }
        if (auto* c = std::get_if<ContinuousInterval>(&seg)) {
            double span = c->b - c->a;
            double ratio = span / c->step;
            auto n = static_cast<long long>(std::ceil(ratio - 1e-9));
            n = std::max(n, 1ll);
            double h = span / static_cast<double>(n);
            for (long long k = 0; k <= n; ++k) {
                double t = (k == n) ? c->b : c->a + h * static_cast<double>(k);
                g.points_.push_back(GridPoint{t, StepKind::Dense, h});
            }
            g.points_.back().step = StepKind::Terminal;
            g.points_.back().gap = 0;
        } else {
            const auto& ts = std::get<DiscretePoints>(seg).times;
            for (double t : ts)
                g.points_.push_back(GridPoint{t, StepKind::Scattered, 0});
            for (std::size_t i = seg_first; i + 1 < g.points_.size(); ++i)
                g.points_[i].gap = g.points_[i + 1].t - g.points_[i].t;
            g.points_.back().step = StepKind::Terminal;
            g.points_.back().gap = 0;
        }
    }
    for (const auto& p : g.points_)
        if (p.step == StepKind::Scattered)
            g.mu_max_ = std::max(g.mu_max_, p.gap);
    return g;
}

TimeScaleGrid TimeScaleGrid::from_text(const std::string& text) {
    return build(TimeScaleSpec::parse(text));
}

TimeScaleGrid TimeScaleGrid::integers(double t0, double t1) {
    double span = t1 - t0;
    double k = std::round(span);
    if (!(span > 0) || std::abs(span - k) > 1e-9)
        throw InputError("integers grid: t1 - t0 must be a positive integer");
    DiscretePoints pts;
    for (long long i = 0; i <= static_cast<long long>(k); ++i)
        pts.times.push_back(t0 + static_cast<double>(i));
    return build(TimeScaleSpec{{pts}});
}

TimeScaleGrid TimeScaleGrid::continuous(double a, double b, double step) {
    return build(TimeScaleSpec{{ContinuousInterval{a, b, step}}});
}

std::size_t TimeScaleGrid::index_of(double t) const {
    double tol = 1e-12 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(points_.begin(), points_.end(), t,
                               [](const GridPoint& p, double v) { return p.t < v; });
    for (auto cand : {it, it == points_.begin() ? it : std::prev(it)}) {
        if (cand != points_.end() && std::abs(cand->t - t) <= tol)
            return static_cast<std::size_t>(cand - points_.begin());
    }
    throw InputError("time " + fmt_double(t) + " is not a grid node");
}

bool TimeScaleGrid::contains(double t) const {
    try {
        (void)index_of(t);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

double TimeScaleGrid::sigma(double t) const {
    std::size_t i = index_of(t);
    if (points_[i].step == StepKind::Scattered)
        return points_[i + 1].t;
    return points_[i].t;
}

double TimeScaleGrid::mu(double t) const {
    std::size_t i = index_of(t);
    return points_[i].step == StepKind::Scattered ? points_[i].gap : 0.0;
}

} // namespace tsc
