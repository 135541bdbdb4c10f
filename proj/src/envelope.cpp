#include "matkit/envelope.hpp"
#include "matkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace matkit {

GridFunction::GridFunction(double a, double b, std::vector<double> points,
                           std::vector<double> values)
    : a_(a), b_(b), points_(std::move(points)), values_(std::move(values)) {
    if (a_ >= b_) throw InputError("GridFunction: domain must satisfy a < b");
    if (points_.size() != values_.size())
        throw InputError("GridFunction: point/value count mismatch");
    if (points_.empty()) throw InputError("GridFunction: empty sample");
    bound_ = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i > 0 && points_[i] <= points_[i - 1])
            throw InputError("GridFunction: sample points must be strictly increasing");
        if (points_[i] < a_ || points_[i] > b_)
            throw InputError("GridFunction: sample point outside the domain closure");
        if (!std::isfinite(values_[i])) throw InvariantError("GridFunction: non-finite value");
        bound_ = std::max(bound_, std::abs(values_[i]));
    }
}

GridFunction GridFunction::from_expression(const Expression& f, double a, double b, int depth) {
    return from_function(
        [&f](double s) {
            Expression::Env env{{"s", s}, {"x", s}};
            return f.eval(env);
        },
        a, b, depth);
}

GridFunction GridFunction::from_function(const std::function<double(double)>& f, double a, double b,
                                         int depth) {
    if (depth < 1 || depth > 26) throw InputError("GridFunction: depth out of range [1, 26]");
    const std::int64_t n = std::int64_t{1} << depth;
    std::vector<double> pts(n), vals(n);
    const double h = (b - a) / static_cast<double>(n);
    for (std::int64_t k = 1; k <= n; ++k) {
        pts[k - 1] = a + static_cast<double>(k) * h;
        vals[k - 1] = f(pts[k - 1]);
    }
    return GridFunction(a, b, std::move(pts), std::move(vals));
}

std::vector<double> default_radii(const GridFunction& f, int depth) {
    std::vector<double> r(depth);
    double r0 = (f.b() - f.a()) / 4.0;
    for (int k = 0; k < depth; ++k) r[k] = r0 * std::ldexp(1.0, -k);
    return r;
}

EnvelopeSequences envelope_sequences(const GridFunction& f, double t,
                                     const std::vector<double>& radii) {
    if (radii.empty()) throw InputError("envelope: empty radius schedule");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] >= radii[i - 1] || radii[i] <= 0.0)
            throw InputError("envelope: radii must be positive and strictly decreasing");

    EnvelopeSequences seq;
    const auto& pts = f.points();
    for (double r : radii) {
        auto lo = std::lower_bound(pts.begin(), pts.end(), t - r);
        auto hi = std::upper_bound(pts.begin(), pts.end(), t + r);
        if (lo >= hi) break; // empty ball: shrinkage stops here
        double s = -HUGE_VAL, in = HUGE_VAL;
        for (auto it = lo; it != hi; ++it) {
            double v = f.values()[it - pts.begin()];
            s = std::max(s, v);
            in = std::min(in, v);
        }
        seq.radii.push_back(r);
        seq.sups.push_back(s);
        seq.infs.push_back(in);
        seq.counts.push_back(static_cast<int>(hi - lo));
    }
    if (seq.radii.empty())
        throw InputError("envelope: no sample point within the largest radius of t=" +
                         std::to_string(t));
    return seq;
}

namespace {

struct Tracked {
    double value;
    bool converged;
    std::size_t last_index;
};

/// Tracked Cauchy scan of a monotone sequence (see EnvelopeValue docs).
Tracked tracked_limit(const std::vector<double>& v, double tol) {
    const std::size_t n = v.size();
    const std::size_t w = std::max<std::size_t>(2, (n + 3) / 4);
    if (n < w) return {v.back(), false, n - 1};
    std::size_t onset = n; // first stable window start
    for (std::size_t k = 0; k + w <= n; ++k) {
        if (std::abs(v[k + w - 1] - v[k]) <= tol) {
            onset = k;
            break;
        }
    }
    if (onset == n) return {v.back(), false, n - 1};
    std::size_t j = onset + w - 1;
    while (j + 1 < n && std::abs(v[j + 1] - v[j]) <= tol) ++j;
    return {v[j], j + 1 == n, j};
}

} // namespace

EnvelopeValue envelope_at(const GridFunction& f, double t, const std::vector<double>& radii,
                          double cauchy_tol) {
    EnvelopeSequences seq = envelope_sequences(f, t, radii);
    std::vector<double> neg_infs(seq.infs.size());
    for (std::size_t i = 0; i < seq.infs.size(); ++i) neg_infs[i] = -seq.infs[i];

    Tracked up = tracked_limit(seq.sups, cauchy_tol);
    Tracked lo = tracked_limit(neg_infs, cauchy_tol);

    EnvelopeValue ev;
    ev.point = t;
    ev.upper = up.value;
    ev.lower = -lo.value;
    ev.gap = ev.upper - ev.lower;
    ev.upper_converged = up.converged;
    ev.lower_converged = lo.converged;
    ev.converged = up.converged && lo.converged;
    std::size_t used = std::max(up.last_index, lo.last_index);
    ev.radii_used.assign(seq.radii.begin(), seq.radii.begin() + used + 1);
    return ev;
}

double upper_envelope(const GridFunction& f, double t, const std::vector<double>& radii,
                      double cauchy_tol) {
    return envelope_at(f, t, radii, cauchy_tol).upper;
}

double lower_envelope(const GridFunction& f, double t, const std::vector<double>& radii,
                      double cauchy_tol) {
    return envelope_at(f, t, radii, cauchy_tol).lower;
}

std::string to_string(ExtendStatus s) {
    switch (s) {
        case ExtendStatus::Extended: return "extended";
        case ExtendStatus::GapExceeded: return "gap-exceeded";
        default: return "not-converged";
    }
}

std::vector<ExtensionPoint> extend_function(const GridFunction& f,
                                            const std::vector<double>& targets, double tol,
                                            const ExtendOptions& opts) {
    std::vector<double> radii = opts.radii ? *opts.radii : default_radii(f);
    std::vector<ExtensionPoint> out;
    out.reserve(targets.size());
    for (double t : targets) {
        if (t < f.a() || t > f.b())
            throw InputError("extend_function: target " + std::to_string(t) +
                             " outside the domain closure");
        ExtensionPoint p;
        p.t = t;
        p.envelope = envelope_at(f, t, radii, opts.cauchy_tol);
        if (p.envelope.gap > tol) {
            p.status = ExtendStatus::GapExceeded;
        } else if (!p.envelope.converged) {
            p.status = ExtendStatus::NotConverged;
        } else {
            p.status = ExtendStatus::Extended;
            p.value = 0.5 * (p.envelope.upper + p.envelope.lower);
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace matkit
