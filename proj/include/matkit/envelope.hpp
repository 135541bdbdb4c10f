#pragma once

#include "matkit/expression.hpp"

#include <optional>
#include <string>
#include <vector>

namespace matkit {

/// A bounded real function tabulated on a finite dense sample of an interval.
/// The left endpoint may be an excluded boundary of the open domain.
class GridFunction {
public:
    GridFunction(double a, double b, std::vector<double> points, std::vector<double> values);

    double a() const { return a_; }
    double b() const { return b_; }
    double bound() const { return bound_; }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& values() const { return values_; }
    int size() const { return static_cast<int>(points_.size()); }

    /// Dyadic sample a + k*(b-a)/2^depth, k = 1..2^depth (left-open).
    static GridFunction from_expression(const Expression& f, double a, double b, int depth);
    static GridFunction from_function(const std::function<double(double)>& f, double a, double b,
                                      int depth);

private:
    double a_, b_, bound_;
    std::vector<double> points_; // strictly increasing
    std::vector<double> values_;
};

/// Default radius schedule r_k = r0 * 2^-k with r0 = (b-a)/4.
std::vector<double> default_radii(const GridFunction& f, int depth = 20);

/// Raw envelope data at a point: sup/inf of f over the sample restricted to
/// shrinking balls B(t, r). Collection stops at the first empty ball.
struct EnvelopeSequences {
    std::vector<double> radii;
    std::vector<double> sups;  // nonincreasing
    std::vector<double> infs;  // nondecreasing
    std::vector<int> counts;   // samples captured per radius
};

EnvelopeSequences envelope_sequences(const GridFunction& f, double t,
                                     const std::vector<double>& radii);

/// Upper and lower envelope estimates at a point.
///
/// Each monotone sup/inf sequence is read off by a tracked Cauchy scan: find
/// the first window of ceil(n/4) radii whose variation is <= tol, then follow
/// the sequence while consecutive steps stay <= tol. A later jump beyond tol
/// means the shrinking balls no longer carry enough samples (or the function
/// has sub-resolution structure); the estimate freezes just before the jump
/// and `converged` clears.
struct EnvelopeValue {
    double point = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    double gap = 0.0;
    std::vector<double> radii_used;
    bool upper_converged = false;
    bool lower_converged = false;
    bool converged = false;
};

EnvelopeValue envelope_at(const GridFunction& f, double t, const std::vector<double>& radii,
                          double cauchy_tol = 1e-6);

double upper_envelope(const GridFunction& f, double t, const std::vector<double>& radii,
                      double cauchy_tol = 1e-6);
double lower_envelope(const GridFunction& f, double t, const std::vector<double>& radii,
                      double cauchy_tol = 1e-6);

enum class ExtendStatus { Extended, GapExceeded, NotConverged };
std::string to_string(ExtendStatus s);

/// Per-target outcome of the continuous-extension test: the midpoint value is
/// emitted only when the envelope bracket collapses (gap <= tol) and both
/// Cauchy scans converged; otherwise the flag carries the measured gap.
struct ExtensionPoint {
    double t = 0.0;
    ExtendStatus status = ExtendStatus::NotConverged;
    std::optional<double> value;
    EnvelopeValue envelope;
};

struct ExtendOptions {
    std::optional<std::vector<double>> radii; // default_radii(f) when absent
    double cauchy_tol = 1e-6;
};

std::vector<ExtensionPoint> extend_function(const GridFunction& f,
                                            const std::vector<double>& targets, double tol,
                                            const ExtendOptions& opts = {});

} // namespace matkit
