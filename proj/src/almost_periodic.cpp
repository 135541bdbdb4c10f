#include "matkit/almost_periodic.hpp"
#include "matkit/errors.hpp"

#include <cmath>

namespace matkit {

std::string to_string(GroupOp op) {
    switch (op) {
        case GroupOp::RealAddition: return "real-addition";
        case GroupOp::CircleAddition: return "circle-addition";
        default: return "integer-addition";
    }
}

double group_combine(GroupOp op, double a, double b) {
    switch (op) {
        case GroupOp::RealAddition: return a + b;
        case GroupOp::CircleAddition: {
            constexpr double two_pi = 2.0 * 3.14159265358979323846;
            double s = std::fmod(a + b, two_pi);
            return s < 0 ? s + two_pi : s;
        }
        default: return std::nearbyint(a) + std::nearbyint(b);
    }
}

std::string to_string(ApClass c) {
    switch (c) {
        case ApClass::AlmostPeriodicConsistent: return "almost-periodic-consistent";
        case ApClass::NotAlmostPeriodic: return "not-almost-periodic";
        default: return "inconclusive";
    }
}

ApClass ap_class_of(Classification c) {
    switch (c) {
        case Classification::Bounded: return ApClass::AlmostPeriodicConsistent;
        case Classification::Growing: return ApClass::NotAlmostPeriodic;
        default: return ApClass::Inconclusive;
    }
}

SampledKernel ap_kernel(const Expression& f, const IndexSampling& xs, const IndexSampling& ys,
                        GroupOp op, std::optional<double> declared_bound) {
    return ap_kernel(
        [&f](double s) {
            Expression::Env env{{"s", s}, {"x", s}};
            return f.eval(env);
        },
        xs, ys, op, declared_bound);
}

SampledKernel ap_kernel(const std::function<double(double)>& f, const IndexSampling& xs,
                        const IndexSampling& ys, GroupOp op,
                        std::optional<double> declared_bound) {
    if (xs.dim() != 1 || ys.dim() != 1)
        throw InputError("ap_kernel: group samplings must be one-dimensional");
    SampledKernel k = build_kernel(
        [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
            return f(group_combine(op, x[0], y[0]));
        },
        xs, ys);
    if (declared_bound && k.bound() > *declared_bound)
        throw InvariantError("ap_kernel: sampled |f| = " + std::to_string(k.bound()) +
                             " exceeds the declared bound " + std::to_string(*declared_bound));
    return k;
}

namespace {

IndexSampling window_grid(double window, int density, int level) {
    int n = static_cast<int>(std::lround(window * density));
    if (n < 1) throw InputError("ap_profile: window too small for the grid density");
    return IndexSampling::nested_grid(0.0, window, n, level);
}

void check_windows(const std::vector<double>& windows) {
    if (windows.size() < 3) throw InputError("ap_profile: need at least three windows");
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (windows[i] <= windows[i - 1])
            throw InputError("ap_profile: windows must be strictly increasing");
}

} // namespace

ApProfile ap_profile(const std::function<double(double)>& f, const std::vector<double>& windows,
                     int grid_density, std::vector<double> epsilons, GroupOp op) {
    check_windows(windows);
    std::vector<SampledKernel> kernels;
    kernels.reserve(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        IndexSampling g = window_grid(windows[w], grid_density, static_cast<int>(w));
        kernels.push_back(ap_kernel(f, g, g, op));
    }
    ApProfile out;
    out.windows = windows;
    out.profile = compactness_profile(kernels, std::move(epsilons));
    out.classification = ap_class_of(out.profile.classification);
    return out;
}

ApProfile ap_profile(const Expression& f, const std::vector<double>& windows, int grid_density,
                     std::vector<double> epsilons, GroupOp op) {
    return ap_profile(
        [&f](double s) {
            Expression::Env env{{"s", s}, {"x", s}};
            return f.eval(env);
        },
        windows, grid_density, std::move(epsilons), op);
}

TripleGroupingProfiles triple_grouping_check(const std::function<double(double)>& f,
                                             const std::vector<double>& windows, int grid_density,
                                             std::vector<double> epsilons, GroupOp op) {
    check_windows(windows);
    TripleGroupingProfiles out;
    out.grouping_names = {"x|(y,z)", "(x,y)|z", "y|(x,z)"};

    std::array<std::vector<SampledKernel>, 3> grouped;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        IndexSampling g = window_grid(windows[w], grid_density, static_cast<int>(w));
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(g.size()) * g.size() * g.size());
        for (int a = 0; a < g.size(); ++a)
            for (int b = 0; b < g.size(); ++b)
                for (int c = 0; c < g.size(); ++c)
                    vals.push_back(f(group_combine(op, group_combine(op, g.coords()(a, 0), g.coords()(b, 0)),
                                                   g.coords()(c, 0))));
        MultiKernel triple(g, g, g, std::move(vals));
        grouped[0].push_back(regroup(triple, Grouping::RowsI));
        grouped[1].push_back(transpose(regroup(triple, Grouping::RowsL)));
        grouped[2].push_back(regroup(triple, Grouping::RowsJ));
    }
    for (int i = 0; i < 3; ++i) {
        out.profiles[i].windows = windows;
        out.profiles[i].profile = compactness_profile(grouped[i], epsilons);
        out.profiles[i].classification = ap_class_of(out.profiles[i].profile.classification);
    }
    out.agreement = out.profiles[0].classification == out.profiles[1].classification &&
                    out.profiles[1].classification == out.profiles[2].classification;
    return out;
}

TripleGroupingProfiles triple_grouping_check(const Expression& f,
                                             const std::vector<double>& windows, int grid_density,
                                             std::vector<double> epsilons, GroupOp op) {
    return triple_grouping_check(
        [&f](double s) {
            Expression::Env env{{"s", s}, {"x", s}};
            return f.eval(env);
        },
        windows, grid_density, std::move(epsilons), op);
}

} // namespace matkit
