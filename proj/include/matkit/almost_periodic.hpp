#pragma once

#include "matkit/covering.hpp"
#include "matkit/expression.hpp"
#include "matkit/kernel.hpp"

#include <array>
#include <functional>

namespace matkit {

/// Commutative group operations shipped with fixtures. Noncommutative groups
/// are accepted by the function interface but carry no fixtures or claims.
enum class GroupOp { RealAddition, CircleAddition, IntegerAddition };
std::string to_string(GroupOp op);
double group_combine(GroupOp op, double a, double b);

/// Translation kernel (x, y) -> f(x*y). The expression sees the group element
/// as s (alias x).
SampledKernel ap_kernel(const Expression& f, const IndexSampling& xs, const IndexSampling& ys,
                        GroupOp op, std::optional<double> declared_bound = std::nullopt);
SampledKernel ap_kernel(const std::function<double(double)>& f, const IndexSampling& xs,
                        const IndexSampling& ys, GroupOp op,
                        std::optional<double> declared_bound = std::nullopt);

enum class ApClass { AlmostPeriodicConsistent, NotAlmostPeriodic, Inconclusive };
std::string to_string(ApClass c);
ApClass ap_class_of(Classification c);

/// Covering profile of the translation kernel over geometrically growing
/// windows [0, W) at fixed per-unit grid density; growing windows add new
/// translates without refining the grid.
struct ApProfile {
    CompactnessProfile profile; // levels indexed by window
    std::vector<double> windows;
    ApClass classification = ApClass::Inconclusive;
};

ApProfile ap_profile(const std::function<double(double)>& f, const std::vector<double>& windows,
                     int grid_density, std::vector<double> epsilons, GroupOp op);
ApProfile ap_profile(const Expression& f, const std::vector<double>& windows, int grid_density,
                     std::vector<double> epsilons, GroupOp op);

/// The three groupings of (x, y, z) -> f(x*y*z) profiled over the same
/// windows: rows x | cols (y,z); rows (x,y) | cols z; rows y | cols (x,z).
/// For commutative fixtures all three classifications must agree.
struct TripleGroupingProfiles {
    std::array<ApProfile, 3> profiles;
    std::array<std::string, 3> grouping_names;
    bool agreement = false;
};

TripleGroupingProfiles triple_grouping_check(const std::function<double(double)>& f,
                                             const std::vector<double>& windows, int grid_density,
                                             std::vector<double> epsilons, GroupOp op);
TripleGroupingProfiles triple_grouping_check(const Expression& f,
                                             const std::vector<double>& windows, int grid_density,
                                             std::vector<double> epsilons, GroupOp op);

} // namespace matkit
