#pragma once

#include "matkit/almost_periodic.hpp"
#include "matkit/covering.hpp"
#include "matkit/envelope.hpp"
#include "matkit/fubini.hpp"
#include "matkit/kernel.hpp"
#include "matkit/semigroup.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace matkit::io {

using nlohmann::json;

json load_json(const std::string& path);

/// Sampling spec: {"grid": {"from": a, "to": b, "n": k}} or
/// {"points": [x0, x1, ...]} (scalars or coordinate arrays).
IndexSampling parse_sampling(const json& spec, int level = 0);

/// Kernel spec: fields "rows", "cols", and "expr" (expression in x and y) or
/// "matrix" (nested arrays), optional "bound".
SampledKernel parse_kernel_spec(const json& spec);

/// Rebuilds an expression kernel on nested grids of n points per side, for
/// refinement profiles. Matrix literals cannot be re-leveled.
SampledKernel kernel_spec_at_level(const json& spec, int n, int level);

/// Function spec: {"expr": "...", "domain": {"from": a, "to": b}, "depth": p}.
GridFunction parse_function_spec(const json& spec);

/// Semigroup spec: "dimension", "t_max", "depth", and either "generator"
/// (matrix; sampled as exp(sA)) or "entries_expr" (per-entry closed forms in
/// s); optional "norm" and a "perturb" fixture-corruption knob
/// {"sample": k, "row": i, "col": j, "delta": d}.
SampledSemigroup parse_semigroup_spec(const json& spec);

void write_profile_csv(std::ostream& os, const CompactnessProfile& rows_profile,
                       const CompactnessProfile* cols_profile);
void write_ap_profile_csv(std::ostream& os, const std::string& grouping, const ApProfile& p,
                          bool header);
void write_envelope_csv(std::ostream& os, const std::vector<ExtensionPoint>& points);

json to_json(const DoubleLimitReport& rep);
json to_json(const ExtensionResult& res);
json to_json(const WeakIdentityReport& rep);
json to_json(const VerificationReport& rep);
json to_json(const Eigen::MatrixXd& m);

} // namespace matkit::io
