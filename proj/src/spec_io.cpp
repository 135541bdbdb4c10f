#include "matkit/spec_io.hpp"
#include "matkit/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace matkit::io {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open spec file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

namespace {

Eigen::MatrixXd parse_matrix(const json& j, const char* what) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw InputError(std::string(what) + ": expected nested arrays");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw InputError(std::string(what) + ": ragged rows");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

double require_number(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw InputError(std::string("missing numeric field '") + field + "'");
    return j[field].get<double>();
}

} // namespace

IndexSampling parse_sampling(const json& spec, int level) {
    if (spec.contains("grid")) {
        const json& g = spec["grid"];
        double from = require_number(g, "from");
        double to = require_number(g, "to");
        int n = static_cast<int>(require_number(g, "n"));
        return IndexSampling::grid(from, to, n, level);
    }
    if (spec.contains("points")) {
        const json& pts = spec["points"];
        if (!pts.is_array() || pts.empty()) throw InputError("sampling: empty point list");
        if (pts.front().is_array()) {
            return IndexSampling::from_points(parse_matrix(pts, "sampling points"), Metric::Sup,
                                              level);
        }
        Eigen::MatrixXd c(pts.size(), 1);
        for (std::size_t i = 0; i < pts.size(); ++i) c(static_cast<int>(i), 0) = pts[i].get<double>();
        return IndexSampling::from_points(c, Metric::Sup, level);
    }
    throw InputError("sampling spec needs 'grid' or 'points'");
}

SampledKernel parse_kernel_spec(const json& spec) {
    if (!spec.contains("rows") || !spec.contains("cols"))
        throw InputError("kernel spec needs 'rows' and 'cols'");
    IndexSampling rows = parse_sampling(spec["rows"]);
    IndexSampling cols = parse_sampling(spec["cols"]);
    std::optional<double> bound;
    if (spec.contains("bound")) bound = spec["bound"].get<double>();
    if (spec.contains("expr")) {
        Expression e = Expression::parse(spec["expr"].get<std::string>());
        return build_kernel(e, rows, cols, bound);
    }
    if (spec.contains("matrix"))
        return SampledKernel(rows, cols, parse_matrix(spec["matrix"], "kernel matrix"), bound);
    throw InputError("kernel spec needs 'expr' or 'matrix'");
}

SampledKernel kernel_spec_at_level(const json& spec, int n, int level) {
    if (!spec.contains("expr"))
        throw InputError("refinement profiles need an 'expr' kernel spec (matrix literals cannot be re-leveled)");
    auto regrid = [&](const json& side) {
        if (!side.contains("grid"))
            throw InputError("refinement profiles need 'grid' samplings on both sides");
        double from = require_number(side["grid"], "from");
        double to = require_number(side["grid"], "to");
        return IndexSampling::nested_grid(from, to, n, level);
    };
    IndexSampling rows = regrid(spec["rows"]);
    IndexSampling cols = regrid(spec["cols"]);
    std::optional<double> bound;
    if (spec.contains("bound")) bound = spec["bound"].get<double>();
    Expression e = Expression::parse(spec["expr"].get<std::string>());
    return build_kernel(e, rows, cols, bound);
}

GridFunction parse_function_spec(const json& spec) {
    if (!spec.contains("expr") || !spec.contains("domain"))
        throw InputError("function spec needs 'expr' and 'domain'");
    double a = require_number(spec["domain"], "from");
    double b = require_number(spec["domain"], "to");
    int depth = spec.contains("depth") ? static_cast<int>(require_number(spec, "depth")) : 16;
    Expression e = Expression::parse(spec["expr"].get<std::string>());
    return GridFunction::from_expression(e, a, b, depth);
}

SampledSemigroup parse_semigroup_spec(const json& spec) {
    int dim = static_cast<int>(require_number(spec, "dimension"));
    double t_max = require_number(spec, "t_max");
    int depth = static_cast<int>(require_number(spec, "depth"));
    NormKind norm = NormKind::Sup;
    if (spec.contains("norm")) {
        std::string n = spec["norm"].get<std::string>();
        if (n == "euclidean") norm = NormKind::Euclidean;
        else if (n != "sup") throw InputError("semigroup spec: unknown norm '" + n + "'");
    }

    std::vector<Eigen::MatrixXd> ops;
    if (spec.contains("generator")) {
        Eigen::MatrixXd gen = parse_matrix(spec["generator"], "generator");
        if (gen.rows() != dim) throw InputError("semigroup spec: generator dimension mismatch");
        if (!spec.contains("perturb"))
            return SampledSemigroup::from_generator(gen, t_max, depth, norm);
        // rebuild the raw operator list so the perturbation hits construction checks
        Eigen::MatrixXd step = (std::ldexp(1.0, -depth) * gen).exp();
        Eigen::MatrixXd cur = Eigen::MatrixXd::Identity(dim, dim);
        std::int64_t count = static_cast<std::int64_t>(std::nearbyint(std::ldexp(t_max, depth)));
        for (std::int64_t k = 0; k < count; ++k) {
            cur = cur * step;
            ops.push_back(cur);
        }
    } else if (spec.contains("entries_expr")) {
        const json& rows = spec["entries_expr"];
        if (static_cast<int>(rows.size()) != dim)
            throw InputError("semigroup spec: entries_expr dimension mismatch");
        std::vector<std::vector<Expression>> entries;
        for (const auto& row : rows) {
            std::vector<Expression> er;
            for (const auto& cell : row) er.push_back(Expression::parse(cell.get<std::string>()));
            entries.push_back(std::move(er));
        }
        if (!spec.contains("perturb"))
            return SampledSemigroup::from_entry_expressions(entries, t_max, depth, norm);
        std::int64_t count = static_cast<std::int64_t>(std::nearbyint(std::ldexp(t_max, depth)));
        const double h = std::ldexp(1.0, -depth);
        for (std::int64_t k = 1; k <= count; ++k) {
            Expression::Env env{{"s", k * h}, {"t", k * h}};
            Eigen::MatrixXd m(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) m(i, j) = entries[i][j].eval(env);
            ops.push_back(std::move(m));
        }
    } else {
        throw InputError("semigroup spec needs 'generator' or 'entries_expr'");
    }

    const json& p = spec["perturb"];
    auto k = static_cast<std::int64_t>(require_number(p, "sample"));
    auto i = static_cast<int>(require_number(p, "row"));
    auto j = static_cast<int>(require_number(p, "col"));
    if (k < 1 || k > static_cast<std::int64_t>(ops.size()) || i < 0 || i >= dim || j < 0 || j >= dim)
        throw InputError("semigroup spec: perturb indices out of range");
    ops[k - 1](i, j) += require_number(p, "delta");
    return SampledSemigroup::from_operators(std::move(ops), t_max, depth, norm);
}

namespace {

std::ostream& csv_num(std::ostream& os, double v) {
    os << std::setprecision(17) << v;
    return os;
}

} // namespace

void write_profile_csv(std::ostream& os, const CompactnessProfile& rows_profile,
                       const CompactnessProfile* cols_profile) {
    os << "epsilon,level,row_count,col_count,classification\n";
    std::string cls = to_string(rows_profile.classification);
    if (cols_profile && cols_profile->classification != rows_profile.classification)
        cls += ";cols=" + to_string(cols_profile->classification);
    for (std::size_t e = 0; e < rows_profile.epsilons.size(); ++e) {
        for (std::size_t l = 0; l < rows_profile.levels.size(); ++l) {
            csv_num(os, rows_profile.epsilons[e]) << "," << rows_profile.levels[l] << ","
                                                  << rows_profile.counts(static_cast<int>(e),
                                                                         static_cast<int>(l))
                                                  << ",";
            if (cols_profile) os << cols_profile->counts(static_cast<int>(e), static_cast<int>(l));
            os << "," << cls << "\n";
        }
    }
}

void write_ap_profile_csv(std::ostream& os, const std::string& grouping, const ApProfile& p,
                          bool header) {
    if (header) os << "grouping,epsilon,window,row_count,classification\n";
    for (std::size_t e = 0; e < p.profile.epsilons.size(); ++e)
        for (std::size_t l = 0; l < p.windows.size(); ++l) {
            os << grouping << ",";
            csv_num(os, p.profile.epsilons[e]) << ",";
            csv_num(os, p.windows[l]) << ","
                                      << p.profile.counts(static_cast<int>(e), static_cast<int>(l))
                                      << "," << to_string(p.classification) << "\n";
        }
}

void write_envelope_csv(std::ostream& os, const std::vector<ExtensionPoint>& points) {
    os << "t,upper,lower,gap,converged,value_or_flag\n";
    for (const auto& p : points) {
        csv_num(os, p.t) << ",";
        csv_num(os, p.envelope.upper) << ",";
        csv_num(os, p.envelope.lower) << ",";
        csv_num(os, p.envelope.gap) << "," << (p.envelope.converged ? "true" : "false") << ",";
        if (p.value) csv_num(os, *p.value);
        else os << to_string(p.status);
        os << "\n";
    }
}

json to_json(const DoubleLimitReport& rep) {
    return json{{"schema_version", 1},
                {"row_sequence", rep.row_sequence},
                {"col_sequence", rep.col_sequence},
                {"inner_tail", rep.inner_tail},
                {"outer_tail", rep.outer_tail},
                {"limit_row_first", rep.limit_row_first},
                {"limit_col_first", rep.limit_col_first},
                {"gap", rep.gap},
                {"converged", rep.converged}};
}

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const ExtensionResult& res) {
    json j{{"time", res.time},
           {"ok", res.ok},
           {"max_entry_gap", res.max_entry_gap},
           {"semigroup_defect_after", res.semigroup_defect_after},
           {"weak_continuity_modulus", res.weak_continuity_modulus}};
    if (res.ok) j["matrix"] = to_json(res.matrix);
    else {
        j["failure"] = res.failure;
        j["worst_entry"] = {res.worst_entry_row, res.worst_entry_col};
    }
    return j;
}

json to_json(const WeakIdentityReport& rep) {
    json devs = json::array();
    for (const auto& [t, d] : rep.deviation_by_time) devs.push_back({{"time", t}, {"deviation", d}});
    return json{{"status", to_string(rep.status)},
                {"worst_deviation", rep.worst_deviation},
                {"worst_probe", {rep.worst_x, rep.worst_rho}},
                {"worst_time", rep.worst_time},
                {"deviations", std::move(devs)}};
}

json to_json(const VerificationReport& rep) {
    json pairs = json::array();
    for (const auto& [a, b, d] : rep.pair_defects)
        pairs.push_back({{"t", a}, {"t_prime", b}, {"defect", d}});
    json mods = json::array();
    for (const auto& [off, m] : rep.modulus_by_offset)
        mods.push_back({{"offset", off}, {"modulus", m}});
    return json{{"status", to_string(rep.status)},
                {"max_defect", rep.max_defect},
                {"pairs_checked", rep.pairs_checked},
                {"pair_defects", std::move(pairs)},
                {"weak_continuity_modulus", std::move(mods)}};
}

} // namespace matkit::io
