#include "matkit/kernel.hpp"
#include "matkit/errors.hpp"

#include <cmath>

namespace matkit {

namespace {

double checked_bound(double maxabs, std::optional<double> bound, const char* what) {
    if (!std::isfinite(maxabs)) throw InvariantError(std::string(what) + ": non-finite values");
    if (bound) {
        if (*bound < maxabs)
            throw InvariantError(std::string(what) + ": declared bound " + std::to_string(*bound) +
                                 " below max |value| " + std::to_string(maxabs));
        return *bound;
    }
    return maxabs;
}

void bind_coords(Expression::Env& env, const char* base, const Eigen::VectorXd& v) {
    if (v.size() == 1) {
        env[base] = v[0];
        return;
    }
    env[base] = v[0];
    for (int k = 0; k < v.size(); ++k) env[base + std::to_string(k)] = v[k];
}

} // namespace

SampledKernel::SampledKernel(IndexSampling rows, IndexSampling cols, Eigen::MatrixXd values,
                             std::optional<double> bound)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
    if (values_.rows() != rows_.size() || values_.cols() != cols_.size())
        throw InputError("SampledKernel: value dimensions " + std::to_string(values_.rows()) + "x" +
                         std::to_string(values_.cols()) + " do not match samplings " +
                         std::to_string(rows_.size()) + "x" + std::to_string(cols_.size()));
    double maxabs = values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
    bound_ = checked_bound(maxabs, bound, "SampledKernel");
}

SampledKernel build_kernel(const Expression& expr, const IndexSampling& rows,
                           const IndexSampling& cols, std::optional<double> bound) {
    return build_kernel(
        [&expr](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
            Expression::Env env;
            bind_coords(env, "x", x);
            bind_coords(env, "y", y);
            return expr.eval(env);
        },
        rows, cols, bound);
}

SampledKernel build_kernel(const std::function<double(const Eigen::VectorXd&,
                                                      const Eigen::VectorXd&)>& f,
                           const IndexSampling& rows, const IndexSampling& cols,
                           std::optional<double> bound) {
    Eigen::MatrixXd v(rows.size(), cols.size());
    for (int i = 0; i < rows.size(); ++i) {
        Eigen::VectorXd xi = rows.point(i);
        for (int j = 0; j < cols.size(); ++j) v(i, j) = f(xi, cols.point(j));
    }
    return SampledKernel(rows, cols, std::move(v), bound);
}

SampledKernel transpose(const SampledKernel& k) {
    return SampledKernel(k.cols(), k.rows(), k.values().transpose(), k.bound());
}

MultiKernel::MultiKernel(IndexSampling axis_i, IndexSampling axis_j, IndexSampling axis_l,
                         std::vector<double> values, std::optional<double> bound)
    : i_(std::move(axis_i)), j_(std::move(axis_j)), l_(std::move(axis_l)),
      values_(std::move(values)) {
    const std::size_t expect =
        static_cast<std::size_t>(i_.size()) * j_.size() * l_.size();
    if (values_.size() != expect)
        throw InputError("MultiKernel: expected " + std::to_string(expect) + " values, got " +
                         std::to_string(values_.size()));
    double maxabs = 0.0;
    for (double v : values_) maxabs = std::max(maxabs, std::abs(v));
    bound_ = checked_bound(maxabs, bound, "MultiKernel");
}

MultiKernel MultiKernel::build(const Expression& expr, const IndexSampling& i,
                               const IndexSampling& j, const IndexSampling& l) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(i.size()) * j.size() * l.size());
    for (int a = 0; a < i.size(); ++a)
        for (int b = 0; b < j.size(); ++b)
            for (int c = 0; c < l.size(); ++c) {
                Expression::Env env;
                bind_coords(env, "x", i.point(a));
                bind_coords(env, "y", j.point(b));
                bind_coords(env, "z", l.point(c));
                v.push_back(expr.eval(env));
            }
    return MultiKernel(i, j, l, std::move(v));
}

SampledKernel regroup(const MultiKernel& m, Grouping g) {
    const IndexSampling *row_axis, *col_a, *col_b;
    switch (g) {
        case Grouping::RowsI: row_axis = &m.axis_i(); col_a = &m.axis_j(); col_b = &m.axis_l(); break;
        case Grouping::RowsJ: row_axis = &m.axis_j(); col_a = &m.axis_i(); col_b = &m.axis_l(); break;
        case Grouping::RowsL: row_axis = &m.axis_l(); col_a = &m.axis_i(); col_b = &m.axis_j(); break;
        default: throw InputError("regroup: bad grouping");
    }
    IndexSampling cols = IndexSampling::product(*col_a, *col_b);
    Eigen::MatrixXd v(row_axis->size(), cols.size());
    for (int r = 0; r < row_axis->size(); ++r)
        for (int a = 0; a < col_a->size(); ++a)
            for (int b = 0; b < col_b->size(); ++b) {
                int c = a * col_b->size() + b;
                switch (g) {
                    case Grouping::RowsI: v(r, c) = m.at(r, a, b); break;
                    case Grouping::RowsJ: v(r, c) = m.at(a, r, b); break;
                    case Grouping::RowsL: v(r, c) = m.at(a, b, r); break;
                }
            }
    return SampledKernel(*row_axis, std::move(cols), std::move(v), m.bound());
}

} // namespace matkit
