#pragma once

#include "matkit/expression.hpp"
#include "matkit/sampling.hpp"

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>

namespace matkit {

/// A bounded kernel tabulated on a finite row-sample x column-sample of two
/// index sets. Immutable after construction; |values| <= bound entrywise.
class SampledKernel {
public:
    SampledKernel(IndexSampling rows, IndexSampling cols, Eigen::MatrixXd values,
                  std::optional<double> bound = std::nullopt);

    const IndexSampling& rows() const { return rows_; }
    const IndexSampling& cols() const { return cols_; }
    const Eigen::MatrixXd& values() const { return values_; }
    double bound() const { return bound_; }
    double operator()(int i, int j) const { return values_(i, j); }

    /// Row i as a vector over the column sample.
    Eigen::VectorXd row(int i) const { return values_.row(i); }
    Eigen::VectorXd col(int j) const { return values_.col(j); }

private:
    IndexSampling rows_;
    IndexSampling cols_;
    Eigen::MatrixXd values_;
    double bound_;
};

/// values[i,j] = f(row coords, col coords). For one-dimensional samplings the
/// expression sees the variables x (row) and y (column); a d-dimensional
/// sampling additionally binds x0..x{d-1} / y0..y{d-1}.
SampledKernel build_kernel(const Expression& expr, const IndexSampling& rows,
                           const IndexSampling& cols,
                           std::optional<double> bound = std::nullopt);

SampledKernel build_kernel(const std::function<double(const Eigen::VectorXd&,
                                                      const Eigen::VectorXd&)>& f,
                           const IndexSampling& rows, const IndexSampling& cols,
                           std::optional<double> bound = std::nullopt);

/// Rows and columns swapped; values transposed; bound unchanged.
SampledKernel transpose(const SampledKernel& k);

/// A bounded kernel on three index sets I x J x L.
class MultiKernel {
public:
    MultiKernel(IndexSampling axis_i, IndexSampling axis_j, IndexSampling axis_l,
                std::vector<double> values, std::optional<double> bound = std::nullopt);

    const IndexSampling& axis_i() const { return i_; }
    const IndexSampling& axis_j() const { return j_; }
    const IndexSampling& axis_l() const { return l_; }
    double bound() const { return bound_; }
    double at(int i, int j, int l) const {
        return values_[(static_cast<std::size_t>(i) * j_.size() + j) * l_.size() + l];
    }

    static MultiKernel build(const Expression& expr, const IndexSampling& i,
                             const IndexSampling& j, const IndexSampling& l);

private:
    IndexSampling i_, j_, l_;
    std::vector<double> values_;
    double bound_;
};

/// Which axis becomes the row sampling; columns are the product of the other
/// two (in I-before-J-before-L order).
enum class Grouping { RowsI, RowsJ, RowsL };

/// Regroups a three-index kernel into a two-index one. The product column
/// sampling carries concatenated coordinates and the sup of factor distances.
SampledKernel regroup(const MultiKernel& m, Grouping g);

} // namespace matkit
