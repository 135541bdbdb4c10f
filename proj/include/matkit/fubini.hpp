#pragma once

#include "matkit/kernel.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace matkit {

/// A finitely supported probability weighting over a sampling: the computable
/// subclass of means. Weights are nonnegative and sum to 1 within 1e-12.
class DiscreteMean {
public:
    DiscreteMean(const IndexSampling& over, Eigen::VectorXd weights);

    /// Unit mass at one point.
    static DiscreteMean delta(const IndexSampling& over, const std::string& id);
    /// Equal weights on every point.
    static DiscreteMean uniform(const IndexSampling& over);

    const Eigen::VectorXd& weights() const { return w_; }
    int size() const { return static_cast<int>(w_.size()); }

    /// Applies the mean to a function given by its values on the sampling.
    double apply(const Eigen::VectorXd& values) const;

private:
    Eigen::VectorXd w_;
};

enum class IntegrationOrder { RowsFirst, ColsFirst };

/// Iterated integral of the kernel against discrete means over rows and
/// columns, in the stated order. Finite double sums commute; this is the
/// sanity floor and the mean-evaluation primitive.
double iterated_integral(const SampledKernel& k, const DiscreteMean& row_mean,
                         const DiscreteMean& col_mean, IntegrationOrder order);

/// Sequential double-limit probe along a row and a column sequence.
///
/// The two iterated limits are estimated with staggered inner ranges: the
/// inner limit at outer position m uses only inner positions > m, so the
/// inner index outruns the outer one the way the genuine iterated limit
/// requires. Each limit is read off by a Cauchy test on the last quarter of
/// its (restricted) sequence; `converged` clears if any test fails. A nonzero
/// gap witnesses failure of the mean-interchange property; a zero gap proves
/// nothing.
struct DoubleLimitReport {
    std::vector<std::string> row_sequence;
    std::vector<std::string> col_sequence;
    int inner_tail = 0;            // smallest inner tail length used
    int outer_tail = 0;
    double limit_row_first = 0.0;  // outer limit over rows of inner col-limits
    double limit_col_first = 0.0;
    double gap = 0.0;
    bool converged = false;
};

/// `entry(m, n)` returns the kernel value at row position m, column position n
/// of the sequences (positions, not ids).
DoubleLimitReport double_limit_gap(const std::function<double(int, int)>& entry, int n_rows,
                                   int n_cols, double tol);

DoubleLimitReport double_limit_gap(const SampledKernel& k,
                                   const std::vector<std::string>& row_ids,
                                   const std::vector<std::string>& col_ids, double tol);

/// Randomized search for interchange-failure witnesses: monotone coordinate
/// sequences toward sampled extreme/cluster points plus seeded random index
/// subsequences. Returns the largest converged gap (ties keep the earliest).
struct GapSearchOptions {
    int budget = 32;
    int sequence_length = 12;
    double tol = 1e-6;
    std::uint64_t seed = 20240801;
};

DoubleLimitReport gap_search(const SampledKernel& k, const GapSearchOptions& opts);

/// The three two-index groupings of <A x, y> over the standard basis e_1..e_d
/// and the truncation projectors P_1..P_d, plus the canonical double-limit
/// reports: the (x,y)|A grouping has gap exactly 1 along the diagonal row
/// sequence ((e_n, e_n)) against columns P_k; the other two groupings carry
/// gap 0 along the same index sequences.
struct Remark2Gallery {
    SampledKernel xy_by_A;  // rows (x,y), cols A
    SampledKernel xA_by_y;  // rows (x,A), cols y
    SampledKernel yA_by_x;  // rows (y,A), cols x
    DoubleLimitReport witness;      // on xy_by_A: gap 1
    DoubleLimitReport null_xA_by_y; // gap 0
    DoubleLimitReport null_yA_by_x; // gap 0
    std::vector<std::string> diagonal_row_ids_xy;
    std::vector<std::string> projector_ids;
};

Remark2Gallery remark2_gallery(int d, double tol = 1e-9);

} // namespace matkit
