#include "matkit/fubini.hpp"
#include "matkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace matkit {

DiscreteMean::DiscreteMean(const IndexSampling& over, Eigen::VectorXd weights) : w_(std::move(weights)) {
    if (w_.size() != over.size())
        throw InputError("DiscreteMean: weight count does not match the sampling");
    if ((w_.array() < 0.0).any()) throw InputError("DiscreteMean: negative weight");
    if (std::abs(w_.sum() - 1.0) > 1e-12)
        throw InputError("DiscreteMean: weights sum to " + std::to_string(w_.sum()) + ", not 1");
}

DiscreteMean DiscreteMean::delta(const IndexSampling& over, const std::string& id) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(over.size());
    w[over.index_of(id)] = 1.0;
    return DiscreteMean(over, std::move(w));
}

DiscreteMean DiscreteMean::uniform(const IndexSampling& over) {
    if (over.size() == 0) throw InputError("DiscreteMean: empty sampling");
    return DiscreteMean(over, Eigen::VectorXd::Constant(over.size(), 1.0 / over.size()));
}

double DiscreteMean::apply(const Eigen::VectorXd& values) const {
    if (values.size() != w_.size()) throw InputError("DiscreteMean: support mismatch");
    return w_.dot(values);
}

double iterated_integral(const SampledKernel& k, const DiscreteMean& row_mean,
                         const DiscreteMean& col_mean, IntegrationOrder order) {
    if (row_mean.size() != k.rows().size() || col_mean.size() != k.cols().size())
        throw InputError("iterated_integral: mean supports do not match the kernel samplings");
    if (order == IntegrationOrder::RowsFirst) {
        // integrate over rows first: per column j, M(k(.,j)); then N of that
        Eigen::VectorXd per_col = k.values().transpose() * row_mean.weights();
        return col_mean.apply(per_col);
    }
    Eigen::VectorXd per_row = k.values() * col_mean.weights();
    return row_mean.apply(per_row);
}

namespace {

struct TailLimit {
    double value = 0.0;
    bool converged = false;
    int tail = 0;
};

/// Cauchy read-off: the last ceil(len/4) values must pairwise differ by <= tol;
/// the limit estimate is the final value.
TailLimit tail_limit(const std::vector<double>& seq, double tol) {
    TailLimit out;
    if (seq.empty()) return out;
    out.tail = std::max<int>(1, static_cast<int>((seq.size() + 3) / 4));
    double lo = seq.back(), hi = seq.back();
    for (std::size_t i = seq.size() - out.tail; i < seq.size(); ++i) {
        lo = std::min(lo, seq[i]);
        hi = std::max(hi, seq[i]);
    }
    out.value = seq.back();
    out.converged = (hi - lo) <= tol;
    return out;
}

constexpr int kMinInner = 4; // staggered inner range must keep this many values

/// One iterated limit with staggered inner ranges; outer runs over the first
/// sequence, inner over the second.
TailLimit iterated_limit(const std::function<double(int, int)>& value, int n_outer, int n_inner,
                         double tol, int* min_inner_tail) {
    std::vector<double> outer_vals;
    bool all_inner_ok = true;
    int min_tail = n_inner;
    for (int m = 0; m < n_outer; ++m) {
        const int avail = n_inner - (m + 1);
        if (avail < kMinInner) break;
        std::vector<double> inner(avail);
        for (int n = 0; n < avail; ++n) inner[n] = value(m, m + 1 + n);
        TailLimit il = tail_limit(inner, tol);
        all_inner_ok = all_inner_ok && il.converged;
        min_tail = std::min(min_tail, il.tail);
        outer_vals.push_back(il.value);
    }
    TailLimit out = tail_limit(outer_vals, tol);
    out.converged = out.converged && all_inner_ok && !outer_vals.empty();
    if (min_inner_tail) *min_inner_tail = outer_vals.empty() ? 0 : min_tail;
    return out;
}

} // namespace

DoubleLimitReport double_limit_gap(const std::function<double(int, int)>& entry, int n_rows,
                                   int n_cols, double tol) {
    if (n_rows < 8 || n_cols < 8)
        throw InputError("double_limit_gap: sequences must have length >= 8");

    DoubleLimitReport rep;
    int tail_rc = 0, tail_cr = 0;
    // rows-first: outer over rows, inner over columns
    TailLimit rows_first = iterated_limit(
        [&](int m, int n) { return entry(m, n); }, n_rows, n_cols, tol, &tail_rc);
    // cols-first: outer over columns, inner over rows
    TailLimit cols_first = iterated_limit(
        [&](int n, int m) { return entry(m, n); }, n_cols, n_rows, tol, &tail_cr);

    rep.limit_row_first = rows_first.value;
    rep.limit_col_first = cols_first.value;
    rep.converged = rows_first.converged && cols_first.converged;
    rep.gap = rep.converged ? std::abs(rows_first.value - cols_first.value) : 0.0;
    rep.inner_tail = std::min(tail_rc, tail_cr);
    rep.outer_tail = std::min(rows_first.tail, cols_first.tail);
    return rep;
}

DoubleLimitReport double_limit_gap(const SampledKernel& k,
                                   const std::vector<std::string>& row_ids,
                                   const std::vector<std::string>& col_ids, double tol) {
    std::vector<int> ri, ci;
    ri.reserve(row_ids.size());
    ci.reserve(col_ids.size());
    for (const auto& id : row_ids) ri.push_back(k.rows().index_of(id));
    for (const auto& id : col_ids) ci.push_back(k.cols().index_of(id));
    DoubleLimitReport rep = double_limit_gap(
        [&](int m, int n) { return k(ri[m], ci[n]); }, static_cast<int>(ri.size()),
        static_cast<int>(ci.size()), tol);
    rep.row_sequence = row_ids;
    rep.col_sequence = col_ids;
    return rep;
}

namespace {

/// Index sequence approaching a target coordinate: samples sorted by
/// decreasing distance to the target, keeping the natural length.
std::vector<std::string> toward_point(const IndexSampling& s, const Eigen::VectorXd& target,
                                      int length) {
    std::vector<int> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return sup_distance(s.point(a), target) > sup_distance(s.point(b), target);
    });
    int take = std::min<int>(length, static_cast<int>(idx.size()));
    std::vector<std::string> out;
    out.reserve(take);
    for (int i = static_cast<int>(idx.size()) - take; i < static_cast<int>(idx.size()); ++i)
        out.push_back(s.id(idx[i]));
    std::reverse(out.begin(), out.end()); // farthest first, approaching the target
    return out;
}

std::vector<std::string> declaration_order(const IndexSampling& s, int length) {
    int take = std::min<int>(length, s.size());
    std::vector<std::string> out(s.ids().begin(), s.ids().begin() + take);
    return out;
}

std::vector<std::string> random_subsequence(const IndexSampling& s, int length,
                                            std::mt19937_64& rng) {
    std::vector<int> idx(s.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    int take = std::min<int>(length, s.size());
    idx.resize(take);
    std::sort(idx.begin(), idx.end()); // keep index order, drop points
    std::vector<std::string> out;
    out.reserve(take);
    for (int i : idx) out.push_back(s.id(i));
    return out;
}

std::vector<std::vector<std::string>> sequence_pool(const IndexSampling& s, int length,
                                                    std::mt19937_64& rng, int n_random) {
    std::vector<std::vector<std::string>> pool;
    if (s.size() >= 8) {
        pool.push_back(declaration_order(s, length));
        auto rev = s.ids();
        std::reverse(rev.begin(), rev.end());
        rev.resize(std::min<std::size_t>(rev.size(), length));
        pool.push_back(rev);
        Eigen::VectorXd lo = s.coords().colwise().minCoeff();
        Eigen::VectorXd hi = s.coords().colwise().maxCoeff();
        pool.push_back(toward_point(s, lo, length));
        pool.push_back(toward_point(s, hi, length));
        std::uniform_int_distribution<int> pick(0, s.size() - 1);
        for (int i = 0; i < n_random; ++i) {
            pool.push_back(toward_point(s, s.point(pick(rng)), length));
            pool.push_back(random_subsequence(s, length, rng));
        }
    }
    return pool;
}

} // namespace

DoubleLimitReport gap_search(const SampledKernel& k, const GapSearchOptions& opts) {
    if (opts.budget < 1) throw InputError("gap_search: budget must be >= 1");
    std::mt19937_64 rng(opts.seed);
    const int len = std::max(8, opts.sequence_length);
    auto row_pool = sequence_pool(k.rows(), len, rng, 3);
    auto col_pool = sequence_pool(k.cols(), len, rng, 3);

    DoubleLimitReport best;
    if (row_pool.empty() || col_pool.empty()) return best;
    int tried = 0;
    for (std::size_t a = 0; a < row_pool.size() && tried < opts.budget; ++a) {
        for (std::size_t b = 0; b < col_pool.size() && tried < opts.budget; ++b, ++tried) {
            DoubleLimitReport rep = double_limit_gap(k, row_pool[a], col_pool[b], opts.tol);
            if (rep.converged && (!best.converged || rep.gap > best.gap)) best = rep;
        }
    }
    return best;
}

Remark2Gallery remark2_gallery(int d, double tol) {
    if (d < 4) throw InputError("remark2_gallery: dimension must be >= 4");

    // x, y over the standard basis; A over the truncation projectors.
    auto basis_ids = [&](const char* prefix) {
        std::vector<std::string> ids(d);
        for (int n = 0; n < d; ++n) ids[n] = prefix + std::to_string(n + 1);
        return ids;
    };
    Eigen::MatrixXd index_coord(d, 1);
    for (int n = 0; n < d; ++n) index_coord(n, 0) = n + 1;

    IndexSampling X(basis_ids("e"), index_coord, Metric::Sup);
    IndexSampling Y(basis_ids("e"), index_coord, Metric::Sup);
    IndexSampling A(basis_ids("P"), index_coord, Metric::Sup);

    // <P_k e_n, e_m> = [n <= k][n == m]
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(d) * d * d);
    for (int n = 1; n <= d; ++n)
        for (int m = 1; m <= d; ++m)
            for (int k = 1; k <= d; ++k) vals.push_back((n == m && n <= k) ? 1.0 : 0.0);
    MultiKernel triple(X, Y, A, std::move(vals));

    Remark2Gallery g{transpose(regroup(triple, Grouping::RowsL)),
                     transpose(regroup(triple, Grouping::RowsJ)),
                     transpose(regroup(triple, Grouping::RowsI)),
                     {}, {}, {}, {}, {}};

    for (int n = 1; n <= d; ++n)
        g.diagonal_row_ids_xy.push_back("e" + std::to_string(n) + "|e" + std::to_string(n));
    g.projector_ids = basis_ids("P");

    g.witness = double_limit_gap(g.xy_by_A, g.diagonal_row_ids_xy, g.projector_ids, tol);

    std::vector<std::string> diag_xA, diag_yA, basis(basis_ids("e"));
    for (int n = 1; n <= d; ++n) {
        diag_xA.push_back("e" + std::to_string(n) + "|P" + std::to_string(n));
        diag_yA.push_back("e" + std::to_string(n) + "|P" + std::to_string(n));
    }
    g.null_xA_by_y = double_limit_gap(g.xA_by_y, diag_xA, basis, tol);
    g.null_yA_by_x = double_limit_gap(g.yA_by_x, diag_yA, basis, tol);
    return g;
}

} // namespace matkit
