#include "matkit/sampling.hpp"
#include "matkit/errors.hpp"

#include <cmath>
#include <unordered_set>

namespace matkit {

double sup_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size())
        throw InputError("sup_distance: length mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
    return (u - v).cwiseAbs().maxCoeff();
}

namespace {

double block_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, Metric m) {
    if (m == Metric::Sup) return (u - v).cwiseAbs().maxCoeff();
    return (u - v).norm();
}

} // namespace

IndexSampling::IndexSampling(std::vector<std::string> ids, Eigen::MatrixXd coords, Metric metric,
                             int level, std::vector<Block> blocks)
    : ids_(std::move(ids)), coords_(std::move(coords)), metric_(metric), level_(level),
      blocks_(std::move(blocks)) {
    if (static_cast<int>(ids_.size()) != coords_.rows())
        throw InputError("IndexSampling: id count does not match coordinate rows");
    if (!coords_.allFinite()) throw InvariantError("IndexSampling: non-finite coordinates");
    by_id_.reserve(ids_.size());
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i) {
        if (!by_id_.emplace(ids_[i], i).second)
            throw InputError("IndexSampling: duplicate id '" + ids_[i] + "'");
    }
}

int IndexSampling::index_of(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw InputError("IndexSampling: unknown id '" + id + "'");
    return it->second;
}

double IndexSampling::distance(int i, int j) const {
    if (blocks_.empty()) return block_distance(coords_.row(i), coords_.row(j), metric_);
    double d = 0.0;
    for (const Block& b : blocks_) {
        Eigen::VectorXd u = coords_.row(i).segment(b.offset, b.len);
        Eigen::VectorXd v = coords_.row(j).segment(b.offset, b.len);
        d = std::max(d, block_distance(u, v, b.metric));
    }
    return d;
}

bool IndexSampling::is_grid() const {
    if (dim() != 1 || size() == 0) return false;
    for (int i = 1; i < size(); ++i)
        if (coords_(i, 0) <= coords_(i - 1, 0)) return false;
    return true;
}

IndexSampling IndexSampling::grid(double from, double to, int n, int level, Metric metric) {
    if (n < 1) throw InputError("grid: need at least one point");
    Eigen::MatrixXd c(n, 1);
    for (int i = 0; i < n; ++i)
        c(i, 0) = n == 1 ? from : from + (to - from) * static_cast<double>(i) / (n - 1);
    std::vector<std::string> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = "p" + std::to_string(i);
    return IndexSampling(std::move(ids), std::move(c), metric, level);
}

IndexSampling IndexSampling::nested_grid(double from, double to, int n, int level, Metric metric) {
    if (n < 1) throw InputError("nested_grid: need at least one point");
    Eigen::MatrixXd c(n, 1);
    for (int i = 0; i < n; ++i) c(i, 0) = from + (to - from) * static_cast<double>(i) / n;
    std::vector<std::string> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = "p" + std::to_string(i);
    return IndexSampling(std::move(ids), std::move(c), metric, level);
}

IndexSampling IndexSampling::from_points(const Eigen::MatrixXd& coords, Metric metric, int level,
                                         const std::string& id_prefix) {
    std::vector<std::string> ids(coords.rows());
    for (int i = 0; i < coords.rows(); ++i) ids[i] = id_prefix + std::to_string(i);
    return IndexSampling(std::move(ids), coords, metric, level);
}

IndexSampling IndexSampling::product(const IndexSampling& a, const IndexSampling& b) {
    const int n = a.size() * b.size();
    Eigen::MatrixXd c(n, a.dim() + b.dim());
    std::vector<std::string> ids;
    ids.reserve(n);
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < b.size(); ++j) {
            int r = i * b.size() + j;
            c.row(r).head(a.dim()) = a.coords().row(i);
            c.row(r).tail(b.dim()) = b.coords().row(j);
            ids.push_back(a.id(i) + "|" + b.id(j));
        }
    }
    std::vector<Block> blocks{{0, a.dim(), a.metric()}, {a.dim(), b.dim(), b.metric()}};
    return IndexSampling(std::move(ids), std::move(c), Metric::Sup,
                         std::max(a.level(), b.level()), std::move(blocks));
}

void IndexSampling::check_refinement(const IndexSampling& coarser, const IndexSampling& finer) {
    if (finer.level() <= coarser.level())
        throw InputError("refinement must strictly increase the level");
    if (finer.dim() != coarser.dim())
        throw InputError("refinement must preserve coordinate dimension");
    // exact containment of coordinate rows
    for (int i = 0; i < coarser.size(); ++i) {
        bool found = false;
        for (int j = 0; j < finer.size() && !found; ++j)
            found = (finer.coords().row(j) == coarser.coords().row(i));
        if (!found)
            throw InputError("refinement is missing point '" + coarser.id(i) + "' of the coarser level");
    }
}

std::vector<IndexSampling> refinement_grids(double from, double to, int n0, int levels,
                                            Metric metric) {
    std::vector<IndexSampling> out;
    out.reserve(levels);
    for (int l = 0; l < levels; ++l)
        out.push_back(IndexSampling::nested_grid(from, to, n0 << l, l, metric));
    for (std::size_t l = 1; l < out.size(); ++l)
        IndexSampling::check_refinement(out[l - 1], out[l]);
    return out;
}

} // namespace matkit
