#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace matkit {

enum class Metric { Sup, Euclidean };

/// sup-distance between two coordinate vectors: max_k |u_k - v_k|.
double sup_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// A finite set of tagged points standing in for one of the (possibly
/// infinite) index sets. Points carry coordinates in a metric space and a
/// refinement level; ids are unique opaque tags ordered by declaration.
class IndexSampling {
public:
    /// One metric block of a product sampling: coordinates [offset, offset+len)
    /// measured with `metric`; the product distance is the sup over blocks.
    struct Block {
        int offset;
        int len;
        Metric metric;
    };

    IndexSampling(std::vector<std::string> ids, Eigen::MatrixXd coords, Metric metric,
                  int level = 0, std::vector<Block> blocks = {});

    int size() const { return static_cast<int>(ids_.size()); }
    int dim() const { return static_cast<int>(coords_.cols()); }
    int level() const { return level_; }
    Metric metric() const { return metric_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const Eigen::MatrixXd& coords() const { return coords_; }
    const std::string& id(int i) const { return ids_[i]; }
    Eigen::VectorXd point(int i) const { return coords_.row(i); }

    /// Index of an id; throws InputError if absent.
    int index_of(const std::string& id) const;
    bool contains(const std::string& id) const { return by_id_.count(id) > 0; }

    /// Distance between points i and j (sup over metric blocks for products).
    double distance(int i, int j) const;

    /// True if the sampling is a strictly increasing one-dimensional grid.
    bool is_grid() const;

    /// Uniform endpoint-inclusive grid of n points on [from, to], ids "p0..".
    static IndexSampling grid(double from, double to, int n, int level = 0,
                              Metric metric = Metric::Sup);

    /// Left-edge grid from + i*(to-from)/n, i = 0..n-1. Grids of n and 2n
    /// points nest, which is what refinement families require.
    static IndexSampling nested_grid(double from, double to, int n, int level = 0,
                                     Metric metric = Metric::Sup);

    /// Points listed explicitly, one coordinate row per point.
    static IndexSampling from_points(const Eigen::MatrixXd& coords, Metric metric = Metric::Sup,
                                     int level = 0, const std::string& id_prefix = "p");

    /// Cartesian product: ids "a|b", concatenated coordinates, sup of factor
    /// distances (factor metrics preserved as blocks).
    static IndexSampling product(const IndexSampling& a, const IndexSampling& b);

    /// Checks that `finer` contains every point of `coarser` (exact coordinate
    /// match) and carries a strictly larger level. Throws InputError if not.
    static void check_refinement(const IndexSampling& coarser, const IndexSampling& finer);

private:
    std::vector<std::string> ids_;
    Eigen::MatrixXd coords_;
    Metric metric_;
    int level_;
    std::vector<Block> blocks_;
    std::unordered_map<std::string, int> by_id_;
};

/// Nested left-edge grids at n0*2^l points, l = 0..levels-1.
std::vector<IndexSampling> refinement_grids(double from, double to, int n0, int levels,
                                            Metric metric = Metric::Sup);

} // namespace matkit
