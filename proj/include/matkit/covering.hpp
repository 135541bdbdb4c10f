#pragma once

#include "matkit/kernel.hpp"

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace matkit {

/// An indexed family of equal-length real vectors (the rows or columns of a
/// kernel, viewed in the sup-norm space over the opposite sampling).
struct VectorFamily {
    std::vector<std::string> ids;
    Eigen::MatrixXd vectors; // one vector per row

    int size() const { return static_cast<int>(vectors.rows()); }
    double sup_dist(int a, int b) const {
        return (vectors.row(a) - vectors.row(b)).cwiseAbs().maxCoeff();
    }
    double max_abs() const { return vectors.size() == 0 ? 0.0 : vectors.cwiseAbs().maxCoeff(); }

    static VectorFamily rows_of(const SampledKernel& k);
    static VectorFamily cols_of(const SampledKernel& k);
};

/// A finite net covering a vector family at a given sup-norm radius, plus the
/// assignment of every family member to the net member that covers it.
struct NetResult {
    struct Member {
        std::string id;          // family id for greedy nets, composite tag otherwise
        Eigen::VectorXd values;
    };
    std::vector<Member> members;
    double radius = 0.0;
    bool verified = false;
    std::unordered_map<std::string, int> assignment; // family id -> member index

    int size() const { return static_cast<int>(members.size()); }
};

/// Coverage slack absorbing float rounding: distances compare against
/// radius + 1e-12 * scale (scale = max |entry| of the family).
double coverage_slack(double scale);

/// Exhaustively checks that every family vector lies within radius (+slack)
/// of its assigned member.
bool check_coverage(const VectorFamily& family, const NetResult& net);

/// Farthest-point greedy epsilon-net. Starts from the first declared vector
/// and repeatedly adds the vector farthest (sup-distance) from the current
/// net while that distance exceeds epsilon; ties break to the earliest
/// declared vector. Deterministic; the result is exhaustively verified.
NetResult greedy_net(const VectorFamily& family, double epsilon);

/// Size of the greedy net: a deterministic upper bound on N(epsilon).
int covering_count(const VectorFamily& family, double epsilon);

/// Insertion radii r_1 >= r_2 >= ... of the farthest-point traversal
/// (r_k = farthest distance to the net after k members). The greedy count at
/// any epsilon is 1 + #{k : r_k > epsilon}; one traversal serves every
/// epsilon of a profile.
std::vector<double> insertion_radii(const VectorFamily& family);

/// Row-net to column-net transfer: columns restricted to the net rows F get a
/// greedy delta-net; two columns that differ by at most delta at the F-entries
/// differ by at most delta + 2*epsilon everywhere, so the corresponding full
/// columns form a verified (delta + 2*epsilon)-net.
NetResult transfer_net(const SampledKernel& k, const NetResult& row_net, double delta);

/// Net for the rows of f+g out of nets for the rows of f and of g: member
/// candidates are sums u+v over assigned net pairs; radius eps_f + eps_g.
NetResult sum_net(const SampledKernel& f, const SampledKernel& g, const NetResult& net_f,
                  const NetResult& net_g);

enum class Classification { Bounded, Growing, Inconclusive };
std::string to_string(Classification c);

/// Covering-number table over a refinement family: N[epsilon, level], with the
/// finite-witness classification rule. "bounded" when the finest level repeats
/// the previous one at every epsilon; "growing" when some epsilon's count
/// jumps by a factor >= 1.5 across consecutive levels twice in a row.
struct CompactnessProfile {
    std::vector<double> epsilons; // decreasing
    std::vector<int> levels;      // increasing
    Eigen::MatrixXi counts;       // [epsilon, level]
    Classification classification = Classification::Inconclusive;
};

Classification classify_counts(const Eigen::MatrixXi& counts);

/// Profiles the rows of each kernel in a refinement family. Fewer than three
/// levels is reported inconclusive, not an error.
CompactnessProfile compactness_profile(const std::vector<SampledKernel>& kernels,
                                       std::vector<double> epsilons);

/// Discrete joint-continuity modulus on a product grid: max |k(i,j)-k(i',j')|
/// over pairs with max(dist(i,i'), dist(j,j')) <= h.
double joint_continuity_modulus(const SampledKernel& k, double h);

} // namespace matkit
