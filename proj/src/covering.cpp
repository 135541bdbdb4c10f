#include "matkit/covering.hpp"
#include "matkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace matkit {

VectorFamily VectorFamily::rows_of(const SampledKernel& k) {
    return VectorFamily{k.rows().ids(), k.values()};
}

VectorFamily VectorFamily::cols_of(const SampledKernel& k) {
    return VectorFamily{k.cols().ids(), k.values().transpose()};
}

double coverage_slack(double scale) { return 1e-12 * scale; }

bool check_coverage(const VectorFamily& family, const NetResult& net) {
    const double tol = net.radius + coverage_slack(family.max_abs());
    for (int i = 0; i < family.size(); ++i) {
        auto it = net.assignment.find(family.ids[i]);
        if (it == net.assignment.end()) return false;
        const Eigen::VectorXd& m = net.members[it->second].values;
        double d = (family.vectors.row(i).transpose() - m).cwiseAbs().maxCoeff();
        if (d > tol) return false;
    }
    return true;
}

namespace {

void require_finite(const VectorFamily& family) {
    if (!family.vectors.allFinite())
        throw InvariantError("vector family contains non-finite entries");
}

/// Farthest-point traversal. Emits the member order and per-vector distances
/// to the current net; stops once the farthest distance is <= stop_at (pass a
/// negative value to exhaust the family).
struct Traversal {
    std::vector<int> order;
    std::vector<double> radii;        // farthest distance after k members
    Eigen::VectorXd min_dist;         // distance of each vector to the net
    Eigen::VectorXi nearest;          // covering member index per vector
};

Traversal farthest_point(const VectorFamily& family, double stop_at) {
    require_finite(family);
    Traversal t;
    const int n = family.size();
    if (n == 0) return t;
    t.order.push_back(0);
    t.min_dist.resize(n);
    t.nearest = Eigen::VectorXi::Zero(n);
    for (int i = 0; i < n; ++i) t.min_dist[i] = family.sup_dist(0, i);
    for (;;) {
        int far = 0;
        for (int i = 1; i < n; ++i)
            if (t.min_dist[i] > t.min_dist[far]) far = i;
        double r = t.min_dist[far];
        t.radii.push_back(r);
        if (r <= stop_at || static_cast<int>(t.order.size()) == n || r == 0.0) break;
        int m = static_cast<int>(t.order.size());
        t.order.push_back(far);
        for (int i = 0; i < n; ++i) {
            double d = family.sup_dist(far, i);
            if (d < t.min_dist[i]) {
                t.min_dist[i] = d;
                t.nearest[i] = m;
            }
        }
    }
    return t;
}

} // namespace

NetResult greedy_net(const VectorFamily& family, double epsilon) {
    if (epsilon < 0.0) throw InputError("greedy_net: epsilon must be nonnegative");
    NetResult net;
    net.radius = epsilon;
    if (family.size() == 0) return net; // empty family: empty net, verified stays false
    Traversal t = farthest_point(family, epsilon);
    net.members.reserve(t.order.size());
    for (int idx : t.order)
        net.members.push_back({family.ids[idx], family.vectors.row(idx)});
    for (int i = 0; i < family.size(); ++i) net.assignment[family.ids[i]] = t.nearest[i];
    net.verified = check_coverage(family, net);
    return net;
}

int covering_count(const VectorFamily& family, double epsilon) {
    return greedy_net(family, epsilon).size();
}

std::vector<double> insertion_radii(const VectorFamily& family) {
    return farthest_point(family, -1.0).radii;
}

NetResult transfer_net(const SampledKernel& k, const NetResult& row_net, double delta) {
    if (!row_net.verified) throw InputError("transfer_net: input row net is not verified");
    if (delta <= 0.0) throw InputError("transfer_net: delta must be positive");

    // columns restricted to the net rows F
    std::vector<int> f_rows;
    f_rows.reserve(row_net.members.size());
    for (const auto& m : row_net.members) f_rows.push_back(k.rows().index_of(m.id));

    VectorFamily restricted;
    restricted.ids = k.cols().ids();
    restricted.vectors.resize(k.cols().size(), static_cast<int>(f_rows.size()));
    for (int j = 0; j < k.cols().size(); ++j)
        for (std::size_t r = 0; r < f_rows.size(); ++r)
            restricted.vectors(j, static_cast<int>(r)) = k.values()(f_rows[r], j);

    NetResult delta_net = greedy_net(restricted, delta);

    NetResult out;
    out.radius = delta + 2.0 * row_net.radius;
    out.members.reserve(delta_net.members.size());
    for (const auto& m : delta_net.members)
        out.members.push_back({m.id, k.col(k.cols().index_of(m.id))});
    out.assignment = delta_net.assignment;
    out.verified = check_coverage(VectorFamily::cols_of(k), out);
    return out;
}

NetResult sum_net(const SampledKernel& f, const SampledKernel& g, const NetResult& net_f,
                  const NetResult& net_g) {
    if (f.rows().ids() != g.rows().ids() || f.cols().ids() != g.cols().ids())
        throw InputError("sum_net: kernels do not share samplings");
    if (!net_f.verified || !net_g.verified)
        throw InputError("sum_net: input nets must be verified");

    NetResult out;
    out.radius = net_f.radius + net_g.radius;
    std::unordered_map<std::string, int> pair_index;
    for (int i = 0; i < f.rows().size(); ++i) {
        const std::string& id = f.rows().id(i);
        int a = net_f.assignment.at(id);
        int b = net_g.assignment.at(id);
        std::string tag = net_f.members[a].id + "+" + net_g.members[b].id;
        auto [it, fresh] = pair_index.emplace(tag, static_cast<int>(out.members.size()));
        if (fresh)
            out.members.push_back({tag, net_f.members[a].values + net_g.members[b].values});
        out.assignment[id] = it->second;
    }
    SampledKernel sum(f.rows(), f.cols(), f.values() + g.values());
    out.verified = check_coverage(VectorFamily::rows_of(sum), out);
    return out;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Bounded: return "bounded";
        case Classification::Growing: return "growing";
        default: return "inconclusive";
    }
}

Classification classify_counts(const Eigen::MatrixXi& counts) {
    const int ne = static_cast<int>(counts.rows());
    const int nl = static_cast<int>(counts.cols());
    if (nl < 3) return Classification::Inconclusive;
    bool bounded = true;
    for (int e = 0; e < ne; ++e)
        if (counts(e, nl - 1) != counts(e, nl - 2)) bounded = false;
    if (bounded) return Classification::Bounded;
    for (int e = 0; e < ne; ++e)
        for (int l = 0; l + 2 < nl; ++l)
            if (counts(e, l + 1) >= 1.5 * counts(e, l) && counts(e, l + 2) >= 1.5 * counts(e, l + 1))
                return Classification::Growing;
    return Classification::Inconclusive;
}

CompactnessProfile compactness_profile(const std::vector<SampledKernel>& kernels,
                                       std::vector<double> epsilons) {
    if (epsilons.empty()) throw InputError("compactness_profile: need at least one epsilon");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (epsilons[i] >= epsilons[i - 1])
            throw InputError("compactness_profile: epsilons must be strictly decreasing");

    CompactnessProfile p;
    p.epsilons = std::move(epsilons);
    p.counts.resize(static_cast<int>(p.epsilons.size()), static_cast<int>(kernels.size()));
    for (std::size_t l = 0; l < kernels.size(); ++l) {
        p.levels.push_back(kernels[l].rows().level());
        std::vector<double> radii = insertion_radii(VectorFamily::rows_of(kernels[l]));
        for (std::size_t e = 0; e < p.epsilons.size(); ++e) {
            // count = first k with r_k <= eps; radii[k-1] is the radius after k members
            int k = 1;
            while (k <= static_cast<int>(radii.size()) && radii[k - 1] > p.epsilons[e]) ++k;
            p.counts(static_cast<int>(e), static_cast<int>(l)) =
                std::min(k, kernels[l].rows().size());
        }
    }
    p.classification = classify_counts(p.counts);
    return p;
}

double joint_continuity_modulus(const SampledKernel& k, double h) {
    if (!k.rows().is_grid() || !k.cols().is_grid())
        throw InputError("joint_continuity_modulus: both samplings must be one-dimensional grids");
    if (h < 0.0) throw InputError("joint_continuity_modulus: h must be nonnegative");
    const auto& xs = k.rows().coords();
    const auto& ys = k.cols().coords();
    double mod = 0.0;
    for (int i = 0; i < k.rows().size(); ++i) {
        for (int i2 = i; i2 < k.rows().size() && xs(i2, 0) - xs(i, 0) <= h; ++i2) {
            for (int j = 0; j < k.cols().size(); ++j) {
                for (int j2 = 0; j2 < k.cols().size(); ++j2) {
                    if (std::abs(ys(j2, 0) - ys(j, 0)) > h) continue;
                    mod = std::max(mod, std::abs(k(i, j) - k(i2, j2)));
                }
            }
        }
    }
    return mod;
}

} // namespace matkit
