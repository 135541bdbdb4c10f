#include "matkit/semigroup.hpp"
#include "matkit/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

namespace matkit {

DyadicTime DyadicTime::of(std::int64_t num, int depth) {
    if (depth < 0) throw InputError("DyadicTime: negative depth");
    while (depth > 0 && num % 2 == 0) {
        num /= 2;
        --depth;
    }
    return DyadicTime{num, depth};
}

double DyadicTime::value() const { return std::ldexp(static_cast<double>(num), -depth); }

DyadicTime DyadicTime::operator+(const DyadicTime& o) const {
    int d = std::max(depth, o.depth);
    std::int64_t a = num << (d - depth);
    std::int64_t b = o.num << (d - o.depth);
    return DyadicTime::of(a + b, d);
}

bool DyadicTime::operator<(const DyadicTime& o) const {
    int d = std::max(depth, o.depth);
    return (num << (d - depth)) < (o.num << (d - o.depth));
}

std::optional<std::int64_t> snap_to_sample(double t, int depth, std::int64_t count) {
    double scaled = std::ldexp(t, depth);
    double k = std::nearbyint(scaled);
    if (k < 1 || k > static_cast<double>(count)) return std::nullopt;
    if (std::abs(scaled - k) > 1e-9 * std::max(1.0, std::abs(scaled))) return std::nullopt;
    return static_cast<std::int64_t>(k);
}

std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::Sup: return "sup";
        case NormKind::Euclidean: return "euclidean";
        default: return "renormalized";
    }
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        default: return "inconclusive";
    }
}

double SampledSemigroup::step() const { return std::ldexp(1.0, -depth_); }

const Eigen::MatrixXd& SampledSemigroup::op_at(std::int64_t k) const {
    if (k < 1 || k > count()) throw InputError("SampledSemigroup: sample index out of range");
    return ops_[static_cast<std::size_t>(k - 1)];
}

std::optional<std::int64_t> SampledSemigroup::sample_index(double t) const {
    return snap_to_sample(t, depth_, count());
}

double SampledSemigroup::vector_norm(const Eigen::VectorXd& x) const {
    NormKind base = norm_ == NormKind::Renormalized ? base_ : norm_;
    double n = base == NormKind::Sup ? x.cwiseAbs().maxCoeff() : x.norm();
    if (norm_ != NormKind::Renormalized) return n;
    for (const auto& op : ops_) {
        Eigen::VectorXd y = op * x;
        n = std::max(n, base == NormKind::Sup ? y.cwiseAbs().maxCoeff() : y.norm());
    }
    return n;
}

double SampledSemigroup::base_operator_norm(const Eigen::MatrixXd& m) const {
    NormKind base = norm_ == NormKind::Renormalized ? base_ : norm_;
    if (base == NormKind::Sup) return m.cwiseAbs().rowwise().sum().maxCoeff();
    return m.jacobiSvd().singularValues()(0);
}

void SampledSemigroup::validate(double defect_tol) {
    if (dim_ < 1) throw InputError("SampledSemigroup: dimension must be positive");
    if (ops_.empty()) throw InputError("SampledSemigroup: empty time sample");
    bound_ = 0.0;
    for (const auto& op : ops_) {
        if (op.rows() != dim_ || op.cols() != dim_)
            throw InputError("SampledSemigroup: operator dimension mismatch");
        if (!op.allFinite()) throw InvariantError("SampledSemigroup: non-finite operator entry");
        bound_ = std::max(bound_, base_operator_norm(op));
    }
    // semigroup defect on S through the halving identities
    defect_ = 0.0;
    std::int64_t worst_k = 0;
    for (std::int64_t k = 2; k <= count(); ++k) {
        std::int64_t a = k / 2, b = k - k / 2;
        double d = base_operator_norm(op_at(k) - op_at(a) * op_at(b));
        if (d > defect_) {
            defect_ = d;
            worst_k = k;
        }
    }
    double tol = defect_tol * std::max(1.0, bound_ * bound_);
    if (defect_ > tol)
        throw InvariantError(
            "SampledSemigroup: semigroup defect invariant violated: ||T_s T_s' - T_{s+s'}|| = " +
            std::to_string(defect_) + " at sample " + std::to_string(worst_k) +
            " exceeds tolerance " + std::to_string(tol));
}

namespace {

std::int64_t sample_count(double t_max, int depth) {
    if (depth < 1 || depth > 30) throw InputError("SampledSemigroup: depth out of range [1, 30]");
    double scaled = std::ldexp(t_max, depth);
    double k = std::nearbyint(scaled);
    if (t_max <= 0.0 || std::abs(scaled - k) > 1e-9 || k < 1)
        throw InputError("SampledSemigroup: t_max must be a positive dyadic multiple of 2^-depth");
    return static_cast<std::int64_t>(k);
}

} // namespace

SampledSemigroup SampledSemigroup::from_operators(std::vector<Eigen::MatrixXd> ops, double t_max,
                                                  int depth, NormKind norm, double defect_tol) {
    if (norm == NormKind::Renormalized)
        throw InputError("SampledSemigroup: construct with a base norm, then renormalize");
    if (ops.empty()) throw InputError("SampledSemigroup: empty operator list");
    if (sample_count(t_max, depth) != static_cast<std::int64_t>(ops.size()))
        throw InputError("SampledSemigroup: operator count does not match t_max * 2^depth");
    SampledSemigroup g;
    g.dim_ = static_cast<int>(ops.front().rows());
    g.t_max_ = t_max;
    g.depth_ = depth;
    g.ops_ = std::move(ops);
    g.norm_ = g.base_ = norm;
    g.validate(defect_tol);
    return g;
}

SampledSemigroup SampledSemigroup::from_generator(const Eigen::MatrixXd& generator, double t_max,
                                                  int depth, NormKind norm) {
    if (generator.rows() != generator.cols())
        throw InputError("SampledSemigroup: generator must be square");
    const std::int64_t K = sample_count(t_max, depth);
    Eigen::MatrixXd step = (std::ldexp(1.0, -depth) * generator).exp();
    std::vector<Eigen::MatrixXd> ops;
    ops.reserve(K);
    Eigen::MatrixXd cur = Eigen::MatrixXd::Identity(generator.rows(), generator.cols());
    for (std::int64_t k = 0; k < K; ++k) {
        cur = cur * step;
        ops.push_back(cur);
    }
    return from_operators(std::move(ops), t_max, depth, norm);
}

SampledSemigroup SampledSemigroup::from_entry_expressions(
    const std::vector<std::vector<Expression>>& entries, double t_max, int depth, NormKind norm) {
    const int d = static_cast<int>(entries.size());
    for (const auto& row : entries)
        if (static_cast<int>(row.size()) != d)
            throw InputError("SampledSemigroup: entries_expr must be a square matrix");
    const std::int64_t K = sample_count(t_max, depth);
    const double h = std::ldexp(1.0, -depth);
    std::vector<Eigen::MatrixXd> ops;
    ops.reserve(K);
    for (std::int64_t k = 1; k <= K; ++k) {
        Expression::Env env{{"s", static_cast<double>(k) * h}, {"t", static_cast<double>(k) * h}};
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = entries[i][j].eval(env);
        ops.push_back(std::move(m));
    }
    return from_operators(std::move(ops), t_max, depth, norm);
}

SampledSemigroup renormalize(const SampledSemigroup& g) {
    if (g.norm_ == NormKind::Renormalized) return g;
    SampledSemigroup out = g;
    out.base_ = g.norm_;
    out.norm_ = NormKind::Renormalized;
    auto norms = estimate_operator_norms(out);
    out.bound_ = 0.0;
    for (const auto& e : norms) out.bound_ = std::max(out.bound_, e.norm);
    return out;
}

std::vector<Eigen::VectorXd> probe_vectors(int dim, int n_random, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> probes;
    for (int i = 0; i < dim; ++i) probes.push_back(Eigen::VectorXd::Unit(dim, i));
    if (dim <= 8) {
        for (std::uint32_t bits = 0; bits < (1u << dim); ++bits) {
            Eigen::VectorXd v(dim);
            for (int i = 0; i < dim; ++i) v[i] = (bits >> i) & 1 ? -1.0 : 1.0;
            probes.push_back(std::move(v));
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < n_random; ++i) {
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; ++j) v[j] = gauss(rng);
        double n = v.norm();
        probes.push_back(n > 0 ? (v / n).eval() : Eigen::VectorXd::Unit(dim, 0));
    }
    return probes;
}

std::vector<OperatorNormEstimate> estimate_operator_norms(const SampledSemigroup& g, int n_times,
                                                          int n_random, std::uint64_t seed) {
    auto probes = probe_vectors(g.dim(), n_random, seed);
    std::vector<double> probe_norms;
    probe_norms.reserve(probes.size());
    for (const auto& x : probes) probe_norms.push_back(g.vector_norm(x));

    std::vector<std::int64_t> ks;
    ks.push_back(1);
    for (int i = 1; i + 1 < n_times; ++i)
        ks.push_back(std::max<std::int64_t>(1, g.count() * i / (n_times - 1)));
    ks.push_back(g.count());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<OperatorNormEstimate> out;
    for (std::int64_t k : ks) {
        double worst = 0.0;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            if (probe_norms[p] == 0.0) continue;
            worst = std::max(worst, g.vector_norm(g.op_at(k) * probes[p]) / probe_norms[p]);
        }
        out.push_back({k, g.time_at(k), worst});
    }
    return out;
}

WeakIdentityReport weak_identity_check(const SampledSemigroup& g, double tol, int n_smallest) {
    WeakIdentityReport rep;
    // need enough resolution near 0+ for the limit probe to mean anything
    std::int64_t below = g.count() / 16;
    if (below < 4) {
        rep.status = CheckStatus::Inconclusive;
        return rep;
    }
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.dim(), g.dim());
    n_smallest = static_cast<int>(std::min<std::int64_t>(n_smallest, g.count()));
    double worst4 = 0.0;
    for (int k = 1; k <= n_smallest; ++k) {
        Eigen::MatrixXd diff = g.op_at(k) - id;
        Eigen::Index row = 0, col = 0;
        double dev = diff.cwiseAbs().maxCoeff(&row, &col); // probe pair x = e_col, rho = e_row
        rep.deviation_by_time.emplace_back(g.time_at(k), dev);
        if (dev > rep.worst_deviation) {
            rep.worst_deviation = dev;
            rep.worst_x = static_cast<int>(col);
            rep.worst_rho = static_cast<int>(row);
            rep.worst_time = g.time_at(k);
        }
        if (k <= 4) worst4 = std::max(worst4, dev);
    }
    rep.status = worst4 <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    return rep;
}

GridFunction orbit_function(const SampledSemigroup& g, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& rho) {
    if (x.size() != g.dim() || rho.size() != g.dim())
        throw InputError("orbit_function: dimension mismatch");
    std::vector<double> pts(g.count()), vals(g.count());
    for (std::int64_t k = 1; k <= g.count(); ++k) {
        pts[k - 1] = g.time_at(k);
        vals[k - 1] = rho.dot(g.op_at(k) * x);
    }
    return GridFunction(0.0, g.t_max(), std::move(pts), std::move(vals));
}

ShiftConvergenceReport shift_convergence_check(const GridFunction& f,
                                               const std::vector<std::int64_t>& shift_indices,
                                               double tol) {
    ShiftConvergenceReport rep;
    const auto& v = f.values();
    const std::int64_t n = f.size();
    const auto& pts = f.points();
    if (n >= 2) {
        double h0 = pts[1] - pts[0];
        for (std::int64_t k = 1; k + 1 < n; ++k)
            if (std::abs((pts[k + 1] - pts[k]) - h0) > 1e-9 * h0)
                throw InputError("shift_convergence_check: sample must be uniformly spaced");
    }
    std::vector<std::int64_t> shifts = shift_indices;
    std::sort(shifts.begin(), shifts.end());
    for (std::int64_t s : shifts) {
        if (s < 1 || s >= n) throw InputError("shift_convergence_check: shift outside the sample");
        double dev = 0.0;
        for (std::int64_t k = 0; k + s < n; ++k) dev = std::max(dev, std::abs(v[k + s] - v[k]));
        rep.deviation_by_shift.emplace_back(f.points()[s - 1] - f.a(), dev);
    }
    if (rep.deviation_by_shift.empty()) {
        rep.status = CheckStatus::Inconclusive;
        return rep;
    }
    bool pass = true;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, rep.deviation_by_shift.size()); ++i)
        pass = pass && rep.deviation_by_shift[i].second <= tol;
    rep.status = pass ? CheckStatus::Pass : CheckStatus::Fail;
    return rep;
}

SemigroupExtender::SemigroupExtender(const SampledSemigroup& g, ExtensionOptions opts)
    : g_(g), opts_(std::move(opts)) {
    double r0 = g_.t_max() / 4.0;
    radii_.resize(opts_.radii_depth);
    for (int k = 0; k < opts_.radii_depth; ++k) radii_[k] = r0 * std::ldexp(1.0, -k);
    times_.resize(g_.count());
    for (std::int64_t k = 1; k <= g_.count(); ++k) times_[k - 1] = g_.time_at(k);
    if (opts_.modulus_offsets.empty()) opts_.modulus_offsets = {1.0, 2.0, 4.0, 8.0};
}

Eigen::MatrixXd SemigroupExtender::fit_matrix(double t) const {
    const double h = g_.step();
    const double w = opts_.fit_halfwidth * h;
    auto lo = std::lower_bound(times_.begin(), times_.end(), t - w);
    auto hi = std::upper_bound(times_.begin(), times_.end(), t + w);
    std::int64_t first = lo - times_.begin(), last = hi - times_.begin(); // [first, last)
    // a line fit needs two samples; widen symmetrically if the window is starved
    while (last - first < 2) {
        if (first > 0) --first;
        if (last < static_cast<std::int64_t>(times_.size())) ++last;
        if (first == 0 && last == static_cast<std::int64_t>(times_.size())) break;
    }
    const std::int64_t n = last - first;
    Eigen::MatrixXd design(n, 2);
    for (std::int64_t r = 0; r < n; ++r) {
        design(r, 0) = 1.0;
        design(r, 1) = times_[first + r] - t;
    }
    const auto qr = design.colPivHouseholderQr();
    Eigen::MatrixXd out(g_.dim(), g_.dim());
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < g_.dim(); ++i)
        for (int j = 0; j < g_.dim(); ++j) {
            for (std::int64_t r = 0; r < n; ++r) rhs[r] = g_.op_at(first + r + 1)(i, j);
            out(i, j) = qr.solve(rhs)[0];
        }
    return out;
}

ExtensionResult SemigroupExtender::extend(double t) const {
    if (!(t > 0.0) || t > g_.t_max())
        throw InputError("extend: time must lie in (0, t_max]; the sub-semigroup excludes 0");

    ExtensionResult res;
    res.time = t;
    res.max_entry_gap = 0.0;
    res.ok = true;

    // envelope gate per matrix entry's orbit function
    std::vector<double> vals(times_.size());
    for (int i = 0; i < g_.dim() && res.ok; ++i) {
        for (int j = 0; j < g_.dim(); ++j) {
            for (std::int64_t k = 0; k < g_.count(); ++k) vals[k] = g_.op_at(k + 1)(i, j);
            GridFunction orbit(0.0, g_.t_max(), times_, vals);
            EnvelopeValue ev = envelope_at(orbit, t, radii_, opts_.cauchy_tol);
            if (ev.gap > res.max_entry_gap) {
                res.max_entry_gap = ev.gap;
                res.worst_entry_row = i;
                res.worst_entry_col = j;
            }
            if (ev.gap > opts_.tol || !ev.converged) {
                res.ok = false;
                res.worst_entry_row = i;
                res.worst_entry_col = j;
                res.max_entry_gap = std::max(res.max_entry_gap, ev.gap);
                res.failure = ev.gap > opts_.tol
                                  ? "entry envelope gap " + std::to_string(ev.gap) +
                                        " exceeds tolerance"
                                  : "entry envelope did not converge";
                break;
            }
        }
    }
    if (!res.ok) return res;

    res.matrix = fit_matrix(t);

    // defect against sampled shifts, sums evaluated through the extender
    std::int64_t K = g_.count();
    std::vector<std::int64_t> shift_ks = {1, 3, K / 16, K / 8, K / 4, K / 2};
    shift_ks.resize(std::min<std::size_t>(shift_ks.size(), opts_.defect_probes));
    for (std::int64_t k : shift_ks) {
        if (k < 1) continue;
        double s = g_.time_at(k);
        if (t + s > g_.t_max()) continue;
        Eigen::MatrixXd sum_op = evaluate(t + s);
        double d = g_.base_operator_norm(res.matrix * g_.op_at(k) - sum_op);
        res.semigroup_defect_after = std::max(res.semigroup_defect_after, d);
    }

    // weak-continuity modulus at probe offsets
    const double h = g_.step();
    for (double off : opts_.modulus_offsets) {
        double mod = 0.0;
        for (double sgn : {-1.0, 1.0}) {
            double u = t + sgn * off * h;
            if (!(u > 0.0) || u > g_.t_max()) continue;
            mod = std::max(mod, (evaluate(u) - res.matrix).cwiseAbs().maxCoeff());
        }
        res.weak_continuity_modulus = std::max(res.weak_continuity_modulus, mod);
    }
    return res;
}

Eigen::MatrixXd SemigroupExtender::evaluate(double t) const {
    if (auto k = g_.sample_index(t)) return g_.op_at(*k);
    if (!(t > 0.0) || t > g_.t_max())
        throw InputError("evaluate: time must lie in (0, t_max]");
    return fit_matrix(t);
}

ExtensionResult extend_operator(const SampledSemigroup& g, double t, const ExtensionOptions& opts) {
    return SemigroupExtender(g, opts).extend(t);
}

VerificationReport verify_extension(const SemigroupExtender& ext,
                                    const std::vector<ExtensionResult>& extended, int pair_budget,
                                    double tol) {
    if (extended.size() < 2)
        throw InputError("verify_extension: need at least two extension results");
    const SampledSemigroup& g = ext.semigroup();
    VerificationReport rep;

    // extended x extended, then extended x sampled, until the budget runs out
    std::vector<std::pair<double, Eigen::MatrixXd>> pool;
    for (const auto& e : extended)
        if (e.ok) pool.emplace_back(e.time, e.matrix);
    std::vector<std::int64_t> sample_ks = {1, g.count() / 8, g.count() / 4, g.count() / 2};
    for (std::size_t a = 0; a < pool.size() && rep.pairs_checked < pair_budget; ++a) {
        for (std::size_t b = a; b < pool.size() && rep.pairs_checked < pair_budget; ++b) {
            double sum = pool[a].first + pool[b].first;
            if (sum > g.t_max()) continue;
            double d = g.base_operator_norm(pool[a].second * pool[b].second - ext.evaluate(sum));
            rep.pair_defects.emplace_back(pool[a].first, pool[b].first, d);
            rep.max_defect = std::max(rep.max_defect, d);
            ++rep.pairs_checked;
        }
    }
    for (std::size_t a = 0; a < pool.size() && rep.pairs_checked < pair_budget; ++a) {
        for (std::int64_t k : sample_ks) {
            if (rep.pairs_checked >= pair_budget) break;
            if (k < 1 || pool[a].first + g.time_at(k) > g.t_max()) continue;
            double s = g.time_at(k);
            double d = g.base_operator_norm(pool[a].second * g.op_at(k) - ext.evaluate(pool[a].first + s));
            rep.pair_defects.emplace_back(pool[a].first, s, d);
            rep.max_defect = std::max(rep.max_defect, d);
            ++rep.pairs_checked;
        }
    }

    const double h = g.step();
    for (double off : {1.0, 2.0, 4.0, 8.0}) {
        double mod = 0.0;
        for (const auto& [t, m] : pool) {
            for (double sgn : {-1.0, 1.0}) {
                double u = t + sgn * off * h;
                if (!(u > 0.0) || u > g.t_max()) continue;
                mod = std::max(mod, (ext.evaluate(u) - m).cwiseAbs().maxCoeff());
            }
        }
        rep.modulus_by_offset.emplace_back(off * h, mod);
    }

    rep.status = rep.pairs_checked == 0 ? CheckStatus::Inconclusive
                 : rep.max_defect <= tol ? CheckStatus::Pass
                                         : CheckStatus::Fail;
    return rep;
}

} // namespace matkit
