#pragma once

#include "matkit/dyadic.hpp"
#include "matkit/envelope.hpp"
#include "matkit/expression.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace matkit {

enum class NormKind { Sup, Euclidean, Renormalized };
std::string to_string(NormKind k);

/// A uniformly bounded operator family on the dyadic sample
/// S = { k/2^depth : k = 1..count } of (0, t_max], validated at construction
/// to actually be a semigroup on S: the halving identities
/// T_{k h} = T_{floor(k/2) h} T_{ceil(k/2) h} must hold within tolerance for
/// every k >= 2, which covers each sampled time (and catches any single
/// perturbed operator).
class SampledSemigroup {
public:
    static SampledSemigroup from_operators(std::vector<Eigen::MatrixXd> ops, double t_max,
                                           int depth, NormKind norm = NormKind::Sup,
                                           double defect_tol = 1e-10);

    /// Fixture built as exp(s A) on S: one exponential of the step generator,
    /// then cumulative products.
    static SampledSemigroup from_generator(const Eigen::MatrixXd& generator, double t_max,
                                           int depth, NormKind norm = NormKind::Sup);

    /// Entry (i, j) given as a closed form in the time variable s.
    static SampledSemigroup from_entry_expressions(
        const std::vector<std::vector<Expression>>& entries, double t_max, int depth,
        NormKind norm = NormKind::Sup);

    int dim() const { return dim_; }
    double t_max() const { return t_max_; }
    int depth() const { return depth_; }
    std::int64_t count() const { return static_cast<std::int64_t>(ops_.size()); }
    double step() const; // 2^-depth
    double time_at(std::int64_t k) const { return static_cast<double>(k) * step(); }
    const Eigen::MatrixXd& op_at(std::int64_t k) const; // 1-based sample index
    std::optional<std::int64_t> sample_index(double t) const;

    NormKind norm_kind() const { return norm_; }
    double bound() const { return bound_; }
    double defect() const { return defect_; }

    /// Vector norm in force: sup / euclidean, or for the renormalized kind
    /// N1(x) = max(base ||x||, sup over sampled s of ||T_s x||), evaluated on
    /// demand over the whole sample.
    double vector_norm(const Eigen::VectorXd& x) const;

    /// Induced operator norm in the base norm (exact for sup; spectral for
    /// euclidean). The renormalized operator norm is probe-estimated, see
    /// estimate_operator_norms.
    double base_operator_norm(const Eigen::MatrixXd& m) const;

    /// Same operators under the equivalent contraction norm.
    friend SampledSemigroup renormalize(const SampledSemigroup& g);

private:
    SampledSemigroup() = default;
    void validate(double defect_tol);

    int dim_ = 0;
    double t_max_ = 0.0;
    int depth_ = 0;
    std::vector<Eigen::MatrixXd> ops_;
    NormKind norm_ = NormKind::Sup;
    NormKind base_ = NormKind::Sup; // underlying norm when norm_ == Renormalized
    double bound_ = 0.0;
    double defect_ = 0.0;
};

SampledSemigroup renormalize(const SampledSemigroup& g);

/// Deterministic probe vectors: basis, all +-1 sign patterns (d <= 8), and
/// seeded random unit vectors.
std::vector<Eigen::VectorXd> probe_vectors(int dim, int n_random = 64,
                                           std::uint64_t seed = 20240801);

struct OperatorNormEstimate {
    std::int64_t sample_index;
    double time;
    double norm;
};

/// Probe-estimated operator norms max_x ||T_s x|| / ||x|| (in the semigroup's
/// norm) at a deterministic spread of sampled times.
std::vector<OperatorNormEstimate> estimate_operator_norms(const SampledSemigroup& g,
                                                          int n_times = 12, int n_random = 64,
                                                          std::uint64_t seed = 20240801);

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string to_string(CheckStatus s);

/// Probe of T_s -> 1 weakly as s -> 0+ along S: Cauchy/limit inspection of
/// rho(T_s x) at the smallest sampled times. Necessary, not sufficient; a
/// pass means "hypothesis consistent".
struct WeakIdentityReport {
    CheckStatus status = CheckStatus::Inconclusive;
    double worst_deviation = 0.0;
    int worst_x = 0;       // probe indices of the worst witness
    int worst_rho = 0;
    double worst_time = 0.0;
    std::vector<std::pair<double, double>> deviation_by_time; // smallest times
};

WeakIdentityReport weak_identity_check(const SampledSemigroup& g, double tol,
                                       int n_smallest = 8);

/// Orbit function s -> rho(T_s x) on the sampled times.
GridFunction orbit_function(const SampledSemigroup& g, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& rho);

/// Pointwise shift-convergence probe of a grid function on uniformly sampled
/// times: max over s' of |f(s'+s) - f(s')| per shift s, required to fall
/// below tol at the smallest shifts.
struct ShiftConvergenceReport {
    CheckStatus status = CheckStatus::Inconclusive;
    std::vector<std::pair<double, double>> deviation_by_shift;
};

ShiftConvergenceReport shift_convergence_check(const GridFunction& f,
                                               const std::vector<std::int64_t>& shift_indices,
                                               double tol);

struct ExtensionOptions {
    double tol = 1e-6;          // envelope gap gate per entry
    double cauchy_tol = 1e-2;   // envelope Cauchy tolerance for orbit sequences
    double fit_halfwidth = 2.0; // local-fit window, in units of the sample step
    int radii_depth = 20;
    int defect_probes = 6;      // probe shifts for semigroup_defect_after
    std::vector<double> modulus_offsets; // in steps; default {1, 2, 4, 8}
};

struct ExtensionResult {
    double time = 0.0;
    Eigen::MatrixXd matrix;
    double max_entry_gap = 0.0;
    bool ok = false;
    int worst_entry_row = 0;
    int worst_entry_col = 0;
    std::string failure; // empty when ok
    double semigroup_defect_after = 0.0;
    double weak_continuity_modulus = 0.0;
};

/// Extends the semigroup to one time via the orbit-envelope pipeline: every
/// matrix entry's time function must pass the envelope bracket gate
/// (gap <= tol, Cauchy-converged); the emitted entry is a local least-squares
/// line fit around t. Caller is responsible for a passing weak-identity check.
class SemigroupExtender {
public:
    SemigroupExtender(const SampledSemigroup& g, ExtensionOptions opts = {});

    ExtensionResult extend(double t) const;

    /// Matrix-only evaluation (stored operator at sampled times, fit
    /// elsewhere); throws InvariantError if the envelope gate fails.
    Eigen::MatrixXd evaluate(double t) const;

    const SampledSemigroup& semigroup() const { return g_; }
    const ExtensionOptions& options() const { return opts_; }

private:
    Eigen::MatrixXd fit_matrix(double t) const;

    const SampledSemigroup& g_;
    ExtensionOptions opts_;
    std::vector<double> radii_;
    std::vector<double> times_;
};

ExtensionResult extend_operator(const SampledSemigroup& g, double t,
                                const ExtensionOptions& opts = {});

/// Cross-checks a batch of extensions: semigroup identities on pairs
/// (mixing extended and sampled times, sums evaluated through the extender)
/// and a weak-continuity modulus table at probe offsets.
struct VerificationReport {
    double max_defect = 0.0;
    int pairs_checked = 0;
    std::vector<std::tuple<double, double, double>> pair_defects; // (t, t', defect)
    std::vector<std::pair<double, double>> modulus_by_offset;
    CheckStatus status = CheckStatus::Inconclusive;
};

VerificationReport verify_extension(const SemigroupExtender& ext,
                                    const std::vector<ExtensionResult>& extended,
                                    int pair_budget, double tol);

} // namespace matkit
