#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qsem/tensor.hpp"

namespace qsem {

// ---------------------------------------------------------------------------
// Flat vector views
// ---------------------------------------------------------------------------

// A normalized D-dimensional real vector exposed coordinate-wise: exactly the
// access pattern the entry oracles need.  Implementations must be immutable
// and safe to share across threads.
class FlatVector {
  public:
    virtual ~FlatVector() = default;

    virtual std::uint64_t dim() const = 0;
    virtual std::size_t nonzero_count() const = 0;
    virtual double entry(std::uint64_t coord) const = 0;
    // Coordinate of the l-th nonzero entry in ascending coordinate order.
    virtual std::uint64_t nonzero_coord(std::size_t l) const = 0;
    virtual double max_abs_entry() const = 0;
    virtual double squared_norm() const = 0;
    // Draws a coordinate with probability entry(coord)^2 (vector is unit norm).
    virtual std::uint64_t sample_coord(std::mt19937_64& rng) const = 0;
};

// Explicit sorted sparse storage.
class SparseVector final : public FlatVector {
  public:
    SparseVector(std::uint64_t dim, std::vector<std::pair<std::uint64_t, double>> entries);
    static std::shared_ptr<const SparseVector> from_tensor(const MeaningTensor& t);

    std::uint64_t dim() const override { return dim_; }
    std::size_t nonzero_count() const override { return entries_.size(); }
    double entry(std::uint64_t coord) const override;
    std::uint64_t nonzero_coord(std::size_t l) const override;
    double max_abs_entry() const override;
    double squared_norm() const override;
    std::uint64_t sample_coord(std::mt19937_64& rng) const override;

    const std::vector<std::pair<std::uint64_t, double>>& entries() const { return entries_; }

  private:
    std::uint64_t dim_;
    std::vector<std::pair<std::uint64_t, double>> entries_;  // ascending coord
    std::vector<double> cdf_;                                // prefix sums of entry^2
};

// Lazy tensor product of small factors under a wire gather map: the vector of
// a multi-word layer is never expanded entry by entry.  Wire k of the flat
// coordinate space reads wire `factor_wire[k]` of factor `factor_of_wire[k]`.
class ProductVector final : public FlatVector {
  public:
    ProductVector(std::vector<MeaningTensor> factors,
                  std::vector<std::size_t> factor_of_wire,
                  std::vector<std::size_t> factor_wire);

    std::uint64_t dim() const override { return dim_; }
    std::size_t nonzero_count() const override { return nnz_; }
    double entry(std::uint64_t coord) const override;
    std::uint64_t nonzero_coord(std::size_t l) const override;
    double max_abs_entry() const override;
    double squared_norm() const override;
    std::uint64_t sample_coord(std::mt19937_64& rng) const override;

    std::size_t factor_count() const { return factors_.size(); }
    const MeaningTensor& factor(std::size_t f) const { return factors_[f]; }
    std::size_t wire_count() const { return factor_of_wire_.size(); }
    std::size_t factor_of_wire(std::size_t k) const { return factor_of_wire_[k]; }
    std::size_t factor_wire(std::size_t k) const { return factor_wire_[k]; }

  private:
    struct FactorData {
        std::vector<std::pair<std::uint64_t, double>> entries;  // sorted by factor flat coord
        std::vector<double> cdf;
        double max_abs = 0;
    };

    std::vector<std::size_t> factor_coords(std::uint64_t coord, std::size_t f) const;
    void ensure_support() const;

    std::vector<MeaningTensor> factors_;
    std::vector<std::size_t> factor_of_wire_;  // aligned wire -> factor
    std::vector<std::size_t> factor_wire_;     // aligned wire -> wire within factor
    std::vector<std::size_t> wire_dim_;
    std::vector<std::uint64_t> stride_;        // row-major over aligned wires
    std::vector<FactorData> data_;
    std::uint64_t dim_ = 1;
    std::size_t nnz_ = 1;

    // Sorted support in the aligned coordinate space, built on first use.
    mutable std::once_flag support_once_;
    mutable std::vector<std::uint64_t> support_;
};

// Largest support we are willing to enumerate for ProductVector::nonzero_coord.
inline constexpr std::size_t kMaxEnumeratedSupport = std::size_t(1) << 22;

// ---------------------------------------------------------------------------
// Instances and oracles
// ---------------------------------------------------------------------------

struct OracleCounter {
    std::uint64_t o_calls = 0;
    std::uint64_t f_calls = 0;
    std::uint64_t total() const { return o_calls + f_calls; }
};

// Query s against candidates U, all unit-norm vectors of one dimension.
// d and r_max are the true maxima over {s} union U.
class ClosestVectorInstance {
  public:
    ClosestVectorInstance(std::shared_ptr<const FlatVector> query,
                          std::vector<std::shared_ptr<const FlatVector>> candidates,
                          double norm_tol = 1e-9);

    static ClosestVectorInstance from_tensors(const MeaningTensor& query,
                                              std::span<const MeaningTensor> candidates);

    std::uint64_t dim() const { return dim_; }
    std::size_t candidate_count() const { return candidates_.size(); }
    const FlatVector& query() const { return *query_; }
    const FlatVector& candidate(std::size_t j) const { return *candidates_[j]; }
    std::size_t sparsity() const { return d_; }      // d
    double r_max() const { return r_max_; }          // max squared entry

    // Exact <s|v_j>.  Used by the simulators' bookkeeping, not by the oracles.
    double exact_inner(std::size_t j) const;
    // Installs a faster exact inner-product routine (the deferred builder
    // supplies a pairwise network contraction).
    void set_exact_inner(std::function<double(std::size_t)> fn);

  private:
    std::shared_ptr<const FlatVector> query_;
    std::vector<std::shared_ptr<const FlatVector>> candidates_;
    std::uint64_t dim_ = 0;
    std::size_t d_ = 0;
    double r_max_ = 0;
    std::function<double(std::size_t)> exact_inner_;
};

// Entry oracle O(j, i) -> v_{j,i}; counts one o_call.
double oracle_O(const ClosestVectorInstance& inst, OracleCounter& counter,
                std::size_t j, std::uint64_t i);
// Support oracle F(j, l) -> coordinate of the l-th nonzero of v_j (ascending);
// counts one f_call.
std::uint64_t oracle_F(const ClosestVectorInstance& inst, OracleCounter& counter,
                       std::size_t j, std::size_t l);

// ---------------------------------------------------------------------------
// Query bound
// ---------------------------------------------------------------------------

inline constexpr double kEulerGamma = 0.5772156649015329;

struct QueryBoundParams {
    std::size_t num_candidates = 0;  // M
    std::size_t sparsity = 0;        // d
    double r_max = 0;                // max squared entry
    double eps = 0.05;
    double delta0 = 0.05;
};

// 1080 sqrt(M) * ceil(4 pi (pi+1) d^2 r_max^4 / eps)
//             * ceil(ln(81 M (ln M + gamma) / delta0) / (2 (8/pi^2 - 1/2)^2))
double query_bound(const QueryBoundParams& p);

// The two ceiling factors, exposed for reports and the simulator.
std::uint64_t queries_per_round(std::size_t d, double r_max, double eps);
std::uint64_t median_repetitions(std::size_t num_candidates, double delta0);

// ---------------------------------------------------------------------------
// Nearest-neighbor backends
// ---------------------------------------------------------------------------

struct NNResult {
    std::size_t argmax_index = 0;
    // Estimated |<s|v_j>|^2 per candidate; NaN for candidates a sublinear
    // backend never visited.
    std::vector<double> estimates;
    OracleCounter counter;
    double bound = 0;  // Eq.-style analytic bound for the instance parameters
};

struct BoundParams {
    double eps = 0.05;
    double delta0 = 0.05;
};

// Exact scan through the oracles: for every candidate, every support
// coordinate is fetched once via F and once via O.
NNResult nn_direct(const ClosestVectorInstance& inst, const BoundParams& bound = {});

struct MonteCarloOptions {
    double sample_constant = 2.0;       // c in T = ceil(c d^2 r_max^4 / eps^2 ln(M/delta))
    std::size_t sample_override = 0;    // >0: fixed sample count (diagnostics)
};

// Self-normalized sampling estimator: draws i ~ |s_i|^2, averages v_{j,i}/s_i.
NNResult nn_monte_carlo(const ClosestVectorInstance& inst, double eps, double delta,
                        std::uint64_t seed, const MonteCarloOptions& options = {});

struct QuantumSimOptions {
    double delta0_ratio = 0.5;       // delta0 = ratio * delta
    double failure_width = 3.0;      // failed rounds deviate by +-failure_width*eps
    std::size_t max_improvements = 0;  // 0: 64 + 32*ceil(log2(M+1))
};

// Query-statistics simulation of amplitude-estimation nearest neighbor:
// each estimation round returns the true overlap perturbed uniformly within
// +-eps with probability 8/pi^2 (within +-3 eps otherwise), medians of k
// rounds are taken, and a revolving-threshold search charges ceil(sqrt(M/t))
// boosted estimations per improvement.  Every round charges
// queries_per_round(d, r_max, eps) O and F queries.
NNResult nn_quantum_sim(const ClosestVectorInstance& inst, double eps, double delta,
                        std::uint64_t seed, const QuantumSimOptions& options = {});

}  // namespace qsem
