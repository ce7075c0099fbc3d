#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsem/closest_vector.hpp"
#include "qsem/deferred.hpp"

namespace qsem {

// ---------------------------------------------------------------------------
// Sweep plans over synthetic closest-vector instances
// ---------------------------------------------------------------------------

enum class SweepVariable { NumCandidates, Dimension, Sparsity };  // M, N, d

SweepVariable parse_sweep_variable(const std::string& name);  // "M" | "N" | "d"
std::string to_string(SweepVariable v);

// Grid spec "a:b:x2" (geometric) or "a:b:+k" (additive), inclusive of b when hit.
std::vector<std::size_t> parse_grid(const std::string& spec);

struct BenchPlan {
    SweepVariable sweep = SweepVariable::NumCandidates;
    std::vector<std::size_t> grid;
    std::vector<Backend> backends;
    std::size_t num_candidates = 16;  // M when not swept
    std::size_t dimension = 64;       // N when not swept
    std::size_t sparsity = 8;         // d when not swept
    double eps = 0.05;
    double delta = 0.1;
    std::size_t seeds = 20;
    std::uint64_t base_seed = 1;

    // Throws DomainError on inconsistent plans (empty grid, fewer than 4
    // points, d > N, no backends, eps/delta out of range).
    void validate() const;
};

struct BenchCell {
    Backend backend;
    std::size_t sweep_value = 0;
    double mean_queries = 0;   // mean o_calls + f_calls over seeds
    double std_queries = 0;    // population-normalized (n-1) standard deviation
    double mean_bound = 0;     // mean per-instance analytic bound
    double min_bound = 0;
    std::size_t runs = 0;
};

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    double ci95 = 0;  // 1.96 * stderr_slope
};

// Ordinary least squares on (log x, log y).
SlopeFit fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchReport {
    BenchPlan plan;
    std::vector<BenchCell> cells;                      // grid-major, backend-minor
    std::vector<std::pair<Backend, SlopeFit>> slopes;  // per backend, grid order
};

// Expected log-log slopes per backend on an M sweep, with tolerances.
struct SlopeExpectation {
    Backend backend;
    double expected;
    double tolerance;
};
std::vector<SlopeExpectation> default_slope_expectations();

// Runs the plan over synthetic instances: unit vectors drawn uniformly on the
// sphere of a random d-coordinate support.  Deterministic in (plan, seeds);
// grid points run in a worker pool with per-run RNGs and counters.
BenchReport run_bench(const BenchPlan& plan);

// True when every cell respects mean_queries <= min_bound.
bool bounds_respected(const BenchReport& report);

// Checks measured slopes against expectations (only meaningful for M sweeps).
// Returns the offending backends, empty when all pass.
std::vector<Backend> slope_violations(const BenchReport& report,
                                      const std::vector<SlopeExpectation>& expectations);

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

// CSV: backend,sweep_value,mean_queries,std,bound
std::string emit_plot_data(const BenchReport& report);

// JSON document with plan, per-cell statistics and fitted slopes.
std::string report_to_json(const BenchReport& report);

// CSV: N,num_verbs,classical_bits,qubits (storage accounting rows).
std::string emit_storage_table(std::size_t noun_dim, const std::vector<std::size_t>& verb_counts);

}  // namespace qsem
