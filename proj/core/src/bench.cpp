#include "qsem/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

namespace qsem {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SweepVariable parse_sweep_variable(const std::string& name) {
    if (name == "M") return SweepVariable::NumCandidates;
    if (name == "N") return SweepVariable::Dimension;
    if (name == "d") return SweepVariable::Sparsity;
    throw DomainError("unknown sweep variable '" + name + "' (expected M, N or d)");
}

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::NumCandidates: return "M";
        case SweepVariable::Dimension: return "N";
        case SweepVariable::Sparsity: return "d";
    }
    return "?";
}

std::vector<std::size_t> parse_grid(const std::string& spec) {
    const auto bad = [&](const std::string& why) {
        return DomainError("bad grid '" + spec + "': " + why);
    };
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
        throw bad("expected start:stop:step");

    auto parse_num = [&](const std::string& s) -> std::size_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw bad("'" + s + "' is not a positive integer");
        errno = 0;
        const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
        if (errno != 0 || v == 0 || v > (1ull << 48)) throw bad("'" + s + "' is out of range");
        return static_cast<std::size_t>(v);
    };

    const std::size_t start = parse_num(spec.substr(0, c1));
    const std::size_t stop = parse_num(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::string step = spec.substr(c2 + 1);
    if (step.size() < 2 || (step[0] != 'x' && step[0] != '+')) throw bad("step must be xK or +K");
    const std::size_t k = parse_num(step.substr(1));
    if (start > stop) throw bad("start exceeds stop");
    if (step[0] == 'x' && k < 2) throw bad("geometric factor must be at least 2");

    std::vector<std::size_t> grid;
    for (std::size_t v = start; v <= stop;) {
        grid.push_back(v);
        if (step[0] == 'x') {
            if (v > stop / k) break;  // next multiply would overflow past stop
            v *= k;
        } else {
            v += k;
        }
    }
    return grid;
}

void BenchPlan::validate() const {
    if (grid.size() < 4) throw DomainError("grid needs at least 4 points");
    if (backends.empty()) throw DomainError("at least one backend is required");
    if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
    if (!(delta > 0 && delta < 1)) throw DomainError("delta must lie in (0, 1)");
    if (seeds == 0) throw DomainError("at least one seed is required");
    if (num_candidates == 0 || dimension == 0 || sparsity == 0)
        throw DomainError("fixed sweep parameters must be positive");

    std::size_t max_d = sparsity, min_n = dimension;
    if (sweep == SweepVariable::Sparsity) max_d = *std::max_element(grid.begin(), grid.end());
    if (sweep == SweepVariable::Dimension) min_n = *std::min_element(grid.begin(), grid.end());
    if (max_d > min_n)
        throw DomainError("sparsity d = " + std::to_string(max_d) +
                          " exceeds the dimension N = " + std::to_string(min_n));
}

SlopeFit fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw DomainError("slope fit needs at least two aligned points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0) || !(ys[i] > 0)) throw DomainError("slope fit needs positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0) throw DomainError("slope fit needs at least two distinct x values");

    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ssr += r * r;
        }
        fit.stderr_slope = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    }
    fit.ci95 = 1.96 * fit.stderr_slope;
    return fit;
}

std::vector<SlopeExpectation> default_slope_expectations() {
    return {{Backend::Direct, 1.0, 0.1}, {Backend::Quantum, 0.5, 0.15}};
}

namespace {

std::shared_ptr<const SparseVector> random_unit_sparse(std::mt19937_64& rng, std::size_t dim,
                                                       std::size_t nnz) {
    // Partial Fisher-Yates draw of nnz distinct coordinates.
    std::vector<std::uint64_t> coords(dim);
    std::iota(coords.begin(), coords.end(), 0);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, dim - 1);
        std::swap(coords[i], coords[pick(rng)]);
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::pair<std::uint64_t, double>> entries;
    double norm2 = 0;
    do {
        entries.clear();
        norm2 = 0;
        for (std::size_t i = 0; i < nnz; ++i) {
            const double v = gauss(rng);
            entries.emplace_back(coords[i], v);
            norm2 += v * v;
        }
    } while (norm2 <= 0);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& [c, v] : entries) v *= scale;
    return std::make_shared<SparseVector>(dim, std::move(entries));
}

// Planted overlap spectrum: candidate j agrees with the query up to a factor
// drawn from a wide band and parks the rest of its mass on one coordinate
// outside the query support. Independent random sparse vectors would all
// overlap near zero -- inside one estimator resolution cell -- which degrades
// the search dynamics every sweep is meant to expose. Each candidate carries
// exactly `sparsity` nonzeros so direct-scan costs depend on the plan alone.
ClosestVectorInstance make_synthetic(std::size_t num_candidates, std::size_t dim,
                                     std::size_t sparsity, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> band(0.1, 0.95);
    std::uniform_int_distribution<int> coin(0, 1);

    const std::size_t query_nnz = sparsity > 1 ? sparsity - 1 : 1;
    auto query = random_unit_sparse(rng, dim, query_nnz);

    std::vector<bool> in_query(dim, false);
    for (const auto& [c, v] : query->entries()) in_query[c] = true;
    std::vector<std::uint64_t> outside;
    for (std::uint64_t c = 0; c < dim; ++c)
        if (!in_query[c]) outside.push_back(c);

    std::vector<std::shared_ptr<const FlatVector>> candidates;
    candidates.reserve(num_candidates);
    for (std::size_t j = 0; j < num_candidates; ++j) {
        const double sign = coin(rng) ? 1.0 : -1.0;
        std::vector<std::pair<std::uint64_t, double>> entries;
        if (sparsity > 1) {
            const double ip = sign * band(rng);
            entries.reserve(query_nnz + 1);
            for (const auto& [c, v] : query->entries()) entries.emplace_back(c, ip * v);
            entries.emplace_back(outside[j % outside.size()], std::sqrt(1.0 - ip * ip));
        } else if (!outside.empty() && coin(rng)) {
            entries.emplace_back(outside[j % outside.size()], sign);
        } else {
            entries.emplace_back(query->nonzero_coord(0), sign);
        }
        candidates.push_back(std::make_shared<SparseVector>(dim, std::move(entries)));
    }
    return ClosestVectorInstance(std::move(query), std::move(candidates));
}

struct RunOutcome {
    double queries = 0;
    double bound = 0;
};

RunOutcome run_one(Backend backend, std::size_t num_candidates, std::size_t dim,
                   std::size_t sparsity, double eps, double delta, std::uint64_t seed) {
    ClosestVectorInstance inst = make_synthetic(num_candidates, dim, sparsity, seed);
    const std::uint64_t algo_seed = seed ^ 0x9E3779B97F4A7C15ull;
    NNResult nn;
    switch (backend) {
        case Backend::Direct: nn = nn_direct(inst, {eps, delta}); break;
        case Backend::MonteCarlo: nn = nn_monte_carlo(inst, eps, delta, algo_seed); break;
        case Backend::Quantum: nn = nn_quantum_sim(inst, eps, delta, algo_seed); break;
    }
    return {static_cast<double>(nn.counter.total()), nn.bound};
}

}  // namespace

BenchReport run_bench(const BenchPlan& plan) {
    plan.validate();

    BenchReport report;
    report.plan = plan;
    const std::size_t n_backends = plan.backends.size();
    report.cells.resize(plan.grid.size() * n_backends);

    // Each (grid point, backend) cell is one unit of work; per-run seeds are
    // functions of the plan alone, so scheduling never changes the numbers.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= report.cells.size()) return;
            const std::size_t g = cell / n_backends;
            const std::size_t b = cell % n_backends;

            std::size_t m = plan.num_candidates, n = plan.dimension, d = plan.sparsity;
            switch (plan.sweep) {
                case SweepVariable::NumCandidates: m = plan.grid[g]; break;
                case SweepVariable::Dimension: n = plan.grid[g]; break;
                case SweepVariable::Sparsity: d = plan.grid[g]; break;
            }

            std::vector<double> queries, bounds;
            for (std::size_t s = 0; s < plan.seeds; ++s) {
                const std::uint64_t seed = plan.base_seed + 1000003ull * g + s;
                const RunOutcome out =
                    run_one(plan.backends[b], m, n, d, plan.eps, plan.delta, seed);
                queries.push_back(out.queries);
                bounds.push_back(out.bound);
            }

            BenchCell& out = report.cells[cell];
            out.backend = plan.backends[b];
            out.sweep_value = plan.grid[g];
            out.runs = queries.size();
            out.mean_queries =
                std::accumulate(queries.begin(), queries.end(), 0.0) / static_cast<double>(out.runs);
            double var = 0;
            for (double q : queries) var += (q - out.mean_queries) * (q - out.mean_queries);
            out.std_queries =
                out.runs > 1 ? std::sqrt(var / static_cast<double>(out.runs - 1)) : 0.0;
            out.mean_bound =
                std::accumulate(bounds.begin(), bounds.end(), 0.0) / static_cast<double>(out.runs);
            out.min_bound = *std::min_element(bounds.begin(), bounds.end());
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                              report.cells.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    for (std::size_t b = 0; b < n_backends; ++b) {
        std::vector<double> xs, ys;
        for (std::size_t g = 0; g < plan.grid.size(); ++g) {
            xs.push_back(static_cast<double>(plan.grid[g]));
            ys.push_back(report.cells[g * n_backends + b].mean_queries);
        }
        report.slopes.emplace_back(plan.backends[b], fit_loglog_slope(xs, ys));
    }
    return report;
}

bool bounds_respected(const BenchReport& report) {
    for (const BenchCell& cell : report.cells)
        if (!(cell.mean_queries <= cell.min_bound)) return false;
    return true;
}

std::vector<Backend> slope_violations(const BenchReport& report,
                                      const std::vector<SlopeExpectation>& expectations) {
    std::vector<Backend> violators;
    for (const SlopeExpectation& exp : expectations) {
        for (const auto& [backend, fit] : report.slopes) {
            if (backend != exp.backend) continue;
            if (std::abs(fit.slope - exp.expected) > exp.tolerance) violators.push_back(backend);
        }
    }
    return violators;
}

std::string emit_plot_data(const BenchReport& report) {
    std::string out = "backend,sweep_value,mean_queries,std,bound\n";
    for (const BenchCell& cell : report.cells) {
        out += to_string(cell.backend);
        out += ',' + std::to_string(cell.sweep_value);
        out += ',' + fmt_double(cell.mean_queries);
        out += ',' + fmt_double(cell.std_queries);
        out += ',' + fmt_double(cell.min_bound);
        out += '\n';
    }
    return out;
}

std::string report_to_json(const BenchReport& report) {
    nlohmann::json doc;
    nlohmann::json plan;
    plan["sweep"] = to_string(report.plan.sweep);
    plan["grid"] = report.plan.grid;
    std::vector<std::string> backend_names;
    for (Backend b : report.plan.backends) backend_names.push_back(to_string(b));
    plan["backends"] = backend_names;
    plan["num_candidates"] = report.plan.num_candidates;
    plan["dimension"] = report.plan.dimension;
    plan["sparsity"] = report.plan.sparsity;
    plan["eps"] = report.plan.eps;
    plan["delta"] = report.plan.delta;
    plan["seeds"] = report.plan.seeds;
    plan["base_seed"] = report.plan.base_seed;
    doc["plan"] = plan;

    doc["cells"] = nlohmann::json::array();
    for (const BenchCell& cell : report.cells) {
        nlohmann::json c;
        c["backend"] = to_string(cell.backend);
        c["sweep_value"] = cell.sweep_value;
        c["mean_queries"] = cell.mean_queries;
        c["std_queries"] = cell.std_queries;
        c["mean_bound"] = cell.mean_bound;
        c["min_bound"] = cell.min_bound;
        c["runs"] = cell.runs;
        doc["cells"].push_back(c);
    }

    doc["slopes"] = nlohmann::json::array();
    for (const auto& [backend, fit] : report.slopes) {
        nlohmann::json s;
        s["backend"] = to_string(backend);
        s["slope"] = fit.slope;
        s["intercept"] = fit.intercept;
        s["stderr_slope"] = fit.stderr_slope;
        s["ci95"] = fit.ci95;
        doc["slopes"].push_back(s);
    }
    return doc.dump(2) + "\n";
}

std::string emit_storage_table(std::size_t noun_dim, const std::vector<std::size_t>& verb_counts) {
    std::string out = "N,num_verbs,classical_bits,qubits\n";
    for (std::size_t verbs : verb_counts) {
        const StorageEstimate est = storage_estimate(noun_dim, verbs);
        out += std::to_string(noun_dim);
        out += ',' + std::to_string(verbs);
        out += ',' + std::to_string(est.classical_bits);
        out += ',' + std::to_string(est.qubits);
        out += '\n';
    }
    return out;
}

}  // namespace qsem
