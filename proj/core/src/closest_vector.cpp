#include "qsem/closest_vector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qsem {

// ---------------------------------------------------------------------------
// SparseVector
// ---------------------------------------------------------------------------

SparseVector::SparseVector(std::uint64_t dim,
                           std::vector<std::pair<std::uint64_t, double>> entries)
    : dim_(dim), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    double acc = 0;
    for (std::size_t l = 0; l < entries_.size(); ++l) {
        const auto& [coord, v] = entries_[l];
        if (coord >= dim_) throw ShapeError("sparse entry coordinate out of range");
        if (l > 0 && entries_[l - 1].first == coord)
            throw ShapeError("duplicate sparse entry coordinate");
        if (std::abs(v) <= kZeroTolerance) throw ShapeError("stored sparse entries must be nonzero");
        acc += v * v;
        cdf_.push_back(acc);
    }
}

std::shared_ptr<const SparseVector> SparseVector::from_tensor(const MeaningTensor& t) {
    std::vector<std::pair<std::uint64_t, double>> entries(t.entries().begin(), t.entries().end());
    return std::make_shared<SparseVector>(t.flat_size(), std::move(entries));
}

double SparseVector::entry(std::uint64_t coord) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), coord,
                               [](const auto& e, std::uint64_t c) { return e.first < c; });
    return (it != entries_.end() && it->first == coord) ? it->second : 0.0;
}

std::uint64_t SparseVector::nonzero_coord(std::size_t l) const {
    if (l >= entries_.size()) throw DomainError("support index out of range");
    return entries_[l].first;
}

double SparseVector::max_abs_entry() const {
    double best = 0;
    for (const auto& [c, v] : entries_) best = std::max(best, std::abs(v));
    return best;
}

double SparseVector::squared_norm() const { return cdf_.empty() ? 0.0 : cdf_.back(); }

std::uint64_t SparseVector::sample_coord(std::mt19937_64& rng) const {
    if (entries_.empty()) throw DomainError("cannot sample from an empty vector");
    std::uniform_real_distribution<double> unif(0.0, cdf_.back());
    const double u = unif(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t l = std::min<std::size_t>(it - cdf_.begin(), entries_.size() - 1);
    return entries_[l].first;
}

// ---------------------------------------------------------------------------
// ProductVector
// ---------------------------------------------------------------------------

ProductVector::ProductVector(std::vector<MeaningTensor> factors,
                             std::vector<std::size_t> factor_of_wire,
                             std::vector<std::size_t> factor_wire)
    : factors_(std::move(factors)),
      factor_of_wire_(std::move(factor_of_wire)),
      factor_wire_(std::move(factor_wire)) {
    if (factor_of_wire_.size() != factor_wire_.size())
        throw ShapeError("wire gather maps disagree in length");

    // Every wire of every factor must be used exactly once.
    std::vector<std::vector<int>> used(factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f)
        used[f].assign(factors_[f].wire_count(), 0);
    for (std::size_t k = 0; k < factor_of_wire_.size(); ++k) {
        const std::size_t f = factor_of_wire_[k];
        if (f >= factors_.size()) throw ShapeError("gather references a missing factor");
        if (factor_wire_[k] >= factors_[f].wire_count())
            throw ShapeError("gather references a missing factor wire");
        ++used[f][factor_wire_[k]];
    }
    for (const auto& u : used)
        for (int c : u)
            if (c != 1) throw ShapeError("gather must cover every factor wire exactly once");

    wire_dim_.resize(factor_of_wire_.size());
    for (std::size_t k = 0; k < factor_of_wire_.size(); ++k)
        wire_dim_[k] = factors_[factor_of_wire_[k]].wire_dims()[factor_wire_[k]];
    stride_.assign(wire_dim_.size(), 1);
    for (std::size_t k = wire_dim_.size(); k-- > 1;) stride_[k - 1] = stride_[k] * wire_dim_[k];
    dim_ = 1;
    for (std::size_t k = 0; k < wire_dim_.size(); ++k) {
        if (dim_ > (std::uint64_t(1) << 62) / wire_dim_[k])
            throw ShapeError("product vector dimension exceeds the addressable range");
        dim_ *= wire_dim_[k];
    }

    nnz_ = 1;
    data_.resize(factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        const auto& entries = factors_[f].entries();
        if (entries.empty()) throw DomainError("product factor has empty support");
        if (nnz_ > kMaxEnumeratedSupport * 1024 / entries.size())
            throw ShapeError("product vector support exceeds the representable range");
        nnz_ *= entries.size();
        FactorData d;
        double acc = 0;
        for (const auto& [flat, v] : entries) {
            d.entries.emplace_back(flat, v);
            acc += v * v;
            d.cdf.push_back(acc);
            d.max_abs = std::max(d.max_abs, std::abs(v));
        }
        data_[f] = std::move(d);
    }
}

std::vector<std::size_t> ProductVector::factor_coords(std::uint64_t coord, std::size_t f) const {
    std::vector<std::size_t> coords(factors_[f].wire_count(), 0);
    for (std::size_t k = 0; k < factor_of_wire_.size(); ++k) {
        if (factor_of_wire_[k] != f) continue;
        coords[factor_wire_[k]] = static_cast<std::size_t>((coord / stride_[k]) % wire_dim_[k]);
    }
    return coords;
}

double ProductVector::entry(std::uint64_t coord) const {
    if (coord >= dim_) throw ShapeError("coordinate out of range");
    double product = 1.0;
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        const double v = factors_[f].at(factor_coords(coord, f));
        if (v == 0.0) return 0.0;
        product *= v;
    }
    return product;
}

void ProductVector::ensure_support() const {
    std::call_once(support_once_, [this] {
        if (nnz_ > kMaxEnumeratedSupport)
            throw DomainError("product support too large to enumerate sequentially (" +
                              std::to_string(nnz_) + " entries)");
        std::vector<std::uint64_t> support;
        support.reserve(nnz_);
        std::vector<std::size_t> pick(factors_.size(), 0);
        // Odometer over the factor supports.
        while (true) {
            std::uint64_t coord = 0;
            for (std::size_t k = 0; k < factor_of_wire_.size(); ++k) {
                const std::size_t f = factor_of_wire_[k];
                const std::uint64_t flat = data_[f].entries[pick[f]].first;
                const std::vector<std::size_t> coords = factors_[f].unflatten(flat);
                coord += coords[factor_wire_[k]] * stride_[k];
            }
            support.push_back(coord);
            std::size_t f = factors_.size();
            while (f-- > 0) {
                if (++pick[f] < data_[f].entries.size()) break;
                pick[f] = 0;
                if (f == 0) {
                    std::sort(support.begin(), support.end());
                    support_ = std::move(support);
                    return;
                }
            }
        }
    });
}

std::uint64_t ProductVector::nonzero_coord(std::size_t l) const {
    ensure_support();
    if (l >= support_.size()) throw DomainError("support index out of range");
    return support_[l];
}

double ProductVector::max_abs_entry() const {
    double product = 1.0;
    for (const FactorData& d : data_) product *= d.max_abs;
    return product;
}

double ProductVector::squared_norm() const {
    double product = 1.0;
    for (const FactorData& d : data_) product *= d.cdf.back();
    return product;
}

std::uint64_t ProductVector::sample_coord(std::mt19937_64& rng) const {
    // Independent per-factor sampling realizes the |entry|^2 distribution.
    std::vector<std::size_t> pick(factors_.size());
    for (std::size_t f = 0; f < factors_.size(); ++f) {
        const auto& d = data_[f];
        std::uniform_real_distribution<double> unif(0.0, d.cdf.back());
        const double u = unif(rng);
        const auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
        pick[f] = std::min<std::size_t>(it - d.cdf.begin(), d.entries.size() - 1);
    }
    std::uint64_t coord = 0;
    for (std::size_t k = 0; k < factor_of_wire_.size(); ++k) {
        const std::size_t f = factor_of_wire_[k];
        const std::vector<std::size_t> coords = factors_[f].unflatten(data_[f].entries[pick[f]].first);
        coord += coords[factor_wire_[k]] * stride_[k];
    }
    return coord;
}

// ---------------------------------------------------------------------------
// Instance and oracles
// ---------------------------------------------------------------------------

ClosestVectorInstance::ClosestVectorInstance(
    std::shared_ptr<const FlatVector> query,
    std::vector<std::shared_ptr<const FlatVector>> candidates, double norm_tol)
    : query_(std::move(query)), candidates_(std::move(candidates)) {
    if (!query_) throw DomainError("instance requires a query vector");
    if (candidates_.empty()) throw DomainError("instance requires at least one candidate");
    dim_ = query_->dim();

    auto check = [&](const FlatVector& v, const std::string& what) {
        if (v.dim() != dim_)
            throw ShapeError(what + " dimension " + std::to_string(v.dim()) +
                             " differs from the query dimension " + std::to_string(dim_));
        if (std::abs(v.squared_norm() - 1.0) > norm_tol)
            throw DomainError(what + " is not normalized (|norm^2 - 1| = " +
                              std::to_string(std::abs(v.squared_norm() - 1.0)) + ")");
    };
    check(*query_, "query");
    d_ = query_->nonzero_count();
    const double qm = query_->max_abs_entry();
    r_max_ = qm * qm;
    for (std::size_t j = 0; j < candidates_.size(); ++j) {
        if (!candidates_[j]) throw DomainError("null candidate vector");
        check(*candidates_[j], "candidate " + std::to_string(j));
        d_ = std::max(d_, candidates_[j]->nonzero_count());
        const double m = candidates_[j]->max_abs_entry();
        r_max_ = std::max(r_max_, m * m);
    }
}

ClosestVectorInstance ClosestVectorInstance::from_tensors(
    const MeaningTensor& query, std::span<const MeaningTensor> candidates) {
    std::vector<std::shared_ptr<const FlatVector>> cs;
    cs.reserve(candidates.size());
    for (const MeaningTensor& c : candidates) cs.push_back(SparseVector::from_tensor(c));
    return ClosestVectorInstance(SparseVector::from_tensor(query), std::move(cs));
}

double ClosestVectorInstance::exact_inner(std::size_t j) const {
    if (j >= candidates_.size()) throw DomainError("candidate index out of range");
    if (exact_inner_) return exact_inner_(j);
    const FlatVector& v = *candidates_[j];
    double ip = 0;
    for (std::size_t l = 0; l < v.nonzero_count(); ++l) {
        const std::uint64_t c = v.nonzero_coord(l);
        ip += query_->entry(c) * v.entry(c);
    }
    return ip;
}

void ClosestVectorInstance::set_exact_inner(std::function<double(std::size_t)> fn) {
    exact_inner_ = std::move(fn);
}

double oracle_O(const ClosestVectorInstance& inst, OracleCounter& counter, std::size_t j,
                std::uint64_t i) {
    if (j >= inst.candidate_count()) throw DomainError("oracle O: candidate index out of range");
    if (i >= inst.dim()) throw DomainError("oracle O: coordinate out of range");
    ++counter.o_calls;
    return inst.candidate(j).entry(i);
}

std::uint64_t oracle_F(const ClosestVectorInstance& inst, OracleCounter& counter, std::size_t j,
                       std::size_t l) {
    if (j >= inst.candidate_count()) throw DomainError("oracle F: candidate index out of range");
    if (l >= inst.candidate(j).nonzero_count())
        throw DomainError("oracle F: support index out of range");
    ++counter.f_calls;
    return inst.candidate(j).nonzero_coord(l);
}

// ---------------------------------------------------------------------------
// Query bound
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

void validate_probability(double value, const char* name) {
    if (!(value > 0.0 && value < 1.0))
        throw DomainError(std::string(name) + " must lie strictly between 0 and 1");
}

std::uint64_t checked_ceil(double x, const char* what) {
    if (!(x >= 0) || x > 9.2e18) throw DomainError(std::string(what) + " out of range");
    return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace

std::uint64_t queries_per_round(std::size_t d, double r_max, double eps) {
    if (d == 0) throw DomainError("sparsity must be positive");
    if (!(r_max > 0)) throw DomainError("r_max must be positive");
    if (!(eps > 0)) throw DomainError("eps must be positive");
    const double dd = static_cast<double>(d);
    return checked_ceil(4.0 * kPi * (kPi + 1.0) * dd * dd * r_max * r_max * r_max * r_max / eps,
                        "per-round query count");
}

std::uint64_t median_repetitions(std::size_t num_candidates, double delta0) {
    if (num_candidates == 0) throw DomainError("candidate count must be positive");
    validate_probability(delta0, "delta0");
    const double m = static_cast<double>(num_candidates);
    const double denom = 2.0 * std::pow(8.0 / (kPi * kPi) - 0.5, 2.0);
    const double arg = 81.0 * m * (std::log(m) + kEulerGamma) / delta0;
    return checked_ceil(std::log(arg) / denom, "median repetition count");
}

double query_bound(const QueryBoundParams& p) {
    const std::uint64_t per_round = queries_per_round(p.sparsity, p.r_max, p.eps);
    const std::uint64_t reps = median_repetitions(p.num_candidates, p.delta0);
    return 1080.0 * std::sqrt(static_cast<double>(p.num_candidates)) *
           static_cast<double>(per_round) * static_cast<double>(reps);
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

namespace {

std::size_t argmax_lowest(const std::vector<double>& values) {
    std::size_t best = values.size();
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (std::isnan(values[j])) continue;
        if (best == values.size() || values[j] > values[best]) best = j;
    }
    if (best == values.size()) throw DomainError("no estimates to take an argmax over");
    return best;
}

}  // namespace

NNResult nn_direct(const ClosestVectorInstance& inst, const BoundParams& bound) {
    NNResult r;
    const std::size_t m = inst.candidate_count();
    r.estimates.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double ip = 0;
        const std::size_t nnz = inst.candidate(j).nonzero_count();
        for (std::size_t l = 0; l < nnz; ++l) {
            const std::uint64_t i = oracle_F(inst, r.counter, j, l);
            ip += inst.query().entry(i) * oracle_O(inst, r.counter, j, i);
        }
        r.estimates[j] = ip * ip;
    }
    r.argmax_index = argmax_lowest(r.estimates);
    r.bound = query_bound({m, inst.sparsity(), inst.r_max(), bound.eps, bound.delta0});
    return r;
}

NNResult nn_monte_carlo(const ClosestVectorInstance& inst, double eps, double delta,
                        std::uint64_t seed, const MonteCarloOptions& options) {
    if (!(eps > 0)) throw DomainError("eps must be positive");
    validate_probability(delta, "delta");

    const std::size_t m = inst.candidate_count();
    const double d = static_cast<double>(inst.sparsity());
    const double r2 = inst.r_max() * inst.r_max();
    std::size_t samples = options.sample_override;
    if (samples == 0) {
        const double t = options.sample_constant * d * d * r2 * r2 / (eps * eps) *
                         std::log(static_cast<double>(m) / delta);
        samples = static_cast<std::size_t>(checked_ceil(t, "sample count"));
        samples = std::max<std::size_t>(samples, 1);
    }

    std::mt19937_64 rng(seed);
    NNResult r;
    r.estimates.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        double acc = 0;
        for (std::size_t t = 0; t < samples; ++t) {
            const std::uint64_t i = inst.query().sample_coord(rng);
            const double si = inst.query().entry(i);
            acc += oracle_O(inst, r.counter, j, i) / si;
        }
        const double mean = acc / static_cast<double>(samples);
        r.estimates[j] = mean * mean;
    }
    r.argmax_index = argmax_lowest(r.estimates);
    r.bound = query_bound({m, inst.sparsity(), inst.r_max(), eps, delta / 2.0});
    return r;
}

NNResult nn_quantum_sim(const ClosestVectorInstance& inst, double eps, double delta,
                        std::uint64_t seed, const QuantumSimOptions& options) {
    if (!(eps > 0)) throw DomainError("eps must be positive");
    validate_probability(delta, "delta");
    const double delta0 = options.delta0_ratio * delta;
    validate_probability(delta0, "delta0");

    const std::size_t m = inst.candidate_count();
    const std::uint64_t per_round = queries_per_round(inst.sparsity(), inst.r_max(), eps);
    const std::uint64_t k = median_repetitions(m, delta0);
    const double success_p = 8.0 / (kPi * kPi);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // True overlaps are simulator bookkeeping, not oracle traffic.
    std::vector<double> truth(m, std::numeric_limits<double>::quiet_NaN());
    auto true_overlap = [&](std::size_t j) {
        if (std::isnan(truth[j])) {
            const double ip = inst.exact_inner(j);
            truth[j] = ip * ip;
        }
        return truth[j];
    };

    std::uint64_t rounds = 0;
    std::vector<double> draws(k);
    auto estimate = [&](std::size_t j) {
        rounds += k;
        const double t = true_overlap(j);
        for (std::uint64_t i = 0; i < k; ++i) {
            const bool ok = unit(rng) < success_p;
            const double width = (ok ? 1.0 : options.failure_width) * eps;
            draws[i] = t + (2.0 * unit(rng) - 1.0) * width;
        }
        std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(k / 2),
                         draws.end());
        return draws[k / 2];
    };

    NNResult r;
    r.estimates.assign(m, std::numeric_limits<double>::quiet_NaN());

    std::uniform_int_distribution<std::size_t> pick_any(0, m - 1);
    std::size_t champion = pick_any(rng);
    r.estimates[champion] = estimate(champion);

    std::size_t max_improvements = options.max_improvements;
    if (max_improvements == 0)
        max_improvements = 64 + 32 * static_cast<std::size_t>(ceil_log2_u64(m + 1));

    std::vector<std::size_t> marked;
    for (std::size_t step = 0; step < max_improvements; ++step) {
        // The marking comparator works at the estimator's resolution: overlaps
        // within eps of the champion are indistinguishable from it, so only
        // strictly resolvable improvements get marked. Without this the search
        // thrashes between near-ties at full Grover cost per bounce.
        const double threshold = r.estimates[champion] + eps;
        marked.clear();
        for (std::size_t j = 0; j < m; ++j)
            if (j != champion && true_overlap(j) > threshold) marked.push_back(j);
        if (marked.empty()) break;

        // Grover search over the marked set with boosted marking estimates.
        const double t = static_cast<double>(marked.size());
        rounds += static_cast<std::uint64_t>(
                      std::ceil(std::sqrt(static_cast<double>(m) / t))) *
                  k;
        std::uniform_int_distribution<std::size_t> pick_marked(0, marked.size() - 1);
        const std::size_t found = marked[pick_marked(rng)];
        r.estimates[found] = estimate(found);
        champion = argmax_lowest(r.estimates);
    }

    r.counter.o_calls = rounds * per_round;
    r.counter.f_calls = rounds * per_round;
    r.argmax_index = champion;
    r.bound = query_bound({m, inst.sparsity(), inst.r_max(), eps, delta0});
    return r;
}

}  // namespace qsem
