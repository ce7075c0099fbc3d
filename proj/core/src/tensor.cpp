#include "qsem/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_map>

namespace qsem {

namespace {

std::uint64_t checked_size_product(const std::vector<std::size_t>& dims) {
    std::uint64_t size = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ShapeError("wire dimension must be positive");
        if (size > (std::uint64_t(1) << 62) / d)
            throw ShapeError("tensor flat size exceeds the addressable range");
        size *= d;
    }
    return size;
}

}  // namespace

MeaningTensor::MeaningTensor(std::vector<std::size_t> wire_dims, std::string label)
    : wires_(std::move(wire_dims)), label_(std::move(label)) {
    flat_size_ = checked_size_product(wires_);
    strides_.assign(wires_.size(), 1);
    for (std::size_t k = wires_.size(); k-- > 1;)
        strides_[k - 1] = strides_[k] * wires_[k];
}

MeaningTensor MeaningTensor::scalar(double value) {
    MeaningTensor t{std::vector<std::size_t>{}};
    t.set(0, value);
    return t;
}

MeaningTensor MeaningTensor::basis_vector(std::size_t dim, std::size_t coord) {
    MeaningTensor t{std::vector<std::size_t>{dim}};
    if (coord >= dim) throw ShapeError("basis coordinate out of range");
    t.set(coord, 1.0);
    return t;
}

MeaningTensor MeaningTensor::from_dense(std::vector<std::size_t> wire_dims,
                                        std::span<const double> values, std::string label) {
    MeaningTensor t{std::move(wire_dims), std::move(label)};
    if (values.size() != t.flat_size())
        throw ShapeError("dense payload size does not match the wire dimensions");
    for (std::uint64_t i = 0; i < values.size(); ++i) t.set(i, values[i]);
    return t;
}

void MeaningTensor::set(std::uint64_t flat, double value) {
    if (flat >= flat_size_) throw ShapeError("flat index out of range");
    if (std::abs(value) <= kZeroTolerance)
        entries_.erase(flat);
    else
        entries_[flat] = value;
}

void MeaningTensor::set(std::span<const std::size_t> coords, double value) {
    set(flat_index(coords), value);
}

void MeaningTensor::add(std::uint64_t flat, double value) {
    if (flat >= flat_size_) throw ShapeError("flat index out of range");
    auto [it, inserted] = entries_.try_emplace(flat, value);
    if (!inserted) it->second += value;
    if (std::abs(it->second) <= kZeroTolerance) entries_.erase(it);
}

double MeaningTensor::at(std::uint64_t flat) const {
    if (flat >= flat_size_) throw ShapeError("flat index out of range");
    auto it = entries_.find(flat);
    return it == entries_.end() ? 0.0 : it->second;
}

double MeaningTensor::at(std::span<const std::size_t> coords) const {
    return at(flat_index(coords));
}

std::uint64_t MeaningTensor::flat_index(std::span<const std::size_t> coords) const {
    if (coords.size() != wires_.size())
        throw ShapeError("coordinate arity does not match the wire count");
    std::uint64_t flat = 0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] >= wires_[k]) throw ShapeError("coordinate out of range");
        flat += coords[k] * strides_[k];
    }
    return flat;
}

std::vector<std::size_t> MeaningTensor::unflatten(std::uint64_t flat) const {
    if (flat >= flat_size_) throw ShapeError("flat index out of range");
    std::vector<std::size_t> coords(wires_.size());
    for (std::size_t k = 0; k < wires_.size(); ++k) {
        coords[k] = static_cast<std::size_t>(flat / strides_[k]);
        flat %= strides_[k];
    }
    return coords;
}

double MeaningTensor::squared_norm() const {
    double sum = 0;
    for (const auto& [i, v] : entries_) sum += v * v;
    return sum;
}

double MeaningTensor::norm() const { return std::sqrt(squared_norm()); }

double MeaningTensor::max_abs_entry() const {
    double best = 0;
    for (const auto& [i, v] : entries_) best = std::max(best, std::abs(v));
    return best;
}

double MeaningTensor::value() const {
    if (!is_scalar()) throw ShapeError("value() requires a zero-wire tensor");
    return at(std::uint64_t{0});
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

MeaningTensor tensor_product(const MeaningTensor& a, const MeaningTensor& b) {
    std::vector<std::size_t> dims = a.wire_dims();
    dims.insert(dims.end(), b.wire_dims().begin(), b.wire_dims().end());
    MeaningTensor out{std::move(dims)};
    // Row-major concatenation: flat = fa * |b| + fb.
    for (const auto& [fa, va] : a.entries())
        for (const auto& [fb, vb] : b.entries())
            out.set(fa * b.flat_size() + fb, va * vb);
    return out;
}

MeaningTensor tensor_product(std::span<const MeaningTensor> factors) {
    if (factors.empty()) return MeaningTensor::scalar(1.0);
    MeaningTensor out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_product(out, factors[i]);
    return out;
}

MeaningTensor cap_contract(const MeaningTensor& t, std::size_t wire_i, std::size_t wire_j) {
    const auto& dims = t.wire_dims();
    if (wire_i == wire_j || wire_i >= dims.size() || wire_j >= dims.size())
        throw ShapeError("cap requires two distinct wires of the tensor");
    if (dims[wire_i] != dims[wire_j])
        throw ShapeError("cap requires wires of equal dimension, got " +
                         std::to_string(dims[wire_i]) + " and " + std::to_string(dims[wire_j]));

    std::vector<std::size_t> out_dims;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (k != wire_i && k != wire_j) out_dims.push_back(dims[k]);
    MeaningTensor out{std::move(out_dims)};

    std::vector<std::size_t> kept;
    for (const auto& [flat, v] : t.entries()) {
        const std::vector<std::size_t> coords = t.unflatten(flat);
        if (coords[wire_i] != coords[wire_j]) continue;
        kept.clear();
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (k != wire_i && k != wire_j) kept.push_back(coords[k]);
        out.add(out.flat_index(kept), v);
    }
    return out;
}

double inner_product(const MeaningTensor& a, const MeaningTensor& b) {
    if (a.wire_dims() != b.wire_dims())
        throw ShapeError("inner product requires identical wire dimensions");
    const MeaningTensor& small = a.nonzero_count() <= b.nonzero_count() ? a : b;
    const MeaningTensor& large = a.nonzero_count() <= b.nonzero_count() ? b : a;
    double sum = 0;
    for (const auto& [flat, v] : small.entries()) sum += v * large.at(flat);
    return sum;
}

MeaningTensor normalize(const MeaningTensor& t) {
    const double n = t.norm();
    if (n <= 1e-12) throw DomainError("cannot normalize a (near-)zero tensor");
    MeaningTensor out{t.wire_dims(), t.label()};
    for (const auto& [flat, v] : t.entries()) out.set(flat, v / n);
    return out;
}

SparsityStats sparsity_stats(std::span<const MeaningTensor> tensors) {
    SparsityStats stats;
    for (const MeaningTensor& t : tensors) {
        stats.max_nonzeros = std::max(stats.max_nonzeros, t.nonzero_count());
        const double m = t.max_abs_entry();
        stats.max_squared_entry = std::max(stats.max_squared_entry, m * m);
    }
    return stats;
}

// ---------------------------------------------------------------------------
// Network contraction
// ---------------------------------------------------------------------------

namespace {

using WireOrigin = std::pair<std::size_t, std::size_t>;  // (input node, input wire)

struct LiveNode {
    MeaningTensor tensor;
    std::vector<WireOrigin> origins;
    bool alive = true;
};

std::size_t origin_position(const LiveNode& node, const WireOrigin& origin) {
    auto it = std::find(node.origins.begin(), node.origins.end(), origin);
    if (it == node.origins.end())
        throw ShapeError("network edge references a wire that was already contracted");
    return static_cast<std::size_t>(it - node.origins.begin());
}

MeaningTensor permute_wires(const MeaningTensor& t, const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> dims(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) dims[k] = t.wire_dims()[perm[k]];
    MeaningTensor out{std::move(dims)};
    std::vector<std::size_t> shuffled(perm.size());
    for (const auto& [flat, v] : t.entries()) {
        const std::vector<std::size_t> coords = t.unflatten(flat);
        for (std::size_t k = 0; k < perm.size(); ++k) shuffled[k] = coords[perm[k]];
        out.set(out.flat_index(shuffled), v);
    }
    return out;
}

// Contracts nodes a and b over the listed wire position pairs.  Remaining
// wires of a come first, then b's.
LiveNode contract_pair(const LiveNode& a, const LiveNode& b,
                       const std::vector<std::pair<std::size_t, std::size_t>>& wire_pairs) {
    const auto& da = a.tensor.wire_dims();
    const auto& db = b.tensor.wire_dims();
    std::vector<bool> gone_a(da.size(), false), gone_b(db.size(), false);
    for (const auto& [wa, wb] : wire_pairs) {
        if (da[wa] != db[wb]) throw ShapeError("contracted wires disagree in dimension");
        gone_a[wa] = true;
        gone_b[wb] = true;
    }

    LiveNode out;
    std::vector<std::size_t> keep_a, keep_b;
    std::vector<std::size_t> out_dims;
    for (std::size_t k = 0; k < da.size(); ++k)
        if (!gone_a[k]) {
            keep_a.push_back(k);
            out_dims.push_back(da[k]);
            out.origins.push_back(a.origins[k]);
        }
    for (std::size_t k = 0; k < db.size(); ++k)
        if (!gone_b[k]) {
            keep_b.push_back(k);
            out_dims.push_back(db[k]);
            out.origins.push_back(b.origins[k]);
        }

    // Hash join keyed by the coordinates on the contracted wires.
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> buckets;
    buckets.reserve(b.tensor.nonzero_count());
    auto pack_key = [&](const std::vector<std::size_t>& coords, bool from_a) {
        std::uint64_t key = 0;
        for (const auto& [wa, wb] : wire_pairs) {
            const std::size_t w = from_a ? wa : wb;
            key = key * da[wa] + coords[w];
        }
        return key;
    };

    for (const auto& [flat, v] : b.tensor.entries()) {
        const std::vector<std::size_t> coords = b.tensor.unflatten(flat);
        std::uint64_t rest = 0;
        for (std::size_t k : keep_b) rest = rest * db[k] + coords[k];
        buckets[pack_key(coords, false)].emplace_back(rest, v);
    }

    std::map<std::uint64_t, double> acc;
    std::uint64_t rest_b_size = 1;
    for (std::size_t k : keep_b) rest_b_size *= db[k];
    for (const auto& [flat, v] : a.tensor.entries()) {
        const std::vector<std::size_t> coords = a.tensor.unflatten(flat);
        auto it = buckets.find(pack_key(coords, true));
        if (it == buckets.end()) continue;
        std::uint64_t rest_a = 0;
        for (std::size_t k : keep_a) rest_a = rest_a * da[k] + coords[k];
        for (const auto& [rest_b, vb] : it->second) acc[rest_a * rest_b_size + rest_b] += v * vb;
    }

    out.tensor = MeaningTensor{std::move(out_dims)};
    for (const auto& [flat, v] : acc) out.tensor.set(flat, v);
    return out;
}

}  // namespace

MeaningTensor contract_network(std::span<const MeaningTensor> nodes,
                               std::span<const NetworkEdge> edges, ContractionStats* stats) {
    if (nodes.empty()) return MeaningTensor::scalar(1.0);

    std::vector<LiveNode> live;
    live.reserve(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        LiveNode node;
        node.tensor = nodes[n];
        for (std::size_t w = 0; w < nodes[n].wire_count(); ++w) node.origins.emplace_back(n, w);
        live.push_back(std::move(node));
    }
    std::vector<std::size_t> owner(nodes.size());
    std::iota(owner.begin(), owner.end(), 0);

    ContractionStats local;
    for (const LiveNode& n : live) local.peak_wires = std::max(local.peak_wires, n.tensor.wire_count());

    struct PendingEdge {
        WireOrigin a, b;
    };
    std::vector<PendingEdge> pending;
    for (const NetworkEdge& e : edges) {
        if (e.node_a >= nodes.size() || e.node_b >= nodes.size())
            throw ShapeError("network edge references a missing node");
        if (e.wire_a >= nodes[e.node_a].wire_count() || e.wire_b >= nodes[e.node_b].wire_count())
            throw ShapeError("network edge references a missing wire");
        pending.push_back({{e.node_a, e.wire_a}, {e.node_b, e.wire_b}});
    }

    auto record = [&](const MeaningTensor& t) {
        local.peak_wires = std::max(local.peak_wires, t.wire_count());
    };

    while (!pending.empty()) {
        // Self edges first: cap within a single live node.
        bool restart = false;
        for (std::size_t e = 0; e < pending.size() && !restart; ++e) {
            const std::size_t u = owner[pending[e].a.first];
            const std::size_t v = owner[pending[e].b.first];
            if (u != v) continue;
            LiveNode& node = live[u];
            const std::size_t wi = origin_position(node, pending[e].a);
            const std::size_t wj = origin_position(node, pending[e].b);
            node.tensor = cap_contract(node.tensor, wi, wj);
            record(node.tensor);
            std::vector<WireOrigin> kept;
            for (std::size_t k = 0; k < node.origins.size(); ++k)
                if (k != wi && k != wj) kept.push_back(node.origins[k]);
            node.origins = std::move(kept);
            pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(e));
            restart = true;
        }
        if (restart) continue;

        // Adjacency over live nodes.
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> link_count;
        for (const PendingEdge& e : pending) {
            std::size_t u = owner[e.a.first], v = owner[e.b.first];
            if (u > v) std::swap(u, v);
            ++link_count[{u, v}];
        }
        std::map<std::size_t, std::vector<std::size_t>> neighbors;
        for (const auto& [pair, cnt] : link_count) {
            neighbors[pair.first].push_back(pair.second);
            neighbors[pair.second].push_back(pair.first);
        }

        // Prefer contracting a leaf into its unique neighbor; otherwise pick
        // the link whose merge yields the narrowest tensor (cycles).
        std::optional<std::pair<std::size_t, std::size_t>> chosen;
        for (const auto& [node_idx, adj] : neighbors) {
            if (adj.size() == 1) {
                std::size_t u = node_idx, v = adj[0];
                if (u > v) std::swap(u, v);
                chosen = {u, v};
                break;
            }
        }
        if (!chosen) {
            std::size_t best_width = std::numeric_limits<std::size_t>::max();
            for (const auto& [pair, cnt] : link_count) {
                const std::size_t width = live[pair.first].tensor.wire_count() +
                                          live[pair.second].tensor.wire_count() - 2 * cnt;
                if (width < best_width) {
                    best_width = width;
                    chosen = pair;
                }
            }
        }

        const auto [u, v] = *chosen;
        std::vector<std::pair<std::size_t, std::size_t>> wire_pairs;
        std::vector<PendingEdge> remaining;
        for (const PendingEdge& e : pending) {
            const std::size_t eu = owner[e.a.first], ev = owner[e.b.first];
            if (eu == u && ev == v)
                wire_pairs.emplace_back(origin_position(live[u], e.a),
                                        origin_position(live[v], e.b));
            else if (eu == v && ev == u)
                wire_pairs.emplace_back(origin_position(live[u], e.b),
                                        origin_position(live[v], e.a));
            else
                remaining.push_back(e);
        }

        LiveNode merged = contract_pair(live[u], live[v], wire_pairs);
        record(merged.tensor);
        live[u] = std::move(merged);
        live[v].alive = false;
        live[v].tensor = MeaningTensor{};
        live[v].origins.clear();
        for (std::size_t n = 0; n < owner.size(); ++n)
            if (owner[n] == v) owner[n] = u;
        pending = std::move(remaining);
    }

    // Multiply disconnected components (usually just one is left).
    std::optional<MeaningTensor> result;
    std::vector<WireOrigin> origins;
    for (const LiveNode& node : live) {
        if (!node.alive) continue;
        if (!result) {
            result = node.tensor;
            origins = node.origins;
        } else {
            result = tensor_product(*result, node.tensor);
            origins.insert(origins.end(), node.origins.begin(), node.origins.end());
            record(*result);
        }
    }

    // Open wires ordered by (node, wire) of origin.
    std::vector<std::size_t> perm(origins.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t x, std::size_t y) { return origins[x] < origins[y]; });
    MeaningTensor ordered = permute_wires(*result, perm);

    if (stats) *stats = local;
    return ordered;
}

MeaningTensor evaluate_sentence(std::span<const MeaningTensor> words, const CupMatching& matching,
                                ContractionStats* stats) {
    std::vector<std::size_t> offset(words.size(), 0);
    std::size_t total = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
        offset[w] = total;
        total += words[w].wire_count();
    }

    std::vector<int> seen(total, 0);
    auto locate = [&](std::size_t flat) -> std::pair<std::size_t, std::size_t> {
        if (flat >= total) throw ShapeError("cup index outside the sentence wires");
        std::size_t w = static_cast<std::size_t>(
            std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin() - 1);
        return {w, flat - offset[w]};
    };

    std::vector<NetworkEdge> edges;
    for (const auto& [i, j] : matching.pairs) {
        const auto [wa, pa] = locate(i);
        const auto [wb, pb] = locate(j);
        ++seen[i];
        ++seen[j];
        edges.push_back({wa, pa, wb, pb});
    }
    for (std::size_t r : matching.residual) {
        locate(r);
        ++seen[r];
    }
    for (std::size_t i = 0; i < total; ++i)
        if (seen[i] != 1)
            throw ShapeError("cup matching must cover every wire exactly once (wire " +
                             std::to_string(i) + " covered " + std::to_string(seen[i]) +
                             " times)");
    if (matching.residual.size() != 1)
        throw ShapeError("sentence evaluation requires exactly one residual wire");

    return contract_network(words, edges, stats);
}

// ---------------------------------------------------------------------------
// Storage accounting
// ---------------------------------------------------------------------------

unsigned ceil_log2_u64(std::uint64_t x) {
    if (x <= 1) return 0;
    return static_cast<unsigned>(64 - std::countl_zero(x - 1));
}

StorageEstimate storage_estimate(std::size_t noun_dim, std::size_t num_verbs) {
    if (noun_dim == 0 || num_verbs == 0)
        throw DomainError("storage estimate requires a positive dimension and verb count");
    const auto n = static_cast<unsigned __int128>(noun_dim);
    const unsigned __int128 bits = static_cast<unsigned __int128>(num_verbs) * n * n * n;
    if (bits > std::numeric_limits<std::uint64_t>::max())
        throw DomainError("storage estimate overflows 64 bits");
    StorageEstimate est;
    est.classical_bits = static_cast<std::uint64_t>(bits);
    est.qubits = ceil_log2_u64(est.classical_bits);
    return est;
}

}  // namespace qsem
