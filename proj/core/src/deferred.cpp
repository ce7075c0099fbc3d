#include "qsem/deferred.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_set>

namespace qsem {

TypedSentence make_typed_sentence(std::vector<std::string> tokens,
                                  std::vector<PregroupType> types,
                                  std::vector<MeaningTensor> tensors, bool fragment) {
    if (tokens.size() != types.size() || tokens.size() != tensors.size())
        throw ShapeError("tokens, types and tensors must align");
    if (tokens.empty()) throw ShapeError("empty sentence");
    for (std::size_t w = 0; w < tokens.size(); ++w) {
        if (tensors[w].wire_count() != types[w].size())
            throw ShapeError("word '" + tokens[w] + "' has " +
                             std::to_string(tensors[w].wire_count()) + " wires but type '" +
                             to_string(types[w]) + "'");
    }

    TypedSentence s;
    s.tokens = std::move(tokens);
    s.types = std::move(types);
    s.tensors = std::move(tensors);
    s.matching = fragment ? reduce_fragment(s.types) : reduce(s.types);
    s.tree = build_tree(s.tokens.size(), s.matching, flatten_types(s.types).word_of_index);
    return s;
}

// ---------------------------------------------------------------------------
// Deferred construction
// ---------------------------------------------------------------------------

DeferredInstance build_deferred(const TypedSentence& sentence,
                                std::span<const MeaningTensor> classifiers) {
    const std::size_t n_words = sentence.tensors.size();
    if (classifiers.empty()) throw DomainError("at least one classifier is required");

    // Wire offsets in the flattened simple-type space.
    std::vector<std::size_t> offset(n_words, 0);
    std::size_t total_wires = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
        offset[w] = total_wires;
        total_wires += sentence.tensors[w].wire_count();
    }
    auto locate = [&](std::size_t flat) -> std::pair<std::size_t, std::size_t> {
        const std::size_t w = static_cast<std::size_t>(
            std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin() - 1);
        return {w, flat - offset[w]};
    };

    if (sentence.matching.residual.size() != 1)
        throw ShapeError("deferred construction requires exactly one residual wire");
    const auto [head, head_wire] = locate(sentence.matching.residual[0]);

    const Layering layering = two_coloring(sentence.tree);
    if (layering.layer[head] != Layer::Top)
        throw ShapeError("the head word must sit in the Top layer");

    const std::size_t residual_dim = sentence.tensors[head].wire_dims()[head_wire];
    for (std::size_t i = 0; i < classifiers.size(); ++i) {
        if (classifiers[i].wire_count() != 1 || classifiers[i].wire_dims()[0] != residual_dim)
            throw ShapeError("classifier " + std::to_string(i) + " must be a vector of dimension " +
                             std::to_string(residual_dim));
    }

    // partner[(word, wire)] on the opposite layer, per cup.
    struct Partner {
        bool classifier = false;
        std::size_t word = 0, wire = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Partner> partner;
    for (const auto& [i, j] : sentence.matching.pairs) {
        const auto a = locate(i);
        const auto b = locate(j);
        if (layering.layer[a.first] == layering.layer[b.first])
            throw ShapeError("cup joins two words of the same layer; not a two-layer derivation");
        partner[a] = {false, b.first, b.second};
        partner[b] = {false, a.first, a.second};
    }
    partner[{head, head_wire}] = {true, 0, 0};

    // Aligned wires: Top words in sentence order, wires in type order.
    std::vector<std::size_t> top_words, bottom_words;
    for (std::size_t w = 0; w < n_words; ++w)
        (layering.layer[w] == Layer::Top ? top_words : bottom_words).push_back(w);

    std::vector<MeaningTensor> s_factors;
    std::vector<std::size_t> s_factor_of_wire, s_factor_wire;
    std::vector<Partner> aligned_partner;
    for (std::size_t f = 0; f < top_words.size(); ++f) {
        const std::size_t w = top_words[f];
        s_factors.push_back(sentence.tensors[w]);
        for (std::size_t p = 0; p < sentence.tensors[w].wire_count(); ++p) {
            auto it = partner.find({w, p});
            if (it == partner.end())
                throw ShapeError("top wire (" + std::to_string(w) + "," + std::to_string(p) +
                                 ") is neither cupped nor the residual");
            s_factor_of_wire.push_back(f);
            s_factor_wire.push_back(p);
            aligned_partner.push_back(it->second);
        }
    }
    const std::size_t aligned_count = aligned_partner.size();

    std::size_t bottom_wire_total = 0;
    for (std::size_t w : bottom_words) bottom_wire_total += sentence.tensors[w].wire_count();
    if (bottom_wire_total + 1 != aligned_count)
        throw ShapeError("bottom wires plus the classifier do not match the top wires");

    // U factors ordered by their first aligned slot (classifier included).
    constexpr std::size_t kClassifierWord = static_cast<std::size_t>(-1);
    std::map<std::size_t, std::size_t> first_slot;  // bottom word (or classifier) -> min slot
    for (std::size_t k = 0; k < aligned_count; ++k) {
        const Partner& p = aligned_partner[k];
        const std::size_t key = p.classifier ? kClassifierWord : p.word;
        auto it = first_slot.find(key);
        if (it == first_slot.end() || k < it->second) first_slot[key] = k;
    }
    std::vector<std::size_t> u_order;  // bottom words / classifier sentinel
    for (const auto& [key, slot] : first_slot) u_order.push_back(key);
    std::sort(u_order.begin(), u_order.end(),
              [&](std::size_t a, std::size_t b) { return first_slot[a] < first_slot[b]; });

    std::map<std::size_t, std::size_t> u_factor_index;
    for (std::size_t f = 0; f < u_order.size(); ++f) u_factor_index[u_order[f]] = f;

    std::vector<std::size_t> u_factor_of_wire(aligned_count), u_factor_wire(aligned_count);
    for (std::size_t k = 0; k < aligned_count; ++k) {
        const Partner& p = aligned_partner[k];
        const std::size_t key = p.classifier ? kClassifierWord : p.word;
        u_factor_of_wire[k] = u_factor_index.at(key);
        u_factor_wire[k] = p.classifier ? 0 : p.wire;
    }

    // wire_permutation maps each aligned slot to its partner's position in
    // U's own layout: factors in sorted order, each factor's wires in place.
    std::vector<std::size_t> u_factor_offset(u_order.size(), 0);
    for (std::size_t f = 0, pos = 0; f < u_order.size(); ++f) {
        u_factor_offset[f] = pos;
        pos += u_order[f] == kClassifierWord ? 1 : sentence.tensors[u_order[f]].wire_count();
    }
    std::vector<std::size_t> wire_permutation(aligned_count);
    for (std::size_t k = 0; k < aligned_count; ++k)
        wire_permutation[k] = u_factor_offset[u_factor_of_wire[k]] + u_factor_wire[k];
    {
        std::unordered_set<std::size_t> seen(wire_permutation.begin(), wire_permutation.end());
        if (seen.size() != aligned_count)
            throw ShapeError("wire permutation is not a bijection");
    }

    auto query = std::make_shared<ProductVector>(s_factors, s_factor_of_wire, s_factor_wire);
    std::vector<std::shared_ptr<const FlatVector>> candidates;
    candidates.reserve(classifiers.size());
    for (const MeaningTensor& v : classifiers) {
        std::vector<MeaningTensor> u_factors;
        for (std::size_t key : u_order)
            u_factors.push_back(key == kClassifierWord ? v : sentence.tensors[key]);
        candidates.push_back(
            std::make_shared<ProductVector>(std::move(u_factors), u_factor_of_wire, u_factor_wire));
    }

    DeferredInstance inst{
        ClosestVectorInstance(std::move(query), std::move(candidates)),
        layering,
        std::move(wire_permutation),
        0,
        head,
    };

    // Exact inner products contract the cup network pairwise; the classifier
    // hangs off the head's residual wire as one extra node.
    std::size_t max_arity = 1;
    for (const MeaningTensor& t : sentence.tensors)
        max_arity = std::max(max_arity, t.wire_count());

    std::vector<MeaningTensor> nodes = sentence.tensors;
    nodes.emplace_back();  // classifier slot, filled per candidate
    std::vector<NetworkEdge> edges;
    for (const auto& [i, j] : sentence.matching.pairs) {
        const auto a = locate(i);
        const auto b = locate(j);
        edges.push_back({a.first, a.second, b.first, b.second});
    }
    edges.push_back({head, head_wire, n_words, 0});

    std::vector<MeaningTensor> classifier_copy(classifiers.begin(), classifiers.end());
    const std::size_t wire_cap = max_arity + 1;
    auto contract_inner = [nodes, edges, classifier_copy, wire_cap](std::size_t i) mutable {
        nodes.back() = classifier_copy.at(i);
        ContractionStats stats;
        const MeaningTensor result = contract_network(nodes, edges, &stats);
        if (stats.peak_wires > wire_cap)
            throw ShapeError("deferred contraction materialized a tensor wider than the word "
                             "arities allow");
        return result.value();
    };

    // One construction-time contraction records the peak width and validates
    // the network shape.
    {
        std::vector<MeaningTensor> probe_nodes = nodes;
        probe_nodes.back() = classifier_copy.at(0);
        ContractionStats stats;
        (void)contract_network(probe_nodes, edges, &stats).value();
        if (stats.peak_wires > wire_cap)
            throw ShapeError("deferred contraction materialized a tensor wider than the word "
                             "arities allow");
        inst.peak_wires = stats.peak_wires;
    }

    inst.base.set_exact_inner(contract_inner);
    return inst;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

Backend parse_backend(const std::string& name) {
    if (name == "direct") return Backend::Direct;
    if (name == "mc") return Backend::MonteCarlo;
    if (name == "quantum") return Backend::Quantum;
    throw DomainError("unknown backend '" + name + "' (expected direct, mc or quantum)");
}

std::string to_string(Backend b) {
    switch (b) {
        case Backend::Direct: return "direct";
        case Backend::MonteCarlo: return "mc";
        case Backend::Quantum: return "quantum";
    }
    return "?";
}

namespace {

struct CandidatePool {
    std::vector<MeaningTensor> vectors;
    std::vector<std::pair<std::size_t, std::size_t>> owner;  // (class, member)
};

CandidatePool collect_candidates(std::span<const ClassSet> classes, bool centroids) {
    if (classes.empty()) throw DomainError("at least one class is required");
    CandidatePool pool;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].members.empty())
            throw DomainError("class '" + classes[c].label + "' has no members");
        if (centroids) {
            MeaningTensor acc{classes[c].members.front().wire_dims()};
            for (const MeaningTensor& m : classes[c].members)
                for (const auto& [flat, v] : m.entries()) acc.add(flat, v);
            pool.vectors.push_back(normalize(acc));
            pool.owner.emplace_back(c, 0);
        } else {
            for (std::size_t m = 0; m < classes[c].members.size(); ++m) {
                pool.vectors.push_back(classes[c].members[m]);
                pool.owner.emplace_back(c, m);
            }
        }
    }
    return pool;
}

ClassificationResult finish(const CandidatePool& pool, std::span<const ClassSet> classes,
                            NNResult nn, SparsityStats stats) {
    ClassificationResult r;
    r.class_index = pool.owner[nn.argmax_index].first;
    r.member_index = pool.owner[nn.argmax_index].second;
    r.label = classes[r.class_index].label;
    r.similarity = nn.estimates[nn.argmax_index];
    r.instance_stats = stats;
    r.nn = std::move(nn);
    return r;
}

}  // namespace

ClassificationResult classify_direct(const TypedSentence& sentence,
                                     std::span<const ClassSet> classes, bool centroids) {
    const CandidatePool pool = collect_candidates(classes, centroids);
    const MeaningTensor phi = evaluate_sentence(sentence.tensors, sentence.matching);
    const MeaningTensor unit_phi = normalize(phi);

    ClosestVectorInstance inst = ClosestVectorInstance::from_tensors(unit_phi, pool.vectors);
    NNResult nn = nn_direct(inst);
    return finish(pool, classes, std::move(nn), {inst.sparsity(), inst.r_max()});
}

ClassificationResult classify_deferred(const TypedSentence& sentence,
                                       std::span<const ClassSet> classes,
                                       const ClassifyOptions& options) {
    const CandidatePool pool = collect_candidates(classes, options.centroids);
    DeferredInstance deferred = build_deferred(sentence, pool.vectors);

    NNResult nn;
    switch (options.backend) {
        case Backend::Direct:
            nn = nn_direct(deferred.base, {options.eps, options.delta});
            break;
        case Backend::MonteCarlo:
            nn = nn_monte_carlo(deferred.base, options.eps, options.delta, options.seed,
                                options.monte_carlo);
            break;
        case Backend::Quantum:
            nn = nn_quantum_sim(deferred.base, options.eps, options.delta, options.seed,
                                options.quantum);
            break;
    }
    return finish(pool, classes, std::move(nn),
                  {deferred.base.sparsity(), deferred.base.r_max()});
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

MeaningTensor noise_perturb(const MeaningTensor& t, double eps, std::uint64_t seed) {
    if (eps < 0) throw DomainError("perturbation size must be non-negative");
    if (eps == 0) return t;
    if (t.nonzero_count() == 0) throw DomainError("cannot perturb an empty tensor");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Perturbation support: existing support plus ceil(eps * d) fresh coords.
    std::vector<std::uint64_t> coords;
    coords.reserve(t.nonzero_count());
    for (const auto& [flat, v] : t.entries()) coords.push_back(flat);
    std::unordered_set<std::uint64_t> taken(coords.begin(), coords.end());

    const std::size_t d = t.nonzero_count();
    std::size_t fresh = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(d)));
    fresh = std::min<std::uint64_t>(fresh, t.flat_size() - d);
    std::uniform_int_distribution<std::uint64_t> pick(0, t.flat_size() - 1);
    std::size_t attempts = 0;
    while (fresh > 0 && attempts < 1000000) {
        ++attempts;
        const std::uint64_t c = pick(rng);
        if (taken.insert(c).second) {
            coords.push_back(c);
            --fresh;
        }
    }

    std::vector<double> noise(coords.size());
    double norm2 = 0;
    do {
        norm2 = 0;
        for (double& x : noise) {
            x = gauss(rng);
            norm2 += x * x;
        }
    } while (norm2 <= 0);
    const double scale = eps / std::sqrt(norm2);

    MeaningTensor out = t;
    for (std::size_t i = 0; i < coords.size(); ++i) out.add(coords[i], noise[i] * scale);
    return normalize(out);
}

}  // namespace qsem
