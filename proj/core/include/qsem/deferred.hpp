#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qsem/closest_vector.hpp"
#include "qsem/pregroup.hpp"
#include "qsem/tensor.hpp"

namespace qsem {

// ---------------------------------------------------------------------------
// Typed sentences and class sets
// ---------------------------------------------------------------------------

// A tokenized sentence with its word types, word tensors, reduction and tree.
struct TypedSentence {
    std::vector<std::string> tokens;
    std::vector<PregroupType> types;
    std::vector<MeaningTensor> tensors;
    CupMatching matching;
    DerivationTree tree;
};

// Runs the reduction (fragment mode accepts a single residual of any base)
// and builds the derivation tree.  Tensors must have one wire per simple type.
TypedSentence make_typed_sentence(std::vector<std::string> tokens,
                                  std::vector<PregroupType> types,
                                  std::vector<MeaningTensor> tensors,
                                  bool fragment = false);

struct ClassSet {
    std::string label;
    std::vector<MeaningTensor> members;  // unit-norm vectors of the noun dimension
};

// ---------------------------------------------------------------------------
// Deferred instance
// ---------------------------------------------------------------------------

// The sentence recast as a closest-vector instance without evaluating it:
// s is the flattened product of the Top-layer tensors and U[i] the flattened
// product of the Bottom-layer tensors with classifier v_i on the head's
// residual wire, aligned so that <s|U[i]> = <phi|v_i> for the directly
// evaluated sentence vector phi.
struct DeferredInstance {
    ClosestVectorInstance base;
    Layering layering;
    // For each aligned wire k of s, the position of its partner in U's own
    // wire layout (factors in their stored order, each factor's wires in
    // place).  A bijection; identity when the Bottom factors already sit in
    // the order the Top wires expect.
    std::vector<std::size_t> wire_permutation;
    // Widest tensor the construction and its inner products ever touch;
    // bounded by max word arity + 1.
    std::size_t peak_wires = 0;
    std::size_t head = 0;

    // Exact <s|U[i]>, computed by pairwise network contraction.
    double inner(std::size_t i) const { return base.exact_inner(i); }
};

// classifiers: unit-norm vectors matching the residual wire dimension.
DeferredInstance build_deferred(const TypedSentence& sentence,
                                std::span<const MeaningTensor> classifiers);

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Backend { Direct, MonteCarlo, Quantum };

Backend parse_backend(const std::string& name);  // "direct" | "mc" | "quantum"
std::string to_string(Backend b);

struct ClassifyOptions {
    Backend backend = Backend::Direct;
    double eps = 0.05;
    double delta = 0.1;
    std::uint64_t seed = 0;
    bool centroids = false;  // one candidate per class: normalized member mean
    QuantumSimOptions quantum;
    MonteCarloOptions monte_carlo;
};

struct ClassificationResult {
    std::string label;
    std::size_t class_index = 0;
    std::size_t member_index = 0;   // winning candidate within the flat list
    double similarity = 0;          // winner's estimated |<query|candidate>|^2
    NNResult nn;
    SparsityStats instance_stats;   // d and r_max of the instance vectors
};

// Evaluates the sentence vector phi directly, normalizes it, and scans every
// class member exactly.  Ties pick the lowest class, then member, index.
ClassificationResult classify_direct(const TypedSentence& sentence,
                                     std::span<const ClassSet> classes,
                                     bool centroids = false);

// Classifies through the deferred instance with the chosen backend.  With
// Backend::Direct the label always equals classify_direct's.
ClassificationResult classify_deferred(const TypedSentence& sentence,
                                       std::span<const ClassSet> classes,
                                       const ClassifyOptions& options);

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

// Adds a random perturbation of Euclidean norm eps supported on the existing
// support plus ceil(eps * d) fresh coordinates, then renormalizes.
// eps = 0 returns the tensor unchanged.
MeaningTensor noise_perturb(const MeaningTensor& t, double eps, std::uint64_t seed);

}  // namespace qsem
