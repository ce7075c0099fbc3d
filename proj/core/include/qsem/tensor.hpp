#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qsem/errors.hpp"
#include "qsem/pregroup.hpp"

namespace qsem {

// Entries with |value| at or below this are dropped everywhere.
inline constexpr double kZeroTolerance = 1e-15;
// Normalization is enforced to this absolute tolerance on squared norms.
inline constexpr double kNormTolerance = 1e-12;

// ---------------------------------------------------------------------------
// MeaningTensor: a sparse real tensor over an ordered list of wires
// ---------------------------------------------------------------------------
//
// Entries are keyed by the row-major flat index over the wire dimensions.
// A tensor with no wires is a scalar (flat index 0).  Zeros are pruned, so
// iteration only ever visits genuinely stored coordinates.
class MeaningTensor {
  public:
    MeaningTensor() = default;
    explicit MeaningTensor(std::vector<std::size_t> wire_dims, std::string label = "");

    static MeaningTensor scalar(double value);
    static MeaningTensor basis_vector(std::size_t dim, std::size_t coord);
    static MeaningTensor from_dense(std::vector<std::size_t> wire_dims,
                                    std::span<const double> values, std::string label = "");

    const std::vector<std::size_t>& wire_dims() const { return wires_; }
    std::size_t wire_count() const { return wires_.size(); }
    // Product of wire dimensions (1 for scalars).
    std::uint64_t flat_size() const { return flat_size_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    std::size_t nonzero_count() const { return entries_.size(); }
    const std::map<std::uint64_t, double>& entries() const { return entries_; }

    // Setters prune values within kZeroTolerance of zero.
    void set(std::uint64_t flat, double value);
    void set(std::span<const std::size_t> coords, double value);
    void add(std::uint64_t flat, double value);

    double at(std::uint64_t flat) const;
    double at(std::span<const std::size_t> coords) const;

    std::uint64_t flat_index(std::span<const std::size_t> coords) const;
    std::vector<std::size_t> unflatten(std::uint64_t flat) const;

    double norm() const;          // Euclidean norm over entries
    double squared_norm() const;
    double max_abs_entry() const;
    bool is_scalar() const { return wires_.empty(); }
    // Scalar value of a zero-wire tensor.
    double value() const;

  private:
    std::vector<std::size_t> wires_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t flat_size_ = 1;
    std::map<std::uint64_t, double> entries_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Tensor operations
// ---------------------------------------------------------------------------

// Concatenates wires; entries are all pairwise products.
MeaningTensor tensor_product(const MeaningTensor& a, const MeaningTensor& b);
MeaningTensor tensor_product(std::span<const MeaningTensor> factors);

// Applies sum_i <ii| to wires (i, j) of t: both wires are removed and entries
// with equal coordinates on them are accumulated.  Wires must have equal
// dimension; throws ShapeError otherwise.
MeaningTensor cap_contract(const MeaningTensor& t, std::size_t wire_i, std::size_t wire_j);

// Full contraction of two tensors with identical wire dims.
double inner_product(const MeaningTensor& a, const MeaningTensor& b);

// Returns t scaled to unit norm; throws DomainError on (near-)zero tensors.
MeaningTensor normalize(const MeaningTensor& t);

struct SparsityStats {
    std::size_t max_nonzeros = 0;   // d: largest support size
    double max_squared_entry = 0;   // r_max: largest squared entry magnitude
};

SparsityStats sparsity_stats(std::span<const MeaningTensor> tensors);

// ---------------------------------------------------------------------------
// Pairwise network contraction
// ---------------------------------------------------------------------------

// A cross-node wire pairing: (node_a, wire_a) contracts with (node_b, wire_b).
struct NetworkEdge {
    std::size_t node_a = 0, wire_a = 0;
    std::size_t node_b = 0, wire_b = 0;
};

struct ContractionStats {
    std::size_t peak_wires = 0;  // widest intermediate tensor seen
};

// Contracts a tensor network pairwise, leaves first, never materializing the
// full product.  Remaining open wires are ordered by (node, wire) of origin.
// Disconnected components are contracted separately and multiplied at the end.
MeaningTensor contract_network(std::span<const MeaningTensor> nodes,
                               std::span<const NetworkEdge> edges,
                               ContractionStats* stats = nullptr);

// Evaluates a sentence: contracts the word tensors along the cup matching
// (flat simple-type indices map to wires word by word) and returns the
// residual-wire vector.  Requires exactly one residual wire.
MeaningTensor evaluate_sentence(std::span<const MeaningTensor> words,
                                const CupMatching& matching,
                                ContractionStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Storage accounting
// ---------------------------------------------------------------------------

struct StorageEstimate {
    std::uint64_t classical_bits = 0;  // num_verbs * N^3, one bit per entry
    unsigned qubits = 0;               // ceil(log2(classical_bits))
};

// Throws DomainError when num_verbs * N^3 overflows 64 bits or is zero.
StorageEstimate storage_estimate(std::size_t noun_dim, std::size_t num_verbs);

// Exact ceil(log2(x)) for x >= 1.
unsigned ceil_log2_u64(std::uint64_t x);

}  // namespace qsem
