#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsem/tensor.hpp"

namespace qsem {

// Lowercases and splits on every non-alphanumeric character.
std::vector<std::string> tokenize(const std::string& text);

// The K context words spanning the distributional space.  Order is by
// descending corpus frequency, ties broken lexicographically.
struct ContextBasis {
    std::vector<std::string> words;
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return words.size(); }
    bool contains(const std::string& w) const { return index.count(w) != 0; }
};

ContextBasis build_basis(const std::vector<std::string>& tokens, std::size_t k);

struct CorpusConfig {
    std::size_t window = 5;       // +-window tokens around each occurrence
    std::size_t basis_size = 2000;
    std::size_t min_count = 1;    // words seen fewer times get no vector
};

// Normalized co-occurrence vector of `word`: counts of each basis word
// within the window of every occurrence (the occurrence position itself is
// excluded; windows truncate at corpus edges).  Throws DomainError when the
// word never occurs or co-occurs with no basis word at all.
MeaningTensor build_word_vector(const std::vector<std::string>& tokens,
                                const std::string& word, const ContextBasis& basis,
                                const CorpusConfig& config);

// Relational (verb) tensor: normalize(sum_k subj_k (x) mid_k (x) obj_k) with
// mid_k = normalize(subj_k + obj_k) componentwise.  All arguments must be
// vectors of the basis dimension.
MeaningTensor build_relational_tensor(
    const std::string& label,
    const std::vector<std::pair<MeaningTensor, MeaningTensor>>& subject_object_pairs);

}  // namespace qsem
