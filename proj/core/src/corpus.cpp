#include "qsem/corpus.hpp"

#include <algorithm>
#include <cctype>

namespace qsem {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

ContextBasis build_basis(const std::vector<std::string>& tokens, std::size_t k) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const std::string& t : tokens) ++counts[t];

    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);

    ContextBasis basis;
    for (auto& [word, count] : ranked) {
        basis.index.emplace(word, basis.words.size());
        basis.words.push_back(word);
    }
    return basis;
}

MeaningTensor build_word_vector(const std::vector<std::string>& tokens, const std::string& word,
                                const ContextBasis& basis, const CorpusConfig& config) {
    if (basis.size() == 0) throw DomainError("empty context basis");

    std::vector<double> counts(basis.size(), 0.0);
    std::size_t occurrences = 0;
    for (std::size_t p = 0; p < tokens.size(); ++p) {
        if (tokens[p] != word) continue;
        ++occurrences;
        const std::size_t lo = p >= config.window ? p - config.window : 0;
        const std::size_t hi = std::min(tokens.size() - 1, p + config.window);
        for (std::size_t q = lo; q <= hi; ++q) {
            if (q == p) continue;  // the occurrence itself is not its own context
            auto it = basis.index.find(tokens[q]);
            if (it != basis.index.end()) counts[it->second] += 1.0;
        }
    }
    if (occurrences == 0) throw DomainError("word '" + word + "' does not occur in the corpus");
    if (occurrences < config.min_count)
        throw DomainError("word '" + word + "' occurs only " + std::to_string(occurrences) +
                          " time(s), fewer than the configured minimum");

    MeaningTensor v{{basis.size()}, word};
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] != 0.0) v.set(i, counts[i]);
    if (v.nonzero_count() == 0)
        throw DomainError("word '" + word + "' co-occurs with no basis word");
    return normalize(v);
}

MeaningTensor build_relational_tensor(
    const std::string& label,
    const std::vector<std::pair<MeaningTensor, MeaningTensor>>& subject_object_pairs) {
    if (subject_object_pairs.empty())
        throw DomainError("relational tensor '" + label + "' needs at least one argument pair");

    const std::size_t dim = subject_object_pairs.front().first.wire_dims().at(0);
    MeaningTensor sum{{dim, dim, dim}, label};
    for (const auto& [subj, obj] : subject_object_pairs) {
        if (subj.wire_count() != 1 || obj.wire_count() != 1)
            throw ShapeError("relational arguments must be vectors");
        if (subj.wire_dims()[0] != dim || obj.wire_dims()[0] != dim)
            throw ShapeError("relational arguments must share the basis dimension");

        MeaningTensor mid{{dim}};
        for (const auto& [i, v] : subj.entries()) mid.add(i, v);
        for (const auto& [i, v] : obj.entries()) mid.add(i, v);
        mid = normalize(mid);

        const MeaningTensor term = tensor_product(tensor_product(subj, mid), obj);
        for (const auto& [flat, v] : term.entries()) sum.add(flat, v);
    }
    MeaningTensor out = normalize(sum);
    out.set_label(label);
    return out;
}

}  // namespace qsem
