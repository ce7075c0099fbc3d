#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsem/errors.hpp"

namespace qsem {

// ---------------------------------------------------------------------------
// Pregroup types
// ---------------------------------------------------------------------------

enum class BaseType { Noun, Sentence };

// One simple type: a base with an iterated adjoint order.  Negative orders
// are left adjoints (n^l -> -1, n^ll -> -2), positive are right adjoints.
struct SimpleType {
    BaseType base = BaseType::Noun;
    int adjoint = 0;

    friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

// A word type: non-empty product of simple types, left to right.
struct PregroupType {
    std::vector<SimpleType> simples;

    std::size_t size() const { return simples.size(); }
    friend bool operator==(const PregroupType&, const PregroupType&) = default;
};

inline constexpr int kMaxAdjointOrder = 2;

// Parses a whitespace-separated type string such as "n^r s n^l".
// Accepted tokens: n, s with optional ^l, ^r, ^ll, ^rr suffix (adjoint order
// at most 2).  Throws ParseError naming the offending token otherwise.
PregroupType parse_pregroup_type(const std::string& text);

std::string to_string(const SimpleType& t);
std::string to_string(const PregroupType& t);

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

// Result of reducing a sequence of word types.  Indices refer to the
// concatenation of all simple types of all words, left to right.
struct CupMatching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (left, right), left < right
    std::vector<std::size_t> residual;                       // unmatched indices, ascending
};

// Flattened view of a type sequence: which word owns each simple type.
struct FlattenedTypes {
    std::vector<SimpleType> simples;
    std::vector<std::size_t> word_of_index;
    std::vector<std::size_t> word_offset;  // first flat index of each word
};

FlattenedTypes flatten_types(const std::vector<PregroupType>& types);

// Leftmost (stack based) cup reduction.  An incoming simple type cancels the
// top of the stack when both share a base and the orders are z and z+1.
// Succeeds when the residual is a single plain sentence type; throws
// UngrammaticalError carrying the residual otherwise.
CupMatching reduce(const std::vector<PregroupType>& types);

// Same reduction but accepts any single plain simple type as the residual,
// so bare noun phrases ("a book") can be analyzed as fragments.
CupMatching reduce_fragment(const std::vector<PregroupType>& types);

// ---------------------------------------------------------------------------
// Derivation tree and layering
// ---------------------------------------------------------------------------

struct DerivationEdge {
    std::size_t word_a = 0;
    std::size_t word_b = 0;
    // The cup pairs (flat indices) realized by this edge.
    std::vector<std::pair<std::size_t, std::size_t>> cups;
};

// Words as nodes, cup connections as edges.  depth[w] is the distance from
// the head (the word holding the residual wire).
struct DerivationTree {
    std::size_t word_count = 0;
    std::size_t head = 0;
    std::vector<DerivationEdge> edges;
    std::vector<std::size_t> depth;
};

// Builds the tree for a reduction over `word_count` words.  word_of_index
// maps flat simple-type indices to word indices (see flatten_types).
// Throws ShapeError if the cup graph is disconnected or cyclic, which cannot
// happen for matchings produced by reduce().
DerivationTree build_tree(std::size_t word_count, const CupMatching& matching,
                          const std::vector<std::size_t>& word_of_index);

enum class Layer { Top, Bottom };

// Alternating two-coloring of a derivation tree: the head is Top, every edge
// joins a Top word to a Bottom word.
struct Layering {
    std::vector<Layer> layer;

    std::size_t count(Layer which) const {
        std::size_t n = 0;
        for (Layer l : layer) n += (l == which) ? 1 : 0;
        return n;
    }
};

Layering two_coloring(const DerivationTree& tree);

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

// word <TAB> type-string, one per line; '#' starts a comment line.
class Lexicon {
  public:
    static Lexicon load(const std::string& path);
    static Lexicon parse(const std::string& text);

    void set(const std::string& word, PregroupType type);
    bool contains(const std::string& word) const;
    // Throws ParseError for unknown words.
    const PregroupType& at(const std::string& word) const;
    std::size_t size() const { return entries_.size(); }

  private:
    std::map<std::string, PregroupType> entries_;
};

}  // namespace qsem
