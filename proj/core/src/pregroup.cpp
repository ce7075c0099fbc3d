#include "qsem/pregroup.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

namespace qsem {

namespace {

SimpleType parse_simple(const std::string& token) {
    auto fail = [&] { throw ParseError("malformed type token '" + token + "'"); };
    if (token.empty()) fail();

    SimpleType t;
    switch (token[0]) {
        case 'n': t.base = BaseType::Noun; break;
        case 's': t.base = BaseType::Sentence; break;
        default: fail();
    }
    if (token.size() == 1) return t;

    if (token[1] != '^' || token.size() < 3) fail();
    const std::string suffix = token.substr(2);
    if (suffix.size() > static_cast<std::size_t>(kMaxAdjointOrder)) fail();
    if (suffix.find_first_not_of(suffix[0]) != std::string::npos) fail();  // no mixed ^lr
    const int order = static_cast<int>(suffix.size());
    if (suffix[0] == 'l') t.adjoint = -order;
    else if (suffix[0] == 'r') t.adjoint = order;
    else fail();
    return t;
}

}  // namespace

PregroupType parse_pregroup_type(const std::string& text) {
    PregroupType type;
    std::istringstream in(text);
    std::string token;
    while (in >> token) type.simples.push_back(parse_simple(token));
    if (type.simples.empty()) throw ParseError("empty type string");
    return type;
}

std::string to_string(const SimpleType& t) {
    std::string out(t.base == BaseType::Noun ? "n" : "s");
    if (t.adjoint != 0) {
        out += '^';
        out.append(static_cast<std::size_t>(std::abs(t.adjoint)), t.adjoint < 0 ? 'l' : 'r');
    }
    return out;
}

std::string to_string(const PregroupType& t) {
    std::string out;
    for (std::size_t i = 0; i < t.simples.size(); ++i) {
        if (i) out += ' ';
        out += to_string(t.simples[i]);
    }
    return out;
}

FlattenedTypes flatten_types(const std::vector<PregroupType>& types) {
    FlattenedTypes flat;
    for (std::size_t w = 0; w < types.size(); ++w) {
        flat.word_offset.push_back(flat.simples.size());
        for (const SimpleType& s : types[w].simples) {
            flat.simples.push_back(s);
            flat.word_of_index.push_back(w);
        }
    }
    return flat;
}

namespace {

CupMatching reduce_impl(const std::vector<PregroupType>& types, bool fragment) {
    if (types.empty()) throw UngrammaticalError("empty type sequence", "");
    const FlattenedTypes flat = flatten_types(types);

    CupMatching m;
    std::vector<std::size_t> stack;  // indices of not-yet-matched simples
    for (std::size_t j = 0; j < flat.simples.size(); ++j) {
        const SimpleType& in = flat.simples[j];
        if (!stack.empty()) {
            const SimpleType& top = flat.simples[stack.back()];
            if (top.base == in.base && top.adjoint + 1 == in.adjoint) {
                m.pairs.emplace_back(stack.back(), j);
                stack.pop_back();
                continue;
            }
        }
        stack.push_back(j);
    }
    m.residual = stack;
    std::sort(m.pairs.begin(), m.pairs.end());

    std::string residual_text;
    for (std::size_t i = 0; i < m.residual.size(); ++i) {
        if (i) residual_text += ' ';
        residual_text += to_string(flat.simples[m.residual[i]]);
    }
    const bool ok =
        m.residual.size() == 1 && flat.simples[m.residual[0]].adjoint == 0 &&
        (fragment || flat.simples[m.residual[0]].base == BaseType::Sentence);
    if (!ok) {
        throw UngrammaticalError(
            std::string("type sequence does not reduce to a single ") +
                (fragment ? "plain wire" : "sentence type") + "; residual: [" +
                residual_text + "]",
            residual_text);
    }
    return m;
}

}  // namespace

CupMatching reduce(const std::vector<PregroupType>& types) { return reduce_impl(types, false); }

CupMatching reduce_fragment(const std::vector<PregroupType>& types) {
    return reduce_impl(types, true);
}

DerivationTree build_tree(std::size_t word_count, const CupMatching& matching,
                          const std::vector<std::size_t>& word_of_index) {
    auto word_of = [&](std::size_t flat_index) {
        if (flat_index >= word_of_index.size())
            throw ShapeError("cup index " + std::to_string(flat_index) +
                             " outside the flattened type range");
        return word_of_index[flat_index];
    };

    DerivationTree tree;
    tree.word_count = word_count;

    if (matching.residual.size() != 1)
        throw ShapeError("derivation tree requires exactly one residual wire");
    tree.head = word_of(matching.residual[0]);

    // Group cups by unordered word pair; cups inside a single word do not
    // create edges.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>>
        grouped;
    for (const auto& [a, b] : matching.pairs) {
        std::size_t wa = word_of(a), wb = word_of(b);
        if (wa == wb) continue;
        if (wa > wb) std::swap(wa, wb);
        grouped[{wa, wb}].emplace_back(a, b);
    }
    for (auto& [words, cups] : grouped)
        tree.edges.push_back({words.first, words.second, std::move(cups)});

    // BFS from the head: assigns depths and verifies the edge set is a tree.
    std::vector<std::vector<std::size_t>> adjacency(word_count);
    for (std::size_t e = 0; e < tree.edges.size(); ++e) {
        adjacency[tree.edges[e].word_a].push_back(tree.edges[e].word_b);
        adjacency[tree.edges[e].word_b].push_back(tree.edges[e].word_a);
    }
    tree.depth.assign(word_count, static_cast<std::size_t>(-1));
    std::deque<std::size_t> queue{tree.head};
    tree.depth[tree.head] = 0;
    std::size_t visited = 0;
    while (!queue.empty()) {
        const std::size_t w = queue.front();
        queue.pop_front();
        ++visited;
        for (std::size_t next : adjacency[w]) {
            if (tree.depth[next] != static_cast<std::size_t>(-1)) continue;
            tree.depth[next] = tree.depth[w] + 1;
            queue.push_back(next);
        }
    }
    if (visited != word_count)
        throw ShapeError("derivation graph is disconnected: " + std::to_string(visited) + " of " +
                         std::to_string(word_count) + " words reachable from the head");
    if (tree.edges.size() != word_count - 1)
        throw ShapeError("derivation graph has a cycle: " + std::to_string(tree.edges.size()) +
                         " edges over " + std::to_string(word_count) + " words");
    return tree;
}

Layering two_coloring(const DerivationTree& tree) {
    Layering layering;
    layering.layer.resize(tree.word_count);
    for (std::size_t w = 0; w < tree.word_count; ++w)
        layering.layer[w] = (tree.depth[w] % 2 == 0) ? Layer::Top : Layer::Bottom;
    return layering;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open lexicon file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

Lexicon Lexicon::parse(const std::string& text) {
    Lexicon lex;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto tab = line.find('\t', first);
        if (tab == std::string::npos)
            throw ParseError("lexicon line " + std::to_string(line_no) +
                             ": expected 'word<TAB>type'");
        const std::string word = line.substr(first, tab - first);
        if (word.empty())
            throw ParseError("lexicon line " + std::to_string(line_no) + ": empty word");
        lex.set(word, parse_pregroup_type(line.substr(tab + 1)));
    }
    return lex;
}

void Lexicon::set(const std::string& word, PregroupType type) {
    entries_[word] = std::move(type);
}

bool Lexicon::contains(const std::string& word) const { return entries_.count(word) != 0; }

const PregroupType& Lexicon::at(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) throw ParseError("word '" + word + "' not in lexicon");
    return it->second;
}

}  // namespace qsem
