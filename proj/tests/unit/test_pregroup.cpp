#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "test_support.hpp"

using namespace qsem;
using qsem::testing::random_sentence_shape;
using Catch::Matchers::ContainsSubstring;

namespace {

PregroupType T(const std::string& s) { return parse_pregroup_type(s); }

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(const CupMatching& m) {
    return m.pairs;
}

}  // namespace

TEST_CASE("simple type parsing", "[pregroup]") {
    SECTION("bases") {
        CHECK(T("n").simples == std::vector<SimpleType>{{BaseType::Noun, 0}});
        CHECK(T("s").simples == std::vector<SimpleType>{{BaseType::Sentence, 0}});
    }
    SECTION("adjoint suffixes") {
        CHECK(T("n^l").simples == std::vector<SimpleType>{{BaseType::Noun, -1}});
        CHECK(T("n^r").simples == std::vector<SimpleType>{{BaseType::Noun, 1}});
        CHECK(T("n^ll").simples == std::vector<SimpleType>{{BaseType::Noun, -2}});
        CHECK(T("s^rr").simples == std::vector<SimpleType>{{BaseType::Sentence, 2}});
    }
    SECTION("products") {
        const PregroupType tv = T("n^r s n^l");
        REQUIRE(tv.size() == 3);
        CHECK(tv.simples[0] == SimpleType{BaseType::Noun, 1});
        CHECK(tv.simples[1] == SimpleType{BaseType::Sentence, 0});
        CHECK(tv.simples[2] == SimpleType{BaseType::Noun, -1});
    }
    SECTION("whitespace is flexible") {
        CHECK(T("  n^r   s  ") == T("n^r s"));
    }
    SECTION("rejects malformed tokens") {
        CHECK_THROWS_AS(T(""), ParseError);
        CHECK_THROWS_AS(T("x"), ParseError);
        CHECK_THROWS_AS(T("ns"), ParseError);
        CHECK_THROWS_AS(T("n^"), ParseError);
        CHECK_THROWS_AS(T("n^x"), ParseError);
        CHECK_THROWS_AS(T("n^lll"), ParseError);  // order beyond 2
        CHECK_THROWS_AS(T("n^rrr"), ParseError);
        CHECK_THROWS_AS(T("n^lr"), ParseError);   // mixed suffix
        CHECK_THROWS_AS(T("n^rl"), ParseError);
        CHECK_THROWS_WITH(T("n^lll"), ContainsSubstring("n^lll"));
    }
    SECTION("to_string round trips") {
        for (const char* s : {"n", "s", "n^l", "n^r", "n^ll", "s^rr", "n^r s n^l", "n n^l"}) {
            CHECK(to_string(T(s)) == s);
            CHECK(T(to_string(T(s))) == T(s));
        }
    }
}

TEST_CASE("flatten_types indexes words", "[pregroup]") {
    const std::vector<PregroupType> types{T("n"), T("n^r s n^l"), T("n")};
    const FlattenedTypes flat = flatten_types(types);
    REQUIRE(flat.simples.size() == 5);
    CHECK(flat.word_of_index == std::vector<std::size_t>{0, 1, 1, 1, 2});
    CHECK(flat.word_offset == std::vector<std::size_t>{0, 1, 4});
}

TEST_CASE("subject verb object reduction", "[pregroup]") {
    const std::vector<PregroupType> types{T("n"), T("n^r s n^l"), T("n")};
    const CupMatching m = reduce(types);
    CHECK(pairs_of(m) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {3, 4}});
    CHECK(m.residual == std::vector<std::size_t>{2});
}

TEST_CASE("intransitive reduction with determiner and adjective", "[pregroup]") {
    // det adj noun iverb: the determiner's outer wire pairs with the verb.
    const std::vector<PregroupType> types{T("n n^l"), T("n n^l"), T("n"), T("n^r s")};
    const CupMatching m = reduce(types);
    CHECK(pairs_of(m) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 5}, {1, 2}, {3, 4}});
    CHECK(m.residual == std::vector<std::size_t>{6});
}

TEST_CASE("clause embedding reduction and derivation tree", "[pregroup]") {
    // w0..w5 typed n | n^r s s^l | n | n^r s n^l | n n^l | n
    // ("john saw mary read a book" with a clause-taking verb).
    const std::vector<PregroupType> types{T("n"),         T("n^r s s^l"), T("n"),
                                          T("n^r s n^l"), T("n n^l"),     T("n")};
    const CupMatching m = reduce(types);
    CHECK(pairs_of(m) == std::vector<std::pair<std::size_t, std::size_t>>{
                             {0, 1}, {3, 6}, {4, 5}, {7, 8}, {9, 10}});
    REQUIRE(m.residual == std::vector<std::size_t>{2});

    const DerivationTree tree = build_tree(6, m, flatten_types(types).word_of_index);
    CHECK(tree.head == 1);
    CHECK(tree.depth == std::vector<std::size_t>{1, 0, 2, 1, 2, 3});
    REQUIRE(tree.edges.size() == 5);
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const DerivationEdge& e : tree.edges)
        edges.insert({std::min(e.word_a, e.word_b), std::max(e.word_a, e.word_b)});
    CHECK(edges == std::set<std::pair<std::size_t, std::size_t>>{
                       {0, 1}, {1, 3}, {2, 3}, {3, 4}, {4, 5}});

    const Layering layers = two_coloring(tree);
    CHECK(layers.layer == std::vector<Layer>{Layer::Bottom, Layer::Top, Layer::Top,
                                             Layer::Bottom, Layer::Top, Layer::Bottom});
}

TEST_CASE("ungrammatical sequences throw with residual text", "[pregroup]") {
    CHECK_THROWS_AS(reduce({T("n"), T("n")}), UngrammaticalError);
    CHECK_THROWS_AS(reduce({T("n^l")}), UngrammaticalError);
    CHECK_THROWS_AS(reduce({T("n")}), UngrammaticalError);  // noun alone is not a sentence
    try {
        reduce({T("n"), T("n^r s n^l")});  // missing object
        FAIL("expected UngrammaticalError");
    } catch (const UngrammaticalError& e) {
        CHECK_THAT(e.residual, ContainsSubstring("n^l"));
        CHECK_THAT(e.residual, ContainsSubstring("s"));
    }
}

TEST_CASE("fragment reduction accepts a single plain wire", "[pregroup]") {
    SECTION("noun phrase") {
        const CupMatching m = reduce_fragment({T("n n^l"), T("n")});
        CHECK(pairs_of(m) == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}});
        CHECK(m.residual == std::vector<std::size_t>{0});
    }
    SECTION("bare noun") {
        const CupMatching m = reduce_fragment({T("n")});
        CHECK(m.pairs.empty());
        CHECK(m.residual == std::vector<std::size_t>{0});
    }
    SECTION("full sentences still reduce") {
        CHECK(reduce_fragment({T("n"), T("n^r s")}).residual == std::vector<std::size_t>{2});
    }
    SECTION("still rejects junk") {
        CHECK_THROWS_AS(reduce_fragment({T("n"), T("n")}), UngrammaticalError);
        CHECK_THROWS_AS(reduce_fragment({T("n^l")}), UngrammaticalError);
    }
    SECTION("strict mode rejects fragments") {
        CHECK_THROWS_AS(reduce({T("n n^l"), T("n")}), UngrammaticalError);
    }
}

TEST_CASE("reduction is deterministic", "[pregroup]") {
    const std::vector<PregroupType> types{T("n n^l"), T("n"), T("n^r s n^l"), T("n n^l"),
                                          T("n")};
    const CupMatching a = reduce(types);
    const CupMatching b = reduce(types);
    CHECK(a.pairs == b.pairs);
    CHECK(a.residual == b.residual);
}

TEST_CASE("random sentences reduce to well-formed matchings", "[pregroup][property]") {
    std::mt19937_64 rng(20260822);
    for (int trial = 0; trial < 300; ++trial) {
        const auto shape = random_sentence_shape(rng, 2);
        const FlattenedTypes flat = flatten_types(shape.types);
        CupMatching m;
        REQUIRE_NOTHROW(m = reduce(shape.types));

        // Every flat index appears exactly once across pairs and residual.
        std::vector<int> seen(flat.simples.size(), 0);
        for (const auto& [a, b] : m.pairs) {
            REQUIRE(a < b);
            ++seen[a];
            ++seen[b];
        }
        for (std::size_t r : m.residual) ++seen[r];
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));

        // Residual is one plain sentence wire.
        REQUIRE(m.residual.size() == 1);
        CHECK(flat.simples[m.residual[0]] == SimpleType{BaseType::Sentence, 0});

        // Cups join equal bases with adjoint orders z and z+1, left to right.
        for (const auto& [a, b] : m.pairs) {
            CHECK(flat.simples[a].base == flat.simples[b].base);
            CHECK(flat.simples[a].adjoint + 1 == flat.simples[b].adjoint);
        }

        // Planarity: no two cups cross.
        for (std::size_t i = 0; i < m.pairs.size(); ++i)
            for (std::size_t j = i + 1; j < m.pairs.size(); ++j) {
                const auto [a, b] = m.pairs[i];
                const auto [c, d] = m.pairs[j];
                const bool crossing = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                CHECK_FALSE(crossing);
            }
    }
}

TEST_CASE("derivation trees of random sentences are proper trees", "[pregroup][property]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const auto shape = random_sentence_shape(rng, 2);
        const FlattenedTypes flat = flatten_types(shape.types);
        const CupMatching m = reduce(shape.types);
        const DerivationTree tree = build_tree(shape.types.size(), m, flat.word_of_index);

        REQUIRE(tree.word_count == shape.types.size());
        CHECK(tree.edges.size() + 1 == tree.word_count);
        CHECK(tree.depth[tree.head] == 0);
        CHECK(flat.word_of_index[m.residual[0]] == tree.head);
        for (const DerivationEdge& e : tree.edges) {
            CHECK(e.word_a != e.word_b);
            CHECK_FALSE(e.cups.empty());
            const std::size_t da = tree.depth[e.word_a];
            const std::size_t db = tree.depth[e.word_b];
            CHECK((da > db ? da - db : db - da) == 1);
        }

        const Layering layers = two_coloring(tree);
        CHECK(layers.layer[tree.head] == Layer::Top);
        CHECK(layers.count(Layer::Top) + layers.count(Layer::Bottom) == tree.word_count);
        for (const DerivationEdge& e : tree.edges)
            CHECK(layers.layer[e.word_a] != layers.layer[e.word_b]);
    }
}

TEST_CASE("build_tree rejects disconnected matchings", "[pregroup]") {
    // Two words, no cups between them: not a tree.
    CupMatching m;
    m.residual = {0, 1};
    CHECK_THROWS_AS(build_tree(2, m, {0, 1}), ShapeError);
}

TEST_CASE("lexicon parsing", "[pregroup]") {
    const Lexicon lex = Lexicon::parse("# comment line\n"
                                       "mary\tn\n"
                                       "likes\tn^r s n^l\n"
                                       "\n"
                                       "words\tn\n");
    CHECK(lex.size() == 3);
    CHECK(lex.contains("likes"));
    CHECK(lex.at("likes") == T("n^r s n^l"));
    CHECK_FALSE(lex.contains("dog"));
    CHECK_THROWS_AS(lex.at("dog"), ParseError);
    CHECK_THROWS_AS(Lexicon::parse("word-without-type\n"), ParseError);
    CHECK_THROWS_AS(Lexicon::parse("word\tnot-a-type\n"), ParseError);
}
