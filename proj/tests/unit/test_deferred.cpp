#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace qsem;
using namespace qsem::testing;

namespace {

PregroupType T(const std::string& s) { return parse_pregroup_type(s); }

TypedSentence svo_sentence(std::mt19937_64& rng, std::size_t dim_n, std::size_t dim_s) {
    const std::vector<PregroupType> types{T("n"), T("n^r s n^l"), T("n")};
    std::vector<MeaningTensor> tensors{
        random_unit_tensor(rng, {dim_n}, "kids"),
        random_unit_tensor(rng, {dim_n, dim_s, dim_n}, "play"),
        random_unit_tensor(rng, {dim_n}, "football")};
    return make_typed_sentence({"kids", "play", "football"}, types, std::move(tensors));
}

std::vector<MeaningTensor> random_classifiers(std::mt19937_64& rng, std::size_t count,
                                              std::size_t dim) {
    std::vector<MeaningTensor> cs;
    for (std::size_t i = 0; i < count; ++i)
        cs.push_back(random_unit_tensor(rng, {dim}, "class" + std::to_string(i)));
    return cs;
}

}  // namespace

TEST_CASE("typed sentence construction validates its inputs", "[deferred]") {
    std::mt19937_64 rng(61);
    SECTION("tensor wires must match the type") {
        CHECK_THROWS_AS(make_typed_sentence({"kids"}, {T("n")},
                                            {random_unit_tensor(rng, {3, 3})}),
                        ShapeError);
    }
    SECTION("arrays must align") {
        CHECK_THROWS_AS(make_typed_sentence({"a", "b"}, {T("n")},
                                            {random_unit_tensor(rng, {3})}),
                        ShapeError);
    }
    SECTION("ungrammatical input propagates") {
        CHECK_THROWS_AS(make_typed_sentence({"kids", "cats"}, {T("n"), T("n")},
                                            {random_unit_tensor(rng, {3}),
                                             random_unit_tensor(rng, {3})}),
                        UngrammaticalError);
    }
    SECTION("fragment mode accepts noun phrases") {
        const TypedSentence s = make_typed_sentence(
            {"a", "book"}, {T("n n^l"), T("n")},
            {random_unit_tensor(rng, {3, 3}), random_unit_tensor(rng, {3})}, true);
        CHECK(s.tree.head == 0);  // the determiner holds the open wire
    }
}

TEST_CASE("verb sentence splits into top and bottom layers", "[deferred]") {
    std::mt19937_64 rng(62);
    const std::size_t dim_n = 4, dim_s = 3;
    const TypedSentence s = svo_sentence(rng, dim_n, dim_s);
    const std::vector<MeaningTensor> classifiers = random_classifiers(rng, 2, dim_s);

    const DeferredInstance inst = build_deferred(s, classifiers);

    CHECK(inst.head == 1);
    CHECK(inst.layering.layer ==
          std::vector<Layer>{Layer::Bottom, Layer::Top, Layer::Bottom});

    // The query is the verb tensor alone; candidates are kids (x) v (x)
    // football, so the permutation aligning them is the identity.
    CHECK(inst.wire_permutation == std::vector<std::size_t>{0, 1, 2});
    CHECK(inst.base.dim() == dim_n * dim_s * dim_n);
    CHECK(inst.base.candidate_count() == 2);

    const auto* query = dynamic_cast<const ProductVector*>(&inst.base.query());
    REQUIRE(query != nullptr);
    REQUIRE(query->factor_count() == 1);
    CHECK(query->factor(0).label() == "play");

    const auto* u0 = dynamic_cast<const ProductVector*>(&inst.base.candidate(0));
    REQUIRE(u0 != nullptr);
    REQUIRE(u0->factor_count() == 3);
    CHECK(u0->factor(0).label() == "kids");
    CHECK(u0->factor(1).label() == "class0");
    CHECK(u0->factor(2).label() == "football");

    SECTION("peak width never exceeds the arity budget") {
        CHECK(inst.peak_wires <= 3 + 1);
    }
}

TEST_CASE("determiner-adjective sentence permutes the candidate wires", "[deferred]") {
    std::mt19937_64 rng(63);
    const std::size_t dim_n = 3, dim_s = 2;
    const std::vector<PregroupType> types{T("n n^l"), T("n n^l"), T("n"), T("n^r s")};
    std::vector<MeaningTensor> tensors{
        random_unit_tensor(rng, {dim_n, dim_n}, "the"),
        random_unit_tensor(rng, {dim_n, dim_n}, "old"),
        random_unit_tensor(rng, {dim_n}, "dog"),
        random_unit_tensor(rng, {dim_n, dim_s}, "sleeps")};
    const TypedSentence s =
        make_typed_sentence({"the", "old", "dog", "sleeps"}, types, std::move(tensors));
    const DeferredInstance inst =
        build_deferred(s, random_classifiers(rng, 1, dim_s));

    CHECK(inst.head == 3);
    CHECK(inst.layering.layer == std::vector<Layer>{Layer::Bottom, Layer::Top,
                                                    Layer::Bottom, Layer::Top});
    CHECK(inst.wire_permutation == std::vector<std::size_t>{1, 2, 0, 3});
}

TEST_CASE("deferred inner products equal the evaluated sentence overlaps",
          "[deferred][property]") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 60; ++trial) {
        const TypedSentence s = random_typed_sentence(rng, 3, 2, 1);
        const std::size_t residual_dim = 2;  // sentence wires carry dim 2 here
        const std::vector<MeaningTensor> classifiers =
            random_classifiers(rng, 3, residual_dim);

        const DeferredInstance inst = build_deferred(s, classifiers);
        const MeaningTensor phi = evaluate_sentence(s.tensors, s.matching);

        std::size_t max_arity = 0;
        for (const MeaningTensor& w : s.tensors)
            max_arity = std::max(max_arity, w.wire_count());
        CHECK(inst.peak_wires <= max_arity + 1);

        for (std::size_t i = 0; i < classifiers.size(); ++i)
            CHECK(inst.inner(i) ==
                  Catch::Approx(inner_product(phi, classifiers[i])).margin(1e-10));
    }
}

TEST_CASE("deferred vectors materialize to the same dot product", "[deferred]") {
    // At toy dimensions the lazily represented s and U[i] can be expanded
    // entry by entry; their literal dot product must equal the contracted one.
    std::mt19937_64 rng(65);
    for (int trial = 0; trial < 10; ++trial) {
        const TypedSentence s = random_typed_sentence(rng, 2, 2, 0);
        const std::vector<MeaningTensor> classifiers = random_classifiers(rng, 2, 2);
        const DeferredInstance inst = build_deferred(s, classifiers);
        if (inst.base.dim() > 4096) continue;

        for (std::size_t i = 0; i < classifiers.size(); ++i) {
            double dot = 0;
            for (std::uint64_t c = 0; c < inst.base.dim(); ++c)
                dot += inst.base.query().entry(c) * inst.base.candidate(i).entry(c);
            CHECK(dot == Catch::Approx(inst.inner(i)).margin(1e-10));
        }
    }
}

TEST_CASE("hand-built star matchings work without a grammar", "[deferred]") {
    std::mt19937_64 rng(66);
    const std::size_t dim = 2;

    TypedSentence s;
    s.tokens = {"hub", "leaf0", "leaf1", "leaf2"};
    s.tensors = {random_unit_tensor(rng, {dim, dim, dim, dim}, "hub"),
                 random_unit_tensor(rng, {dim}, "leaf0"),
                 random_unit_tensor(rng, {dim}, "leaf1"),
                 random_unit_tensor(rng, {dim}, "leaf2")};
    s.matching.pairs = {{0, 4}, {1, 5}, {2, 6}};
    s.matching.residual = {3};
    s.tree = build_tree(4, s.matching, {0, 0, 0, 0, 1, 2, 3});

    const std::vector<MeaningTensor> classifiers = random_classifiers(rng, 2, dim);
    const DeferredInstance inst = build_deferred(s, classifiers);

    CHECK(inst.head == 0);
    CHECK(inst.wire_permutation == std::vector<std::size_t>{0, 1, 2, 3});

    // Reference: sum over all indices of hub[i,j,k,r] leaf0[i] leaf1[j]
    // leaf2[k] classifier[r].
    for (std::size_t ci = 0; ci < classifiers.size(); ++ci) {
        double expect = 0;
        const Dense hub = Dense::from(s.tensors[0]);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    for (std::size_t r = 0; r < dim; ++r)
                        expect += hub.v[((i * dim + j) * dim + k) * dim + r] *
                                  s.tensors[1].at(i) * s.tensors[2].at(j) *
                                  s.tensors[3].at(k) * classifiers[ci].at(r);
        CHECK(inst.inner(ci) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("deferred construction validates classifiers", "[deferred]") {
    std::mt19937_64 rng(67);
    const TypedSentence s = svo_sentence(rng, 4, 3);
    SECTION("dimension must match the residual wire") {
        CHECK_THROWS_AS(build_deferred(s, random_classifiers(rng, 1, 4)), ShapeError);
    }
    SECTION("at least one classifier") {
        CHECK_THROWS_AS(build_deferred(s, {}), DomainError);
    }
    SECTION("classifiers must be vectors") {
        const std::vector<MeaningTensor> bad{random_unit_tensor(rng, {3, 3})};
        CHECK_THROWS_AS(build_deferred(s, bad), ShapeError);
    }
}

TEST_CASE("backend names parse both ways", "[deferred]") {
    CHECK(parse_backend("direct") == Backend::Direct);
    CHECK(parse_backend("mc") == Backend::MonteCarlo);
    CHECK(parse_backend("quantum") == Backend::Quantum);
    CHECK_THROWS_AS(parse_backend("warp"), DomainError);
    for (const Backend b : {Backend::Direct, Backend::MonteCarlo, Backend::Quantum})
        CHECK(parse_backend(to_string(b)) == b);
}

TEST_CASE("direct classification scans normalized sentence overlaps", "[deferred]") {
    std::mt19937_64 rng(68);
    const std::size_t dim_s = 3;
    const TypedSentence s = svo_sentence(rng, 4, dim_s);

    std::vector<ClassSet> classes(2);
    classes[0].label = "about-sports";
    classes[0].members = random_classifiers(rng, 2, dim_s);
    classes[1].label = "about-weather";
    classes[1].members = random_classifiers(rng, 3, dim_s);

    const ClassificationResult r = classify_direct(s, classes);

    const MeaningTensor phi = normalize(evaluate_sentence(s.tensors, s.matching));
    double best = -1;
    std::size_t best_class = 0, best_member = 0;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (std::size_t m = 0; m < classes[c].members.size(); ++m) {
            const double ip = inner_product(phi, classes[c].members[m]);
            if (ip * ip > best) {
                best = ip * ip;
                best_class = c;
                best_member = m;
            }
        }
    CHECK(r.class_index == best_class);
    CHECK(r.member_index == best_member);
    CHECK(r.label == classes[best_class].label);
    CHECK(r.similarity == Catch::Approx(best).margin(1e-12));
    CHECK(r.nn.estimates.size() == 5);

    SECTION("empty inputs are rejected") {
        CHECK_THROWS_AS(classify_direct(s, {}), DomainError);
        std::vector<ClassSet> hollow(1);
        hollow[0].label = "void";
        CHECK_THROWS_AS(classify_direct(s, hollow), DomainError);
    }
}

TEST_CASE("deferred direct classification agrees with the evaluated scan",
          "[deferred][property]") {
    std::mt19937_64 rng(69);
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const TypedSentence s = random_typed_sentence(rng, 3, 2, 1);

        std::vector<ClassSet> classes(2 + rng() % 2);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            classes[c].label = "class" + std::to_string(c);
            classes[c].members = random_classifiers(rng, 1 + rng() % 3, 2);
        }

        const ClassificationResult direct = classify_direct(s, classes);
        ClassifyOptions options;
        options.backend = Backend::Direct;
        const ClassificationResult deferred = classify_deferred(s, classes, options);

        CHECK(deferred.label == direct.label);
        CHECK(deferred.class_index == direct.class_index);
        CHECK(deferred.member_index == direct.member_index);
        ++compared;
    }
    REQUIRE(compared == 100);
}

TEST_CASE("randomized backends classify well-separated sentences", "[deferred][statistical]") {
    std::mt19937_64 rng(70);
    const std::size_t dim_n = 8, dim_s = 8;

    // Craft a sentence whose meaning is exactly the first basis vector: the
    // verb tensor is noun (x) target, so the noun wire contracts to 1.
    const MeaningTensor noun = random_unit_tensor(rng, {dim_n}, "robot");
    const MeaningTensor target = MeaningTensor::basis_vector(dim_s, 0);
    MeaningTensor verb{{dim_n, dim_s}, "hums"};
    for (const auto& [i, v] : noun.entries()) verb.set(i * dim_s + 0, v);
    const TypedSentence s =
        make_typed_sentence({"robot", "hums"}, {T("n"), T("n^r s")}, {noun, verb});

    std::vector<ClassSet> classes(2);
    classes[0].label = "hum";
    classes[0].members = {target};
    classes[1].label = "buzz";
    classes[1].members = {MeaningTensor::basis_vector(dim_s, 1),
                          MeaningTensor::basis_vector(dim_s, 2)};

    int mc_ok = 0, q_ok = 0;
    for (int t = 0; t < 50; ++t) {
        ClassifyOptions options;
        options.seed = static_cast<std::uint64_t>(t);
        options.backend = Backend::MonteCarlo;
        if (classify_deferred(s, classes, options).label == "hum") ++mc_ok;
        options.backend = Backend::Quantum;
        if (classify_deferred(s, classes, options).label == "hum") ++q_ok;
    }
    CHECK(mc_ok >= 45);
    CHECK(q_ok >= 45);
}

TEST_CASE("centroid mode collapses classes to their mean member", "[deferred]") {
    std::mt19937_64 rng(71);
    const TypedSentence s = svo_sentence(rng, 4, 3);

    std::vector<ClassSet> classes(2);
    classes[0].label = "a";
    const MeaningTensor shared = random_unit_tensor(rng, {3});
    classes[0].members = {shared, shared};  // centroid equals the member
    classes[1].label = "b";
    classes[1].members = random_classifiers(rng, 2, 3);

    const ClassificationResult full = classify_direct(s, classes, true);
    CHECK(full.member_index == 0);  // centroids expose one candidate per class

    ClassifyOptions options;
    options.centroids = true;
    const ClassificationResult same = classify_deferred(s, classes, options);
    CHECK(same.label == full.label);
}

TEST_CASE("noise perturbation", "[deferred]") {
    std::mt19937_64 rng(72);
    const MeaningTensor t = random_sparse_unit_vector(rng, 64, 8);

    SECTION("zero strength is the identity") {
        const MeaningTensor same = noise_perturb(t, 0.0, 3);
        CHECK(same.entries() == t.entries());
    }
    SECTION("perturbed tensors stay normalized and close") {
        const double eps = 0.125;
        const MeaningTensor p = noise_perturb(t, eps, 3);
        CHECK(p.norm() == Catch::Approx(1.0).margin(1e-12));

        MeaningTensor diff{t.wire_dims()};
        for (const auto& [c, v] : t.entries()) diff.add(c, v);
        for (const auto& [c, v] : p.entries()) diff.add(c, -v);
        CHECK(diff.norm() < 3 * eps);

        // The support can only pick up about eps * d fresh coordinates.
        CHECK(p.nonzero_count() <= t.nonzero_count() + 1 +
                                       static_cast<std::size_t>(std::ceil(eps * 8)));
    }
    SECTION("a fixed seed reproduces the perturbation") {
        CHECK(noise_perturb(t, 0.1, 9).entries() == noise_perturb(t, 0.1, 9).entries());
    }
    SECTION("negative strength is rejected") {
        CHECK_THROWS_AS(noise_perturb(t, -0.1, 1), DomainError);
    }
}
