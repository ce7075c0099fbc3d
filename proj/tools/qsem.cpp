// Command line front end: corpus ingestion, verb building, sentence parsing,
// nearest-candidate retrieval, classification, query-count sweeps, and the
// storage accounting table.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsem/bench.hpp"
#include "qsem/closest_vector.hpp"
#include "qsem/corpus.hpp"
#include "qsem/deferred.hpp"
#include "qsem/pregroup.hpp"
#include "qsem/store.hpp"
#include "qsem/tensor.hpp"

using nlohmann::json;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qsem::StoreError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qsem::StoreError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw qsem::StoreError("failed writing '" + path + "'");
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

json estimates_json(const std::vector<double>& estimates) {
    json arr = json::array();
    for (double e : estimates) {
        if (std::isnan(e))
            arr.push_back(nullptr);
        else
            arr.push_back(e);
    }
    return arr;
}

json nn_result_json(const qsem::NNResult& r) {
    json doc;
    doc["argmax_index"] = r.argmax_index;
    doc["estimates"] = estimates_json(r.estimates);
    doc["o_calls"] = r.counter.o_calls;
    doc["f_calls"] = r.counter.f_calls;
    doc["total_queries"] = r.counter.total();
    doc["bound"] = r.bound;
    return doc;
}

json tree_json(const std::vector<std::string>& tokens, const qsem::DerivationTree& tree,
               const qsem::Layering& layering) {
    json doc;
    doc["head"] = tree.head;
    doc["head_token"] = tokens[tree.head];
    doc["depth"] = tree.depth;
    json layers = json::array();
    for (qsem::Layer l : layering.layer)
        layers.push_back(l == qsem::Layer::Top ? "top" : "bottom");
    doc["layer"] = layers;
    json edges = json::array();
    for (const qsem::DerivationEdge& e : tree.edges)
        edges.push_back(json::array({e.word_a, e.word_b}));
    doc["edges"] = edges;
    return doc;
}

void print_tree(const std::vector<std::string>& tokens, const qsem::DerivationTree& tree,
                const qsem::Layering& layering) {
    for (std::size_t w = 0; w < tree.word_count; ++w)
        std::printf("  %c [depth %zu, %s] %s\n", w == tree.head ? '*' : ' ', tree.depth[w],
                    layering.layer[w] == qsem::Layer::Top ? "top" : "bottom",
                    tokens[w].c_str());
    for (const qsem::DerivationEdge& e : tree.edges)
        std::printf("  %s -- %s  (%zu cup%s)\n", tokens[e.word_a].c_str(),
                    tokens[e.word_b].c_str(), e.cups.size(), e.cups.size() == 1 ? "" : "s");
}

// --------------------------------------------------------------------------
// ingest
// --------------------------------------------------------------------------

struct IngestArgs {
    std::string corpus;
    std::string out;
    std::size_t basis_size = 2000;
    std::size_t window = 5;
    std::size_t min_count = 1;
    std::string words;  // comma separated; empty = every distinct token
};

int run_ingest(const IngestArgs& args) {
    const std::vector<std::string> tokens = qsem::tokenize(read_text(args.corpus));
    const qsem::ContextBasis basis = qsem::build_basis(tokens, args.basis_size);
    const qsem::CorpusConfig config{args.window, args.basis_size, args.min_count};

    std::vector<std::string> words;
    const bool explicit_words = !args.words.empty();
    if (explicit_words) {
        words = split_list(args.words);
    } else {
        const std::set<std::string> distinct(tokens.begin(), tokens.end());
        words.assign(distinct.begin(), distinct.end());
    }

    qsem::VectorStore store;
    std::size_t skipped = 0;
    for (const std::string& word : words) {
        try {
            store.put(word, qsem::build_word_vector(tokens, word, basis, config));
        } catch (const qsem::DomainError& e) {
            if (explicit_words) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            ++skipped;
        }
    }
    if (store.size() == 0) {
        std::fprintf(stderr, "error: no word received a vector\n");
        return 1;
    }
    store.save(args.out);
    std::printf("corpus: %zu tokens, %zu candidates; basis %zu; stored %zu vectors (%zu skipped)\n",
                tokens.size(), words.size(), basis.size(), store.size(), skipped);
    return 0;
}

// --------------------------------------------------------------------------
// make-verb
// --------------------------------------------------------------------------

struct MakeVerbArgs {
    std::string store_dir;
    std::string verb;
    std::string pairs_path;
    std::string out;  // defaults to the input store
};

int run_make_verb(const MakeVerbArgs& args) {
    qsem::VectorStore store = qsem::VectorStore::load(args.store_dir);

    std::vector<std::pair<qsem::MeaningTensor, qsem::MeaningTensor>> pairs;
    std::istringstream in(read_text(args.pairs_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string subj, obj, extra;
        if (!(fields >> subj >> obj) || (fields >> extra))
            throw qsem::ParseError("pairs file line " + std::to_string(line_no) +
                                   ": expected 'subject object'");
        pairs.emplace_back(store.at(subj), store.at(obj));
    }

    const qsem::MeaningTensor verb = qsem::build_relational_tensor(args.verb, pairs);
    store.put(args.verb, verb);
    store.save(args.out.empty() ? args.store_dir : args.out);
    std::printf("verb '%s': %zu pairs, wires %zux%zux%zu, %zu stored entries\n",
                args.verb.c_str(), pairs.size(), verb.wire_dims()[0], verb.wire_dims()[1],
                verb.wire_dims()[2], verb.nonzero_count());
    return 0;
}

// --------------------------------------------------------------------------
// parse
// --------------------------------------------------------------------------

struct ParseArgs {
    std::string lexicon;
    std::string sentence;
    bool fragment = false;
    std::string json_out;
};

int run_parse(const ParseArgs& args) {
    const qsem::Lexicon lexicon = qsem::Lexicon::load(args.lexicon);
    const std::vector<std::string> tokens = qsem::tokenize(args.sentence);
    if (tokens.empty()) {
        std::fprintf(stderr, "error: empty sentence\n");
        return 1;
    }
    std::vector<qsem::PregroupType> types;
    for (const std::string& token : tokens) types.push_back(lexicon.at(token));

    qsem::CupMatching matching;
    try {
        matching = args.fragment ? qsem::reduce_fragment(types) : qsem::reduce(types);
    } catch (const qsem::UngrammaticalError& e) {
        std::fprintf(stderr, "ungrammatical: %s\n", e.what());
        return 1;
    }
    const qsem::FlattenedTypes flat = qsem::flatten_types(types);
    const qsem::DerivationTree tree = qsem::build_tree(tokens.size(), matching,
                                                       flat.word_of_index);
    const qsem::Layering layering = qsem::two_coloring(tree);

    std::printf("grammatical: %zu words, %zu cups, head '%s'\n", tokens.size(),
                matching.pairs.size(), tokens[tree.head].c_str());
    print_tree(tokens, tree, layering);

    if (!args.json_out.empty()) {
        json doc;
        doc["command"] = "parse";
        doc["tokens"] = tokens;
        json type_names = json::array();
        for (const qsem::PregroupType& t : types) type_names.push_back(qsem::to_string(t));
        doc["types"] = type_names;
        json cups = json::array();
        for (const auto& [a, b] : matching.pairs) cups.push_back(json::array({a, b}));
        doc["cups"] = cups;
        doc["residual"] = matching.residual;
        doc["tree"] = tree_json(tokens, tree, layering);
        write_text(args.json_out, doc.dump(2) + "\n");
    }
    return 0;
}

// --------------------------------------------------------------------------
// nn
// --------------------------------------------------------------------------

struct NNArgs {
    std::string store_dir;
    std::string query;
    std::string candidates;
    std::string backend = "direct";
    double eps = 0.05;
    double delta = 0.1;
    std::uint64_t seed = 1;
    std::string report;
};

int run_nn(const NNArgs& args) {
    const qsem::VectorStore store = qsem::VectorStore::load(args.store_dir);
    const std::vector<std::string> names = split_list(args.candidates);
    if (names.empty()) {
        std::fprintf(stderr, "error: no candidates given\n");
        return 1;
    }
    std::vector<qsem::MeaningTensor> candidates;
    for (const std::string& name : names) candidates.push_back(store.at(name));
    const qsem::MeaningTensor query = store.at(args.query);

    const qsem::ClosestVectorInstance inst =
        qsem::ClosestVectorInstance::from_tensors(query, candidates);
    const qsem::Backend backend = qsem::parse_backend(args.backend);
    qsem::NNResult result;
    switch (backend) {
        case qsem::Backend::Direct:
            result = qsem::nn_direct(inst, {args.eps, args.delta});
            break;
        case qsem::Backend::MonteCarlo:
            result = qsem::nn_monte_carlo(inst, args.eps, args.delta, args.seed);
            break;
        case qsem::Backend::Quantum:
            result = qsem::nn_quantum_sim(inst, args.eps, args.delta, args.seed);
            break;
    }

    std::printf("nearest to '%s': '%s' (index %zu), estimate %.6f, %llu queries (bound %.4g)\n",
                args.query.c_str(), names[result.argmax_index].c_str(), result.argmax_index,
                result.estimates[result.argmax_index],
                static_cast<unsigned long long>(result.counter.total()), result.bound);

    if (!args.report.empty()) {
        json doc = nn_result_json(result);
        doc["command"] = "nn";
        doc["backend"] = qsem::to_string(backend);
        doc["query"] = args.query;
        doc["candidates"] = names;
        doc["argmax"] = names[result.argmax_index];
        doc["similarity"] = result.estimates[result.argmax_index];
        doc["eps"] = args.eps;
        doc["delta"] = args.delta;
        doc["seed"] = args.seed;
        doc["dim"] = inst.dim();
        doc["sparsity"] = inst.sparsity();
        doc["r_max"] = inst.r_max();
        doc["qram_address_qubits"] = qsem::ceil_log2_u64(inst.dim());
        write_text(args.report, doc.dump(2) + "\n");
    }
    return 0;
}

// --------------------------------------------------------------------------
// classify
// --------------------------------------------------------------------------

struct ClassifyArgs {
    std::string store_dir;
    std::string lexicon;
    std::string sentence;
    std::string classes_path;
    std::string method = "deferred";
    std::string backend = "direct";
    double eps = 0.05;
    double delta = 0.1;
    std::uint64_t seed = 1;
    bool centroids = false;
    bool fragment = false;
    bool emit_tree = false;
    std::string report;
};

std::vector<qsem::ClassSet> load_classes(const std::string& path,
                                         const qsem::VectorStore& store) {
    std::vector<qsem::ClassSet> classes;
    std::map<std::string, std::size_t> index;
    std::istringstream in(read_text(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw qsem::ParseError("classes file line " + std::to_string(line_no) +
                                   ": expected 'label<TAB>token'");
        const std::string label = line.substr(0, tab);
        const std::string token = line.substr(tab + 1);
        auto [it, fresh] = index.try_emplace(label, classes.size());
        if (fresh) classes.push_back({label, {}});
        classes[it->second].members.push_back(store.at(token));
    }
    if (classes.empty()) throw qsem::ParseError("classes file '" + path + "' is empty");
    return classes;
}

int run_classify(const ClassifyArgs& args) {
    const qsem::VectorStore store = qsem::VectorStore::load(args.store_dir);
    const qsem::Lexicon lexicon = qsem::Lexicon::load(args.lexicon);
    const std::vector<std::string> tokens = qsem::tokenize(args.sentence);
    if (tokens.empty()) {
        std::fprintf(stderr, "error: empty sentence\n");
        return 1;
    }
    std::vector<qsem::PregroupType> types;
    std::vector<qsem::MeaningTensor> tensors;
    for (const std::string& token : tokens) {
        types.push_back(lexicon.at(token));
        tensors.push_back(store.at(token));
    }

    qsem::TypedSentence sentence;
    try {
        sentence = qsem::make_typed_sentence(tokens, std::move(types), std::move(tensors),
                                             args.fragment);
    } catch (const qsem::UngrammaticalError& e) {
        std::fprintf(stderr, "ungrammatical: %s\n", e.what());
        return 1;
    }

    const std::vector<qsem::ClassSet> classes = load_classes(args.classes_path, store);

    qsem::ClassifyOptions options;
    options.backend = qsem::parse_backend(args.backend);
    options.eps = args.eps;
    options.delta = args.delta;
    options.seed = args.seed;
    options.centroids = args.centroids;

    qsem::ClassificationResult result;
    if (args.method == "direct") {
        result = qsem::classify_direct(sentence, classes, args.centroids);
    } else if (args.method == "deferred") {
        result = qsem::classify_deferred(sentence, classes, options);
    } else {
        std::fprintf(stderr, "error: unknown method '%s' (direct|deferred)\n",
                     args.method.c_str());
        return 2;
    }

    std::printf("label '%s' (class %zu, member %zu), similarity %.6f, %llu queries\n",
                result.label.c_str(), result.class_index, result.member_index,
                result.similarity,
                static_cast<unsigned long long>(result.nn.counter.total()));

    const qsem::Layering layering = qsem::two_coloring(sentence.tree);
    if (args.emit_tree) print_tree(tokens, sentence.tree, layering);

    if (!args.report.empty()) {
        json doc = nn_result_json(result.nn);
        doc["command"] = "classify";
        doc["method"] = args.method;
        doc["backend"] = qsem::to_string(options.backend);
        doc["tokens"] = tokens;
        doc["label"] = result.label;
        doc["class_index"] = result.class_index;
        doc["member_index"] = result.member_index;
        doc["similarity"] = result.similarity;
        doc["centroids"] = args.centroids;
        doc["eps"] = args.eps;
        doc["delta"] = args.delta;
        doc["seed"] = args.seed;
        doc["sparsity"] = result.instance_stats.max_nonzeros;
        doc["r_max"] = result.instance_stats.max_squared_entry;
        if (args.emit_tree) doc["tree"] = tree_json(tokens, sentence.tree, layering);
        write_text(args.report, doc.dump(2) + "\n");
    }
    return 0;
}

// --------------------------------------------------------------------------
// bench
// --------------------------------------------------------------------------

struct BenchArgs {
    std::string sweep = "M";
    std::string grid = "4:512:x2";
    std::string backends = "direct,quantum";
    std::size_t num_candidates = 16;
    std::size_t dimension = 64;
    std::size_t sparsity = 8;
    double eps = 0.05;
    double delta = 0.1;
    std::size_t seeds = 20;
    std::uint64_t base_seed = 1;
    std::string out;
    std::string json_out;
    bool assert_slopes = false;
};

int run_bench_cmd(const BenchArgs& args) {
    qsem::BenchPlan plan;
    try {
        plan.sweep = qsem::parse_sweep_variable(args.sweep);
        plan.grid = qsem::parse_grid(args.grid);
        for (const std::string& name : split_list(args.backends))
            plan.backends.push_back(qsem::parse_backend(name));
        plan.num_candidates = args.num_candidates;
        plan.dimension = args.dimension;
        plan.sparsity = args.sparsity;
        plan.eps = args.eps;
        plan.delta = args.delta;
        plan.seeds = args.seeds;
        plan.base_seed = args.base_seed;
        plan.validate();
    } catch (const qsem::DomainError& e) {
        std::fprintf(stderr, "invalid plan: %s\n", e.what());
        return 2;
    }

    const qsem::BenchReport report = qsem::run_bench(plan);

    std::printf("%-8s %10s %16s %14s %14s\n", "backend", qsem::to_string(plan.sweep).c_str(),
                "mean_queries", "std", "bound");
    for (const qsem::BenchCell& cell : report.cells)
        std::printf("%-8s %10zu %16.1f %14.1f %14.4g\n",
                    qsem::to_string(cell.backend).c_str(), cell.sweep_value,
                    cell.mean_queries, cell.std_queries, cell.min_bound);
    for (const auto& [backend, fit] : report.slopes)
        std::printf("slope %-8s %.4f +- %.4f\n", qsem::to_string(backend).c_str(), fit.slope,
                    fit.ci95);

    if (!args.out.empty()) write_text(args.out, qsem::emit_plot_data(report));
    if (!args.json_out.empty()) write_text(args.json_out, qsem::report_to_json(report));

    if (!qsem::bounds_respected(report)) {
        std::fprintf(stderr, "bound violation: a cell exceeded its analytic query bound\n");
        return 3;
    }
    if (args.assert_slopes) {
        const auto violators =
            qsem::slope_violations(report, qsem::default_slope_expectations());
        if (!violators.empty()) {
            for (qsem::Backend b : violators)
                std::fprintf(stderr, "slope violation: %s\n", qsem::to_string(b).c_str());
            return 3;
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// storage
// --------------------------------------------------------------------------

struct StorageArgs {
    std::size_t noun_dim = 2000;
    std::string verbs = "1,10000";
    std::string out;
};

int run_storage(const StorageArgs& args) {
    std::vector<std::size_t> verb_counts;
    for (const std::string& item : split_list(args.verbs)) {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(item, &pos);
        if (pos != item.size() || v == 0)
            throw qsem::DomainError("invalid verb count '" + item + "'");
        verb_counts.push_back(static_cast<std::size_t>(v));
    }
    const std::string csv = qsem::emit_storage_table(args.noun_dim, verb_counts);
    std::fputs(csv.c_str(), stdout);
    if (!args.out.empty()) write_text(args.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compositional sentence semantics with query-counted retrieval"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "1.0.0");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "build word vectors from a text corpus");
    ingest->add_option("--corpus", ingest_args.corpus, "plain-text corpus file")->required();
    ingest->add_option("--out", ingest_args.out, "store directory to write")->required();
    ingest->add_option("--basis-size", ingest_args.basis_size, "context basis size")
        ->capture_default_str();
    ingest->add_option("--window", ingest_args.window, "co-occurrence window radius")
        ->capture_default_str();
    ingest->add_option("--min-count", ingest_args.min_count, "minimum word frequency")
        ->capture_default_str();
    ingest->add_option("--words", ingest_args.words,
                       "comma-separated words to vectorize (default: all)");

    MakeVerbArgs verb_args;
    auto* make_verb =
        app.add_subcommand("make-verb", "build a relational verb tensor from noun pairs");
    make_verb->add_option("--store", verb_args.store_dir, "store with the noun vectors")
        ->required();
    make_verb->add_option("--verb", verb_args.verb, "verb token to create")->required();
    make_verb
        ->add_option("--pairs", verb_args.pairs_path,
                     "file of 'subject object' tokens, one pair per line")
        ->required();
    make_verb->add_option("--out", verb_args.out, "output store (default: --store)");

    ParseArgs parse_args;
    auto* parse = app.add_subcommand("parse", "reduce a sentence and print its tree");
    parse->add_option("--lexicon", parse_args.lexicon, "word<TAB>type lexicon file")
        ->required();
    parse->add_option("--sentence", parse_args.sentence, "sentence text")->required();
    parse->add_flag("--fragment", parse_args.fragment, "accept noun-phrase fragments");
    parse->add_option("--json", parse_args.json_out, "write the parse as JSON");

    NNArgs nn_args;
    auto* nn = app.add_subcommand("nn", "nearest candidate to a stored query vector");
    nn->add_option("--store", nn_args.store_dir, "vector store directory")->required();
    nn->add_option("--query", nn_args.query, "query token")->required();
    nn->add_option("--candidates", nn_args.candidates, "comma-separated candidate tokens")
        ->required();
    nn->add_option("--backend", nn_args.backend, "direct | mc | quantum")
        ->capture_default_str();
    nn->add_option("--eps", nn_args.eps, "estimate accuracy")->capture_default_str();
    nn->add_option("--delta", nn_args.delta, "failure probability")->capture_default_str();
    nn->add_option("--seed", nn_args.seed, "random seed")->capture_default_str();
    nn->add_option("--report", nn_args.report, "write a JSON report");

    ClassifyArgs classify_args;
    auto* classify = app.add_subcommand("classify", "classify a sentence against class sets");
    classify->add_option("--store", classify_args.store_dir, "vector store directory")
        ->required();
    classify->add_option("--lexicon", classify_args.lexicon, "word<TAB>type lexicon file")
        ->required();
    classify->add_option("--sentence", classify_args.sentence, "sentence text")->required();
    classify
        ->add_option("--classes", classify_args.classes_path,
                     "label<TAB>token class file, one member per line")
        ->required();
    classify->add_option("--method", classify_args.method, "deferred | direct")
        ->capture_default_str();
    classify->add_option("--backend", classify_args.backend, "direct | mc | quantum")
        ->capture_default_str();
    classify->add_option("--eps", classify_args.eps, "estimate accuracy")
        ->capture_default_str();
    classify->add_option("--delta", classify_args.delta, "failure probability")
        ->capture_default_str();
    classify->add_option("--seed", classify_args.seed, "random seed")->capture_default_str();
    classify->add_flag("--centroids", classify_args.centroids,
                       "one candidate per class: normalized member mean");
    classify->add_flag("--fragment", classify_args.fragment, "accept noun-phrase fragments");
    classify->add_flag("--emit-tree", classify_args.emit_tree, "print the derivation tree");
    classify->add_option("--report", classify_args.report, "write a JSON report");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "query-count sweep over synthetic instances");
    bench->add_option("--sweep", bench_args.sweep, "swept variable: M | N | d")
        ->capture_default_str();
    bench->add_option("--grid", bench_args.grid, "grid spec a:b:x2 or a:b:+k")
        ->capture_default_str();
    bench->add_option("--backends", bench_args.backends, "comma-separated backends")
        ->capture_default_str();
    bench->add_option("--num-candidates", bench_args.num_candidates, "M when not swept")
        ->capture_default_str();
    bench->add_option("--dim", bench_args.dimension, "N when not swept")
        ->capture_default_str();
    bench->add_option("--sparsity", bench_args.sparsity, "d when not swept")
        ->capture_default_str();
    bench->add_option("--eps", bench_args.eps, "estimate accuracy")->capture_default_str();
    bench->add_option("--delta", bench_args.delta, "failure probability")
        ->capture_default_str();
    bench->add_option("--seeds", bench_args.seeds, "instances per cell")
        ->capture_default_str();
    bench->add_option("--base-seed", bench_args.base_seed, "seed offset")
        ->capture_default_str();
    bench->add_option("--out", bench_args.out, "write plot CSV");
    bench->add_option("--json", bench_args.json_out, "write the full JSON report");
    bench->add_flag("--assert-slopes", bench_args.assert_slopes,
                    "exit 3 unless fitted slopes match expectations");

    StorageArgs storage_args;
    auto* storage = app.add_subcommand("storage", "classical-vs-qubit storage table");
    storage->add_option("--noun-dim", storage_args.noun_dim, "noun space dimension")
        ->capture_default_str();
    storage->add_option("--verbs", storage_args.verbs, "comma-separated verb counts")
        ->capture_default_str();
    storage->add_option("--out", storage_args.out, "write the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ingest) return run_ingest(ingest_args);
        if (*make_verb) return run_make_verb(verb_args);
        if (*parse) return run_parse(parse_args);
        if (*nn) return run_nn(nn_args);
        if (*classify) return run_classify(classify_args);
        if (*bench) return run_bench_cmd(bench_args);
        if (*storage) return run_storage(storage_args);
    } catch (const qsem::DomainError& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
