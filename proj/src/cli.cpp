#include "bfst/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bfst/btype.hpp"
#include "bfst/corpus.hpp"
#include "bfst/eval.hpp"
#include "bfst/fst_io.hpp"
#include "bfst/hmm.hpp"
#include "bfst/lexicon.hpp"
#include "bfst/parallel.hpp"
#include "bfst/tagger.hpp"

namespace bfst {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> read_tokens(const std::string& path) {
    std::vector<std::string> tokens;
    std::string line;
    if (path == "-") {
        while (std::getline(std::cin, line))
            if (!line.empty()) tokens.push_back(line);
        return tokens;
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    while (std::getline(is, line))
        if (!line.empty()) tokens.push_back(line);
    return tokens;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    return file;
}

// Without lexicon files, corpus words must spell class names directly (the
// convention sample_corpus uses); a lexicon that maps every class name to its
// class makes segment() and friends work unchanged.
Lexicon class_name_lexicon(const HmmModel& model) {
    std::map<std::string, AmbiguityClass> entries;
    for (const AmbiguityClass& c : model.classes())
        entries[model.table()->name(c.id)] = c;
    SymbolId unknown;
    if (!model.table()->find(kUnknownClassName, &unknown))
        throw Error("model has no " + kUnknownClassName + " class");
    return Lexicon(model.table(), std::move(entries), {}, model.class_of(unknown));
}

Lexicon make_runtime_lexicon(const HmmModel& model, const std::string& lexicon_path,
                             const std::string& guesser_path) {
    if (!lexicon_path.empty()) return load_lexicon(lexicon_path, guesser_path, model);
    return class_name_lexicon(model);
}

std::vector<Sentence> corpus_sentences(const Corpus& corpus, const Lexicon& lex,
                                       const HmmModel& model) {
    std::vector<Sentence> out;
    for (const auto& raw : corpus.sentences) {
        Sentence s;
        s.table = model.table();
        for (const Token& tok : raw) {
            s.words.push_back(tok.word);
            s.classes.push_back(lex.lookup(tok.word).id);
            SymbolId tag;
            if (!model.table()->find(tok.tag, &tag))
                throw Error("gold tag '" + tok.tag + "' is not a model tag");
            s.gold.push_back(tag);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> tag_names(const SymbolTablePtr& table,
                                   const std::vector<SymbolId>& ids) {
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (SymbolId id : ids) names.push_back(table->name(id));
    return names;
}

void print_sentence(std::ostream& os, const Sentence& s,
                    const std::vector<std::string>& tags, bool show_classes,
                    const SymbolTablePtr& table) {
    for (std::size_t i = 0; i < s.words.size(); ++i) {
        os << s.words[i];
        if (show_classes) os << '\t' << table->name(s.classes[i]);
        os << '\t' << tags[i] << '\n';
    }
}

struct CommonModelArgs {
    std::string model_path;
    std::string lexicon_path;
    std::string guesser_path;
};

void add_model_options(CLI::App* cmd, CommonModelArgs* args, bool lexicon) {
    cmd->add_option("--model", args->model_path, "HMMv1 model file")->required();
    if (lexicon) {
        cmd->add_option("--lexicon", args->lexicon_path,
                        "lexicon file (default: corpus words must be class names)");
        cmd->add_option("--guesser", args->guesser_path, "guesser suffix file");
    }
}

int run_train(const std::string& corpus_path, const std::string& model_out,
              const std::string& lexicon_out, const std::string& guesser_out,
              const std::string& word_classes, double lambda, const std::string& end_tag,
              unsigned max_suffix, std::size_t guesser_max_freq) {
    Corpus corpus = load_corpus(corpus_path, end_tag);
    LexiconPlan plan = plan_lexicon(corpus, {max_suffix, guesser_max_freq});
    if (!word_classes.empty()) merge_word_classes(&plan, word_classes);

    TrainOptions opts;
    opts.lambda = lambda;
    opts.end_tag = end_tag;
    opts.extra_classes = plan.class_sets();
    std::vector<std::string> warnings;
    HmmModel model = train(corpus, opts, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

    save_hmm(model_out, model);
    Lexicon lex = build_lexicon(plan, model);
    if (!lexicon_out.empty()) save_lexicon(lexicon_out, lex);
    if (!guesser_out.empty()) save_guesser(guesser_out, lex);

    std::cout << "trained " << model.num_tags() << " tags, " << model.num_classes()
              << " classes from " << corpus.num_tokens() << " tokens in "
              << corpus.sentences.size() << " sentences\n";
    return 0;
}

int run_compile(const std::string& model_path, unsigned beta, unsigned alpha,
                const std::string& out_path, const std::string& report_path,
                std::size_t budget, int threads) {
    HmmModel model = load_hmm(model_path);
    BTypeConfig cfg;
    cfg.look_back = beta;
    cfg.look_ahead = alpha;
    cfg.max_states = budget;
    cfg.threads = threads;
    BuildReport report;
    Fst b = compile_btype(model, cfg, &report);
    save_fst(out_path, b);
    std::string text = report.to_text();
    std::cout << text;
    if (!report_path.empty()) {
        std::ofstream os(report_path, std::ios::binary);
        if (!os) throw Error("cannot open '" + report_path + "' for writing");
        os << text;
    }
    return 0;
}

int run_tag(const CommonModelArgs& margs, const std::string& fst_path,
            const std::string& input_path, const std::string& output_path,
            const std::string& mode_name, std::uint64_t limit, bool show_classes,
            const std::string& end_tag, int threads) {
    HmmModel model = load_hmm(margs.model_path);
    Lexicon lex = make_runtime_lexicon(model, margs.lexicon_path, margs.guesser_path);
    std::vector<std::string> tokens = read_tokens(input_path);
    std::vector<Sentence> sentences =
        segment(lex, tokens, sentence_end_class(model, end_tag));

    std::ofstream file;
    std::ostream& os = open_output(file, output_path);

    if (fst_path.empty()) {
        // HMM tagging; always a single result per sentence
        std::vector<TagResult> results = tag_sentences(model, sentences, threads);
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            print_sentence(os, sentences[i], tag_names(model.table(), results[i].tags),
                           show_classes, model.table());
            os << '\n';
        }
        return 0;
    }

    Fst b = load_fst(fst_path);
    ApplyMode mode = mode_name == "first" ? ApplyMode::First
                     : mode_name == "all" ? ApplyMode::All
                                          : ApplyMode::Count;
    if (mode == ApplyMode::Count) {
        std::vector<TagResult> results =
            tag_sentences(b, sentences, ApplyMode::Count, limit, threads);
        for (const TagResult& r : results) os << "results\t" << r.n_results << '\n';
        return 0;
    }
    if (mode == ApplyMode::First) {
        std::vector<TagResult> results =
            tag_sentences(b, sentences, ApplyMode::First, limit, threads);
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            print_sentence(os, sentences[i], tag_names(b.table(), results[i].tags),
                           show_classes, model.table());
            os << '\n';
        }
        return 0;
    }
    // all alternatives, "--" between them, blank line between sentences
    for (const Sentence& s : sentences) {
        std::vector<std::vector<SymbolId>> alternatives = tag_alternatives(b, s, limit);
        for (std::size_t k = 0; k < alternatives.size(); ++k) {
            if (k) os << "--\n";
            print_sentence(os, s, tag_names(b.table(), alternatives[k]), show_classes,
                           model.table());
        }
        os << '\n';
    }
    return 0;
}

int run_eval(const CommonModelArgs& margs, const std::string& fst_path,
             const std::string& corpus_path, const std::string& end_tag,
             std::uint64_t limit, int threads, bool machine, bool histogram) {
    HmmModel model = load_hmm(margs.model_path);
    Fst b = load_fst(fst_path);
    Lexicon lex = make_runtime_lexicon(model, margs.lexicon_path, margs.guesser_path);
    Corpus corpus = load_corpus(corpus_path, end_tag);
    std::vector<Sentence> sentences = corpus_sentences(corpus, lex, model);

    std::vector<TagResult> hmm_results = tag_sentences(model, sentences, threads);

    auto t0 = Clock::now();
    std::vector<TagResult> fst_results =
        tag_sentences(b, sentences, ApplyMode::First, limit, threads);
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    std::vector<std::string> tagged, gold, hmm_tags;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const Sentence& s = sentences[i];
        for (std::size_t j = 0; j < s.words.size(); ++j) {
            tagged.push_back(b.table()->name(fst_results[i].tags[j]));
            gold.push_back(model.table()->name(s.gold[j]));
            hmm_tags.push_back(model.table()->name(hmm_results[i].tags[j]));
        }
    }

    EvalReport report = evaluate(tagged, gold, hmm_tags);
    report.states = b.num_states();
    report.arcs = b.num_arcs();
    report.words_per_sec = seconds > 0.0 ? static_cast<double>(tagged.size()) / seconds : 0.0;
    if (histogram) {
        std::vector<TagResult> counted =
            tag_sentences(b, sentences, ApplyMode::Count, limit, threads);
        std::vector<std::uint64_t> counts;
        for (const TagResult& r : counted) counts.push_back(r.n_results);
        report.result_histogram = result_count_histogram(counts);
    }
    std::cout << (machine ? report.to_machine() : report.to_text());
    return 0;
}

int run_stats(const CommonModelArgs& margs, const std::string& fst_path,
              const std::string& corpus_path, const std::string& end_tag,
              std::uint64_t limit, int threads, bool machine) {
    HmmModel model = load_hmm(margs.model_path);
    Fst b = load_fst(fst_path);
    Lexicon lex = make_runtime_lexicon(model, margs.lexicon_path, margs.guesser_path);
    Corpus corpus = load_corpus(corpus_path, end_tag);
    std::vector<Sentence> sentences = corpus_sentences(corpus, lex, model);

    std::vector<TagResult> counted =
        tag_sentences(b, sentences, ApplyMode::Count, limit, threads);
    std::vector<std::uint64_t> counts;
    for (const TagResult& r : counted) counts.push_back(r.n_results);
    std::map<std::uint64_t, double> histogram = result_count_histogram(counts);

    char line[96];
    for (const auto& [n, pct] : histogram) {
        if (machine) {
            std::snprintf(line, sizeof(line), "results_%llu\t%.2f",
                          static_cast<unsigned long long>(n), pct);
        } else {
            std::snprintf(line, sizeof(line), "results=%-6llu %10.2f",
                          static_cast<unsigned long long>(n), pct);
        }
        std::cout << line << '\n';
    }
    return 0;
}

int run_sample(const std::string& model_path, const std::string& out_path,
               std::size_t tokens, std::uint64_t seed, unsigned max_len,
               const std::string& end_tag) {
    HmmModel model = load_hmm(model_path);
    Corpus corpus = sample_corpus(model, tokens, seed, max_len, end_tag);
    if (out_path.empty() || out_path == "-")
        write_corpus(std::cout, corpus);
    else
        save_corpus(out_path, corpus);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"b-type finite-state tagger: train an HMM, compile it into an "
                 "unweighted transducer with configurable look-back/look-ahead, tag "
                 "and evaluate"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "estimate an HMM and lexicon from a corpus");
    std::string corpus_path, model_out, lexicon_out, guesser_out, word_classes;
    double lambda = 0.1;
    std::string end_tag = "SENT";
    unsigned max_suffix = 3;
    std::size_t guesser_max_freq = 2;
    train_cmd->add_option("--corpus", corpus_path, "word<TAB>tag training corpus")->required();
    train_cmd->add_option("--model", model_out, "output HMMv1 model")->required();
    train_cmd->add_option("--lexicon", lexicon_out, "output lexicon file");
    train_cmd->add_option("--guesser", guesser_out, "output guesser suffix file");
    train_cmd->add_option("--word-classes", word_classes,
                          "extra word classes merged into the lexicon");
    train_cmd->add_option("--lambda", lambda, "additive smoothing constant");
    train_cmd->add_option("--end-tag", end_tag, "sentence-end tag name");
    train_cmd->add_option("--max-suffix-len", max_suffix, "guesser suffix length cap");
    train_cmd->add_option("--guesser-max-freq", guesser_max_freq,
                          "guesser trains on words at most this frequent");

    // compile
    auto* compile_cmd = app.add_subcommand("compile", "compile the model into a b-type transducer");
    CommonModelArgs compile_model;
    unsigned beta = 0, alpha = 0;
    std::string fst_out, report_out;
    std::size_t budget = 200000;
    int threads = 0;
    compile_cmd->add_option("--model", compile_model.model_path, "HMMv1 model file")->required();
    compile_cmd->add_option("--beta", beta, "look-back length")->required();
    compile_cmd->add_option("--alpha", alpha, "look-ahead length")->required();
    compile_cmd->add_option("--out", fst_out, "output FSTv1 file")->required();
    compile_cmd->add_option("--report", report_out, "also write the build report here");
    compile_cmd->add_option("--budget", budget, "state budget per construction stage")
        ->envname("BFST_BUDGET");
    compile_cmd->add_option("--threads", threads, "worker threads (0 = all)");

    // tag
    auto* tag_cmd = app.add_subcommand("tag", "tag tokens (one per line)");
    CommonModelArgs tag_model;
    std::string tag_fst, tag_input = "-", tag_output, tag_mode = "first",
                tag_end_tag = "SENT";
    std::uint64_t tag_limit = kDefaultApplyLimit;
    bool show_classes = false;
    int tag_threads = 0;
    add_model_options(tag_cmd, &tag_model, true);
    tag_cmd->add_option("--fst", tag_fst, "compiled transducer (default: tag with the HMM)");
    tag_cmd->add_option("--input", tag_input, "token file, '-' for stdin");
    tag_cmd->add_option("--output", tag_output, "output file, default stdout");
    tag_cmd->add_option("--mode", tag_mode, "first | all | count")
        ->check(CLI::IsMember({"first", "all", "count"}));
    tag_cmd->add_option("--limit", tag_limit, "result enumeration bound");
    tag_cmd->add_flag("--show-classes", show_classes, "word<TAB>class<TAB>tag output");
    tag_cmd->add_option("--end-tag", tag_end_tag, "sentence-end tag name");
    tag_cmd->add_option("--threads", tag_threads, "worker threads (0 = all)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "accuracy and agreement against a gold corpus");
    CommonModelArgs eval_model;
    std::string eval_fst, eval_corpus, eval_end_tag = "SENT";
    std::uint64_t eval_limit = kDefaultApplyLimit;
    int eval_threads = 0;
    bool eval_machine = false, eval_histogram = false;
    add_model_options(eval_cmd, &eval_model, true);
    eval_cmd->add_option("--fst", eval_fst, "compiled transducer")->required();
    eval_cmd->add_option("--corpus", eval_corpus, "gold corpus")->required();
    eval_cmd->add_option("--end-tag", eval_end_tag, "sentence-end tag name");
    eval_cmd->add_option("--limit", eval_limit, "result enumeration bound");
    eval_cmd->add_option("--threads", eval_threads, "worker threads (0 = all)");
    eval_cmd->add_flag("--machine", eval_machine, "key<TAB>value output");
    eval_cmd->add_flag("--histogram", eval_histogram, "include the result-count histogram");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "result-count distribution per sentence");
    CommonModelArgs stats_model;
    std::string stats_fst, stats_corpus, stats_end_tag = "SENT";
    std::uint64_t stats_limit = kDefaultApplyLimit;
    int stats_threads = 0;
    bool stats_machine = false;
    add_model_options(stats_cmd, &stats_model, true);
    stats_cmd->add_option("--fst", stats_fst, "compiled transducer")->required();
    stats_cmd->add_option("--corpus", stats_corpus, "corpus to tag")->required();
    stats_cmd->add_option("--end-tag", stats_end_tag, "sentence-end tag name");
    stats_cmd->add_option("--limit", stats_limit, "result enumeration bound");
    stats_cmd->add_option("--threads", stats_threads, "worker threads (0 = all)");
    stats_cmd->add_flag("--machine", stats_machine, "key<TAB>value output");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw a corpus from the model");
    std::string sample_model, sample_out;
    std::size_t sample_tokens = 1000;
    std::uint64_t sample_seed = 42;
    unsigned sample_max_len = 12;
    std::string sample_end_tag = "SENT";
    sample_cmd->add_option("--model", sample_model, "HMMv1 model file")->required();
    sample_cmd->add_option("--tokens", sample_tokens, "minimum number of tokens");
    sample_cmd->add_option("--seed", sample_seed, "random seed")->envname("BFST_SEED");
    sample_cmd->add_option("--out", sample_out, "output corpus, default stdout");
    sample_cmd->add_option("--max-sentence-len", sample_max_len, "sentence length cap");
    sample_cmd->add_option("--end-tag", sample_end_tag, "sentence-end tag name");

    try {
        app.parse(argc, argv);
        if (train_cmd->parsed())
            return run_train(corpus_path, model_out, lexicon_out, guesser_out,
                             word_classes, lambda, end_tag, max_suffix, guesser_max_freq);
        if (compile_cmd->parsed())
            return run_compile(compile_model.model_path, beta, alpha, fst_out, report_out,
                               budget, threads);
        if (tag_cmd->parsed())
            return run_tag(tag_model, tag_fst, tag_input, tag_output, tag_mode, tag_limit,
                           show_classes, tag_end_tag, tag_threads);
        if (eval_cmd->parsed())
            return run_eval(eval_model, eval_fst, eval_corpus, eval_end_tag, eval_limit,
                            eval_threads, eval_machine, eval_histogram);
        if (stats_cmd->parsed())
            return run_stats(stats_model, stats_fst, stats_corpus, stats_end_tag,
                             stats_limit, stats_threads, stats_machine);
        if (sample_cmd->parsed())
            return run_sample(sample_model, sample_out, sample_tokens, sample_seed,
                              sample_max_len, sample_end_tag);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1; // usage errors map to 1, --help to 0
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("bfst");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace bfst
