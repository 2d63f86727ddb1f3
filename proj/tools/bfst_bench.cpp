// Serial vs OpenMP timing for the two data-parallel kernels: window
// disambiguation (the expensive stage of compilation) and batch tagging.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "bfst/btype.hpp"
#include "bfst/eval.hpp"
#include "bfst/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bfst;

namespace {

using Clock = std::chrono::steady_clock;

double time_of(const std::function<void()>& fn) {
    auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Random dense model, comparable to a mid-size tag set.
HmmModel random_model(std::size_t num_tags, std::size_t num_classes, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto table = std::make_shared<SymbolTable>();
    std::vector<SymbolId> tags;
    for (std::size_t i = 0; i < num_tags; ++i)
        tags.push_back(table->intern("T" + std::to_string(i), SymbolKind::Tag));

    std::vector<AmbiguityClass> classes;
    std::set<std::vector<SymbolId>> seen;
    while (classes.size() < num_classes) {
        std::vector<SymbolId> members;
        for (SymbolId t : tags)
            if (gen() % 3 == 0) members.push_back(t);
        if (members.empty()) members.push_back(tags[gen() % num_tags]);
        if (!seen.insert(members).second) continue;
        SymbolId id = table->intern(class_name(*table, members), SymbolKind::Class);
        classes.push_back({id, members});
    }
    for (SymbolId t : tags) {
        bool covered = false;
        for (const AmbiguityClass& c : classes)
            covered |= std::binary_search(c.members.begin(), c.members.end(), t);
        if (!covered && seen.insert({t}).second) {
            SymbolId id = table->intern(class_name(*table, {t}), SymbolKind::Class);
            classes.push_back({id, {t}});
        }
    }

    auto rand01 = [&] { return 0.05 + static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<double> pi(num_tags), trans(num_tags * num_tags),
        emit(num_classes * num_tags, 0.0);
    double sum = 0.0;
    for (auto& p : pi) sum += (p = rand01());
    for (auto& p : pi) p /= sum;
    for (std::size_t i = 0; i < num_tags; ++i) {
        sum = 0.0;
        for (std::size_t j = 0; j < num_tags; ++j) sum += (trans[i * num_tags + j] = rand01());
        for (std::size_t j = 0; j < num_tags; ++j) trans[i * num_tags + j] /= sum;
    }
    for (std::size_t j = 0; j < num_tags; ++j) {
        sum = 0.0;
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < num_classes; ++i) {
            if (std::binary_search(classes[i].members.begin(), classes[i].members.end(),
                                   tags[j])) {
                emit[i * num_tags + j] = rand01();
                sum += emit[i * num_tags + j];
                rows.push_back(i);
            }
        }
        for (std::size_t i : rows) emit[i * num_tags + j] /= sum;
    }
    return HmmModel(table, tags, classes, pi, trans, emit);
}

} // namespace

int main() {
    const HmmModel model = random_model(10, 40, 7);

    BTypeConfig cfg;
    cfg.look_back = 2;
    cfg.look_ahead = 1;
    cfg.max_states = 100000000;
    std::vector<BTypeSequence> seqs = enumerate_bsequences(model, cfg);

    std::vector<TaggedBTypeSequence> serial_tagged, parallel_tagged;
    double t_serial = time_of([&] { serial_tagged = disambiguate_all_serial(model, seqs); });
    double t_parallel = time_of([&] { parallel_tagged = disambiguate_all(model, seqs); });
    bool same = serial_tagged == parallel_tagged;

    std::printf("disambiguation of %zu windows\n", seqs.size());
    std::printf("  serial   %8.3f s\n", t_serial);
    std::printf("  openmp   %8.3f s   speedup %.2fx   identical %s\n", t_parallel,
                t_parallel > 0 ? t_serial / t_parallel : 0.0, same ? "yes" : "NO");

    BTypeConfig small;
    small.look_back = 1;
    small.look_ahead = 1;
    small.max_states = 100000000;
    Fst b = compile_btype(model, small);
    std::vector<Sentence> sentences = sample_sentences(model, 200000, 11);

    std::vector<TagResult> serial_tags, parallel_tags;
    double t_tag_serial =
        time_of([&] { serial_tags = tag_sentences_serial(b, sentences, ApplyMode::First); });
    double t_tag_parallel =
        time_of([&] { parallel_tags = tag_sentences(b, sentences, ApplyMode::First); });

    std::size_t tokens = 0;
    for (const Sentence& s : sentences) tokens += s.words.size();
    bool tags_same = true;
    for (std::size_t i = 0; i < serial_tags.size(); ++i)
        if (serial_tags[i].tags != parallel_tags[i].tags) tags_same = false;

    std::printf("tagging %zu tokens in %zu sentences with b-FST(1,1)\n", tokens,
                sentences.size());
    std::printf("  serial   %8.3f s  %10.0f words/s\n", t_tag_serial,
                tokens / t_tag_serial);
    std::printf("  openmp   %8.3f s  %10.0f words/s   speedup %.2fx   identical %s\n",
                t_tag_parallel, tokens / t_tag_parallel,
                t_tag_serial / t_tag_parallel, tags_same ? "yes" : "NO");
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    return same && tags_same ? 0 : 1;
}
