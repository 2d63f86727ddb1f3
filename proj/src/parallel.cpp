#include "bfst/parallel.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bfst {

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Runs fn(i) for i in [0, n) across threads, keeping results index-stable.
// Exceptions may not escape an OpenMP region, so the first one is captured
// and rethrown after the loop.
template <typename Fn>
void parallel_index_loop(std::size_t n, int threads, Fn&& fn) {
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(bfst_parallel_error)
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    (void)threads;
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

} // namespace

std::vector<TaggedBTypeSequence> disambiguate_all_serial(
    const HmmModel& m, const std::vector<BTypeSequence>& seqs) {
    std::vector<TaggedBTypeSequence> out(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) out[i] = disambiguate(m, seqs[i]);
    return out;
}

std::vector<TaggedBTypeSequence> disambiguate_all(const HmmModel& m,
                                                  const std::vector<BTypeSequence>& seqs,
                                                  int threads) {
    const int n = resolve_threads(threads);
    if (n <= 1) return disambiguate_all_serial(m, seqs);
    std::vector<TaggedBTypeSequence> out(seqs.size());
    parallel_index_loop(seqs.size(), n, [&](std::size_t i) { out[i] = disambiguate(m, seqs[i]); });
    return out;
}

std::vector<TagResult> tag_sentences_serial(const Fst& model,
                                            const std::vector<Sentence>& sentences,
                                            ApplyMode mode, std::uint64_t limit) {
    std::vector<TagResult> out(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
        out[i] = tag_sentence(model, sentences[i], mode, limit);
    return out;
}

std::vector<TagResult> tag_sentences(const Fst& model,
                                     const std::vector<Sentence>& sentences,
                                     ApplyMode mode, std::uint64_t limit, int threads) {
    const int n = resolve_threads(threads);
    if (n <= 1) return tag_sentences_serial(model, sentences, mode, limit);
    std::vector<TagResult> out(sentences.size());
    parallel_index_loop(sentences.size(), n, [&](std::size_t i) {
        out[i] = tag_sentence(model, sentences[i], mode, limit);
    });
    return out;
}

std::vector<TagResult> tag_sentences_serial(const HmmModel& m,
                                            const std::vector<Sentence>& sentences) {
    std::vector<TagResult> out(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i)
        out[i] = tag_sentence(m, sentences[i]);
    return out;
}

std::vector<TagResult> tag_sentences(const HmmModel& m,
                                     const std::vector<Sentence>& sentences, int threads) {
    const int n = resolve_threads(threads);
    if (n <= 1) return tag_sentences_serial(m, sentences);
    std::vector<TagResult> out(sentences.size());
    parallel_index_loop(sentences.size(), n,
                        [&](std::size_t i) { out[i] = tag_sentence(m, sentences[i]); });
    return out;
}

} // namespace bfst
