#ifndef BFST_PARALLEL_HPP
#define BFST_PARALLEL_HPP

#include <vector>

#include "bfst/fst.hpp"
#include "bfst/hmm.hpp"
#include "bfst/tagger.hpp"

namespace bfst {

// The two data-parallel kernels: disambiguating independent context windows
// and tagging independent sentences.  Both are pure per element over an
// immutable model, so the OpenMP versions must match the serial references
// element for element; the serial forms are kept for tests and benchmarks.

std::vector<TaggedBTypeSequence> disambiguate_all_serial(
    const HmmModel& m, const std::vector<BTypeSequence>& seqs);
std::vector<TaggedBTypeSequence> disambiguate_all(const HmmModel& m,
                                                  const std::vector<BTypeSequence>& seqs,
                                                  int threads = 0);

std::vector<TagResult> tag_sentences_serial(const Fst& model,
                                            const std::vector<Sentence>& sentences,
                                            ApplyMode mode,
                                            std::uint64_t limit = kDefaultApplyLimit);
// Output order matches input order regardless of scheduling.
std::vector<TagResult> tag_sentences(const Fst& model,
                                     const std::vector<Sentence>& sentences,
                                     ApplyMode mode,
                                     std::uint64_t limit = kDefaultApplyLimit,
                                     int threads = 0);

std::vector<TagResult> tag_sentences_serial(const HmmModel& m,
                                            const std::vector<Sentence>& sentences);
std::vector<TagResult> tag_sentences(const HmmModel& m,
                                     const std::vector<Sentence>& sentences,
                                     int threads = 0);

} // namespace bfst

#endif
