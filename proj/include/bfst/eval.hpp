#ifndef BFST_EVAL_HPP
#define BFST_EVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bfst/corpus.hpp"
#include "bfst/hmm.hpp"
#include "bfst/tagger.hpp"

namespace bfst {

struct EvalReport {
    double accuracy = 0.0;  // % tokens matching gold, 2 decimals, half-up
    double agreement = 0.0; // % tokens matching the HMM output
    std::size_t states = 0;
    std::size_t arcs = 0;
    double words_per_sec = 0.0; // steady-state tagging speed, load time excluded
    std::map<std::uint64_t, double> result_histogram; // n results -> % sentences
    double build_seconds = 0.0;

    std::string to_text() const;
    std::string to_machine() const; // key<TAB>value lines
};

// Percentage with two decimals, rounded half-up.
double round_percent(double numerator, double denominator);

// Token-level accuracy and agreement over aligned tag-name streams.
EvalReport evaluate(const std::vector<std::string>& tagged,
                    const std::vector<std::string>& gold,
                    const std::vector<std::string>& hmm_output);

// % of sentences per result count.
std::map<std::uint64_t, double> result_count_histogram(
    const std::vector<std::uint64_t>& counts);

// Sentences sampled from the HMM generative process: tag by pi/a, then a
// class consistent with the tag by b.  Reproducible for a fixed seed across
// platforms (no std distributions involved).  Sampling continues until at
// least n_tokens tokens are emitted; a sentence ends on the end tag or at a
// length drawn from [1, max_sentence_len].
std::vector<Sentence> sample_sentences(const HmmModel& m, std::size_t n_tokens,
                                       std::uint64_t seed,
                                       unsigned max_sentence_len = 12,
                                       const std::string& end_tag = "SENT");

// Same sample as a word/tag corpus; the word form of a token is its class
// name, so classes recover from the text by table lookup.
Corpus sample_corpus(const HmmModel& m, std::size_t n_tokens, std::uint64_t seed,
                     unsigned max_sentence_len = 12,
                     const std::string& end_tag = "SENT");

} // namespace bfst

#endif
