#ifndef BFST_TAGGER_HPP
#define BFST_TAGGER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bfst/fst.hpp"
#include "bfst/hmm.hpp"
#include "bfst/lexicon.hpp"

namespace bfst {

struct Sentence {
    std::vector<std::string> words;
    std::vector<SymbolId> classes; // parallel to words, ids in `table`
    std::vector<SymbolId> gold;    // optional gold tags; empty when absent
    SymbolTablePtr table;          // alphabet the ids above live in
    bool synthetic_end = false;    // true when the end token was appended

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct TagResult {
    std::vector<SymbolId> tags;
    std::uint64_t n_results = 1; // alternative sequences, when counted
};

// Splits a token stream into sentences after each token whose class is the
// sentence-end class.  A trailing partial sentence gets a synthetic end
// token (word "<eos>") and is flagged.
std::vector<Sentence> segment(const Lexicon& lex, const std::vector<std::string>& tokens,
                              SymbolId end_class);

// Finds the singleton class of `end_tag` in the model; errors if missing.
SymbolId sentence_end_class(const HmmModel& m, const std::string& end_tag);

// FST tagging in first / all / count mode.  Class and tag ids are remapped by
// name when the sentence's table differs from the transducer's.
TagResult tag_sentence(const Fst& model, const Sentence& s, ApplyMode mode,
                       std::uint64_t limit = kDefaultApplyLimit);
// HMM tagging (Viterbi); always exactly one result.
TagResult tag_sentence(const HmmModel& m, const Sentence& s);

// Number of distinct tag sequences the transducer relates to the sentence.
std::uint64_t count_results(const Fst& bfst, const Sentence& s,
                            std::uint64_t limit = kDefaultApplyLimit);

// Every tag sequence the transducer relates to the sentence, sorted.
std::vector<std::vector<SymbolId>> tag_alternatives(const Fst& bfst, const Sentence& s,
                                                    std::uint64_t limit = kDefaultApplyLimit);

} // namespace bfst

#endif
