#ifndef BFST_LEXICON_HPP
#define BFST_LEXICON_HPP

#include <map>
#include <string>
#include <vector>

#include "bfst/corpus.hpp"
#include "bfst/hmm.hpp"
#include "bfst/symtab.hpp"

namespace bfst {

// Word classes and guesser suffixes derived from a corpus (and optionally a
// word-class file), expressed as tag-name sets.  Computed before training so
// train() can register every class the lexicon will need.
struct LexiconPlan {
    std::map<std::string, std::vector<std::string>> words;    // word -> tag names
    std::map<std::string, std::vector<std::string>> suffixes; // suffix -> tag names

    // Tag-name sets for TrainOptions::extra_classes.
    std::vector<std::vector<std::string>> class_sets() const;
};

struct LexiconOptions {
    unsigned max_suffix_len = 3;      // guesser suffix length cap
    std::size_t guesser_max_freq = 2; // suffixes come from words at most this frequent
};

LexiconPlan plan_lexicon(const Corpus& corpus, const LexiconOptions& opts = {});
// Merges `word<TAB>tag,tag,...` entries from a word-class file into the plan.
void merge_word_classes(LexiconPlan* plan, const std::string& path);

// Word -> ambiguity-class lookup chain: exact entry, then longest matching
// suffix, then [UNKNOWN].  Immutable after build; lookups are total.
class Lexicon {
public:
    Lexicon(SymbolTablePtr table, std::map<std::string, AmbiguityClass> entries,
            std::map<std::string, AmbiguityClass> suffixes, AmbiguityClass unknown_class);

    const AmbiguityClass& lookup(const std::string& word) const;

    const std::map<std::string, AmbiguityClass>& entries() const { return entries_; }
    const std::map<std::string, AmbiguityClass>& suffixes() const { return suffixes_; }
    const AmbiguityClass& unknown_class() const { return unknown_; }
    unsigned max_suffix_len() const { return max_suffix_len_; }
    const SymbolTablePtr& table() const { return table_; }

private:
    SymbolTablePtr table_;
    std::map<std::string, AmbiguityClass> entries_;
    std::map<std::string, AmbiguityClass> suffixes_;
    unsigned max_suffix_len_;
    AmbiguityClass unknown_;
};

// Resolves the plan's tag sets against the model's class inventory.  Every
// set must already be registered (train() was given the plan's class_sets).
Lexicon build_lexicon(const LexiconPlan& plan, const HmmModel& model);

// Lexicon file: `word<TAB>tag,tag,...` lines; guesser file: `-suffix<TAB>...`.
void save_lexicon(const std::string& path, const Lexicon& lex);
void save_guesser(const std::string& path, const Lexicon& lex);
Lexicon load_lexicon(const std::string& lexicon_path, const std::string& guesser_path,
                     const HmmModel& model);

} // namespace bfst

#endif
