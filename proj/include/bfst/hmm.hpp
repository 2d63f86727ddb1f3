#ifndef BFST_HMM_HPP
#define BFST_HMM_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bfst/corpus.hpp"
#include "bfst/symtab.hpp"

namespace bfst {

// Set of tags a word form can bear; the HMM's observation symbol.
struct AmbiguityClass {
    SymbolId id = 0;                // class symbol in the table
    std::vector<SymbolId> members;  // tag ids, sorted, duplicate-free
};

inline const std::string kUnknownClassName = "[UNKNOWN]";

// First-order HMM over tags emitting ambiguity classes.  Probabilities are
// kept both linear (for exact serialization) and as natural logs with -inf
// for zero (for decoding).  Immutable once built.
class HmmModel {
public:
    HmmModel(SymbolTablePtr table, std::vector<SymbolId> tags,
             std::vector<AmbiguityClass> classes, std::vector<double> pi,
             std::vector<double> trans, std::vector<double> emit);

    const SymbolTablePtr& table() const { return table_; }
    std::size_t num_tags() const { return tags_.size(); }
    std::size_t num_classes() const { return classes_.size(); }
    const std::vector<SymbolId>& tags() const { return tags_; }
    const std::vector<AmbiguityClass>& classes() const { return classes_; }

    // Dense indices; throw on unknown symbols.
    std::size_t tag_index(SymbolId tag) const;
    std::size_t class_index(SymbolId cls) const;
    bool has_class(SymbolId cls) const;
    const AmbiguityClass& class_of(SymbolId cls) const {
        return classes_[class_index(cls)];
    }

    double pi(std::size_t t) const { return pi_[t]; }
    double trans(std::size_t prev, std::size_t next) const {
        return trans_[prev * num_tags() + next];
    }
    double emit(std::size_t c, std::size_t t) const {
        return emit_[c * num_tags() + t];
    }
    double log_pi(std::size_t t) const { return log_pi_[t]; }
    double log_trans(std::size_t prev, std::size_t next) const {
        return log_trans_[prev * num_tags() + next];
    }
    double log_emit(std::size_t c, std::size_t t) const {
        return log_emit_[c * num_tags() + t];
    }

    // Largest absolute deviation of any probability row sum from 1.
    double max_row_deviation() const;

private:
    SymbolTablePtr table_;
    std::vector<SymbolId> tags_;
    std::vector<AmbiguityClass> classes_;
    std::vector<std::size_t> tag_idx_, class_idx_; // symbol id -> dense index
    std::vector<double> pi_, trans_, emit_;
    std::vector<double> log_pi_, log_trans_, log_emit_;
};

struct TrainOptions {
    double lambda = 0.1;          // additive smoothing constant
    std::string end_tag = "SENT"; // sentence-end tag name
    // Extra word classes (tag name lists) supplied by a lexicon file.
    std::vector<std::vector<std::string>> extra_classes;
};

// Supervised maximum-likelihood estimation with additive smoothing.
// Ambiguity classes are induced from the tags observed per word form; the
// [UNKNOWN] class is estimated from hapax legomena.  Tags referenced by
// extra_classes but never observed are dropped with a warning.
HmmModel train(const Corpus& corpus, const TrainOptions& opts = {},
               std::vector<std::string>* warnings = nullptr);

// Most likely tag sequence for a class sequence under the model; ties are
// broken toward the lowest tag id at every backpointer decision.
std::vector<SymbolId> viterbi(const HmmModel& m, const std::vector<SymbolId>& classes);

// Log of pi(t1) b(c1|t1) * prod a(ti|ti-1) b(ci|ti).
double joint_logprob(const HmmModel& m, const std::vector<SymbolId>& classes,
                     const std::vector<SymbolId>& tags);

// ---- b-type sequences ------------------------------------------------------

enum class EdgeKind { None, Boundary, Tag };

struct Edge {
    EdgeKind kind = EdgeKind::None;
    SymbolId tag = 0; // valid iff kind == Tag

    static Edge none() { return {EdgeKind::None, 0}; }
    static Edge boundary() { return {EdgeKind::Boundary, 0}; }
    static Edge selected(SymbolId t) { return {EdgeKind::Tag, t}; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Context window around one ambiguity class: an edge (selected tag, sentence
// boundary, or nothing when the context length is zero), inner classes, the
// center class, and the mirrored right-hand side.
struct BTypeSequence {
    Edge left;
    std::vector<SymbolId> back_classes;  // outermost first
    SymbolId center = 0;
    std::vector<SymbolId> ahead_classes; // innermost first
    Edge right;

    friend bool operator==(const BTypeSequence&, const BTypeSequence&) = default;

    // All class slots in window order: back, center, ahead.
    std::vector<SymbolId> class_slots() const;
};

struct TaggedBTypeSequence {
    BTypeSequence source;
    SymbolId chosen = 0;                  // tag selected for the center class
    std::vector<SymbolId> context_tags;   // window-internal tags, diagnostics only

    friend bool operator==(const TaggedBTypeSequence&, const TaggedBTypeSequence&) = default;
};

// Joint log probability of a window and a full tag assignment for its class
// slots: p_start * p_middle * p_end with the edge-dependent cases
//   p_start = a(t_first|t_left) / pi(t_first) / 1   (tag / boundary / none)
//   p_end   = a(t_right|t_last) / 1                 (tag / boundary or none)
// and p_middle the emission-transition chain over the slots.
double btype_logprob(const HmmModel& m, const BTypeSequence& s,
                     const std::vector<SymbolId>& slot_tags);

// Chooses the most likely tag assignment for the window (Viterbi over the
// slots, same tie-break as viterbi()) and returns its center tag.
TaggedBTypeSequence disambiguate(const HmmModel& m, const BTypeSequence& s);

// ---- HMMv1 serialization ---------------------------------------------------

void write_hmm(std::ostream& os, const HmmModel& m);
HmmModel read_hmm(std::istream& is, const std::string& filename = "<stream>");
void save_hmm(const std::string& path, const HmmModel& m);
HmmModel load_hmm(const std::string& path);

// Canonical class name: "[TAG,TAG,...]" over sorted member ids.
std::string class_name(const SymbolTable& table, const std::vector<SymbolId>& members);

} // namespace bfst

#endif
