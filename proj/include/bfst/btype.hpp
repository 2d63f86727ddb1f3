#ifndef BFST_BTYPE_HPP
#define BFST_BTYPE_HPP

#include <string>
#include <tuple>
#include <vector>

#include "bfst/fst.hpp"
#include "bfst/hmm.hpp"

namespace bfst {

struct BTypeConfig {
    unsigned look_back = 1;  // context length to the left of the center class
    unsigned look_ahead = 1; // and to the right
    // Per-stage state budget; exceeding it aborts with a stage-labeled
    // BudgetError (the "FST was not computable" outcome).
    std::size_t max_states = 200000;
    int threads = 0; // 0 = all available; disambiguation parallelizes per window
};

// One concatenation constraint: at signed distance `delta` from a marked
// position there must be `symbol` (a tag, a class, or the boundary).
struct ConstraintSpec {
    SymbolKind kind = SymbolKind::Tag; // Tag, Class or Boundary
    int delta = -1;                    // <= -1 look-back, >= +1 look-ahead
    SymbolId symbol = 0;               // kBoundary for boundary constraints
};

struct StageStats {
    std::string name;
    std::size_t states = 0;
    std::size_t arcs = 0;
    double seconds = 0.0;
};

struct BuildReport {
    unsigned look_back = 0;
    unsigned look_ahead = 0;
    std::size_t num_sequences = 0;
    std::vector<StageStats> stages;
    double total_seconds = 0.0;

    std::string to_text() const;
};

// Copy of the model's alphabet extended with every constraint marker the
// configuration can use, frozen.  All construction below runs over it.
SymbolTablePtr make_compile_table(const HmmModel& m, const BTypeConfig& cfg);

// Every context window: each center class crossed with every left variant
// (selected tag with a full look-back, or a boundary cutting it short) and
// each mirrored right variant.  Deterministic order, no duplicates.
std::vector<BTypeSequence> enumerate_bsequences(const HmmModel& m, const BTypeConfig& cfg);

// Closed-form count of the sequences enumerate_bsequences yields.
std::size_t count_bsequences(const HmmModel& m, const BTypeConfig& cfg);

// Single-path FST for one disambiguated window: identity marker arcs around
// the center class:tag pair.
Fst sequence_fst(const SymbolTablePtr& table, const HmmModel& m,
                 const TaggedBTypeSequence& t);

// B' = [union of all sequence FSTs]*, normalized.
Fst preliminary_model(const std::vector<Fst>& seqs, std::size_t max_states);

// Acceptor enforcing one ConstraintSpec, built from the regular-expression
// calculus (complement, term complement, power, concatenation).
Fst build_constraint(const SymbolTablePtr& table, const ConstraintSpec& spec,
                     std::size_t max_states);

// Intersections of all tag, class and boundary constraints for the
// configuration, in that order.  Vacuous intersections are Sigma*.
std::tuple<Fst, Fst, Fst> combine_constraints(const HmmModel& m, const BTypeConfig& cfg,
                                              const SymbolTablePtr& table);

// B'' = R_c .o. B' .o. R_t .o. R_#  (classes constrained on the upper tape,
// tags and boundaries on the lower).
Fst enforce(const Fst& bprime, const Fst& r_class, const Fst& r_tag,
            const Fst& r_boundary, std::size_t max_states);

// Deletes the constraint markers.  The production path traverses the network
// and overwrites marker symbols with epsilon, then normalizes.
Fst strip_markers(const Fst& bsecond, std::size_t max_states = kNoBudget);
// Equivalent formulation through D_r composition, kept as a test oracle:
// B = D_r.i .o. B'' .o. D_r.
Fst strip_markers_by_composition(const Fst& bsecond, std::size_t max_states = kNoBudget);

// Whole pipeline: enumerate, disambiguate, encode, constrain, strip.
Fst compile_btype(const HmmModel& m, const BTypeConfig& cfg,
                  BuildReport* report = nullptr);

} // namespace bfst

#endif
