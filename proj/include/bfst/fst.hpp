#ifndef BFST_FST_HPP
#define BFST_FST_HPP

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bfst/symtab.hpp"

namespace bfst {

using StateId = std::uint32_t;

struct Arc {
    StateId src = 0;
    StateId dst = 0;
    SymbolId upper = kEpsilon;
    SymbolId lower = kEpsilon;

    friend bool operator==(const Arc&, const Arc&) = default;
    // Canonical arc order; "first result" in apply() follows it.
    friend bool operator<(const Arc& a, const Arc& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.upper != b.upper) return a.upper < b.upper;
        if (a.lower != b.lower) return a.lower < b.lower;
        return a.dst < b.dst;
    }
};

// Unweighted finite-state transducer: arcs carry an upper/lower symbol pair.
// An acceptor is an Fst with upper == lower on every arc.  Values are
// immutable once built; all operations return new Fsts.
class Fst {
public:
    Fst() = default;
    Fst(std::size_t num_states, StateId initial, std::set<StateId> finals,
        std::vector<Arc> arcs, SymbolTablePtr table);

    std::size_t num_states() const { return num_states_; }
    StateId initial() const { return initial_; }
    const std::set<StateId>& finals() const { return finals_; }
    bool is_final(StateId s) const { return finals_.count(s) != 0; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::size_t num_arcs() const { return arcs_.size(); }
    const SymbolTablePtr& table() const { return table_; }

    bool is_acceptor() const;

    // Structural equality.  After normalize() two acceptors are structurally
    // equal iff they accept the same language.
    bool operator==(const Fst& other) const;

private:
    std::size_t num_states_ = 1;
    StateId initial_ = 0;
    std::set<StateId> finals_;
    std::vector<Arc> arcs_;
    SymbolTablePtr table_;
};

inline constexpr std::size_t kNoBudget = std::numeric_limits<std::size_t>::max();

// ---- Elementary constructions ------------------------------------------

// Single-path transducer for a pair string; [] gives the empty-string
// acceptor.  ANY is rejected; epsilon is allowed on either side.
Fst linear(SymbolTablePtr table, const std::vector<std::pair<SymbolId, SymbolId>>& pairs);

Fst empty_string_fst(SymbolTablePtr table);
Fst empty_language_fst(SymbolTablePtr table);

// Acceptor for one single-symbol string.
Fst symbol_acceptor(SymbolTablePtr table, SymbolId s);
// Acceptor for any one symbol out of `ids`.
Fst symbols_acceptor(SymbolTablePtr table, const std::vector<SymbolId>& ids);
// "?" expanded against the frozen alphabet: any one symbol of sigma.
Fst any_acceptor(SymbolTablePtr table);
// Sigma*, the universal language over the frozen alphabet.
Fst sigma_star(SymbolTablePtr table);

// ---- Regular operations --------------------------------------------------

Fst union_fst(const Fst& a, const Fst& b);
Fst concat(const Fst& a, const Fst& b);
Fst star(const Fst& a);
Fst power(const Fst& a, std::size_t n);

// Acceptor complement over the frozen alphabet: Sigma* minus L(a).
Fst complement(const Fst& a, std::size_t max_states = kNoBudget);
// Any single symbol other than s.
Fst term_complement(SymbolTablePtr table, SymbolId s);
// Any single symbol not in `ids` (term complement of a symbol union).
Fst term_complement_set(SymbolTablePtr table, const std::vector<SymbolId>& ids);

// Relation composition with the standard three-state epsilon filter, so that
// paths with epsilon-labeled arcs compose correctly and without duplicates.
Fst compose(const Fst& r, const Fst& q, std::size_t max_states = kNoBudget,
            const std::string& stage = "compose");
Fst invert(const Fst& r);
Fst intersect(const Fst& a, const Fst& b, std::size_t max_states = kNoBudget);

// Overwrites doomed symbols with epsilon on whichever arc side carries them.
// Only marker symbols may be doomed.
Fst rewrite_to_epsilon(const Fst& r, const std::set<SymbolId>& doomed);

// Epsilon-free canonical form: removes eps:eps arcs, determinizes and
// minimizes over the arc-pair alphabet, and renumbers states breadth-first.
// Preserves the language/relation exactly.  For acceptors the result is the
// unique minimal DFA, so language equality becomes structural equality.
Fst normalize(const Fst& a, std::size_t max_states = kNoBudget,
              const std::string& stage = "normalize");

// Drops states that are not on some initial-to-final path.
Fst trim(const Fst& a);

bool language_equal(const Fst& a, const Fst& b);

// ---- Application ----------------------------------------------------------

enum class ApplyMode { First, All, Count };

struct ApplyResult {
    // Lower strings related to the input; lexicographically sorted.
    // Mode First keeps exactly the first output found; mode Count leaves it
    // empty and fills count only.
    std::vector<std::vector<SymbolId>> outputs;
    std::uint64_t count = 0;
};

inline constexpr std::uint64_t kDefaultApplyLimit = 1000000;

// Runs `input` (no epsilon/ANY) through the transducer.  First-result mode is
// deterministic: depth-first search visiting arcs in canonical order, so the
// first accepted path is reproducible across runs and platforms.
ApplyResult apply(const Fst& r, const std::vector<SymbolId>& input, ApplyMode mode,
                  std::uint64_t limit = kDefaultApplyLimit);

} // namespace bfst

#endif
