#include "bfst/fst.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <unordered_map>

namespace bfst {

namespace {

void check_symbol_in_table(const SymbolTablePtr& table, SymbolId s) {
    if (!table || !table->contains(s))
        throw Error("symbol id " + std::to_string(s) + " does not resolve in the table");
}

void check_compatible(const Fst& a, const Fst& b) {
    if (!compatible(a.table(), b.table()))
        throw Error("operation on Fsts with incompatible symbol tables");
}

void check_acceptor(const Fst& a, const char* op) {
    if (!a.is_acceptor())
        throw Error(std::string(op) + " requires an acceptor (upper == lower on every arc)");
}

void check_frozen(const SymbolTablePtr& table, const char* op) {
    if (!table || !table->frozen())
        throw Error(std::string(op) + " requires a frozen symbol table (closed alphabet)");
}

// Arcs grouped by source state, each group in canonical order.
struct Adjacency {
    std::vector<Arc> arcs;
    std::vector<std::uint32_t> offset; // per state: [offset[s], offset[s+1])

    explicit Adjacency(const Fst& f) {
        arcs = f.arcs();
        std::sort(arcs.begin(), arcs.end());
        offset.assign(f.num_states() + 1, 0);
        for (const Arc& a : arcs) offset[a.src + 1]++;
        for (std::size_t s = 1; s < offset.size(); ++s) offset[s] += offset[s - 1];
    }

    std::pair<std::uint32_t, std::uint32_t> range(StateId s) const {
        return {offset[s], offset[s + 1]};
    }
};

std::vector<StateId> forward_reachable(const Fst& f) {
    std::vector<char> seen(f.num_states(), 0);
    std::vector<StateId> stack{f.initial()};
    seen[f.initial()] = 1;
    std::vector<std::vector<StateId>> out(f.num_states());
    for (const Arc& a : f.arcs()) out[a.src].push_back(a.dst);
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (StateId d : out[s]) {
            if (!seen[d]) {
                seen[d] = 1;
                stack.push_back(d);
            }
        }
    }
    std::vector<StateId> result;
    for (StateId s = 0; s < f.num_states(); ++s)
        if (seen[s]) result.push_back(s);
    return result;
}

std::vector<char> coaccessible(const Fst& f) {
    std::vector<char> seen(f.num_states(), 0);
    std::vector<std::vector<StateId>> in(f.num_states());
    for (const Arc& a : f.arcs()) in[a.dst].push_back(a.src);
    std::vector<StateId> stack;
    for (StateId s : f.finals()) {
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (StateId p : in[s]) {
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
        }
    }
    return seen;
}

// Closure over eps:eps arcs only; one-sided epsilon arcs stay.
Fst remove_eps_eps(const Fst& f) {
    bool has_ee = false;
    for (const Arc& a : f.arcs())
        if (a.upper == kEpsilon && a.lower == kEpsilon) { has_ee = true; break; }
    if (!has_ee) return f;

    std::vector<std::vector<StateId>> eps_out(f.num_states());
    for (const Arc& a : f.arcs())
        if (a.upper == kEpsilon && a.lower == kEpsilon) eps_out[a.src].push_back(a.dst);

    // closure per state (graphs here are small; BFS per state is fine)
    auto closure_of = [&](StateId s) {
        std::vector<char> seen(f.num_states(), 0);
        std::vector<StateId> stack{s}, result;
        seen[s] = 1;
        while (!stack.empty()) {
            StateId u = stack.back();
            stack.pop_back();
            result.push_back(u);
            for (StateId v : eps_out[u])
                if (!seen[v]) { seen[v] = 1; stack.push_back(v); }
        }
        return result;
    };

    std::vector<std::vector<Arc>> real_out(f.num_states());
    for (const Arc& a : f.arcs())
        if (!(a.upper == kEpsilon && a.lower == kEpsilon)) real_out[a.src].push_back(a);

    std::set<StateId> finals;
    std::vector<Arc> arcs;
    for (StateId s = 0; s < f.num_states(); ++s) {
        for (StateId u : closure_of(s)) {
            if (f.is_final(u)) finals.insert(s);
            for (const Arc& a : real_out[u])
                arcs.push_back({s, a.dst, a.upper, a.lower});
        }
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return Fst(f.num_states(), f.initial(), std::move(finals), std::move(arcs), f.table());
}

// Breadth-first canonical renumbering over sorted arcs.  Unreachable states
// are dropped; two structurally isomorphic machines come out identical.
Fst canonical(const Fst& f) {
    Adjacency adj(f);
    std::vector<StateId> order; // old ids in BFS order
    std::vector<StateId> newid(f.num_states(), std::numeric_limits<StateId>::max());
    std::deque<StateId> queue{f.initial()};
    newid[f.initial()] = 0;
    order.push_back(f.initial());
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        auto [lo, hi] = adj.range(s);
        for (std::uint32_t i = lo; i < hi; ++i) {
            StateId d = adj.arcs[i].dst;
            if (newid[d] == std::numeric_limits<StateId>::max()) {
                newid[d] = static_cast<StateId>(order.size());
                order.push_back(d);
                queue.push_back(d);
            }
        }
    }
    std::vector<Arc> arcs;
    arcs.reserve(f.num_arcs());
    for (const Arc& a : f.arcs()) {
        if (newid[a.src] == std::numeric_limits<StateId>::max()) continue;
        arcs.push_back({newid[a.src], newid[a.dst], a.upper, a.lower});
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    std::set<StateId> finals;
    for (StateId s : f.finals())
        if (newid[s] != std::numeric_limits<StateId>::max()) finals.insert(newid[s]);
    return Fst(order.size(), 0, std::move(finals), std::move(arcs), f.table());
}

// Arc labels encoded as (upper, lower) pairs for determinization.
using PairLabel = std::uint64_t;
PairLabel pair_label(const Arc& a) {
    return (static_cast<std::uint64_t>(a.upper) << 32) | a.lower;
}

// Subset construction over pair labels.  Preserves the set of pair strings,
// hence the relation.  Expects no eps:eps arcs.
Fst determinize_encoded(const Fst& f, std::size_t max_states, const std::string& stage) {
    Adjacency adj(f);
    std::map<std::vector<StateId>, StateId> ids;
    std::vector<std::vector<StateId>> subsets;
    std::vector<Arc> arcs;
    std::set<StateId> finals;

    std::vector<StateId> start{f.initial()};
    ids.emplace(start, 0);
    subsets.push_back(start);
    std::deque<StateId> queue{0};

    while (!queue.empty()) {
        StateId sid = queue.front();
        queue.pop_front();
        std::vector<StateId> subset = subsets[sid];
        bool is_final = false;
        std::map<PairLabel, std::vector<StateId>> moves;
        for (StateId s : subset) {
            if (f.is_final(s)) is_final = true;
            auto [lo, hi] = adj.range(s);
            for (std::uint32_t i = lo; i < hi; ++i)
                moves[pair_label(adj.arcs[i])].push_back(adj.arcs[i].dst);
        }
        if (is_final) finals.insert(sid);
        for (auto& [label, dests] : moves) {
            std::sort(dests.begin(), dests.end());
            dests.erase(std::unique(dests.begin(), dests.end()), dests.end());
            auto [it, inserted] = ids.emplace(dests, static_cast<StateId>(subsets.size()));
            if (inserted) {
                subsets.push_back(dests);
                if (subsets.size() > max_states)
                    throw BudgetError(stage, subsets.size(), max_states);
                queue.push_back(it->second);
            }
            arcs.push_back({sid, it->second, static_cast<SymbolId>(label >> 32),
                            static_cast<SymbolId>(label & 0xffffffffu)});
        }
    }
    return Fst(subsets.size(), 0, std::move(finals), std::move(arcs), f.table());
}

// Moore partition refinement on a trimmed, label-deterministic machine.
// Missing transitions act as an implicit dead block.
Fst minimize_encoded(const Fst& f) {
    const std::size_t n = f.num_states();
    Adjacency adj(f);

    std::vector<std::uint32_t> block(n);
    for (StateId s = 0; s < n; ++s) block[s] = f.is_final(s) ? 1 : 0;

    // Refine until stable; block ids are renumbered in first-seen order each
    // round, which makes the fixed point well-defined.
    for (;;) {
        std::map<std::pair<std::uint32_t, std::vector<std::pair<PairLabel, std::uint32_t>>>,
                 std::uint32_t>
            sig_ids;
        std::vector<std::uint32_t> next_block(n);
        for (StateId s = 0; s < n; ++s) {
            std::vector<std::pair<PairLabel, std::uint32_t>> sig;
            auto [lo, hi] = adj.range(s);
            for (std::uint32_t i = lo; i < hi; ++i)
                sig.emplace_back(pair_label(adj.arcs[i]), block[adj.arcs[i].dst]);
            auto key = std::make_pair(block[s], std::move(sig));
            auto [it, inserted] = sig_ids.emplace(std::move(key),
                                                  static_cast<std::uint32_t>(sig_ids.size()));
            (void)inserted;
            next_block[s] = it->second;
        }
        if (next_block == block) break;
        block = std::move(next_block);
    }

    std::uint32_t num_blocks = n ? *std::max_element(block.begin(), block.end()) + 1 : 1;
    std::vector<Arc> arcs;
    for (const Arc& a : f.arcs())
        arcs.push_back({block[a.src], block[a.dst], a.upper, a.lower});
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    std::set<StateId> finals;
    for (StateId s : f.finals()) finals.insert(block[s]);
    return Fst(num_blocks, block[f.initial()], std::move(finals), std::move(arcs), f.table());
}

Fst shift_states(const Fst& f, StateId offset, std::vector<Arc>* arcs,
                 std::set<StateId>* finals) {
    for (const Arc& a : f.arcs())
        arcs->push_back({a.src + offset, a.dst + offset, a.upper, a.lower});
    for (StateId s : f.finals()) finals->insert(s + offset);
    return f;
}

void check_no_any(const std::vector<std::pair<SymbolId, SymbolId>>& pairs) {
    for (auto [u, l] : pairs)
        if (u == kAny || l == kAny)
            throw Error("ANY may not appear in a stored arc; expand it first");
}

} // namespace

Fst::Fst(std::size_t num_states, StateId initial, std::set<StateId> finals,
         std::vector<Arc> arcs, SymbolTablePtr table)
    : num_states_(num_states),
      initial_(initial),
      finals_(std::move(finals)),
      arcs_(std::move(arcs)),
      table_(std::move(table)) {
    if (num_states_ == 0) throw Error("Fst must have at least one state");
    if (initial_ >= num_states_) throw Error("initial state out of range");
    for (StateId s : finals_)
        if (s >= num_states_) throw Error("final state out of range");
    for (const Arc& a : arcs_) {
        if (a.src >= num_states_ || a.dst >= num_states_)
            throw Error("arc endpoint out of range");
        if (a.upper == kAny || a.lower == kAny)
            throw Error("ANY may not appear in a stored arc");
        check_symbol_in_table(table_, a.upper);
        check_symbol_in_table(table_, a.lower);
    }
}

bool Fst::is_acceptor() const {
    return std::all_of(arcs_.begin(), arcs_.end(),
                       [](const Arc& a) { return a.upper == a.lower; });
}

bool Fst::operator==(const Fst& other) const {
    return num_states_ == other.num_states_ && initial_ == other.initial_ &&
           finals_ == other.finals_ && arcs_ == other.arcs_ &&
           compatible(table_, other.table_);
}

Fst linear(SymbolTablePtr table,
           const std::vector<std::pair<SymbolId, SymbolId>>& pairs) {
    check_no_any(pairs);
    std::vector<Arc> arcs;
    arcs.reserve(pairs.size());
    StateId s = 0;
    for (auto [u, l] : pairs) {
        check_symbol_in_table(table, u);
        check_symbol_in_table(table, l);
        arcs.push_back({s, s + 1, u, l});
        ++s;
    }
    return Fst(pairs.size() + 1, 0, {static_cast<StateId>(pairs.size())}, std::move(arcs),
               std::move(table));
}

Fst empty_string_fst(SymbolTablePtr table) {
    return Fst(1, 0, {0}, {}, std::move(table));
}

Fst empty_language_fst(SymbolTablePtr table) {
    return Fst(1, 0, {}, {}, std::move(table));
}

Fst symbol_acceptor(SymbolTablePtr table, SymbolId s) {
    check_symbol_in_table(table, s);
    if (s == kAny) return any_acceptor(std::move(table));
    return linear(std::move(table), {{s, s}});
}

Fst symbols_acceptor(SymbolTablePtr table, const std::vector<SymbolId>& ids) {
    std::vector<Arc> arcs;
    for (SymbolId s : ids) {
        check_symbol_in_table(table, s);
        if (s == kEpsilon || s == kAny)
            throw Error("symbols_acceptor takes real symbols only");
        arcs.push_back({0, 1, s, s});
    }
    return Fst(2, 0, {1}, std::move(arcs), std::move(table));
}

Fst any_acceptor(SymbolTablePtr table) {
    check_frozen(table, "any (?)");
    auto sigma = table->sigma();
    return symbols_acceptor(std::move(table), sigma);
}

Fst sigma_star(SymbolTablePtr table) {
    check_frozen(table, "sigma_star");
    std::vector<Arc> arcs;
    for (SymbolId s : table->sigma()) arcs.push_back({0, 0, s, s});
    return Fst(1, 0, {0}, std::move(arcs), std::move(table));
}

Fst union_fst(const Fst& a, const Fst& b) {
    check_compatible(a, b);
    std::vector<Arc> arcs;
    std::set<StateId> finals;
    StateId a_off = 1;
    StateId b_off = static_cast<StateId>(1 + a.num_states());
    shift_states(a, a_off, &arcs, &finals);
    shift_states(b, b_off, &arcs, &finals);
    arcs.push_back({0, a.initial() + a_off, kEpsilon, kEpsilon});
    arcs.push_back({0, b.initial() + b_off, kEpsilon, kEpsilon});
    return Fst(1 + a.num_states() + b.num_states(), 0, std::move(finals), std::move(arcs),
               a.table());
}

Fst concat(const Fst& a, const Fst& b) {
    check_compatible(a, b);
    std::vector<Arc> arcs;
    std::set<StateId> a_finals, b_finals;
    shift_states(a, 0, &arcs, &a_finals);
    StateId b_off = static_cast<StateId>(a.num_states());
    shift_states(b, b_off, &arcs, &b_finals);
    for (StateId s : a_finals)
        arcs.push_back({s, b.initial() + b_off, kEpsilon, kEpsilon});
    return Fst(a.num_states() + b.num_states(), a.initial(), std::move(b_finals),
               std::move(arcs), a.table());
}

Fst star(const Fst& a) {
    std::vector<Arc> arcs;
    std::set<StateId> finals;
    shift_states(a, 1, &arcs, &finals);
    arcs.push_back({0, a.initial() + 1, kEpsilon, kEpsilon});
    for (StateId s : finals) arcs.push_back({s, 0, kEpsilon, kEpsilon});
    return Fst(1 + a.num_states(), 0, {0}, std::move(arcs), a.table());
}

Fst power(const Fst& a, std::size_t n) {
    Fst result = empty_string_fst(a.table());
    for (std::size_t i = 0; i < n; ++i) result = concat(result, a);
    return result;
}

Fst complement(const Fst& a, std::size_t max_states) {
    check_acceptor(a, "complement");
    check_frozen(a.table(), "complement");

    Fst det = determinize_encoded(remove_eps_eps(a), max_states, "complement");

    // Complete over sigma with a dead state, then flip finals.
    auto sigma = a.table()->sigma();
    StateId dead = static_cast<StateId>(det.num_states());
    std::vector<Arc> arcs = det.arcs();
    std::vector<std::set<SymbolId>> present(det.num_states() + 1);
    for (const Arc& arc : det.arcs()) present[arc.src].insert(arc.upper);
    for (StateId s = 0; s <= dead; ++s)
        for (SymbolId sym : sigma)
            if (!present[s].count(sym)) arcs.push_back({s, dead, sym, sym});
    std::set<StateId> finals;
    for (StateId s = 0; s <= dead; ++s)
        if (!det.is_final(s)) finals.insert(s);
    return trim(Fst(det.num_states() + 1, det.initial(), std::move(finals), std::move(arcs),
                    a.table()));
}

Fst term_complement(SymbolTablePtr table, SymbolId s) {
    check_symbol_in_table(table, s);
    if (s == kEpsilon || s == kAny)
        throw Error("term_complement of a reserved symbol");
    return term_complement_set(std::move(table), {s});
}

Fst term_complement_set(SymbolTablePtr table, const std::vector<SymbolId>& ids) {
    check_frozen(table, "term_complement");
    std::set<SymbolId> excluded(ids.begin(), ids.end());
    std::vector<SymbolId> kept;
    for (SymbolId s : table->sigma())
        if (!excluded.count(s)) kept.push_back(s);
    return symbols_acceptor(std::move(table), kept);
}

Fst invert(const Fst& r) {
    std::vector<Arc> arcs;
    arcs.reserve(r.num_arcs());
    for (const Arc& a : r.arcs()) arcs.push_back({a.src, a.dst, a.lower, a.upper});
    return Fst(r.num_states(), r.initial(), r.finals(), std::move(arcs), r.table());
}

Fst compose(const Fst& r, const Fst& q, std::size_t max_states, const std::string& stage) {
    check_compatible(r, q);
    Adjacency radj(r), qadj(q);

    // Composition state: (state of r, state of q, epsilon-filter state).
    // Filter: 0 = free, 1 = in a q-alone epsilon run, 2 = in an r-alone run.
    auto key_of = [&](StateId s1, StateId s2, int f) {
        return (static_cast<std::uint64_t>(s1) * q.num_states() + s2) * 3 + f;
    };
    std::unordered_map<std::uint64_t, StateId> ids;
    struct Entry { StateId s1, s2; int f; };
    std::vector<Entry> states;
    std::vector<Arc> arcs;
    std::set<StateId> finals;

    auto state_id = [&](StateId s1, StateId s2, int f) {
        auto [it, inserted] = ids.emplace(key_of(s1, s2, f),
                                          static_cast<StateId>(states.size()));
        if (inserted) {
            states.push_back({s1, s2, f});
            if (states.size() > max_states)
                throw BudgetError(stage, states.size(), max_states);
        }
        return it->second;
    };

    StateId start = state_id(r.initial(), q.initial(), 0);
    for (StateId cur = start; cur < states.size(); ++cur) {
        auto [s1, s2, f] = states[cur];
        if (r.is_final(s1) && q.is_final(s2)) finals.insert(cur);
        auto [rlo, rhi] = radj.range(s1);
        auto [qlo, qhi] = qadj.range(s2);
        for (std::uint32_t i = rlo; i < rhi; ++i) {
            const Arc& ra = radj.arcs[i];
            if (ra.lower != kEpsilon) {
                // real match on the shared tape
                for (std::uint32_t j = qlo; j < qhi; ++j) {
                    const Arc& qa = qadj.arcs[j];
                    if (qa.upper == ra.lower)
                        arcs.push_back({cur, state_id(ra.dst, qa.dst, 0), ra.upper, qa.lower});
                }
            } else {
                if (f != 1)  // r moves alone
                    arcs.push_back({cur, state_id(ra.dst, s2, 2), ra.upper, kEpsilon});
                if (f == 0) {
                    // simultaneous epsilon move, only from the free filter state
                    for (std::uint32_t j = qlo; j < qhi; ++j) {
                        const Arc& qa = qadj.arcs[j];
                        if (qa.upper == kEpsilon)
                            arcs.push_back(
                                {cur, state_id(ra.dst, qa.dst, 0), ra.upper, qa.lower});
                    }
                }
            }
        }
        for (std::uint32_t j = qlo; j < qhi; ++j) {
            const Arc& qa = qadj.arcs[j];
            if (qa.upper == kEpsilon && f != 2)  // q moves alone
                arcs.push_back({cur, state_id(s1, qa.dst, 1), kEpsilon, qa.lower});
        }
    }
    return trim(Fst(states.size(), start, std::move(finals), std::move(arcs), r.table()));
}

Fst intersect(const Fst& a, const Fst& b, std::size_t max_states) {
    check_acceptor(a, "intersect");
    check_acceptor(b, "intersect");
    return compose(a, b, max_states, "intersect");
}

Fst rewrite_to_epsilon(const Fst& r, const std::set<SymbolId>& doomed) {
    for (SymbolId s : doomed) {
        check_symbol_in_table(r.table(), s);
        if (r.table()->kind(s) != SymbolKind::Marker)
            throw Error("rewrite_to_epsilon: '" + r.table()->name(s) + "' is not a marker");
    }
    std::vector<Arc> arcs;
    arcs.reserve(r.num_arcs());
    for (const Arc& a : r.arcs()) {
        Arc out = a;
        if (doomed.count(out.upper)) out.upper = kEpsilon;
        if (doomed.count(out.lower)) out.lower = kEpsilon;
        arcs.push_back(out);
    }
    return Fst(r.num_states(), r.initial(), r.finals(), std::move(arcs), r.table());
}

Fst trim(const Fst& a) {
    std::vector<char> coacc = coaccessible(a);
    std::vector<StateId> keep;
    std::vector<StateId> newid(a.num_states(), std::numeric_limits<StateId>::max());
    for (StateId s : forward_reachable(a)) {
        if (coacc[s]) {
            newid[s] = static_cast<StateId>(keep.size());
            keep.push_back(s);
        }
    }
    if (newid[a.initial()] == std::numeric_limits<StateId>::max())
        return empty_language_fst(a.table());
    std::vector<Arc> arcs;
    for (const Arc& arc : a.arcs()) {
        if (newid[arc.src] != std::numeric_limits<StateId>::max() &&
            newid[arc.dst] != std::numeric_limits<StateId>::max())
            arcs.push_back({newid[arc.src], newid[arc.dst], arc.upper, arc.lower});
    }
    std::set<StateId> finals;
    for (StateId s : a.finals())
        if (newid[s] != std::numeric_limits<StateId>::max()) finals.insert(newid[s]);
    return Fst(keep.size(), newid[a.initial()], std::move(finals), std::move(arcs),
               a.table());
}

Fst normalize(const Fst& a, std::size_t max_states, const std::string& stage) {
    Fst t = trim(remove_eps_eps(a));
    if (t.finals().empty()) return empty_language_fst(a.table());
    t = trim(determinize_encoded(t, max_states, stage));
    t = minimize_encoded(t);
    return canonical(trim(t));
}

bool language_equal(const Fst& a, const Fst& b) {
    check_acceptor(a, "language_equal");
    check_acceptor(b, "language_equal");
    check_compatible(a, b);
    return normalize(a) == normalize(b);
}

namespace {

struct ApplySearch {
    const Adjacency& adj;
    const Fst& fst;
    const std::vector<SymbolId>& input;
    ApplyMode mode;
    std::uint64_t limit;
    std::set<std::vector<SymbolId>> outputs;
    std::vector<SymbolId> current;
    std::vector<char> on_path; // (state, position) pairs on the DFS stack
    std::uint64_t steps = 0;
    bool done = false;

    ApplySearch(const Adjacency& adj, const Fst& fst, const std::vector<SymbolId>& input,
                ApplyMode mode, std::uint64_t limit)
        : adj(adj), fst(fst), input(input), mode(mode), limit(limit),
          on_path(fst.num_states() * (input.size() + 1), 0) {}

    void record() {
        outputs.insert(current);
        if (mode == ApplyMode::First) done = true;
        if (outputs.size() > limit)
            throw Error("apply: output limit " + std::to_string(limit) + " exceeded");
    }

    void visit(StateId s, std::size_t pos) {
        if (done) return;
        if (++steps > limit * 64)
            throw Error("apply: search budget tied to output limit " +
                        std::to_string(limit) + " exceeded");
        if (pos == input.size() && fst.is_final(s)) record();
        std::size_t mark = s * (input.size() + 1) + pos;
        on_path[mark] = 1;
        auto [lo, hi] = adj.range(s);
        for (std::uint32_t i = lo; i < hi && !done; ++i) {
            const Arc& a = adj.arcs[i];
            std::size_t next_pos;
            if (a.upper == kEpsilon) {
                next_pos = pos;
            } else if (pos < input.size() && a.upper == input[pos]) {
                next_pos = pos + 1;
            } else {
                continue;
            }
            if (on_path[a.dst * (input.size() + 1) + next_pos]) continue;
            bool emitted = a.lower != kEpsilon;
            if (emitted) current.push_back(a.lower);
            visit(a.dst, next_pos);
            if (emitted) current.pop_back();
        }
        on_path[mark] = 0;
    }
};

} // namespace

ApplyResult apply(const Fst& r, const std::vector<SymbolId>& input, ApplyMode mode,
                  std::uint64_t limit) {
    for (SymbolId s : input) {
        check_symbol_in_table(r.table(), s);
        if (s == kEpsilon || s == kAny)
            throw Error("apply input may not contain epsilon or ANY");
    }
    Adjacency adj(r);
    ApplySearch search(adj, r, input, mode, limit);
    search.visit(r.initial(), 0);

    ApplyResult result;
    result.count = search.outputs.size();
    if (mode != ApplyMode::Count)
        result.outputs.assign(search.outputs.begin(), search.outputs.end());
    return result;
}

} // namespace bfst
