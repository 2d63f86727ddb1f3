#include "bfst/btype.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "bfst/parallel.hpp"

namespace bfst {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Multiplies with saturation so budget estimates cannot wrap around.
std::size_t sat_mul(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > std::numeric_limits<std::size_t>::max() / b)
        return std::numeric_limits<std::size_t>::max();
    return a * b;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
    std::size_t s = a + b;
    return s < a ? std::numeric_limits<std::size_t>::max() : s;
}

std::size_t sat_pow(std::size_t base, unsigned exp) {
    std::size_t r = 1;
    while (exp--) r = sat_mul(r, base);
    return r;
}

// All class-id tuples of the given length, in lexicographic id order.
void for_each_combo(const std::vector<SymbolId>& classes, unsigned length,
                    const std::function<void(const std::vector<SymbolId>&)>& fn) {
    std::vector<SymbolId> combo(length);
    std::function<void(unsigned)> rec = [&](unsigned pos) {
        if (pos == length) {
            fn(combo);
            return;
        }
        for (SymbolId c : classes) {
            combo[pos] = c;
            rec(pos + 1);
        }
    };
    rec(0);
}

SymbolId find_marker(const SymbolTablePtr& table, const std::string& base, bool look_back,
                     unsigned distance) {
    SymbolId id;
    if (!table->find(SymbolTable::marker_name(base, look_back, distance), &id))
        throw Error("marker " + SymbolTable::marker_name(base, look_back, distance) +
                    " is not in the compile alphabet (invalid distance for this "
                    "configuration)");
    return id;
}

Fst union_all(const SymbolTablePtr& table, const std::vector<Fst>& parts) {
    if (parts.empty()) throw Error("union of no languages");
    std::vector<Arc> arcs;
    std::set<StateId> finals;
    StateId offset = 1;
    for (const Fst& p : parts) {
        for (const Arc& a : p.arcs())
            arcs.push_back({a.src + offset, a.dst + offset, a.upper, a.lower});
        for (StateId s : p.finals()) finals.insert(s + offset);
        arcs.push_back({0, p.initial() + offset, kEpsilon, kEpsilon});
        offset += static_cast<StateId>(p.num_states());
    }
    return Fst(offset, 0, std::move(finals), std::move(arcs), table);
}

} // namespace

SymbolTablePtr make_compile_table(const HmmModel& m, const BTypeConfig& cfg) {
    auto table = std::make_shared<SymbolTable>();
    const SymbolTable& base = *m.table();
    for (SymbolId id = 3; id < base.size(); ++id)
        table->intern(base.name(id), base.kind(id));

    auto add_side = [&](bool look_back, unsigned len) {
        if (len == 0) return;
        for (unsigned k = 1; k < len; ++k)
            for (const AmbiguityClass& c : m.classes())
                table->intern_marker(c.id, look_back, k);
        for (SymbolId t : m.tags()) table->intern_marker(t, look_back, len);
        for (unsigned k = 1; k <= len; ++k) table->intern_marker(kBoundary, look_back, k);
    };
    add_side(true, cfg.look_back);
    add_side(false, cfg.look_ahead);
    table->freeze();
    return table;
}

std::size_t count_bsequences(const HmmModel& m, const BTypeConfig& cfg) {
    const std::size_t t = m.num_tags(), c = m.num_classes();
    auto side = [&](unsigned len) {
        if (len == 0) return static_cast<std::size_t>(1);
        std::size_t n = sat_mul(t, sat_pow(c, len - 1)); // selected tag, full window
        for (unsigned d = 1; d <= len; ++d)              // boundary at distance d
            n = sat_add(n, sat_pow(c, d - 1));
        return n;
    };
    return sat_mul(c, sat_mul(side(cfg.look_back), side(cfg.look_ahead)));
}

std::vector<BTypeSequence> enumerate_bsequences(const HmmModel& m, const BTypeConfig& cfg) {
    std::vector<SymbolId> class_ids;
    for (const AmbiguityClass& c : m.classes()) class_ids.push_back(c.id);

    struct LeftVariant {
        Edge edge;
        std::vector<SymbolId> inner;
    };
    auto side_variants = [&](unsigned len) {
        std::vector<LeftVariant> out;
        if (len == 0) {
            out.push_back({Edge::none(), {}});
            return out;
        }
        for (SymbolId t : m.tags())
            for_each_combo(class_ids, len - 1, [&](const std::vector<SymbolId>& combo) {
                out.push_back({Edge::selected(t), combo});
            });
        for (unsigned d = 1; d <= len; ++d)
            for_each_combo(class_ids, d - 1, [&](const std::vector<SymbolId>& combo) {
                out.push_back({Edge::boundary(), combo});
            });
        return out;
    };

    std::vector<LeftVariant> lefts = side_variants(cfg.look_back);
    std::vector<LeftVariant> rights = side_variants(cfg.look_ahead);

    std::vector<BTypeSequence> out;
    out.reserve(class_ids.size() * lefts.size() * rights.size());
    for (SymbolId center : class_ids) {
        for (const LeftVariant& l : lefts) {
            for (const LeftVariant& r : rights) {
                BTypeSequence s;
                s.left = l.edge;
                s.back_classes = l.inner;
                s.center = center;
                s.ahead_classes = r.inner;
                s.right = r.edge;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

Fst sequence_fst(const SymbolTablePtr& table, const HmmModel& m,
                 const TaggedBTypeSequence& t) {
    const SymbolTable& names = *m.table();
    const BTypeSequence& s = t.source;
    std::vector<std::pair<SymbolId, SymbolId>> pairs;

    const unsigned back_len = static_cast<unsigned>(s.back_classes.size());
    if (s.left.kind != EdgeKind::None) {
        const std::string& base =
            s.left.kind == EdgeKind::Tag ? names.name(s.left.tag) : names.name(kBoundary);
        SymbolId marker = find_marker(table, base, true, back_len + 1);
        pairs.emplace_back(marker, marker);
    }
    for (unsigned i = 0; i < back_len; ++i) {
        SymbolId marker =
            find_marker(table, names.name(s.back_classes[i]), true, back_len - i);
        pairs.emplace_back(marker, marker);
    }

    SymbolId center, chosen;
    if (!table->find(names.name(s.center), &center) ||
        !table->find(names.name(t.chosen), &chosen))
        throw Error("sequence symbols missing from the compile alphabet");
    pairs.emplace_back(center, chosen);

    for (unsigned i = 0; i < s.ahead_classes.size(); ++i) {
        SymbolId marker = find_marker(table, names.name(s.ahead_classes[i]), false, i + 1);
        pairs.emplace_back(marker, marker);
    }
    if (s.right.kind != EdgeKind::None) {
        const std::string& base =
            s.right.kind == EdgeKind::Tag ? names.name(s.right.tag) : names.name(kBoundary);
        SymbolId marker =
            find_marker(table, base, false, static_cast<unsigned>(s.ahead_classes.size()) + 1);
        pairs.emplace_back(marker, marker);
    }
    return linear(table, pairs);
}

Fst preliminary_model(const std::vector<Fst>& seqs, std::size_t max_states) {
    if (seqs.empty()) throw Error("preliminary model needs at least one sequence");
    return normalize(star(union_all(seqs.front().table(), seqs)), max_states,
                     "preliminary-model");
}

Fst build_constraint(const SymbolTablePtr& table, const ConstraintSpec& spec,
                     std::size_t max_states) {
    if (spec.delta == 0) throw Error("constraint distance must be nonzero");
    const unsigned k = static_cast<unsigned>(spec.delta < 0 ? -spec.delta : spec.delta);
    const bool look_back = spec.delta < 0;

    SymbolKind symbol_kind = table->kind(spec.symbol);
    if (symbol_kind != spec.kind)
        throw Error("constraint symbol kind mismatch");
    if (spec.kind == SymbolKind::Boundary && spec.symbol != kBoundary)
        throw Error("boundary constraints take the boundary symbol");
    if (spec.kind == SymbolKind::Marker || spec.kind == SymbolKind::Epsilon ||
        spec.kind == SymbolKind::Any)
        throw Error("constraints range over tags, classes and the boundary");

    SymbolId marker = find_marker(table, table->name(spec.symbol), look_back, k);

    // Distances are counted in "real" symbols: tags (also for the boundary,
    // which lives on the tag side) or classes.
    std::vector<SymbolId> real = table->ids_of_kind(
        spec.kind == SymbolKind::Class ? SymbolKind::Class : SymbolKind::Tag);

    Fst skip = star(term_complement_set(table, real));        // [\S]*
    Fst group = concat(symbols_acceptor(table, real), skip);  // [S][\S]*
    Fst anywhere = sigma_star(table);

    Fst constraint;
    if (look_back) {
        // prefix admitted immediately before the marker
        Fst ok = spec.kind == SymbolKind::Boundary
                     ? concat(skip, power(group, k - 1))
                     : concat(concat(concat(anywhere, symbol_acceptor(table, spec.symbol)),
                                     skip),
                              power(group, k - 1));
        constraint = complement(
            concat(concat(complement(ok, max_states), symbol_acceptor(table, marker)),
                   anywhere),
            max_states);
    } else {
        // suffix admitted immediately after the marker
        Fst ok = spec.kind == SymbolKind::Boundary
                     ? concat(skip, power(group, k - 1))
                     : concat(concat(skip, power(group, k - 1)),
                              concat(symbol_acceptor(table, spec.symbol), anywhere));
        constraint = complement(
            concat(concat(anywhere, symbol_acceptor(table, marker)),
                   complement(ok, max_states)),
            max_states);
    }
    return normalize(constraint, max_states, "constraint");
}

std::tuple<Fst, Fst, Fst> combine_constraints(const HmmModel& m, const BTypeConfig& cfg,
                                              const SymbolTablePtr& table) {
    const int beta = static_cast<int>(cfg.look_back);
    const int alpha = static_cast<int>(cfg.look_ahead);

    auto fold = [&](const std::vector<ConstraintSpec>& specs, const std::string& stage) {
        Fst acc = sigma_star(table);
        for (const ConstraintSpec& spec : specs)
            acc = normalize(intersect(acc, build_constraint(table, spec, cfg.max_states),
                                      cfg.max_states),
                            cfg.max_states, stage);
        return acc;
    };

    std::vector<ConstraintSpec> tag_specs, class_specs, boundary_specs;
    // tags only at the extreme distances
    if (beta >= 1)
        for (SymbolId t : m.tags()) tag_specs.push_back({SymbolKind::Tag, -beta, t});
    if (alpha >= 1)
        for (SymbolId t : m.tags()) tag_specs.push_back({SymbolKind::Tag, alpha, t});
    // classes at the inner distances
    for (int d = 1; d <= beta - 1; ++d)
        for (const AmbiguityClass& c : m.classes())
            class_specs.push_back({SymbolKind::Class, -d, c.id});
    for (int d = 1; d <= alpha - 1; ++d)
        for (const AmbiguityClass& c : m.classes())
            class_specs.push_back({SymbolKind::Class, d, c.id});
    // boundaries everywhere in range
    for (int d = 1; d <= beta; ++d)
        boundary_specs.push_back({SymbolKind::Boundary, -d, kBoundary});
    for (int d = 1; d <= alpha; ++d)
        boundary_specs.push_back({SymbolKind::Boundary, d, kBoundary});

    return {fold(tag_specs, "tag-constraints"), fold(class_specs, "class-constraints"),
            fold(boundary_specs, "boundary-constraints")};
}

Fst enforce(const Fst& bprime, const Fst& r_class, const Fst& r_tag,
            const Fst& r_boundary, std::size_t max_states) {
    Fst b = normalize(compose(r_class, bprime, max_states, "enforce"), max_states,
                      "enforce");
    b = normalize(compose(b, r_tag, max_states, "enforce"), max_states, "enforce");
    b = normalize(compose(b, r_boundary, max_states, "enforce"), max_states, "enforce");
    return b;
}

Fst strip_markers(const Fst& bsecond, std::size_t max_states) {
    const SymbolTable& table = *bsecond.table();
    std::set<SymbolId> doomed;
    for (SymbolId id : table.ids_of_kind(SymbolKind::Marker)) doomed.insert(id);
    return normalize(rewrite_to_epsilon(bsecond, doomed), max_states, "strip-markers");
}

Fst strip_markers_by_composition(const Fst& bsecond, std::size_t max_states) {
    const SymbolTablePtr& table = bsecond.table();
    std::vector<Arc> arcs;
    for (SymbolId s : table->sigma()) {
        if (table->kind(s) == SymbolKind::Marker)
            arcs.push_back({0, 0, s, kEpsilon});
        else
            arcs.push_back({0, 0, s, s});
    }
    Fst deleter(1, 0, {0}, std::move(arcs), table);
    Fst b = compose(invert(deleter), bsecond, max_states, "strip-markers");
    b = compose(b, deleter, max_states, "strip-markers");
    return normalize(b, max_states, "strip-markers");
}

std::string BuildReport::to_text() const {
    std::ostringstream os;
    os << "b-type transducer: look-back " << look_back << ", look-ahead " << look_ahead
       << "\n";
    os << "b-type sequences: " << num_sequences << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-22s %10s %10s %10s\n", "stage", "#states",
                  "#arcs", "seconds");
    os << line;
    for (const StageStats& s : stages) {
        std::snprintf(line, sizeof(line), "%-22s %10zu %10zu %10.3f\n", s.name.c_str(),
                      s.states, s.arcs, s.seconds);
        os << line;
    }
    std::snprintf(line, sizeof(line), "%-22s %10s %10s %10.3f\n", "total", "", "",
                  total_seconds);
    os << line;
    return os.str();
}

Fst compile_btype(const HmmModel& m, const BTypeConfig& cfg, BuildReport* report) {
    const auto t_total = Clock::now();
    BuildReport local;
    BuildReport& rep = report ? *report : local;
    rep = BuildReport{};
    rep.look_back = cfg.look_back;
    rep.look_ahead = cfg.look_ahead;

    auto stage = [&](const std::string& name, Clock::time_point start, const Fst& f) {
        rep.stages.push_back({name, f.num_states(), f.num_arcs(), seconds_since(start)});
    };

    SymbolTablePtr table = make_compile_table(m, cfg);

    // Window enumeration can explode combinatorially; bound it by the state
    // budget before materializing anything.
    const unsigned window = cfg.look_back + cfg.look_ahead + 1;
    std::size_t estimated = sat_mul(count_bsequences(m, cfg), window + 1);
    if (estimated > cfg.max_states)
        throw BudgetError("enumerate-bsequences", estimated, cfg.max_states);

    auto t0 = Clock::now();
    std::vector<BTypeSequence> seqs = enumerate_bsequences(m, cfg);
    std::vector<TaggedBTypeSequence> tagged = disambiguate_all(m, seqs, cfg.threads);
    rep.num_sequences = tagged.size();

    // Identical tagged windows collapse before the union (idempotent anyway).
    std::set<std::vector<std::pair<SymbolId, SymbolId>>> seen;
    std::vector<Fst> parts;
    parts.reserve(tagged.size());
    for (const TaggedBTypeSequence& t : tagged) {
        Fst f = sequence_fst(table, m, t);
        std::vector<std::pair<SymbolId, SymbolId>> key;
        for (const Arc& a : f.arcs()) key.emplace_back(a.upper, a.lower);
        if (seen.insert(std::move(key)).second) parts.push_back(std::move(f));
    }
    rep.stages.push_back(
        {"disambiguate", 0, parts.size() * window, seconds_since(t0)});

    t0 = Clock::now();
    Fst bprime = preliminary_model(parts, cfg.max_states);
    stage("preliminary-model", t0, bprime);

    t0 = Clock::now();
    auto [r_tag, r_class, r_boundary] = combine_constraints(m, cfg, table);
    stage("tag-constraints", t0, r_tag);
    rep.stages.push_back({"class-constraints", r_class.num_states(), r_class.num_arcs(), 0.0});
    rep.stages.push_back(
        {"boundary-constraints", r_boundary.num_states(), r_boundary.num_arcs(), 0.0});

    t0 = Clock::now();
    Fst bsecond = enforce(bprime, r_class, r_tag, r_boundary, cfg.max_states);
    stage("enforce", t0, bsecond);

    t0 = Clock::now();
    Fst b = strip_markers(bsecond, cfg.max_states);
    stage("strip-markers", t0, b);

    rep.total_seconds = seconds_since(t_total);
    return b;
}

} // namespace bfst
