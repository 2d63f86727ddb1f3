#include "bfst/fst_io.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace bfst {

void write_fst(std::ostream& os, const Fst& fst) {
    os << "FSTv1\n";
    const SymbolTable& table = *fst.table();
    for (SymbolId id = 0; id < table.size(); ++id)
        os << "symbol " << id << ' ' << to_string(table.kind(id)) << ' ' << table.name(id)
           << '\n';

    // Breadth-first renumbering from the initial state.
    std::vector<Arc> arcs = fst.arcs();
    std::sort(arcs.begin(), arcs.end());
    std::vector<std::vector<const Arc*>> out(fst.num_states());
    for (const Arc& a : arcs) out[a.src].push_back(&a);

    constexpr StateId kUnseen = std::numeric_limits<StateId>::max();
    std::vector<StateId> newid(fst.num_states(), kUnseen);
    std::vector<StateId> order{fst.initial()};
    newid[fst.initial()] = 0;
    std::deque<StateId> queue{fst.initial()};
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (const Arc* a : out[s]) {
            if (newid[a->dst] == kUnseen) {
                newid[a->dst] = static_cast<StateId>(order.size());
                order.push_back(a->dst);
                queue.push_back(a->dst);
            }
        }
    }

    std::vector<Arc> renumbered;
    for (const Arc& a : arcs) {
        if (newid[a.src] == kUnseen || newid[a.dst] == kUnseen) continue;
        renumbered.push_back({newid[a.src], newid[a.dst], a.upper, a.lower});
    }
    std::sort(renumbered.begin(), renumbered.end());
    renumbered.erase(std::unique(renumbered.begin(), renumbered.end()), renumbered.end());
    for (const Arc& a : renumbered)
        os << "arc " << a.src << ' ' << a.dst << ' ' << table.name(a.upper) << ' '
           << table.name(a.lower) << '\n';

    std::vector<StateId> finals;
    for (StateId s : fst.finals())
        if (newid[s] != kUnseen) finals.push_back(newid[s]);
    std::sort(finals.begin(), finals.end());
    for (StateId s : finals) os << "final " << s << '\n';
}

Fst read_fst(std::istream& is, const std::string& filename) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line) || line != "FSTv1")
        throw ParseError(filename, 1, "expected FSTv1 header");
    ++lineno;

    auto table = std::make_shared<SymbolTable>();
    std::vector<Arc> arcs;
    std::set<StateId> finals;
    StateId max_state = 0;

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "symbol") {
            SymbolId id;
            std::string kind_str, name;
            if (!(ss >> id >> kind_str >> name))
                throw ParseError(filename, lineno, "malformed symbol line");
            SymbolKind kind = symbol_kind_from_string(kind_str);
            SymbolId got =
                (id < 3) ? id : table->intern(name, kind); // ids 0..2 preseeded
            if (got != id || table->name(id) != name || table->kind(id) != kind)
                throw ParseError(filename, lineno,
                                 "symbol ids must be dense and reserved ids fixed");
        } else if (word == "arc") {
            StateId src, dst;
            std::string upper, lower;
            if (!(ss >> src >> dst >> upper >> lower))
                throw ParseError(filename, lineno, "malformed arc line");
            SymbolId u, l;
            if (!table->find(upper, &u))
                throw ParseError(filename, lineno, "unknown symbol '" + upper + "'");
            if (!table->find(lower, &l))
                throw ParseError(filename, lineno, "unknown symbol '" + lower + "'");
            arcs.push_back({src, dst, u, l});
            max_state = std::max({max_state, src, dst});
        } else if (word == "final") {
            StateId s;
            if (!(ss >> s)) throw ParseError(filename, lineno, "malformed final line");
            finals.insert(s);
            max_state = std::max(max_state, s);
        } else {
            throw ParseError(filename, lineno, "unknown record '" + word + "'");
        }
    }
    table->freeze();
    return Fst(max_state + 1, 0, std::move(finals), std::move(arcs), std::move(table));
}

void save_fst(const std::string& path, const Fst& fst) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_fst(os, fst);
    if (!os) throw Error("failed writing '" + path + "'");
}

Fst load_fst(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return read_fst(is, path);
}

std::string fst_to_string(const Fst& fst) {
    std::ostringstream ss;
    write_fst(ss, fst);
    return ss.str();
}

} // namespace bfst
