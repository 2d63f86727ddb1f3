#include "bfst/tagger.hpp"

#include <algorithm>

#include "bfst/error.hpp"

namespace bfst {

namespace {

// Sentence ids live in the alphabet of the model that produced them; a
// transducer loaded from elsewhere may number symbols differently, so
// translate by name unless the tables are the same.
std::vector<SymbolId> translate_ids(const SymbolTablePtr& from, const SymbolTablePtr& to,
                                    const std::vector<SymbolId>& ids) {
    if (!from || from == to) return ids;
    std::vector<SymbolId> out;
    out.reserve(ids.size());
    for (SymbolId id : ids) {
        const std::string& name = from->name(id);
        SymbolId mapped;
        if (!to->find(name, &mapped))
            throw Error("symbol '" + name + "' unknown to the transducer");
        out.push_back(mapped);
    }
    return out;
}

} // namespace

SymbolId sentence_end_class(const HmmModel& m, const std::string& end_tag) {
    SymbolId tag;
    if (!m.table()->find(end_tag, &tag))
        throw Error("sentence-end tag '" + end_tag + "' is not a model tag");
    for (const AmbiguityClass& c : m.classes())
        if (c.members.size() == 1 && c.members[0] == tag) return c.id;
    throw Error("no singleton class for sentence-end tag '" + end_tag + "'");
}

std::vector<Sentence> segment(const Lexicon& lex, const std::vector<std::string>& tokens,
                              SymbolId end_class) {
    std::vector<Sentence> out;
    Sentence cur;
    cur.table = lex.table();
    for (const std::string& word : tokens) {
        const AmbiguityClass& cls = lex.lookup(word);
        cur.words.push_back(word);
        cur.classes.push_back(cls.id);
        if (cls.id == end_class) {
            out.push_back(std::move(cur));
            cur = Sentence{};
            cur.table = lex.table();
        }
    }
    if (!cur.words.empty()) {
        // unterminated input: close the sentence with a synthetic end token
        cur.words.push_back("<eos>");
        cur.classes.push_back(end_class);
        cur.synthetic_end = true;
        out.push_back(std::move(cur));
    }
    return out;
}

TagResult tag_sentence(const Fst& model, const Sentence& s, ApplyMode mode,
                       std::uint64_t limit) {
    if (s.classes.empty()) throw Error("tag_sentence: empty sentence");
    std::vector<SymbolId> input = translate_ids(s.table, model.table(), s.classes);
    ApplyResult res = apply(model, input, mode, limit);

    TagResult result;
    result.n_results = res.count;
    if (mode != ApplyMode::Count) {
        if (res.outputs.empty())
            throw Error("transducer relates no tag sequence to the sentence");
        result.tags = res.outputs.front();
    }
    return result;
}

TagResult tag_sentence(const HmmModel& m, const Sentence& s) {
    TagResult result;
    result.tags = viterbi(m, translate_ids(s.table, m.table(), s.classes));
    result.n_results = 1;
    return result;
}

std::uint64_t count_results(const Fst& bfst, const Sentence& s, std::uint64_t limit) {
    return tag_sentence(bfst, s, ApplyMode::Count, limit).n_results;
}

std::vector<std::vector<SymbolId>> tag_alternatives(const Fst& bfst, const Sentence& s,
                                                    std::uint64_t limit) {
    std::vector<SymbolId> input = translate_ids(s.table, bfst.table(), s.classes);
    return apply(bfst, input, ApplyMode::All, limit).outputs;
}

} // namespace bfst
