#include "bfst/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "bfst/error.hpp"

namespace bfst {

namespace {

std::vector<std::string> split_tags(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void add_tags(std::vector<std::string>* set, const std::vector<std::string>& tags) {
    for (const std::string& t : tags)
        if (std::find(set->begin(), set->end(), t) == set->end()) set->push_back(t);
    std::sort(set->begin(), set->end());
}

void write_class_line(std::ostream& os, const SymbolTable& table, const std::string& key,
                      const AmbiguityClass& cls) {
    os << key << '\t';
    for (std::size_t i = 0; i < cls.members.size(); ++i)
        os << (i ? "," : "") << table.name(cls.members[i]);
    os << '\n';
}

std::map<std::string, AmbiguityClass> read_class_lines(const std::string& path,
                                                       const HmmModel& model,
                                                       bool strip_dash) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");

    std::map<std::vector<SymbolId>, const AmbiguityClass*> by_members;
    for (const AmbiguityClass& c : model.classes()) by_members[c.members] = &c;

    std::map<std::string, AmbiguityClass> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ParseError(path, lineno, "expected 'key<TAB>tag,tag,...'");
        std::string key = line.substr(0, tab);
        if (strip_dash) {
            if (key.size() < 2 || key[0] != '-')
                throw ParseError(path, lineno, "guesser suffixes start with '-'");
            key = key.substr(1);
        }
        std::vector<SymbolId> members;
        for (const std::string& tag : split_tags(line.substr(tab + 1))) {
            SymbolId id;
            if (!model.table()->find(tag, &id))
                throw ParseError(path, lineno, "unknown tag '" + tag + "'");
            members.push_back(id);
        }
        if (members.empty()) throw ParseError(path, lineno, "entry with no tags");
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        auto it = by_members.find(members);
        if (it == by_members.end())
            throw ParseError(path, lineno,
                             "class not in the model inventory: " +
                                 class_name(*model.table(), members));
        out[key] = *it->second;
    }
    return out;
}

} // namespace

std::vector<std::vector<std::string>> LexiconPlan::class_sets() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(words.size() + suffixes.size());
    for (const auto& [_, tags] : words) out.push_back(tags);
    for (const auto& [_, tags] : suffixes) out.push_back(tags);
    return out;
}

LexiconPlan plan_lexicon(const Corpus& corpus, const LexiconOptions& opts) {
    if (corpus.num_tokens() == 0) throw Error("plan_lexicon: empty corpus");
    LexiconPlan plan;
    std::map<std::string, std::size_t> freq;
    for (const auto& sentence : corpus.sentences) {
        for (const Token& tok : sentence) {
            add_tags(&plan.words[tok.word], {tok.tag});
            freq[tok.word]++;
        }
    }
    // The guesser learns suffixes of rare words: frequent words sit in the
    // lexicon anyway, and rare-word suffixes are what unseen words look like.
    for (const auto& [word, tags] : plan.words) {
        if (freq[word] > opts.guesser_max_freq) continue;
        for (unsigned len = 1; len <= opts.max_suffix_len && len < word.size(); ++len)
            add_tags(&plan.suffixes[word.substr(word.size() - len)], tags);
    }
    return plan;
}

void merge_word_classes(LexiconPlan* plan, const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ParseError(path, lineno, "expected 'word<TAB>tag,tag,...'");
        std::vector<std::string> tags = split_tags(line.substr(tab + 1));
        if (tags.empty()) throw ParseError(path, lineno, "entry with no tags");
        add_tags(&plan->words[line.substr(0, tab)], tags);
    }
}

Lexicon::Lexicon(SymbolTablePtr table, std::map<std::string, AmbiguityClass> entries,
                 std::map<std::string, AmbiguityClass> suffixes,
                 AmbiguityClass unknown_class)
    : table_(std::move(table)),
      entries_(std::move(entries)),
      suffixes_(std::move(suffixes)),
      max_suffix_len_(1),
      unknown_(std::move(unknown_class)) {
    if (unknown_.members.empty()) throw Error("the unknown class needs members");
    for (const auto& [suffix, _] : suffixes_) {
        if (suffix.empty()) throw Error("guesser suffix may not be empty");
        max_suffix_len_ =
            std::max<unsigned>(max_suffix_len_, static_cast<unsigned>(suffix.size()));
    }
}

const AmbiguityClass& Lexicon::lookup(const std::string& word) const {
    auto it = entries_.find(word);
    if (it != entries_.end()) return it->second;
    // longest matching suffix wins
    std::size_t longest = std::min<std::size_t>(max_suffix_len_, word.size());
    for (std::size_t len = longest; len >= 1; --len) {
        auto sit = suffixes_.find(word.substr(word.size() - len));
        if (sit != suffixes_.end()) return sit->second;
    }
    return unknown_;
}

Lexicon build_lexicon(const LexiconPlan& plan, const HmmModel& model) {
    std::map<std::vector<SymbolId>, const AmbiguityClass*> by_members;
    for (const AmbiguityClass& c : model.classes()) by_members[c.members] = &c;

    auto resolve = [&](const std::vector<std::string>& tags,
                       const std::string& what) -> AmbiguityClass {
        std::vector<SymbolId> members;
        for (const std::string& t : tags) {
            SymbolId id;
            if (model.table()->find(t, &id)) members.push_back(id);
        }
        if (members.empty()) throw Error("no model tags survive for " + what);
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        auto it = by_members.find(members);
        if (it == by_members.end())
            throw Error("class not registered in the model: " +
                        class_name(*model.table(), members) + " (for " + what + ")");
        return *it->second;
    };

    std::map<std::string, AmbiguityClass> entries, suffixes;
    for (const auto& [word, tags] : plan.words)
        entries[word] = resolve(tags, "word '" + word + "'");
    for (const auto& [suffix, tags] : plan.suffixes)
        suffixes[suffix] = resolve(tags, "suffix '-" + suffix + "'");

    SymbolId unknown;
    if (!model.table()->find(kUnknownClassName, &unknown))
        throw Error("model has no " + kUnknownClassName + " class");
    return Lexicon(model.table(), std::move(entries), std::move(suffixes),
                   model.class_of(unknown));
}

void save_lexicon(const std::string& path, const Lexicon& lex) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    for (const auto& [word, cls] : lex.entries())
        write_class_line(os, *lex.table(), word, cls);
}

void save_guesser(const std::string& path, const Lexicon& lex) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    for (const auto& [suffix, cls] : lex.suffixes())
        write_class_line(os, *lex.table(), "-" + suffix, cls);
}

Lexicon load_lexicon(const std::string& lexicon_path, const std::string& guesser_path,
                     const HmmModel& model) {
    std::map<std::string, AmbiguityClass> entries =
        read_class_lines(lexicon_path, model, false);
    std::map<std::string, AmbiguityClass> suffixes;
    if (!guesser_path.empty()) suffixes = read_class_lines(guesser_path, model, true);
    SymbolId unknown;
    if (!model.table()->find(kUnknownClassName, &unknown))
        throw Error("model has no " + kUnknownClassName + " class");
    return Lexicon(model.table(), std::move(entries), std::move(suffixes),
                   model.class_of(unknown));
}

} // namespace bfst
