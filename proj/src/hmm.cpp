#include "bfst/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bfst/error.hpp"

namespace bfst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

std::string format_prob(double p) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

std::string class_name(const SymbolTable& table, const std::vector<SymbolId>& members) {
    std::string name = "[";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) name += ',';
        name += table.name(members[i]);
    }
    return name + "]";
}

HmmModel::HmmModel(SymbolTablePtr table, std::vector<SymbolId> tags,
                   std::vector<AmbiguityClass> classes, std::vector<double> pi,
                   std::vector<double> trans, std::vector<double> emit)
    : table_(std::move(table)),
      tags_(std::move(tags)),
      classes_(std::move(classes)),
      pi_(std::move(pi)),
      trans_(std::move(trans)),
      emit_(std::move(emit)) {
    const std::size_t t = tags_.size(), c = classes_.size();
    if (t == 0 || c == 0) throw Error("HmmModel needs at least one tag and one class");
    if (pi_.size() != t || trans_.size() != t * t || emit_.size() != c * t)
        throw Error("HmmModel probability table size mismatch");

    tag_idx_.assign(table_->size(), kNoIndex);
    class_idx_.assign(table_->size(), kNoIndex);
    for (std::size_t i = 0; i < t; ++i) tag_idx_.at(tags_[i]) = i;
    for (std::size_t i = 0; i < c; ++i) {
        const AmbiguityClass& cls = classes_[i];
        if (cls.members.empty()) throw Error("ambiguity class with no members");
        if (!std::is_sorted(cls.members.begin(), cls.members.end()) ||
            std::adjacent_find(cls.members.begin(), cls.members.end()) !=
                cls.members.end())
            throw Error("ambiguity class members must be sorted and unique");
        class_idx_.at(cls.id) = i;
        for (SymbolId m : cls.members) {
            if (tag_idx_.at(m) == kNoIndex)
                throw Error("class member is not a model tag: " + table_->name(m));
        }
        // emission restricted to members
        for (std::size_t j = 0; j < t; ++j) {
            bool member = std::binary_search(cls.members.begin(), cls.members.end(),
                                             tags_[j]);
            if (!member && emit_[i * t + j] != 0.0)
                throw Error("nonzero emission for non-member tag in class " +
                            table_->name(cls.id));
        }
    }

    log_pi_.resize(pi_.size());
    log_trans_.resize(trans_.size());
    log_emit_.resize(emit_.size());
    std::transform(pi_.begin(), pi_.end(), log_pi_.begin(), safe_log);
    std::transform(trans_.begin(), trans_.end(), log_trans_.begin(), safe_log);
    std::transform(emit_.begin(), emit_.end(), log_emit_.begin(), safe_log);
}

std::size_t HmmModel::tag_index(SymbolId tag) const {
    if (tag >= tag_idx_.size() || tag_idx_[tag] == kNoIndex)
        throw Error("not a model tag: id " + std::to_string(tag));
    return tag_idx_[tag];
}

std::size_t HmmModel::class_index(SymbolId cls) const {
    if (cls >= class_idx_.size() || class_idx_[cls] == kNoIndex)
        throw Error("not a model class: id " + std::to_string(cls));
    return class_idx_[cls];
}

bool HmmModel::has_class(SymbolId cls) const {
    return cls < class_idx_.size() && class_idx_[cls] != kNoIndex;
}

double HmmModel::max_row_deviation() const {
    const std::size_t t = num_tags();
    double dev = 0.0;
    double pi_sum = 0.0;
    for (double p : pi_) pi_sum += p;
    dev = std::max(dev, std::abs(pi_sum - 1.0));
    for (std::size_t i = 0; i < t; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < t; ++j) row += trans(i, j);
        dev = std::max(dev, std::abs(row - 1.0));
    }
    for (std::size_t j = 0; j < t; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < num_classes(); ++i) col += emit(i, j);
        dev = std::max(dev, std::abs(col - 1.0));
    }
    return dev;
}

HmmModel train(const Corpus& corpus, const TrainOptions& opts,
               std::vector<std::string>* warnings) {
    if (corpus.sentences.empty() || corpus.num_tokens() == 0)
        throw Error("train: empty corpus");
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    auto table = std::make_shared<SymbolTable>();

    // Observed tag inventory, in first-seen order of the corpus.
    std::vector<SymbolId> tags;
    for (const auto& sentence : corpus.sentences) {
        for (const Token& tok : sentence) {
            if (tok.tag.empty()) throw Error("train: token without a gold tag");
            SymbolId id = table->intern(tok.tag, SymbolKind::Tag);
            if (std::find(tags.begin(), tags.end(), id) == tags.end()) tags.push_back(id);
        }
    }
    std::sort(tags.begin(), tags.end());

    // Word forms: frequency and observed tag set.
    std::map<std::string, std::vector<SymbolId>> word_tags;
    std::map<std::string, std::size_t> word_freq;
    for (const auto& sentence : corpus.sentences) {
        for (const Token& tok : sentence) {
            SymbolId tag_id;
            table->find(tok.tag, &tag_id);
            auto& wt = word_tags[tok.word];
            if (std::find(wt.begin(), wt.end(), tag_id) == wt.end()) wt.push_back(tag_id);
            word_freq[tok.word]++;
        }
    }

    // Class inventory: one per distinct observed member set, plus classes
    // from the lexicon file, plus [UNKNOWN].
    std::map<std::vector<SymbolId>, SymbolId> class_ids;
    auto class_of_members = [&](std::vector<SymbolId> members) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        auto it = class_ids.find(members);
        if (it != class_ids.end()) return it->second;
        SymbolId id = table->intern(class_name(*table, members), SymbolKind::Class);
        class_ids.emplace(std::move(members), id);
        return id;
    };

    std::map<std::string, SymbolId> word_class;
    for (auto& [word, observed] : word_tags) word_class[word] = class_of_members(observed);

    for (const auto& extra : opts.extra_classes) {
        std::vector<SymbolId> members;
        for (const std::string& name : extra) {
            SymbolId id;
            if (table->find(name, &id) && table->kind(id) == SymbolKind::Tag) {
                members.push_back(id);
            } else {
                warn("tag '" + name + "' never observed in the corpus; excluded");
            }
        }
        if (members.empty()) {
            warn("lexicon class with no surviving tags; dropped");
            continue;
        }
        class_of_members(std::move(members));
    }

    // [UNKNOWN]: members and emission counts come from hapax legomena.
    std::vector<SymbolId> hapax_tags;
    std::map<SymbolId, double> unknown_counts;
    for (const auto& [word, freq] : word_freq) {
        if (freq != 1) continue;
        for (SymbolId t : word_tags[word]) {
            hapax_tags.push_back(t);
            unknown_counts[t] += 1.0;
        }
    }
    std::sort(hapax_tags.begin(), hapax_tags.end());
    hapax_tags.erase(std::unique(hapax_tags.begin(), hapax_tags.end()), hapax_tags.end());
    if (hapax_tags.empty()) hapax_tags = tags; // no hapax: uniform over all tags
    SymbolId unknown_id = table->intern(kUnknownClassName, SymbolKind::Class);

    std::vector<AmbiguityClass> classes;
    for (const auto& [members, id] : class_ids) classes.push_back({id, members});
    classes.push_back({unknown_id, hapax_tags});
    std::sort(classes.begin(), classes.end(),
              [](const AmbiguityClass& a, const AmbiguityClass& b) { return a.id < b.id; });

    const std::size_t t = tags.size(), c = classes.size();
    std::vector<std::size_t> tag_pos(table->size(), 0), class_pos(table->size(), 0);
    for (std::size_t i = 0; i < t; ++i) tag_pos[tags[i]] = i;
    for (std::size_t i = 0; i < c; ++i) class_pos[classes[i].id] = i;

    // Counts.
    std::vector<double> init_count(t, 0.0), out_count(t, 0.0);
    std::vector<double> trans_count(t * t, 0.0), emit_count(c * t, 0.0);
    for (const auto& sentence : corpus.sentences) {
        SymbolId prev = 0;
        bool have_prev = false;
        for (const Token& tok : sentence) {
            SymbolId tag_id;
            table->find(tok.tag, &tag_id);
            std::size_t ti = tag_pos[tag_id];
            if (!have_prev) {
                init_count[ti] += 1.0;
            } else {
                std::size_t pi_ = tag_pos[prev];
                trans_count[pi_ * t + ti] += 1.0;
                out_count[pi_] += 1.0;
            }
            std::size_t ci = class_pos[word_class[tok.word]];
            emit_count[ci * t + ti] += 1.0;
            prev = tag_id;
            have_prev = true;
        }
    }
    std::size_t unknown_pos = class_pos[unknown_id];
    for (const auto& [tag_id, count] : unknown_counts)
        emit_count[unknown_pos * t + tag_pos[tag_id]] += count;

    const double lambda = opts.lambda;
    std::vector<double> pi(t, 0.0), trans(t * t, 0.0), emit(c * t, 0.0);

    double pi_total = static_cast<double>(corpus.sentences.size()) + lambda * t;
    for (std::size_t i = 0; i < t; ++i) pi[i] = (init_count[i] + lambda) / pi_total;

    for (std::size_t i = 0; i < t; ++i) {
        double total = out_count[i] + lambda * t;
        if (total == 0.0) {
            // tag never followed by anything and no smoothing: uniform row
            for (std::size_t j = 0; j < t; ++j) trans[i * t + j] = 1.0 / t;
        } else {
            for (std::size_t j = 0; j < t; ++j)
                trans[i * t + j] = (trans_count[i * t + j] + lambda) / total;
        }
    }

    // Emission: normalized per tag over the classes that contain it.
    for (std::size_t j = 0; j < t; ++j) {
        double total = 0.0;
        std::size_t member_classes = 0;
        for (std::size_t i = 0; i < c; ++i) {
            if (std::binary_search(classes[i].members.begin(), classes[i].members.end(),
                                   tags[j])) {
                total += emit_count[i * t + j];
                ++member_classes;
            }
        }
        double denom = total + lambda * member_classes;
        for (std::size_t i = 0; i < c; ++i) {
            bool member = std::binary_search(classes[i].members.begin(),
                                             classes[i].members.end(), tags[j]);
            if (!member) continue;
            emit[i * t + j] = denom > 0.0 ? (emit_count[i * t + j] + lambda) / denom
                                          : 1.0 / member_classes;
        }
    }

    return HmmModel(std::move(table), std::move(tags), std::move(classes), std::move(pi),
                    std::move(trans), std::move(emit));
}

// Viterbi over class observations.  On score ties the backpointer keeps the
// lowest tag index, so the decoded path is the optimal one whose reversal is
// lexicographically smallest; the brute-force test oracle mirrors this rule.
std::vector<SymbolId> viterbi(const HmmModel& m, const std::vector<SymbolId>& classes) {
    if (classes.empty()) throw Error("viterbi: empty class sequence");
    const std::size_t n = classes.size(), t = m.num_tags();
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = m.class_index(classes[i]);

    std::vector<double> score(n * t, kNegInf);
    std::vector<std::size_t> back(n * t, 0);
    for (std::size_t j = 0; j < t; ++j)
        score[j] = m.log_pi(j) + m.log_emit(cls[0], j);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            double best = kNegInf;
            std::size_t best_prev = 0;
            bool have = false;
            for (std::size_t p = 0; p < t; ++p) {
                double s = score[(i - 1) * t + p] + m.log_trans(p, j) +
                           m.log_emit(cls[i], j);
                if (!have || s > best) {
                    best = s;
                    best_prev = p;
                    have = true;
                }
            }
            score[i * t + j] = best;
            back[i * t + j] = best_prev;
        }
    }

    std::size_t best_last = 0;
    double best = kNegInf;
    bool have = false;
    for (std::size_t j = 0; j < t; ++j) {
        if (!have || score[(n - 1) * t + j] > best) {
            best = score[(n - 1) * t + j];
            best_last = j;
            have = true;
        }
    }
    std::vector<SymbolId> out(n);
    std::size_t cur = best_last;
    for (std::size_t i = n; i-- > 0;) {
        out[i] = m.tags()[cur];
        if (i) cur = back[i * t + cur];
    }
    return out;
}

double joint_logprob(const HmmModel& m, const std::vector<SymbolId>& classes,
                     const std::vector<SymbolId>& tags) {
    if (classes.size() != tags.size())
        throw Error("joint_logprob: class/tag length mismatch");
    if (classes.empty()) throw Error("joint_logprob: empty sequence");
    double score = 0.0;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        std::size_t c = m.class_index(classes[i]);
        std::size_t t = m.tag_index(tags[i]);
        const auto& members = m.classes()[c].members;
        if (!std::binary_search(members.begin(), members.end(), tags[i]))
            throw Error("joint_logprob: tag not a member of its class at position " +
                        std::to_string(i));
        if (i == 0)
            score = m.log_pi(t);
        else
            score += m.log_trans(prev, t);
        score += m.log_emit(c, t);
        prev = t;
    }
    return score;
}

std::vector<SymbolId> BTypeSequence::class_slots() const {
    std::vector<SymbolId> slots = back_classes;
    slots.push_back(center);
    slots.insert(slots.end(), ahead_classes.begin(), ahead_classes.end());
    return slots;
}

namespace {

double start_score(const HmmModel& m, const Edge& left, std::size_t first_tag) {
    switch (left.kind) {
        case EdgeKind::Tag: return m.log_trans(m.tag_index(left.tag), first_tag);
        case EdgeKind::Boundary: return m.log_pi(first_tag);
        case EdgeKind::None: return 0.0;
    }
    return 0.0;
}

double end_score(const HmmModel& m, const Edge& right, std::size_t last_tag) {
    if (right.kind == EdgeKind::Tag)
        return m.log_trans(last_tag, m.tag_index(right.tag));
    return 0.0; // boundary or no look-ahead
}

} // namespace

double btype_logprob(const HmmModel& m, const BTypeSequence& s,
                     const std::vector<SymbolId>& slot_tags) {
    std::vector<SymbolId> slots = s.class_slots();
    if (slot_tags.size() != slots.size())
        throw Error("btype_logprob: need one tag per class slot");
    std::size_t prev = 0;
    double score = 0.0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::size_t c = m.class_index(slots[i]);
        std::size_t t = m.tag_index(slot_tags[i]);
        const auto& members = m.classes()[c].members;
        if (!std::binary_search(members.begin(), members.end(), slot_tags[i]))
            throw Error("btype_logprob: tag not a member of its class at slot " +
                        std::to_string(i));
        if (i == 0)
            score = start_score(m, s.left, t);
        else
            score += m.log_trans(prev, t);
        score += m.log_emit(c, t);
        prev = t;
    }
    return score + end_score(m, s.right, prev);
}

TaggedBTypeSequence disambiguate(const HmmModel& m, const BTypeSequence& s) {
    std::vector<SymbolId> slots = s.class_slots();
    const std::size_t n = slots.size();
    std::vector<std::vector<SymbolId>> cand(n);
    for (std::size_t i = 0; i < n; ++i)
        cand[i] = m.classes()[m.class_index(slots[i])].members;

    std::vector<std::vector<double>> score(n);
    std::vector<std::vector<std::size_t>> back(n);
    score[0].resize(cand[0].size());
    back[0].resize(cand[0].size());
    for (std::size_t j = 0; j < cand[0].size(); ++j) {
        std::size_t t = m.tag_index(cand[0][j]);
        score[0][j] = start_score(m, s.left, t) + m.log_emit(m.class_index(slots[0]), t);
    }
    for (std::size_t i = 1; i < n; ++i) {
        score[i].resize(cand[i].size());
        back[i].resize(cand[i].size());
        std::size_t ci = m.class_index(slots[i]);
        for (std::size_t j = 0; j < cand[i].size(); ++j) {
            std::size_t t = m.tag_index(cand[i][j]);
            double best = kNegInf;
            std::size_t best_prev = 0;
            bool have = false;
            for (std::size_t p = 0; p < cand[i - 1].size(); ++p) {
                double v = score[i - 1][p] + m.log_trans(m.tag_index(cand[i - 1][p]), t) +
                           m.log_emit(ci, t);
                if (!have || v > best) {
                    best = v;
                    best_prev = p;
                    have = true;
                }
            }
            score[i][j] = best;
            back[i][j] = best_prev;
        }
    }

    std::size_t best_last = 0;
    double best = kNegInf;
    bool have = false;
    for (std::size_t j = 0; j < cand[n - 1].size(); ++j) {
        double v = score[n - 1][j] + end_score(m, s.right, m.tag_index(cand[n - 1][j]));
        if (!have || v > best) {
            best = v;
            best_last = j;
            have = true;
        }
    }

    TaggedBTypeSequence tagged;
    tagged.source = s;
    tagged.context_tags.resize(n);
    std::size_t cur = best_last;
    for (std::size_t i = n; i-- > 0;) {
        tagged.context_tags[i] = cand[i][cur];
        if (i) cur = back[i][cur];
    }
    tagged.chosen = tagged.context_tags[s.back_classes.size()];
    return tagged;
}

// ---- HMMv1 -----------------------------------------------------------------

void write_hmm(std::ostream& os, const HmmModel& m) {
    const SymbolTable& table = *m.table();
    os << "HMMv1\n#TAGS\n";
    for (SymbolId t : m.tags()) os << table.name(t) << '\n';
    os << "#CLASSES\n";
    for (const AmbiguityClass& c : m.classes()) {
        os << table.name(c.id) << ':';
        for (std::size_t i = 0; i < c.members.size(); ++i)
            os << (i ? "," : " ") << table.name(c.members[i]);
        os << '\n';
    }
    os << "#PI\n";
    for (std::size_t i = 0; i < m.num_tags(); ++i)
        os << table.name(m.tags()[i]) << ' ' << format_prob(m.pi(i)) << '\n';
    os << "#A\n";
    for (std::size_t i = 0; i < m.num_tags(); ++i)
        for (std::size_t j = 0; j < m.num_tags(); ++j)
            os << table.name(m.tags()[i]) << ' ' << table.name(m.tags()[j]) << ' '
               << format_prob(m.trans(i, j)) << '\n';
    os << "#B\n";
    for (std::size_t i = 0; i < m.num_classes(); ++i) {
        const AmbiguityClass& c = m.classes()[i];
        for (SymbolId t : c.members)
            os << table.name(c.id) << ' ' << table.name(t) << ' '
               << format_prob(m.emit(i, m.tag_index(t))) << '\n';
    }
}

HmmModel read_hmm(std::istream& is, const std::string& filename) {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(filename, lineno, msg);
    };
    if (!std::getline(is, line) || line != "HMMv1") throw fail("expected HMMv1 header");
    ++lineno;

    auto table = std::make_shared<SymbolTable>();
    std::vector<SymbolId> tags;
    std::vector<AmbiguityClass> classes;
    std::map<SymbolId, std::size_t> class_pos;
    std::vector<double> pi, trans, emit;
    enum Section { None, Tags, Classes, Pi, A, B } section = None;

    auto tag_pos = [&](const std::string& name) -> std::size_t {
        SymbolId id;
        if (!table->find(name, &id)) throw fail("unknown tag '" + name + "'");
        auto it = std::find(tags.begin(), tags.end(), id);
        if (it == tags.end()) throw fail("unknown tag '" + name + "'");
        return static_cast<std::size_t>(it - tags.begin());
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line == "#TAGS") { section = Tags; continue; }
        if (line == "#CLASSES") {
            section = Classes;
            continue;
        }
        if (line == "#PI") {
            pi.assign(tags.size(), 0.0);
            section = Pi;
            continue;
        }
        if (line == "#A") {
            trans.assign(tags.size() * tags.size(), 0.0);
            section = A;
            continue;
        }
        if (line == "#B") {
            emit.assign(classes.size() * tags.size(), 0.0);
            section = B;
            continue;
        }
        switch (section) {
            case Tags:
                tags.push_back(table->intern(line, SymbolKind::Tag));
                break;
            case Classes: {
                std::size_t colon = line.find(": ");
                if (colon == std::string::npos) throw fail("expected 'name: tag,...'");
                std::string name = line.substr(0, colon);
                AmbiguityClass cls;
                cls.id = table->intern(name, SymbolKind::Class);
                for (const std::string& tag : split(line.substr(colon + 2), ',')) {
                    SymbolId id;
                    if (!table->find(tag, &id)) throw fail("unknown tag '" + tag + "'");
                    cls.members.push_back(id);
                }
                class_pos[cls.id] = classes.size();
                classes.push_back(std::move(cls));
                break;
            }
            case Pi: {
                std::istringstream ss(line);
                std::string tag, prob;
                if (!(ss >> tag >> prob)) throw fail("expected 'tag prob'");
                pi[tag_pos(tag)] = std::strtod(prob.c_str(), nullptr);
                break;
            }
            case A: {
                std::istringstream ss(line);
                std::string from, to, prob;
                if (!(ss >> from >> to >> prob)) throw fail("expected 'tag tag prob'");
                trans[tag_pos(from) * tags.size() + tag_pos(to)] =
                    std::strtod(prob.c_str(), nullptr);
                break;
            }
            case B: {
                std::istringstream ss(line);
                std::string cls, tag, prob;
                if (!(ss >> cls >> tag >> prob)) throw fail("expected 'class tag prob'");
                SymbolId cid;
                if (!table->find(cls, &cid) || !class_pos.count(cid))
                    throw fail("unknown class '" + cls + "'");
                emit[class_pos[cid] * tags.size() + tag_pos(tag)] =
                    std::strtod(prob.c_str(), nullptr);
                break;
            }
            case None:
                throw fail("content before any section header");
        }
    }
    return HmmModel(std::move(table), std::move(tags), std::move(classes), std::move(pi),
                    std::move(trans), std::move(emit));
}

void save_hmm(const std::string& path, const HmmModel& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_hmm(os, m);
    if (!os) throw Error("failed writing '" + path + "'");
}

HmmModel load_hmm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return read_hmm(is, path);
}

} // namespace bfst
