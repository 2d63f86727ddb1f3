#include "bfst/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "bfst/error.hpp"

namespace bfst {

double round_percent(double numerator, double denominator) {
    if (denominator <= 0.0) return 0.0;
    double pct = 100.0 * numerator / denominator;
    return std::floor(pct * 100.0 + 0.5) / 100.0; // half-up, two decimals
}

EvalReport evaluate(const std::vector<std::string>& tagged,
                    const std::vector<std::string>& gold,
                    const std::vector<std::string>& hmm_output) {
    if (tagged.size() != gold.size())
        throw Error("token streams misaligned at position " +
                    std::to_string(std::min(tagged.size(), gold.size())) +
                    " (tagged vs gold)");
    if (tagged.size() != hmm_output.size())
        throw Error("token streams misaligned at position " +
                    std::to_string(std::min(tagged.size(), hmm_output.size())) +
                    " (tagged vs hmm)");
    EvalReport report;
    std::size_t right = 0, agree = 0;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (tagged[i] == gold[i]) ++right;
        if (tagged[i] == hmm_output[i]) ++agree;
    }
    report.accuracy = round_percent(static_cast<double>(right), tagged.size());
    report.agreement = round_percent(static_cast<double>(agree), tagged.size());
    return report;
}

// Largest-remainder rounding to two decimals so the buckets sum to 100.00
// exactly; each value stays within one hundredth of its exact share.
std::map<std::uint64_t, double> result_count_histogram(
    const std::vector<std::uint64_t>& counts) {
    std::map<std::uint64_t, double> histogram;
    if (counts.empty()) return histogram;
    std::map<std::uint64_t, std::size_t> buckets;
    for (std::uint64_t c : counts) buckets[c]++;

    struct Share {
        std::uint64_t key;
        long long floor_hundredths;
        double remainder;
    };
    std::vector<Share> shares;
    long long total = 0;
    for (const auto& [key, n] : buckets) {
        double exact = 10000.0 * static_cast<double>(n) / counts.size();
        long long fl = static_cast<long long>(std::floor(exact));
        shares.push_back({key, fl, exact - static_cast<double>(fl)});
        total += fl;
    }
    long long missing = 10000 - total;
    std::stable_sort(shares.begin(), shares.end(),
                     [](const Share& a, const Share& b) { return a.remainder > b.remainder; });
    for (long long i = 0; i < missing && i < static_cast<long long>(shares.size()); ++i)
        shares[i].floor_hundredths += 1;
    for (const Share& s : shares)
        histogram[s.key] = static_cast<double>(s.floor_hundredths) / 100.0;
    return histogram;
}

std::string EvalReport::to_text() const {
    std::ostringstream os;
    char line[128];
    std::snprintf(line, sizeof(line), "%-14s %10.2f\n", "accuracy", accuracy);
    os << line;
    std::snprintf(line, sizeof(line), "%-14s %10.2f\n", "agreement", agreement);
    os << line;
    std::snprintf(line, sizeof(line), "%-14s %10zu\n", "states", states);
    os << line;
    std::snprintf(line, sizeof(line), "%-14s %10zu\n", "arcs", arcs);
    os << line;
    std::snprintf(line, sizeof(line), "%-14s %10.0f\n", "words-per-sec", words_per_sec);
    os << line;
    std::snprintf(line, sizeof(line), "%-14s %10.3f\n", "build-seconds", build_seconds);
    os << line;
    for (const auto& [n, pct] : result_histogram) {
        std::snprintf(line, sizeof(line), "results=%-6llu %10.2f\n",
                      static_cast<unsigned long long>(n), pct);
        os << line;
    }
    return os.str();
}

std::string EvalReport::to_machine() const {
    std::ostringstream os;
    char buf[64];
    auto emit = [&](const char* key, const std::string& value) {
        os << key << '\t' << value << '\n';
    };
    std::snprintf(buf, sizeof(buf), "%.2f", accuracy);
    emit("accuracy", buf);
    std::snprintf(buf, sizeof(buf), "%.2f", agreement);
    emit("agreement", buf);
    emit("states", std::to_string(states));
    emit("arcs", std::to_string(arcs));
    std::snprintf(buf, sizeof(buf), "%.0f", words_per_sec);
    emit("words_per_sec", buf);
    std::snprintf(buf, sizeof(buf), "%.3f", build_seconds);
    emit("build_seconds", buf);
    for (const auto& [n, pct] : result_histogram) {
        std::snprintf(buf, sizeof(buf), "%.2f", pct);
        emit(("results_" + std::to_string(n)).c_str(), buf);
    }
    return os.str();
}

namespace {

// Platform-stable uniform double in [0, 1): the generator is fully pinned by
// the standard, the mapping uses plain bit arithmetic.
double next_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t sample_index(std::mt19937_64& gen, const std::vector<double>& probs) {
    double u = next_uniform(gen);
    double cum = 0.0;
    std::size_t last_positive = 0;
    bool any = false;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        any = true;
        cum += probs[i];
        if (u < cum) return i;
    }
    if (!any) throw Error("sample from an all-zero distribution");
    return last_positive; // numeric tail
}

} // namespace

std::vector<Sentence> sample_sentences(const HmmModel& m, std::size_t n_tokens,
                                       std::uint64_t seed, unsigned max_sentence_len,
                                       const std::string& end_tag) {
    if (n_tokens < 1) throw Error("sample_sentences: need at least one token");
    if (max_sentence_len < 1) throw Error("sample_sentences: max sentence length >= 1");
    std::mt19937_64 gen(seed);

    SymbolId end_tag_id = 0;
    bool have_end_tag = m.table()->find(end_tag, &end_tag_id);

    const std::size_t t = m.num_tags(), c = m.num_classes();
    std::vector<double> pi(t), trans_row(t), emit_col(c);
    for (std::size_t i = 0; i < t; ++i) pi[i] = m.pi(i);

    std::vector<Sentence> out;
    std::size_t emitted = 0;
    while (emitted < n_tokens) {
        Sentence s;
        s.table = m.table();
        unsigned length_cap = 1 + static_cast<unsigned>(gen() % max_sentence_len);
        std::size_t prev = 0;
        for (unsigned pos = 0; pos < length_cap; ++pos) {
            std::size_t ti;
            if (pos == 0) {
                ti = sample_index(gen, pi);
            } else {
                for (std::size_t j = 0; j < t; ++j) trans_row[j] = m.trans(prev, j);
                ti = sample_index(gen, trans_row);
            }
            for (std::size_t ci = 0; ci < c; ++ci) emit_col[ci] = m.emit(ci, ti);
            std::size_t ci = sample_index(gen, emit_col);

            s.gold.push_back(m.tags()[ti]);
            s.classes.push_back(m.classes()[ci].id);
            s.words.push_back(m.table()->name(m.classes()[ci].id));
            ++emitted;
            prev = ti;
            if (have_end_tag && m.tags()[ti] == end_tag_id) break;
        }
        out.push_back(std::move(s));
    }
    return out;
}

Corpus sample_corpus(const HmmModel& m, std::size_t n_tokens, std::uint64_t seed,
                     unsigned max_sentence_len, const std::string& end_tag) {
    Corpus corpus;
    for (const Sentence& s : sample_sentences(m, n_tokens, seed, max_sentence_len, end_tag)) {
        std::vector<Token> tokens;
        for (std::size_t i = 0; i < s.words.size(); ++i)
            tokens.push_back({s.words[i], m.table()->name(s.gold[i])});
        corpus.sentences.push_back(std::move(tokens));
    }
    return corpus;
}

} // namespace bfst
