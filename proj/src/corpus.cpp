#include "bfst/corpus.hpp"

#include <fstream>
#include <sstream>

#include "bfst/error.hpp"

namespace bfst {

std::size_t Corpus::num_tokens() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

Corpus read_corpus(std::istream& is, const std::string& end_tag,
                   const std::string& filename) {
    Corpus corpus;
    std::vector<Token> current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ParseError(filename, lineno, "expected 'word<TAB>tag'");
        Token tok{line.substr(0, tab), line.substr(tab + 1)};
        bool ends = tok.tag == end_tag;
        current.push_back(std::move(tok));
        if (ends) {
            corpus.sentences.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) corpus.sentences.push_back(std::move(current));
    return corpus;
}

Corpus load_corpus(const std::string& path, const std::string& end_tag) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return read_corpus(is, end_tag, path);
}

void write_corpus(std::ostream& os, const Corpus& corpus) {
    for (const auto& sentence : corpus.sentences)
        for (const Token& tok : sentence) os << tok.word << '\t' << tok.tag << '\n';
}

void save_corpus(const std::string& path, const Corpus& corpus) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_corpus(os, corpus);
}

} // namespace bfst
