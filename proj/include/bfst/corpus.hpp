#ifndef BFST_CORPUS_HPP
#define BFST_CORPUS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bfst {

struct Token {
    std::string word;
    std::string tag;

    friend bool operator==(const Token&, const Token&) = default;
};

// Tagged training/evaluation text.  On disk: one `word<TAB>tag` line per
// token, a sentence ends at the designated end tag, blank lines are ignored.
struct Corpus {
    std::vector<std::vector<Token>> sentences;

    std::size_t num_tokens() const;
    friend bool operator==(const Corpus&, const Corpus&) = default;
};

Corpus read_corpus(std::istream& is, const std::string& end_tag,
                   const std::string& filename = "<stream>");
Corpus load_corpus(const std::string& path, const std::string& end_tag);
void write_corpus(std::ostream& os, const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

} // namespace bfst

#endif
