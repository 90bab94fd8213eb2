#include "taxoalign/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace taxoalign {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string normalize_whitespace(const std::string& s) {
    std::string out;
    bool in_space = true; // swallows leading whitespace
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += static_cast<char>(std::tolower(c));
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream in(to_lower(s));
    std::string tok;
    while (in >> tok) {
        std::size_t b = 0, e = tok.size();
        while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
        if (e > b) tokens.push_back(tok.substr(b, e - b));
    }
    return tokens;
}

const std::vector<std::string>& stopword_list() {
    static const std::vector<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an",
        "and", "any", "are", "as", "at", "be", "because", "been", "before",
        "being", "below", "between", "both", "but", "by", "can", "cannot",
        "could", "did", "do", "does", "doing", "down", "during", "each", "few",
        "for", "from", "further", "had", "has", "have", "having", "he", "her",
        "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most",
        "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
        "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
        "same", "she", "should", "so", "some", "such", "than", "that", "the",
        "their", "theirs", "them", "themselves", "then", "there", "these",
        "they", "this", "those", "through", "to", "too", "under", "until", "up",
        "very", "was", "we", "were", "what", "when", "where", "which", "while",
        "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
        "yourself", "yourselves",
    };
    return words;
}

bool is_stopword(const std::string& lowercase_token) {
    static const std::unordered_set<std::string> set(stopword_list().begin(),
                                                     stopword_list().end());
    return set.count(lowercase_token) > 0;
}

} // namespace taxoalign
