#pragma once

#include <string>
#include <vector>

namespace taxoalign {

/// Lowercases ASCII letters and collapses runs of whitespace to single spaces,
/// trimming the ends.
std::string normalize_whitespace(const std::string& s);
std::string to_lower(const std::string& s);

/// Metric tokenization: lowercase, strip punctuation at token boundaries,
/// split on whitespace. Tokens that are pure punctuation disappear.
std::vector<std::string> tokenize(const std::string& s);

/// The fixed English stopword list shipped with the library (see
/// assets/stopwords.txt for the same list as data).
const std::vector<std::string>& stopword_list();
bool is_stopword(const std::string& lowercase_token);

} // namespace taxoalign
