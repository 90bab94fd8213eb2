#include "taxoalign/text.hpp"

#include <doctest.h>

using namespace taxoalign;

TEST_CASE("normalize_whitespace lowercases and collapses runs") {
    CHECK(normalize_whitespace("  Hello   World \t\n") == "hello world");
    CHECK(normalize_whitespace("") == "");
    CHECK(normalize_whitespace("one") == "one");
}

TEST_CASE("tokenize strips boundary punctuation") {
    CHECK(tokenize("GANs, VAEs and flows.") ==
          std::vector<std::string>{"gans", "vaes", "and", "flows"});
    CHECK(tokenize("state-of-the-art") == std::vector<std::string>{"state-of-the-art"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("   ") == std::vector<std::string>{});
}

TEST_CASE("stopword lookup expects lowercase tokens") {
    CHECK(is_stopword("the"));
    CHECK(is_stopword("of"));
    CHECK(!is_stopword("diffusion"));
    CHECK(is_stopword(to_lower("The")));
}
