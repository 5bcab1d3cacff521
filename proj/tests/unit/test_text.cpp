#include <doctest.h>

#include "trendscope/text.hpp"

namespace text = trendscope::text;

TEST_SUITE("text") {
  TEST_CASE("utf8 round trip keeps every code point") {
    const std::string s = "n7ebek \xC3\xA7" "a va \xD8\xB9\xD9\x84\xD9\x89 \xF0\x9F\x98\x80";
    CHECK(text::encode(text::decode(s)) == s);
    CHECK(text::decode("\xC3\xA7").size() == 1);
  }

  TEST_CASE("invalid bytes decode to the replacement character") {
    const auto cps = text::decode("a\xFF" "b");
    REQUIRE(cps.size() == 3);
    CHECK(cps[1] == U'�');
  }

  TEST_CASE("lowercase handles latin-1 and leaves arabic alone") {
    CHECK(text::to_lower("\xC3\x87" "A VA") == "\xC3\xA7" "a va");
    CHECK(text::to_lower("\xD8\xB9") == "\xD8\xB9");
  }

  TEST_CASE("classification") {
    CHECK(text::is_punct_or_symbol(U'.'));
    CHECK(text::is_punct_or_symbol(U'؟'));  // arabic question mark
    CHECK_FALSE(text::is_punct_or_symbol(U'a'));
    CHECK(text::is_sentence_terminal(U'?'));
    CHECK(text::is_sentence_terminal(U'؛'));
    CHECK_FALSE(text::is_sentence_terminal(U','));
    CHECK(text::is_digit(U'7'));
    CHECK(text::is_upper_latin(U'É'));
  }

  TEST_CASE("whitespace split drops empty pieces") {
    const auto parts = text::split_whitespace("  a\tb \n c  ");
    CHECK(parts == std::vector<std::string>{"a", "b", "c"});
    CHECK(text::split_whitespace("   ").empty());
    CHECK(text::count_words("a b  c") == 3);
    CHECK(text::join(parts, "-") == "a-b-c");
  }
}
