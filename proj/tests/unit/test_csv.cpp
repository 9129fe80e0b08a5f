#include "taglex/csv.hpp"
#include "taglex/error.hpp"

#include <doctest.h>

#include <sstream>

using namespace taglex;

TEST_SUITE("csv") {

TEST_CASE("fields are quoted only when needed") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape("two\nlines") == "\"two\nlines\"");
    CHECK(csv::format_row({"a", "", "c"}) == "a,,c\n");
}

TEST_CASE("reader handles quotes, embedded newlines and CRLF") {
    std::istringstream in("h1,h2\r\n\"a,b\",\"x\ny\"\r\nplain,\"q\"\"q\"\n");
    csv::Reader r(in);
    csv::expect_header(r, {"h1", "h2"});
    auto row = r.next();
    REQUIRE(row);
    CHECK(r.line() == 2);
    CHECK(*row == csv::Row{"a,b", "x\ny"});
    row = r.next();
    REQUIRE(row);
    CHECK(r.line() == 4);
    CHECK(*row == csv::Row{"plain", "q\"q"});
    CHECK_FALSE(r.next());
}

TEST_CASE("malformed input reports its line") {
    std::istringstream unterminated("a,b\n\"open,c\n");
    csv::Reader r1(unterminated);
    r1.next();
    CHECK_THROWS_AS(r1.next(), MalformedCsv);

    std::istringstream header("x,y\n");
    csv::Reader r2(header);
    try {
        csv::expect_header(r2, {"a", "b"});
        FAIL("expected MalformedCsv");
    } catch (const MalformedCsv& e) {
        CHECK(e.line_no() == 1);
    }
}

TEST_CASE("format and read round-trip") {
    const std::vector<csv::Row> rows = {{"کتاب", "N_SING", "من, تۆ"}, {"\"", "", "a\r\nb"}};
    std::string text;
    for (const auto& r : rows) text += csv::format_row(r);
    std::istringstream in(text);
    csv::Reader reader(in);
    for (const auto& r : rows) CHECK(reader.next() == r);
}

}  // TEST_SUITE
