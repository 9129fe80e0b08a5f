#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taglex::csv {

using Row = std::vector<std::string>;

/// RFC-4180 field: quoted only when it holds a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// One record terminated by LF.
std::string format_row(const Row& row);

/// Streaming RFC-4180 reader. Quoted fields may span lines; CRLF and LF are
/// both accepted as record terminators. Throws MalformedCsv.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input.
    std::optional<Row> next();

    /// 1-based line on which the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

/// Reads a header row and checks it equals `expected`.
void expect_header(Reader& reader, const Row& expected);

}  // namespace taglex::csv
