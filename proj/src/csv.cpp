#include "taglex/csv.hpp"

#include "taglex/error.hpp"

namespace taglex::csv {

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(row[i]);
    }
    out.push_back('\n');
    return out;
}

std::optional<Row> Reader::next() {
    int c = in_.get();
    if (c == EOF) return std::nullopt;

    record_line_ = line_;
    Row row;
    std::string field;
    bool quoted = false;
    bool after_quote = false;  // closing quote seen; only , or EOL may follow

    for (;; c = in_.get()) {
        if (quoted) {
            if (c == EOF) throw MalformedCsv(record_line_, "unterminated quoted field");
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                    after_quote = true;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == EOF || c == '\n') {
            if (c == '\n') ++line_;
            row.push_back(std::move(field));
            return row;
        }
        if (c == '\r') {
            if (in_.peek() == '\n') continue;
            throw MalformedCsv(line_, "bare carriage return");
        }
        if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            after_quote = false;
            continue;
        }
        if (after_quote) throw MalformedCsv(line_, "text after closing quote");
        if (c == '"') {
            if (!field.empty()) throw MalformedCsv(line_, "quote inside unquoted field");
            quoted = true;
            continue;
        }
        field.push_back(static_cast<char>(c));
    }
}

void expect_header(Reader& reader, const Row& expected) {
    auto header = reader.next();
    if (!header) throw MalformedCsv(1, "missing header");
    if (*header != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        throw MalformedCsv(reader.line(), "expected header " + want);
    }
}

}  // namespace taglex::csv
