#include "insightmap/csv.hpp"

#include "insightmap/errors.hpp"

namespace insightmap::csv {

std::vector<Record> parse(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }

    std::vector<Record> records;
    Record record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool line_has_content = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        if (line_has_content) {
            end_field();
        }
        records.push_back(std::move(record));
        record.clear();
        line_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw IngestError(IngestErrc::MalformedCsv,
                                      "stray quote in unquoted field at record " +
                                          std::to_string(records.size()));
                }
                in_quotes = true;
                field_was_quoted = true;
                line_has_content = true;
                break;
            case ',':
                line_has_content = true;
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    ++i;
                }
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                if (field_was_quoted) {
                    throw IngestError(IngestErrc::MalformedCsv,
                                      "text after closing quote at record " +
                                          std::to_string(records.size()));
                }
                field.push_back(c);
                line_has_content = true;
                break;
        }
    }
    if (in_quotes) {
        throw IngestError(IngestErrc::MalformedCsv, "unterminated quoted field");
    }
    if (line_has_content) {
        end_record();
    }
    return records;
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void append_record(std::string& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += escape_field(fields[i]);
    }
    out += "\r\n";
}

}  // namespace insightmap::csv
