#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace insightmap::csv {

/// One parsed record. A physically empty line parses to a record with no fields.
using Record = std::vector<std::string>;

/// RFC 4180 reader: comma separator, double-quote escaping, CRLF or LF line
/// endings, quoted fields may span lines. A leading UTF-8 BOM is dropped.
/// Throws IngestError(MalformedCsv) on an unterminated quoted field or a
/// stray quote inside an unquoted field.
std::vector<Record> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

/// Appends one CRLF-terminated record.
void append_record(std::string& out, std::span<const std::string> fields);

}  // namespace insightmap::csv
