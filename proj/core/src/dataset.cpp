#include "insightmap/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "insightmap/csv.hpp"
#include "insightmap/errors.hpp"

namespace insightmap {

std::string_view to_string(FieldRole role) {
    return role == FieldRole::dimension ? "dimension" : "measure";
}

std::string_view to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::categorical: return "categorical";
        case ValueKind::ordinal: return "ordinal";
        case ValueKind::numeric: return "numeric";
    }
    return "categorical";
}

std::optional<FieldRole> parse_field_role(std::string_view text) {
    if (text == "dimension") return FieldRole::dimension;
    if (text == "measure") return FieldRole::measure;
    return std::nullopt;
}

std::optional<ValueKind> parse_value_kind(std::string_view text) {
    if (text == "categorical") return ValueKind::categorical;
    if (text == "ordinal") return ValueKind::ordinal;
    if (text == "numeric") return ValueKind::numeric;
    return std::nullopt;
}

std::string_view to_string(Aggregation agg) {
    switch (agg) {
        case Aggregation::sum: return "sum";
        case Aggregation::average: return "average";
        case Aggregation::minimum: return "minimum";
        case Aggregation::count: return "count";
        case Aggregation::gradient: return "gradient";
    }
    return "sum";
}

std::optional<Aggregation> parse_aggregation(std::string_view text) {
    if (text == "sum") return Aggregation::sum;
    if (text == "average") return Aggregation::average;
    if (text == "minimum") return Aggregation::minimum;
    if (text == "count") return Aggregation::count;
    if (text == "gradient") return Aggregation::gradient;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Number handling

std::optional<double> parse_number(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    // from_chars accepts "inf"/"nan"; only plain decimal notation qualifies.
    for (char c : text) {
        const bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E';
        if (!ok) {
            return std::nullopt;
        }
    }
    std::string_view body = text;
    if (body.front() == '+') {
        body.remove_prefix(1);
        if (body.empty() || body.front() == '-' || body.front() == '+') {
            return std::nullopt;
        }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

bool is_integer_literal(std::string_view text) {
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        text.remove_prefix(1);
    }
    return !text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string format_shortest(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buffer, ptr);
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::string name, std::vector<FieldSchema> fields, std::vector<Column> columns)
    : name_(std::move(name)), fields_(std::move(fields)), columns_(std::move(columns)) {
    if (fields_.size() != columns_.size()) {
        throw Error("dataset: field/column count mismatch");
    }
    rows_ = 0;
    for (std::size_t f = 0; f < fields_.size(); ++f) {
        const std::size_t n = fields_[f].is_dimension() ? columns_[f].codes.size() : columns_[f].values.size();
        if (f == 0) {
            rows_ = n;
        } else if (n != rows_) {
            throw Error("dataset: ragged columns");
        }
    }
}

std::optional<std::size_t> Dataset::field_index(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t Dataset::require_field(std::string_view name) const {
    if (auto index = field_index(name)) {
        return *index;
    }
    throw AggregateError(AggregateErrc::BadField, "unknown field '" + std::string(name) + "'");
}

std::span<const std::int32_t> Dataset::codes(std::size_t field) const { return columns_.at(field).codes; }

std::span<const double> Dataset::values(std::size_t field) const { return columns_.at(field).values; }

bool Dataset::is_missing(std::size_t row, std::size_t field) const {
    if (fields_.at(field).is_dimension()) {
        return columns_[field].codes.at(row) == kMissingCode;
    }
    return std::isnan(columns_[field].values.at(row));
}

std::string Dataset::cell_text(std::size_t row, std::size_t field) const {
    if (is_missing(row, field)) {
        return {};
    }
    const auto& schema = fields_[field];
    if (schema.is_dimension()) {
        return schema.domain[static_cast<std::size_t>(columns_[field].codes[row])];
    }
    return format_shortest(columns_[field].values[row]);
}

std::size_t Dataset::missing_count(std::size_t field) const {
    std::size_t missing = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        missing += is_missing(r, field) ? 1 : 0;
    }
    return missing;
}

RowSet Dataset::all_rows() const {
    RowSet rows(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        rows[r] = static_cast<std::uint32_t>(r);
    }
    return rows;
}

std::vector<std::size_t> Dataset::dimension_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].is_dimension()) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> Dataset::measure_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].is_measure()) out.push_back(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ingest

RoleInference infer_role(std::span<const std::string> column) {
    bool any_present = false;
    bool all_numeric = true;
    bool all_integer = true;
    std::set<double> distinct;
    for (const auto& cell : column) {
        if (cell.empty()) {
            continue;
        }
        any_present = true;
        const auto number = parse_number(cell);
        if (!number) {
            all_numeric = false;
            break;
        }
        if (all_integer) {
            if (is_integer_literal(cell)) {
                if (distinct.size() <= kOrdinalDistinctCutoff) {
                    distinct.insert(*number);
                }
            } else {
                all_integer = false;
            }
        }
    }
    if (!any_present) {
        throw IngestError(IngestErrc::AllMissing, "column has no non-missing values");
    }
    if (!all_numeric) {
        return {FieldRole::dimension, ValueKind::categorical};
    }
    if (all_integer && distinct.size() <= kOrdinalDistinctCutoff) {
        return {FieldRole::dimension, ValueKind::ordinal};
    }
    return {FieldRole::measure, ValueKind::numeric};
}

namespace {

bool all_present_numeric(std::span<const std::string> column) {
    return std::all_of(column.begin(), column.end(),
                       [](const std::string& cell) { return cell.empty() || parse_number(cell).has_value(); });
}

std::vector<std::string> build_domain(std::span<const std::string> column, ValueKind kind) {
    std::vector<std::string> domain;
    {
        std::unordered_set<std::string_view> seen;
        for (const auto& cell : column) {
            if (!cell.empty() && seen.insert(cell).second) {
                domain.push_back(cell);
            }
        }
    }
    if (kind == ValueKind::ordinal) {
        std::sort(domain.begin(), domain.end(), [](const std::string& a, const std::string& b) {
            const double x = *parse_number(a);
            const double y = *parse_number(b);
            if (x != y) return x < y;
            return a < b;
        });
    } else {
        std::sort(domain.begin(), domain.end());
    }
    return domain;
}

}  // namespace

Dataset ingest_csv(std::string_view source, const TypingOverrides& overrides, std::string name) {
    auto records = csv::parse(source);
    if (records.empty() || records.front().empty()) {
        throw IngestError(IngestErrc::EmptyInput, "CSV has no header row");
    }
    const std::vector<std::string> header = std::move(records.front());
    const std::size_t arity = header.size();

    {
        std::set<std::string_view> names;
        for (const auto& h : header) {
            if (!names.insert(h).second) {
                throw IngestError(IngestErrc::DuplicateField, "duplicate field name '" + h + "'");
            }
        }
    }
    for (const auto& [field, role] : overrides) {
        if (std::find(header.begin(), header.end(), field) == header.end()) {
            throw IngestError(IngestErrc::UnknownOverrideField, "override names unknown field '" + field + "'");
        }
    }

    std::vector<std::vector<std::string>> cells(arity);
    std::size_t data_rows = 0;
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& record = records[r];
        if (record.empty()) {
            if (arity > 1) {
                continue;
            }
            record.emplace_back();
        }
        if (record.size() != arity) {
            throw IngestError(IngestErrc::RaggedRow,
                              "data row " + std::to_string(data_rows) + " has " + std::to_string(record.size()) +
                                  " fields, header has " + std::to_string(arity),
                              data_rows);
        }
        for (std::size_t c = 0; c < arity; ++c) {
            cells[c].push_back(std::move(record[c]));
        }
        ++data_rows;
    }
    if (data_rows == 0) {
        throw IngestError(IngestErrc::EmptyInput, "CSV has no data rows");
    }

    std::vector<FieldSchema> fields;
    std::vector<Dataset::Column> columns;
    fields.reserve(arity);
    columns.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
        const auto& column = cells[c];
        FieldSchema schema;
        schema.name = header[c];

        RoleInference inferred = [&] {
            try {
                return infer_role(column);
            } catch (const IngestError& e) {
                throw IngestError(e.code(), "field '" + schema.name + "': " + e.what());
            }
        }();
        if (auto it = overrides.find(schema.name); it != overrides.end()) {
            if (it->second == FieldRole::measure) {
                if (!all_present_numeric(column)) {
                    throw IngestError(IngestErrc::NonNumericMeasure,
                                      "field '" + schema.name + "' overridden as measure has non-numeric cells");
                }
                inferred = {FieldRole::measure, ValueKind::numeric};
            } else {
                inferred = {FieldRole::dimension,
                            all_present_numeric(column) ? ValueKind::ordinal : ValueKind::categorical};
            }
        }
        schema.role = inferred.role;
        schema.kind = inferred.kind;

        Dataset::Column storage;
        if (schema.is_dimension()) {
            schema.domain = build_domain(column, schema.kind);
            std::unordered_map<std::string_view, std::int32_t> lookup;
            for (std::size_t k = 0; k < schema.domain.size(); ++k) {
                lookup.emplace(schema.domain[k], static_cast<std::int32_t>(k));
            }
            storage.codes.reserve(data_rows);
            for (const auto& cell : column) {
                storage.codes.push_back(cell.empty() ? Dataset::kMissingCode : lookup.at(cell));
            }
        } else {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            storage.values.reserve(data_rows);
            for (const auto& cell : column) {
                if (cell.empty()) {
                    storage.values.push_back(std::numeric_limits<double>::quiet_NaN());
                    continue;
                }
                const double v = *parse_number(cell);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                storage.values.push_back(v);
            }
            schema.min = lo;
            schema.max = hi;
        }
        fields.push_back(std::move(schema));
        columns.push_back(std::move(storage));
    }
    return Dataset(std::move(name), std::move(fields), std::move(columns));
}

std::string to_csv(const Dataset& dataset) {
    std::string out;
    std::vector<std::string> record;
    for (const auto& field : dataset.fields()) {
        record.push_back(field.name);
    }
    csv::append_record(out, record);
    for (std::size_t r = 0; r < dataset.row_count(); ++r) {
        record.clear();
        for (std::size_t f = 0; f < dataset.field_count(); ++f) {
            std::string text = dataset.cell_text(r, f);
            if (dataset.field(f).is_measure() && !text.empty() &&
                text.find_first_of(".e") == std::string::npos) {
                text += ".0";
            }
            record.push_back(std::move(text));
        }
        csv::append_record(out, record);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

double least_squares_slope(const Dataset& dataset, std::span<const std::uint32_t> rows, std::size_t measure,
                           std::size_t order_by) {
    const auto values = dataset.values(measure);
    const auto ranks = dataset.codes(order_by);
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto r : rows) {
        const double y = values[r];
        const auto x = ranks[r];
        if (std::isnan(y) || x == Dataset::kMissingCode) {
            continue;
        }
        xs.push_back(static_cast<double>(x));
        ys.push_back(y);
    }
    if (xs.size() < 2) {
        throw AggregateError(AggregateErrc::EmptyRowSet, "gradient needs at least two rows");
    }
    // Shift by the first observation so a constant series has exactly zero slope.
    const double x0 = xs.front();
    const double y0 = ys.front();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] - x0;
        my += ys[i] - y0;
    }
    const double n = static_cast<double>(xs.size());
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = (xs[i] - x0) - mx;
        sxx += dx * dx;
        sxy += dx * ((ys[i] - y0) - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double aggregate(const Dataset& dataset, std::span<const std::uint32_t> rows, std::optional<std::size_t> measure,
                 Aggregation agg, std::optional<std::size_t> order_by) {
    if (measure && !dataset.field(*measure).is_measure()) {
        throw AggregateError(AggregateErrc::NotAMeasure, "field '" + dataset.field(*measure).name + "' is not a measure");
    }
    if (agg == Aggregation::count) {
        if (!measure) {
            return static_cast<double>(rows.size());
        }
        const auto values = dataset.values(*measure);
        std::size_t n = 0;
        for (auto r : rows) {
            n += std::isnan(values[r]) ? 0 : 1;
        }
        return static_cast<double>(n);
    }
    if (!measure) {
        throw AggregateError(AggregateErrc::NotAMeasure, std::string(to_string(agg)) + " requires a measure");
    }
    if (agg == Aggregation::gradient) {
        if (!order_by) {
            throw AggregateError(AggregateErrc::MissingOrderBy, "gradient requires an ordinal orderBy field");
        }
        if (!dataset.field(*order_by).is_dimension()) {
            throw AggregateError(AggregateErrc::MissingOrderBy, "orderBy field must be a dimension");
        }
        return least_squares_slope(dataset, rows, *measure, *order_by);
    }

    const auto values = dataset.values(*measure);
    std::size_t n = 0;
    double sum = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (auto r : rows) {
        const double v = values[r];
        if (std::isnan(v)) {
            continue;
        }
        ++n;
        sum += v;
        lowest = std::min(lowest, v);
    }
    if (n == 0) {
        throw AggregateError(AggregateErrc::EmptyRowSet, std::string(to_string(agg)) + " over an empty row set");
    }
    switch (agg) {
        case Aggregation::sum: return sum;
        case Aggregation::average: return sum / static_cast<double>(n);
        case Aggregation::minimum: return lowest;
        default: break;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Distributions

FieldDistribution field_distribution(const Dataset& dataset, std::size_t field, std::size_t bin_count) {
    const auto& schema = dataset.field(field);
    FieldDistribution dist;
    dist.field = schema.name;
    if (schema.is_dimension()) {
        dist.kind = DistributionKind::frequency;
        std::vector<std::size_t> counts(schema.cardinality(), 0);
        for (auto code : dataset.codes(field)) {
            if (code != Dataset::kMissingCode) {
                ++counts[static_cast<std::size_t>(code)];
            }
        }
        for (std::size_t k = 0; k < counts.size(); ++k) {
            dist.bins.push_back({schema.domain[k], static_cast<double>(k), static_cast<double>(k), counts[k]});
        }
        return dist;
    }

    dist.kind = DistributionKind::histogram;
    const auto values = dataset.values(field);
    std::size_t present = 0;
    for (double v : values) {
        present += std::isnan(v) ? 0 : 1;
    }
    const double lo = schema.min;
    const double hi = schema.max;
    if (present == 0) {
        return dist;
    }
    if (!(hi > lo) || bin_count <= 1) {
        dist.bins.push_back({"[" + format_shortest(lo) + ", " + format_shortest(hi) + "]", lo, hi, present});
        return dist;
    }
    const double width = (hi - lo) / static_cast<double>(bin_count);
    std::vector<std::size_t> counts(bin_count, 0);
    for (double v : values) {
        if (std::isnan(v)) {
            continue;
        }
        auto index = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(bin_count)));
        ++counts[std::min(index, bin_count - 1)];
    }
    for (std::size_t b = 0; b < bin_count; ++b) {
        const double lower = lo + width * static_cast<double>(b);
        const double upper = b + 1 == bin_count ? hi : lo + width * static_cast<double>(b + 1);
        const bool last = b + 1 == bin_count;
        std::string label = "[" + format_shortest(lower) + ", " + format_shortest(upper) + (last ? "]" : ")");
        dist.bins.push_back({std::move(label), lower, upper, counts[b]});
    }
    return dist;
}

}  // namespace insightmap
