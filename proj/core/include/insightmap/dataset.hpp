#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace insightmap {

enum class FieldRole { dimension, measure };
enum class ValueKind { categorical, ordinal, numeric };

std::string_view to_string(FieldRole role);
std::string_view to_string(ValueKind kind);
std::optional<FieldRole> parse_field_role(std::string_view text);
std::optional<ValueKind> parse_value_kind(std::string_view text);

/// Schema of one column. Dimensions carry their ordered distinct-value domain;
/// measures carry the observed [min, max] over non-missing cells.
struct FieldSchema {
    std::string name;
    FieldRole role = FieldRole::dimension;
    ValueKind kind = ValueKind::categorical;
    std::vector<std::string> domain;
    double min = 0.0;
    double max = 0.0;

    bool is_dimension() const noexcept { return role == FieldRole::dimension; }
    bool is_measure() const noexcept { return role == FieldRole::measure; }
    std::size_t cardinality() const noexcept { return domain.size(); }

    bool operator==(const FieldSchema&) const = default;
};

/// Sorted ascending, duplicate-free row indices.
using RowSet = std::vector<std::uint32_t>;

/// Immutable columnar table. Dimension cells are stored as domain codes
/// (kMissingCode when missing); measure cells as doubles (NaN when missing).
class Dataset {
public:
    static constexpr std::int32_t kMissingCode = -1;

    struct Column {
        std::vector<std::int32_t> codes;
        std::vector<double> values;
    };

    Dataset(std::string name, std::vector<FieldSchema> fields, std::vector<Column> columns);

    const std::string& name() const noexcept { return name_; }
    std::size_t row_count() const noexcept { return rows_; }
    std::size_t field_count() const noexcept { return fields_.size(); }
    std::span<const FieldSchema> fields() const noexcept { return fields_; }
    const FieldSchema& field(std::size_t index) const { return fields_.at(index); }

    std::optional<std::size_t> field_index(std::string_view name) const;
    /// Like field_index but throws AggregateError(BadField) when absent.
    std::size_t require_field(std::string_view name) const;

    std::span<const std::int32_t> codes(std::size_t field) const;
    std::span<const double> values(std::size_t field) const;

    bool is_missing(std::size_t row, std::size_t field) const;
    /// Canonical cell text: domain label for dimensions, shortest round-trip
    /// decimal for measures, empty when missing.
    std::string cell_text(std::size_t row, std::size_t field) const;

    std::size_t missing_count(std::size_t field) const;
    RowSet all_rows() const;

    /// Dimension field indices in schema order.
    std::vector<std::size_t> dimension_indices() const;
    std::vector<std::size_t> measure_indices() const;

private:
    std::string name_;
    std::size_t rows_ = 0;
    std::vector<FieldSchema> fields_;
    std::vector<Column> columns_;
};

/// Role overrides keyed by field name.
using TypingOverrides = std::map<std::string, FieldRole, std::less<>>;

struct RoleInference {
    FieldRole role;
    ValueKind kind;
    bool operator==(const RoleInference&) const = default;
};

/// Number of distinct integer values up to which an all-integer column is
/// treated as an ordinal dimension.
inline constexpr std::size_t kOrdinalDistinctCutoff = 12;

/// Infers the role of a column from its raw cell texts; empty cells are missing.
/// Throws IngestError(AllMissing) when every cell is empty.
RoleInference infer_role(std::span<const std::string> column);

/// Parses a decimal number (decimal point only, optional exponent, no locale).
std::optional<double> parse_number(std::string_view text);
/// True for an optionally signed run of ASCII digits.
bool is_integer_literal(std::string_view text);

Dataset ingest_csv(std::string_view source, const TypingOverrides& overrides = {},
                   std::string name = "dataset");

/// Writes the dataset back as CSV. Measures are rendered so that re-ingesting
/// with the same overrides reproduces the schema and cell values.
std::string to_csv(const Dataset& dataset);

/// Formats a double as its shortest round-trip decimal.
std::string format_shortest(double value);

enum class Aggregation { sum, average, minimum, count, gradient };

std::string_view to_string(Aggregation agg);
std::optional<Aggregation> parse_aggregation(std::string_view text);

/// Aggregates a measure over a row set, skipping missing cells.
/// count needs no measure (counts rows, or non-missing cells when a measure is
/// given). gradient is the least-squares slope of the measure against the
/// domain rank of the ordinal orderBy field.
double aggregate(const Dataset& dataset, std::span<const std::uint32_t> rows,
                 std::optional<std::size_t> measure, Aggregation agg,
                 std::optional<std::size_t> order_by = std::nullopt);

enum class DistributionKind { histogram, frequency };

struct DistributionBin {
    std::string label;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    bool operator==(const DistributionBin&) const = default;
};

struct FieldDistribution {
    std::string field;
    DistributionKind kind = DistributionKind::frequency;
    std::vector<DistributionBin> bins;
    bool operator==(const FieldDistribution&) const = default;
};

/// Dimensions: one frequency bin per domain value. Measures: equi-width bins
/// over [min, max], the last bin right-inclusive; a constant measure yields a
/// single bin.
FieldDistribution field_distribution(const Dataset& dataset, std::size_t field,
                                     std::size_t bin_count = 10);

}  // namespace insightmap
