#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace insightmap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class IngestErrc {
    EmptyInput,
    RaggedRow,
    UnknownOverrideField,
    AllMissing,
    NonNumericMeasure,
    DuplicateField,
    MalformedCsv,
};

class IngestError : public Error {
public:
    IngestError(IngestErrc code, std::string message, std::optional<std::size_t> row = std::nullopt)
        : Error(std::move(message)), code_(code), row_(row) {}

    IngestErrc code() const noexcept { return code_; }
    /// Zero-based data-row index for row-level failures.
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    IngestErrc code_;
    std::optional<std::size_t> row_;
};

enum class AggregateErrc { EmptyRowSet, MissingOrderBy, NotAMeasure, BadField };

class AggregateError : public Error {
public:
    AggregateError(AggregateErrc code, std::string message) : Error(std::move(message)), code_(code) {}
    AggregateErrc code() const noexcept { return code_; }

private:
    AggregateErrc code_;
};

enum class SubspaceErrc { BreakdownFiltered, NotADimension };

class SubspaceError : public Error {
public:
    SubspaceError(SubspaceErrc code, std::string message) : Error(std::move(message)), code_(code) {}
    SubspaceErrc code() const noexcept { return code_; }

private:
    SubspaceErrc code_;
};

enum class GeometryErrc {
    MixedKinds,
    LengthMismatch,
    NotSymmetric,
    TooFewPoints,
    PerplexityTooLarge,
    NoPoints,
    InvalidBandwidth,
};

class GeometryError : public Error {
public:
    GeometryError(GeometryErrc code, std::string message) : Error(std::move(message)), code_(code) {}
    GeometryErrc code() const noexcept { return code_; }

private:
    GeometryErrc code_;
};

enum class CatalogErrc {
    SchemaVersionMismatch,
    MalformedCatalog,
    UnknownField,
    UnknownType,
    UnknownInsight,
    NoProjection,
    BadQuery,
};

class CatalogError : public Error {
public:
    CatalogError(CatalogErrc code, std::string message, std::string pointer = {})
        : Error(std::move(message)), code_(code), pointer_(std::move(pointer)) {}

    CatalogErrc code() const noexcept { return code_; }
    /// JSON pointer of the offending node for MalformedCatalog.
    const std::string& pointer() const noexcept { return pointer_; }

private:
    CatalogErrc code_;
    std::string pointer_;
};

}  // namespace insightmap
