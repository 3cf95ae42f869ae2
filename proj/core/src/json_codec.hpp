#pragma once

// JSON mapping of catalog types, shared by the catalog file codec and the
// HTTP service. Not installed.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "insightmap/catalog.hpp"

namespace insightmap::json_codec {

using Json = nlohmann::json;

/// Number, or "Infinity" / "-Infinity" / "NaN" for non-finite values.
Json real(double value);

Json to_json(const FieldSchema& field);
Json to_json(const FieldDistribution& distribution);
Json to_json(const DatasetSummary& dataset);
Json to_json(const SubspaceSpec& subspace);
Json to_json(const Insight& insight);
Json to_json(const SubspaceEntry& entry);
Json to_json(const Projection& projection);
Json to_json(const DensityField& density);
Json to_json(const MiningConfig& config);
Json to_json(const Catalog& catalog);

/// Read cursor that knows its JSON pointer. Every failure throws
/// CatalogError(MalformedCatalog) with that pointer.
class Node {
public:
    Node(const Json& value, std::string pointer, bool strict) : value_(&value), pointer_(std::move(pointer)), strict_(strict) {}

    const Json& json() const { return *value_; }
    const std::string& pointer() const { return pointer_; }
    bool strict() const { return strict_; }

    [[noreturn]] void fail(std::string_view what) const;

    Node operator[](std::string_view key) const;
    std::optional<Node> find(std::string_view key) const;
    /// Rejects keys outside `allowed` when strict.
    void expect_keys(std::initializer_list<std::string_view> allowed) const;
    std::vector<Node> items() const;

    bool is_null() const { return value_->is_null(); }
    double real() const;
    std::string text() const;
    std::size_t count() const;
    std::uint64_t u64() const;
    bool flag() const;

private:
    void require_object() const;

    const Json* value_;
    std::string pointer_;
    bool strict_;
};

FieldSchema read_field(const Node& node);
FieldDistribution read_distribution(const Node& node);
DatasetSummary read_dataset(const Node& node);
SubspaceSpec read_subspace(const Node& node);
Insight read_insight(const Node& node);
SubspaceEntry read_subspace_entry(const Node& node);
Projection read_projection(const Node& node);
DensityField read_density(const Node& node);
/// Every key is optional and defaults to MiningConfig{}; unknown keys are
/// rejected when strict.
MiningConfig read_config(const Node& node);

std::string dump(const Json& value);

}  // namespace insightmap::json_codec
