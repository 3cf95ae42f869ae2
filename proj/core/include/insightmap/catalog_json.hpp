#pragma once

#include <string>
#include <string_view>

#include "insightmap/catalog.hpp"

namespace insightmap {

/// UTF-8 JSON with sorted object keys and shortest round-trip reals.
/// Non-finite reals are written as the strings "Infinity", "-Infinity", "NaN".
std::string serialize_catalog(const Catalog& catalog);

/// Strict reader. A file whose major version differs from kSchemaVersion
/// throws CatalogError(SchemaVersionMismatch); a newer minor version is read
/// leniently (unknown keys ignored); otherwise unknown keys are rejected.
/// Structural problems throw CatalogError(MalformedCatalog) carrying the JSON
/// pointer of the offending node.
Catalog deserialize_catalog(std::string_view bytes);

}  // namespace insightmap
