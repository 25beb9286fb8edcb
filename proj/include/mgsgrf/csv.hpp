#pragma once

#include <filesystem>
#include <string>

#include "mgsgrf/dataset.hpp"

namespace mgsgrf {

/// Reads a header-first CSV into a MixedDataset using `schema` for column
/// kinds. Categorical strings are mapped through the schema dictionaries,
/// which are extended in place for unseen modalities. Row order is preserved.
/// Throws with row/column context on unparseable numeric cells, non-binary
/// labels, missing columns, or missing values.
MixedDataset load_csv(const std::filesystem::path& path, Schema& schema);

/// Writes a dataset back to CSV under the schema's column order. Optional
/// extra flag column (e.g. a synthetic marker) is appended when named.
void write_csv(const std::filesystem::path& path, const MixedDataset& ds, const Schema& schema,
               const std::string& flag_column = "", const std::vector<int>* flags = nullptr);

/// Schema config file: JSON {"columns": [{"name":..., "kind": "continuous"|"categorical"|"label"}]}.
Schema load_schema(const std::filesystem::path& path);
void write_schema(const std::filesystem::path& path, const Schema& schema);

/// Category dictionary sidecar: JSON {column name: [modality strings in code order]}.
void write_dictionary(const std::filesystem::path& path, const Schema& schema);
void load_dictionary(const std::filesystem::path& path, Schema& schema);

}  // namespace mgsgrf
