#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaosbound/schema.hpp"
#include "chaosbound/shape.hpp"

namespace chaosbound {

/// Named example schemas and shapes, so the standard tables reproduce
/// without schema files. Sizes can be overridden per dimension symbol.
std::optional<ChaosSchema> builtin_schema(const std::string& name,
                                          const std::map<std::string, long long>& sizes = {});
std::optional<Shape> builtin_shape(const std::string& name);

std::vector<std::string> builtin_schema_names();
std::vector<std::string> builtin_shape_names();

/// Applies per-symbol size overrides (e.g. d=16) to a schema.
void override_sizes(ChaosSchema& schema, const std::map<std::string, long long>& sizes);

}  // namespace chaosbound
