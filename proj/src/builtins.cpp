#include "chaosbound/builtins.hpp"

namespace chaosbound {

void override_sizes(ChaosSchema& schema, const std::map<std::string, long long>& sizes) {
  for (int u = 0; u < schema.p; ++u) {
    auto it = sizes.find(schema.dim_symbol(u));
    if (it != sizes.end()) schema.dims[static_cast<size_t>(u)] = it->second;
  }
}

std::optional<ChaosSchema> builtin_schema(const std::string& name,
                                          const std::map<std::string, long long>& sizes) {
  std::optional<ChaosSchema> schema;
  if (name == "khatri-rao-q2") {
    schema = khatri_rao_schema(2, 3, 4);
  } else if (name == "tensor-pca-1") {
    schema = tensor_pca_schemas(3, 2).first;
  } else if (name == "tensor-pca-2") {
    schema = tensor_pca_schemas(3, 2).second;
  } else if (name == "ellipsoid-phi") {
    schema = ellipsoid_schemas(3, 2).first;
  } else if (name == "ellipsoid-psi") {
    schema = ellipsoid_schemas(3, 2).second;
  }
  if (schema) override_sizes(*schema, sizes);
  return schema;
}

std::optional<Shape> builtin_shape(const std::string& name) {
  if (name == "wigner") return wigner_shape();
  if (name == "zshape") return z_shape();
  if (name == "star") return star_shape();
  return std::nullopt;
}

std::vector<std::string> builtin_schema_names() {
  return {"khatri-rao-q2", "tensor-pca-1", "tensor-pca-2", "ellipsoid-phi", "ellipsoid-psi"};
}

std::vector<std::string> builtin_shape_names() { return {"wigner", "zshape", "star"}; }

}  // namespace chaosbound
