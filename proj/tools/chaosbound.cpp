// chaosbound: analyze matrix chaos schemas and graph-matrix shapes, verify
// the closed-form flattening norms against the dense oracle, and validate
// norm predictions by Monte Carlo sampling.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chaosbound/bounds.hpp"
#include "chaosbound/builtins.hpp"
#include "chaosbound/flattening.hpp"
#include "chaosbound/graph_analysis.hpp"
#include "chaosbound/oracle.hpp"
#include "chaosbound/sampler.hpp"
#include "chaosbound/schema.hpp"
#include "chaosbound/separator.hpp"
#include "chaosbound/shape.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitOracle = 3;
constexpr int kExitCap = 4;
constexpr int kExitUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CHAOSBOUND_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

std::map<std::string, long long> parse_sizes(const std::string& spec) {
  std::map<std::string, long long> sizes;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad --dims entry \"" + item + "\"");
    sizes[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
  }
  return sizes;
}

chaosbound::ChaosSchema load_schema(const std::string& builtin, const std::string& file,
                                    const std::map<std::string, long long>& sizes) {
  using namespace chaosbound;
  if (!builtin.empty()) {
    auto schema = builtin_schema(builtin, sizes);
    if (!schema) throw std::runtime_error("unknown builtin schema \"" + builtin + "\"");
    return *schema;
  }
  if (file.empty()) throw std::runtime_error("no schema given (file or --builtin)");
  ChaosSchema schema = schema_from_json_text(read_file(file));
  override_sizes(schema, sizes);
  return schema;
}

chaosbound::Shape load_shape(const std::string& builtin, const std::string& file) {
  using namespace chaosbound;
  if (!builtin.empty()) {
    auto shape = builtin_shape(builtin);
    if (!shape) throw std::runtime_error("unknown builtin shape \"" + builtin + "\"");
    return *shape;
  }
  if (file.empty()) throw std::runtime_error("no shape given (file or --builtin)");
  return shape_from_json_text(read_file(file));
}

void write_or_print(const std::string& out_dir, const std::string& name,
                    const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/" + name, std::ios::binary);
  out << content;
}

int report_validation_failure(const chaosbound::ValidationReport& report) {
  std::cout << "{\"violations\":[";
  for (size_t i = 0; i < report.issues.size(); ++i) {
    if (i) std::cout << ",";
    std::cout << "{\"code\":\"" << report.issues[i].code << "\",\"detail\":\""
              << report.issues[i].detail << "\"}";
  }
  std::cout << "]}\n";
  return kExitValidation;
}

int cmd_analyze(const std::string& builtin, const std::string& file, const std::string& format,
                const std::string& dims_spec, const std::string& out_dir) {
  using namespace chaosbound;
  const ChaosSchema schema = load_schema(builtin, file, parse_sizes(dims_spec));
  const ValidationReport report = validate(schema);
  if (!report.ok()) return report_validation_failure(report);

  const FlatteningTable table = build_table(schema);
  const ChaosParameters params = parameters_from_table(schema, table);

  if (format == "csv") {
    write_or_print(out_dir, "table.csv", render_table_csv(schema, table));
    return kExitOk;
  }

  std::ostringstream out;
  out << "schema: " << (builtin.empty() ? file : builtin) << "\n";
  out << "p=" << schema.p << " q=" << schema.q << " dims:";
  for (int u = 0; u < schema.p; ++u) {
    out << " " << schema.label(u) << ":" << schema.dim_symbol(u);
    if (schema.dims[static_cast<size_t>(u)] >= 1) out << "=" << schema.dims[static_cast<size_t>(u)];
  }
  out << "\n";
  out << "distribution: " << to_string(schema.distribution.kind) << "\n";
  out << "validation: ok\n\n";
  out << render_table_text(schema, table) << "\n";
  out << "parameters (norm scale):\n";
  out << "  sigma = " << params.sigma.str() << "  (numeric " << params.sigma.numeric << ")\n";
  out << "  v     = " << params.v.str() << "  (numeric " << params.v.numeric << ")\n";
  out << "  r     = " << params.r.str() << "  (numeric " << params.r.numeric << ")\n\n";

  if (schema.numeric_dims()) {
    const long long d = std::max<long long>(schema.max_matrix_dim(), 2);
    const long long m = std::max<long long>(schema.max_alphabet(), 2);
    const DistributionParams dist = distribution_params(schema.distribution, d, m);
    out << "bound profiles (unknown constants set to 1, d=" << d << ", m=" << m << "):\n";
    for (BoundTheorem theorem :
         {BoundTheorem::NckUpper, BoundTheorem::NckLower, BoundTheorem::StrongNck,
          BoundTheorem::RosenthalUpper, BoundTheorem::RosenthalLower,
          BoundTheorem::StrongRosenthal}) {
      const BoundProfile profile = bound_profile(theorem, dist, params, schema.q, d, m);
      out << "  " << to_string(theorem) << ": " << profile.str() << " = "
          << profile.numeric_value << "\n";
    }
    const BestBound best = best_bound(schema);
    out << "best upper profile: " << to_string(best.profile.theorem) << " = "
        << best.profile.numeric_value << "\n  " << best.note << "\n";
  }
  write_or_print(out_dir, "analyze.txt", out.str());
  return kExitOk;
}

int cmd_graph(const std::string& builtin, const std::string& file, long long n) {
  using namespace chaosbound;
  const Shape shape = load_shape(builtin, file);
  const auto issues = shape_issues(shape);
  if (!issues.empty()) {
    std::cout << "{\"violations\":[";
    for (size_t i = 0; i < issues.size(); ++i)
      std::cout << (i ? "," : "") << "\"" << issues[i] << "\"";
    std::cout << "]}\n";
    return kExitValidation;
  }

  std::ostringstream out;
  out << "shape: " << shape.vertex_count() << " vertices, " << shape.edges.size() << " edges\n";
  out << "U = (";
  for (size_t i = 0; i < shape.left.size(); ++i)
    out << (i ? "," : "") << shape.name_of(shape.left[i]);
  out << "), V = (";
  for (size_t i = 0; i < shape.right.size(); ++i)
    out << (i ? "," : "") << shape.name_of(shape.right[i]);
  out << ")\n";

  const GraphBoundReport report = norm_exponents(shape);
  out << "separator: {";
  for (size_t i = 0; i < report.separator.separator.size(); ++i)
    out << (i ? "," : "") << shape.name_of(report.separator.separator[i]);
  out << "} size " << report.separator.size() << "\n";
  for (const auto& path : report.separator.disjoint_paths) {
    out << "  path:";
    for (int v : path) out << " " << shape.name_of(v);
    out << "\n";
  }
  out << "W_iso: {";
  for (size_t i = 0; i < report.isolated_middle.size(); ++i)
    out << (i ? "," : "") << shape.name_of(report.isolated_middle[i]);
  out << "}\n";
  out << "matrix: n^" << report.left_power << " x n^" << report.right_power << "\n";

  if (shape.edges.empty()) {
    out << "deterministic (no edges); ";
    const long long n0 = std::max<long long>(n, shape.vertex_count() + 1);
    const Eigen::SparseMatrix<double> m = materialize_graph_matrix(shape, n0, 0);
    MaterializedMatrix wrapped;
    wrapped.is_dense = true;
    wrapped.dense = Eigen::MatrixXd(m);
    out << "norm " << spectral_norm(wrapped).value << " at n=" << n0 << "\n";
    out << "poly exponent: " << report.poly_exponent.str() << "\n";
    std::cout << out.str();
    return kExitOk;
  }

  out << "poly exponent: " << report.poly_exponent.str() << "  (norm ~ n^{"
      << report.poly_exponent.str() << "})\n";
  out << "log exponent: " << report.log_exponent.str() << "  (f = " << report.f << ")\n";

  const EdgeOrdering ordering = edge_ordering(shape);
  out << "edge ordering (first to last):";
  for (const auto& e : ordering.ordered_edges)
    out << " " << shape.name_of(e.first) << shape.name_of(e.second);
  out << "  k1=" << ordering.k1 << " k2=" << ordering.k2 << "\n";
  const int q = static_cast<int>(shape.edges.size());
  out << "partially iterated log power: "
      << partial_nck_log_power(ordering.k1 + ordering.k2, q).str() << " (full iteration "
      << partial_nck_log_power(q, q).str() << ")\n";

  const SigmaBoundReport sigma = sigma_bound_check(shape, std::max<long long>(n, 8));
  out << "sigma bound check: sigma exponent " << sigma.sigma_exponent.str() << " vs poly "
      << sigma.poly_exponent.str() << " over " << sigma.orientations_checked
      << " orientations -> "
      << (sigma.exponents_match ? "equal" : (sigma.bound_holds ? "bounded" : "VIOLATED")) << "\n";
  if (!sigma.maximizer_diagonal.empty()) {
    out << "  maximizer diagonal {";
    for (size_t i = 0; i < sigma.maximizer_diagonal.size(); ++i)
      out << (i ? "," : "") << shape.name_of(sigma.maximizer_diagonal[i]);
    out << "} " << (sigma.separator_realized ? "realizes a minimum separator" : "is not minimal")
        << "\n";
  }
  std::cout << out.str();
  return kExitOk;
}

int cmd_verify(const std::string& builtin, const std::string& file, const std::string& dims_spec,
               long long cap, bool inject_exponent_bug) {
  using namespace chaosbound;
  const ChaosSchema schema = load_schema(builtin, file, parse_sizes(dims_spec));
  const ValidationReport report = validate(schema);
  if (!report.ok()) return report_validation_failure(report);

  OracleLimits limits;
  limits.max_side = cap;
  OracleReport oracle = oracle_check(schema, limits);
  if (inject_exponent_bug && !oracle.rows.empty()) {
    // negative control: corrupt one formula value and re-evaluate
    OracleRowResult& row = oracle.rows.front();
    row.formula_norm *= 2.0;
    row.pass = !row.exact && row.explicit_norm <= row.formula_norm + 1e-9;
    if (row.exact) oracle.all_pass = false;
  }

  int upper_bound_rows = 0;
  for (const auto& row : oracle.rows)
    if (!row.exact) ++upper_bound_rows;
  std::cout << "oracle check: " << oracle.rows.size() << " flattenings";
  if (upper_bound_rows) std::cout << " (" << upper_bound_rows << " upper-bound rows)";
  std::cout << "\n";
  for (const auto& row : oracle.rows) {
    if (row.pass) continue;
    std::cout << "MISMATCH " << to_string(row.assignment.cls) << " "
              << row.assignment.placement_string() << ": formula " << row.formula_norm
              << (row.exact ? " != " : " < ") << "explicit " << row.explicit_norm << "\n";
  }
  std::cout << (oracle.all_pass ? "all rows pass" : "oracle mismatch") << "\n";
  return oracle.all_pass ? kExitOk : kExitOracle;
}

int cmd_sample(const std::string& builtin, const std::string& schema_file,
               const std::string& shape_file, const std::string& mode_name, int trials,
               std::uint64_t seed, const std::string& dims_spec, long long n,
               const std::string& out_dir) {
  using namespace chaosbound;
  if (trials < 1) {
    std::cerr << "sample: --trials must be >= 1\n";
    return kExitUsage;
  }
  SampleConfig config;
  config.mode = mode_name == "coupled" ? SampleMode::Coupled : SampleMode::Decoupled;
  config.trials = trials;
  config.seed = seed;

  if (!shape_file.empty() || (!builtin.empty() && builtin_shape(builtin))) {
    config.shape = load_shape(builtin, shape_file);
    config.shape_n = n;
  } else {
    config.schema = load_schema(builtin, schema_file, parse_sizes(dims_spec));
    const ValidationReport report = validate(*config.schema);
    if (!report.ok()) return report_validation_failure(report);
  }

  const SampleReport report = monte_carlo(config);
  write_or_print(out_dir, "samples.csv", report.to_csv());
  write_or_print(out_dir, "summary.json", report.to_json());
  return kExitOk;
}

// size expressions for scaling links: "s", "s^k", or a constant
long long eval_link(const std::string& expr, long long s) {
  if (expr == "s") return s;
  if (expr.rfind("s^", 0) == 0) {
    long long out = 1;
    const int power = std::stoi(expr.substr(2));
    for (int i = 0; i < power; ++i) out *= s;
    return out;
  }
  return std::stoll(expr);
}

int cmd_scaling(const std::string& builtin, const std::string& shape_file,
                const std::string& sizes_spec, int trials, std::uint64_t seed,
                const std::string& link_spec, const std::string& out_dir) {
  using namespace chaosbound;
  if (trials < 1) {
    std::cerr << "scaling: --trials must be >= 1\n";
    return kExitUsage;
  }
  std::vector<long long> sizes;
  {
    std::stringstream stream(sizes_spec);
    std::string item;
    while (std::getline(stream, item, ',')) sizes.push_back(std::stoll(item));
  }
  if (sizes.size() < 3) {
    std::cerr << "scaling: need at least 3 sizes\n";
    return kExitUsage;
  }

  const bool is_shape = !shape_file.empty() || (!builtin.empty() && builtin_shape(builtin));
  std::vector<std::pair<double, SampleReport>> series;
  double predicted = 0.0;

  if (is_shape) {
    const Shape shape = load_shape(builtin, shape_file);
    predicted = norm_exponents(shape).poly_exponent.value();
    for (long long n : sizes) {
      SampleConfig config;
      config.shape = shape;
      config.shape_n = n;
      config.mode = SampleMode::Coupled;
      config.trials = trials;
      config.seed = seed;
      series.emplace_back(static_cast<double>(n), monte_carlo(config));
    }
  } else {
    std::map<std::string, std::string> links;
    if (!link_spec.empty()) {
      std::stringstream stream(link_spec);
      std::string item;
      while (std::getline(stream, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
          std::cerr << "scaling: bad --link entry \"" << item << "\"\n";
          return kExitUsage;
        }
        links[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    auto schema_at = [&](long long s) {
      std::map<std::string, long long> dims;
      for (const auto& [symbol, expr] : links) dims[symbol] = eval_link(expr, s);
      ChaosSchema schema = load_schema(builtin, "", dims);
      if (links.empty()) {
        // default: every symbol follows the size variable
        std::map<std::string, long long> all;
        for (int u = 0; u < schema.p; ++u) all[schema.dim_symbol(u)] = s;
        override_sizes(schema, all);
      }
      return schema;
    };
    const double sigma_low = chaos_parameters(schema_at(sizes.front())).sigma.numeric;
    const double sigma_high = chaos_parameters(schema_at(sizes.back())).sigma.numeric;
    predicted = (std::log(sigma_high) - std::log(sigma_low)) /
                (std::log(static_cast<double>(sizes.back())) -
                 std::log(static_cast<double>(sizes.front())));
    for (long long s : sizes) {
      SampleConfig config;
      config.schema = schema_at(s);
      config.mode = SampleMode::Decoupled;
      config.trials = trials;
      config.seed = seed;
      series.emplace_back(static_cast<double>(s), monte_carlo(config));
    }
  }

  const ScalingReport report = scaling_fit(series);
  write_or_print(out_dir, "scaling.csv", report.to_csv());
  std::ostringstream summary;
  summary << "fitted slope: " << report.slope << " +- " << report.slope_ci
          << "  (predicted exponent " << predicted << ")\n";
  std::cout << summary.str();
  if (!out_dir.empty()) write_or_print(out_dir, "scaling.txt", summary.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix chaos flattening analyzer"};
  app.require_subcommand(1);

  std::string builtin, schema_file, shape_file, format = "text", dims_spec, out_dir;
  std::string mode = "decoupled", sizes_spec, link_spec;
  long long n = 8, cap = 4096;
  int trials = 10;
  std::uint64_t seed = default_seed();
  bool inject_bug = false;

  auto* analyze = app.add_subcommand("analyze", "flattening table, parameters, bound profiles");
  analyze->add_option("schema", schema_file, "schema JSON file");
  analyze->add_option("--builtin", builtin, "builtin schema name");
  analyze->add_option("--format", format, "text or csv");
  analyze->add_option("--dims", dims_spec, "size overrides, e.g. d=16,n=256");
  analyze->add_option("--out", out_dir, "write artifacts to this directory");

  auto* graph = app.add_subcommand("graph", "shape analysis: separator, exponents, ordering");
  graph->add_option("shape", shape_file, "shape JSON file");
  graph->add_option("--builtin", builtin, "builtin shape name");
  graph->add_option("--n", n, "ground-set size for cross-checks");

  auto* verify = app.add_subcommand("verify", "formula vs dense-SVD oracle over all flattenings");
  verify->add_option("schema", schema_file, "schema JSON file");
  verify->add_option("--builtin", builtin, "builtin schema name");
  verify->add_option("--dims", dims_spec, "size overrides");
  verify->add_option("--cap", cap, "oracle matrix side cap");
  verify->add_flag("--inject-exponent-bug", inject_bug)->group("");  // negative-control hook

  auto* sample = app.add_subcommand("sample", "Monte Carlo norm estimate");
  sample->add_option("--builtin", builtin, "builtin schema or shape name");
  sample->add_option("--schema", schema_file, "schema JSON file");
  sample->add_option("--shape", shape_file, "shape JSON file");
  sample->add_option("--mode", mode, "coupled or decoupled");
  sample->add_option("--trials", trials, "number of trials");
  sample->add_option("--seed", seed, "RNG seed (env CHAOSBOUND_SEED overrides the default)");
  sample->add_option("--dims", dims_spec, "size overrides");
  sample->add_option("--n", n, "ground-set size for shapes");
  sample->add_option("--out", out_dir, "write samples.csv and summary.json here");

  auto* scaling = app.add_subcommand("scaling", "slope of log norm against log size");
  scaling->add_option("--builtin", builtin, "builtin schema or shape name");
  scaling->add_option("--shape", shape_file, "shape JSON file");
  scaling->add_option("--sizes", sizes_spec, "comma-separated sizes");
  scaling->add_option("--trials", trials, "trials per size");
  scaling->add_option("--seed", seed, "RNG seed");
  scaling->add_option("--link", link_spec, "per-symbol size links, e.g. d=s,n=s^2");
  scaling->add_option("--out", out_dir, "write scaling.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(builtin, schema_file, format, dims_spec, out_dir);
    if (graph->parsed()) return cmd_graph(builtin, shape_file, n);
    if (verify->parsed()) return cmd_verify(builtin, schema_file, dims_spec, cap, inject_bug);
    if (sample->parsed())
      return cmd_sample(builtin, schema_file, shape_file, mode, trials, seed, dims_spec, n, out_dir);
    if (scaling->parsed())
      return cmd_scaling(builtin, shape_file, sizes_spec, trials, seed, link_spec, out_dir);
  } catch (const chaosbound::SchemaParseError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const chaosbound::ShapeParseError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const chaosbound::OracleTooLarge& e) {
    std::cerr << "oracle cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const chaosbound::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
