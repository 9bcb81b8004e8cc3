#include "evodd/config.hpp"

#include "evodd/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace evodd {

namespace {

constexpr const char* kModule = "harness";
using json = nlohmann::json;

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void check_keys(const json& node, const std::string& section, const std::vector<std::string>& allowed) {
  if (!node.is_object()) {
    throw Error(ErrorKind::configuration, kModule, "'" + section + "' must be an object");
  }
  for (const auto& [key, value] : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    const auto nearest = std::min_element(allowed.begin(), allowed.end(), [&](const auto& x, const auto& y) {
      return edit_distance(key, x) < edit_distance(key, y);
    });
    std::string where = section.empty() ? key : section + "." + key;
    throw Error(ErrorKind::configuration, kModule,
                "unknown key '" + where + "'; did you mean '" + *nearest + "'?");
  }
}

template <class T>
T read(const json& node, const char* key, const std::string& section, T fallback) {
  if (!node.contains(key)) return fallback;
  try {
    return node.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::configuration, kModule, "'" + section + "." + key + "' has the wrong type");
  }
}

Vec2 read_vector(const json& node, const char* key, const std::string& section, int dim, double fill,
                 std::vector<double>& out) {
  if (!node.contains(key)) {
    out.assign(dim, fill);
  } else {
    out = read<std::vector<double>>(node, key, section, {});
    if (static_cast<int>(out.size()) != dim) {
      throw Error(ErrorKind::configuration, kModule,
                  "'" + section + "." + key + "' must have one entry per dimension (" + std::to_string(dim) + ")");
    }
  }
  Vec2 v = Vec2::Zero();
  for (int k = 0; k < dim; ++k) v[k] = out[k];
  return v;
}

ReferenceMode reference_from_string(const std::string& name) {
  if (name == "monolithic") return ReferenceMode::monolithic;
  if (name == "fixed_point") return ReferenceMode::fixed_point;
  throw Error(ErrorKind::configuration, kModule, "unknown reference mode '" + name + "'");
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "conservative") return Scheme::conservative;
  if (name == "nonconservative") return Scheme::nonconservative;
  throw Error(ErrorKind::configuration, kModule, "unknown scheme '" + name + "'");
}

SourceKind source_kind_from_string(const std::string& name) {
  if (name == "zero") return SourceKind::zero;
  if (name == "manufactured") return SourceKind::manufactured;
  if (name == "separable") return SourceKind::separable;
  throw Error(ErrorKind::configuration, kModule, "unknown source kind '" + name + "'");
}

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::zero: return "zero";
    case SourceKind::manufactured: return "manufactured";
    case SourceKind::separable: return "separable";
  }
  return "?";
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::configuration, kModule, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "",
             {"geometry", "evolution", "coefficients", "source", "time", "method", "scheme", "outputs", "mms", "seed"});
  ExperimentConfig c;
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& { return root.contains(name) ? root.at(name) : empty; };

  const json& geo = section("geometry");
  check_keys(geo, "geometry", {"dim", "resolution", "gamma"});
  c.geometry.dim = read<int>(geo, "dim", "geometry", 1);
  if (c.geometry.dim != 1 && c.geometry.dim != 2) {
    throw Error(ErrorKind::configuration, kModule, "geometry.dim must be 1 or 2");
  }
  c.geometry.resolution = read<int>(geo, "resolution", "geometry", c.geometry.dim == 1 ? 64 : 16);
  c.geometry.gamma = read<double>(geo, "gamma", "geometry", 0.5);

  const json& evo = section("evolution");
  check_keys(evo, "evolution", {"kind", "a", "omega", "b"});
  c.evolution.kind = evolution_kind_from_string(read<std::string>(evo, "kind", "evolution", "identity"));
  c.evolution.omega = read<double>(evo, "omega", "evolution", 1.0);
  read_vector(evo, "a", "evolution", c.geometry.dim,
              c.evolution.kind == EvolutionKind::axis_stretch ? 0.3 : 0.0, c.evolution.a);
  read_vector(evo, "b", "evolution", c.geometry.dim, 0.0, c.evolution.b);

  const json& coef = section("coefficients");
  check_keys(coef, "coefficients", {"alpha", "beta"});
  if (coef.contains("alpha")) {
    const json& alpha = coef.at("alpha");
    if (alpha.is_number()) {
      c.coefficients.alpha.c0 = alpha.get<double>();
    } else {
      check_keys(alpha, "coefficients.alpha", {"c0", "c1", "omega"});
      c.coefficients.alpha.c0 = read<double>(alpha, "c0", "coefficients.alpha", 1.0);
      c.coefficients.alpha.c1 = read<double>(alpha, "c1", "coefficients.alpha", 0.0);
      c.coefficients.alpha.omega = read<double>(alpha, "omega", "coefficients.alpha", 0.0);
    }
  }
  c.coefficients.beta = read<double>(coef, "beta", "coefficients", 1.0);

  const json& src = section("source");
  check_keys(src, "source", {"kind", "amplitude", "temporal", "spatial"});
  c.source.kind = source_kind_from_string(read<std::string>(src, "kind", "source", "manufactured"));
  c.source.amplitude = read<double>(src, "amplitude", "source", 1.0);
  c.source.temporal = temporal_profile_from_string(read<std::string>(src, "temporal", "source", "one_minus_exp"));
  c.source.spatial = spatial_profile_from_string(read<std::string>(src, "spatial", "source", "sin"));

  const json& time = section("time");
  check_keys(time, "time", {"T", "steps"});
  c.time.T = read<double>(time, "T", "time", 1.0);
  c.time.steps = read<int>(time, "steps", "time", 64);

  const json& method = section("method");
  check_keys(method, "method",
             {"name", "s0", "s1", "s2", "s3", "tol", "maxiter", "reference", "crosscheck_every"});
  c.method.method = method_from_string(read<std::string>(method, "name", "method", "robin_robin"));
  c.method.s0 = read<double>(method, "s0", "method", 1.0);
  c.method.s1 = read<double>(method, "s1", "method", 0.5);
  c.method.s2 = read<double>(method, "s2", "method", 0.25);
  c.method.s3 = read<double>(method, "s3", "method", 0.25);
  c.method.tol = read<double>(method, "tol", "method", 1e-8);
  c.method.maxiter = read<int>(method, "maxiter", "method", 200);
  c.method.reference = reference_from_string(read<std::string>(method, "reference", "method", "monolithic"));
  c.method.crosscheck_every = read<int>(method, "crosscheck_every", "method", 1);
  c.method.validate();

  if (root.contains("scheme")) c.scheme = scheme_from_string(read<std::string>(root, "scheme", "", "conservative"));

  const json& out = section("outputs");
  check_keys(out, "outputs", {"dir", "emit_fields", "emit_history", "wallclock"});
  c.outputs.dir = read<std::string>(out, "dir", "outputs", "evodd_out");
  c.outputs.emit_fields = read<bool>(out, "emit_fields", "outputs", false);
  c.outputs.emit_history = read<bool>(out, "emit_history", "outputs", true);
  c.outputs.wallclock = read<bool>(out, "wallclock", "outputs", true);

  const json& mms = section("mms");
  check_keys(mms, "mms", {"levels", "base_resolution", "dt_factor", "fine_resolution", "base_steps"});
  c.mms.levels = read<int>(mms, "levels", "mms", 3);
  c.mms.base_resolution = read<int>(mms, "base_resolution", "mms", 8);
  c.mms.dt_factor = read<double>(mms, "dt_factor", "mms", 1.0);
  c.mms.fine_resolution = read<int>(mms, "fine_resolution", "mms", c.geometry.dim == 1 ? 256 : 32);
  c.mms.base_steps = read<int>(mms, "base_steps", "mms", 8);
  if (c.mms.levels < 3) throw Error(ErrorKind::configuration, kModule, "mms.levels must be >= 3");

  c.seed = read<std::uint64_t>(root, "seed", "", c.seed);

  // Building the problem runs every module's invariant checks (grid-line split,
  // amplitude cap, positivity of alpha and of the well-posedness margin).
  (void)make_problem(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::configuration, kModule, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json root;
  root["geometry"] = {{"dim", c.geometry.dim}, {"resolution", c.geometry.resolution}, {"gamma", c.geometry.gamma}};
  root["evolution"] = {{"kind", std::string(to_string(c.evolution.kind))},
                       {"a", c.evolution.a},
                       {"omega", c.evolution.omega},
                       {"b", c.evolution.b}};
  root["coefficients"] = {
      {"alpha", {{"c0", c.coefficients.alpha.c0}, {"c1", c.coefficients.alpha.c1}, {"omega", c.coefficients.alpha.omega}}},
      {"beta", c.coefficients.beta}};
  root["source"] = {{"kind", to_string(c.source.kind)},
                    {"amplitude", c.source.amplitude},
                    {"temporal", std::string(to_string(c.source.temporal))},
                    {"spatial", std::string(to_string(c.source.spatial))}};
  root["time"] = {{"T", c.time.T}, {"steps", c.time.steps}};
  root["method"] = {{"name", std::string(to_string(c.method.method))},
                    {"s0", c.method.s0},
                    {"s1", c.method.s1},
                    {"s2", c.method.s2},
                    {"s3", c.method.s3},
                    {"tol", c.method.tol},
                    {"maxiter", c.method.maxiter},
                    {"reference", c.method.reference == ReferenceMode::monolithic ? "monolithic" : "fixed_point"},
                    {"crosscheck_every", c.method.crosscheck_every}};
  root["scheme"] = c.scheme == Scheme::conservative ? "conservative" : "nonconservative";
  root["outputs"] = {{"dir", c.outputs.dir.string()},
                     {"emit_fields", c.outputs.emit_fields},
                     {"emit_history", c.outputs.emit_history},
                     {"wallclock", c.outputs.wallclock}};
  root["mms"] = {{"levels", c.mms.levels},
                 {"base_resolution", c.mms.base_resolution},
                 {"dt_factor", c.mms.dt_factor},
                 {"fine_resolution", c.mms.fine_resolution},
                 {"base_steps", c.mms.base_steps}};
  root["seed"] = c.seed;
  return root.dump(2);
}

EvolutionMap make_evolution(const ExperimentConfig& c) {
  const int dim = c.geometry.dim;
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  for (int k = 0; k < dim && k < static_cast<int>(c.evolution.a.size()); ++k) a[k] = c.evolution.a[k];
  for (int k = 0; k < dim && k < static_cast<int>(c.evolution.b.size()); ++k) b[k] = c.evolution.b[k];
  switch (c.evolution.kind) {
    case EvolutionKind::identity: return EvolutionMap::identity(dim);
    case EvolutionKind::translation: return EvolutionMap::translation(dim, b);
    case EvolutionKind::axis_stretch: return EvolutionMap::axis_stretch(dim, a, c.evolution.omega);
  }
  throw Error(ErrorKind::configuration, kModule, "unknown evolution kind");
}

Problem make_problem(const ExperimentConfig& c) {
  return Problem(build_decomposed_mesh(c.geometry.dim, c.geometry.resolution, c.geometry.gamma), make_evolution(c),
                 c.coefficients, c.source, TimeGrid(c.time.T, c.time.steps), c.scheme);
}

}  // namespace evodd
