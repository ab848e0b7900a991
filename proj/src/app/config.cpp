#include "stochform/app/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stochform::app {

using nlohmann::json;

namespace {

enum class T { Number, Integer, String, Bool, NumberArray, StringArray, Object, Any };

const char* type_name(T t) {
  switch (t) {
    case T::Number: return "a number";
    case T::Integer: return "a nonnegative integer";
    case T::String: return "a string";
    case T::Bool: return "a boolean";
    case T::NumberArray: return "an array of numbers";
    case T::StringArray: return "an array of strings";
    case T::Object: return "an object";
    case T::Any: return "a value";
  }
  return "a value";
}

bool has_type(const json& v, T t) {
  switch (t) {
    case T::Number: return v.is_number();
    case T::Integer: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case T::String: return v.is_string();
    case T::Bool: return v.is_boolean();
    case T::NumberArray:
      if (!v.is_array() || v.empty()) return false;
      for (const auto& e : v)
        if (!e.is_number()) return false;
      return true;
    case T::StringArray:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_string()) return false;
      return true;
    case T::Object: return v.is_object();
    case T::Any: return true;
  }
  return false;
}

using Schema = std::map<std::string, T>;

void check_keys(const json& obj, const Schema& schema, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    auto it = schema.find(key);
    if (it == schema.end()) throw ConfigError("unknown key '" + key + "' in " + where);
    if (!has_type(value, it->second))
      throw ConfigError(where + "." + key + " must be " + type_name(it->second));
  }
}

const std::map<std::string, Schema>& param_schemas() {
  static const std::map<std::string, Schema> s = {
      {"simulate", {{"dump_paths", T::Integer}}},
      {"generator-check",
       {{"functions", T::StringArray}, {"points", T::Integer}, {"point_seed", T::Integer},
        {"martingale", T::Bool}}},
      {"integrate", {{"forms", T::StringArray}, {"decompose", T::Bool}}},
      {"estimate-cycle", {{"forms", T::StringArray}, {"batches", T::Integer}}},
      {"estimate-measure", {{"binning", T::Object}, {"region", T::Object}, {"forms", T::StringArray}}},
      {"validate-measure",
       {{"binning", T::Object}, {"measure", T::String}, {"test_functions", T::StringArray},
        {"region", T::Object}, {"forms", T::StringArray}}},
      {"check-lyapunov",
       {{"form", T::String}, {"region", T::Object}, {"grid", T::Integer}, {"cutoff", T::Number},
        {"zero_tol", T::Number}}},
      {"estimate-f", {{"form", T::String}, {"times", T::NumberArray}}},
      {"tail-bound", {{"function", T::String}, {"t", T::Number}, {"k", T::NumberArray}, {"grid", T::Integer}}},
      {"fluctuation", {{"form", T::String}, {"lambdas", T::NumberArray}, {"times", T::NumberArray}}},
      {"paper-suite", {}},
  };
  return s;
}

void check_binning(const json& b) {
  check_keys(b, {{"k", T::Integer}, {"bands", T::Integer}, {"azimuth", T::Integer}}, "params.binning");
  for (const auto& [key, value] : b.items())
    if (value.get<std::size_t>() == 0) throw ConfigError("params.binning." + key + " must be positive");
}

void check_region(const json& r) {
  check_keys(r, {{"kind", T::String}, {"x", T::NumberArray}, {"radius", T::Number}}, "params.region");
  if (!r.contains("kind")) throw ConfigError("params.region.kind is required");
  const auto kind = r["kind"].get<std::string>();
  if (kind != "torus_circles" && kind != "sphere_poles")
    throw ConfigError("params.region.kind must be torus_circles or sphere_poles");
  if (kind == "torus_circles" && !r.contains("x"))
    throw ConfigError("params.region.x is required for torus_circles");
  if (r.contains("radius") && !(r["radius"].get<double>() > 0.0))
    throw ConfigError("params.region.radius must be positive");
}

Manifold parse_manifold(const json& m) {
  check_keys(m, {{"kind", T::String}, {"n", T::Integer}}, "manifold");
  const std::string kind = m.value("kind", std::string("torus"));
  if (kind == "torus") {
    if (m.contains("n")) throw ConfigError("manifold.n applies only to spheres");
    return Manifold::torus();
  }
  if (kind == "sphere") {
    const std::size_t n = m.value("n", std::size_t{2});
    if (n < 1 || n + 1 > kMaxDim) throw ConfigError("manifold.n out of range");
    return Manifold::sphere(n);
  }
  throw ConfigError("manifold.kind must be torus or sphere");
}

json manifold_json(const Manifold& m) {
  if (m.is_torus()) return {{"kind", "torus"}};
  return {{"kind", "sphere"}, {"n", m.dim()}};
}

std::optional<VectorField> field_by_name(const std::string& name, const Manifold& m) {
  if (name == "none") return std::nullopt;
  if (m.is_torus()) {
    if (name == "torus_sin_cos") return fields::torus_sin_cos();
    if (name == "torus_unit_x") return fields::torus_constant(1.0, 0.0);
    if (name == "torus_unit_y") return fields::torus_constant(0.0, 1.0);
  } else if (name == "sphere_height_gradient") {
    return fields::sphere_height_gradient(m.dim());
  }
  const std::string prefix = "gradient:";
  if (name.rfind(prefix, 0) == 0) {
    try {
      return fields::gradient_of(scalars::by_name(name.substr(prefix.size()), m));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown vector field '" + name + "' on " + m.name());
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "simulate",     "generator-check", "integrate",  "estimate-cycle",
      "estimate-measure", "validate-measure", "check-lyapunov", "estimate-f",
      "tail-bound",   "fluctuation",     "paper-suite"};
  return kinds;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {{"schema_version", T::Integer}, {"experiment", T::String}, {"manifold", T::Object},
              {"diffusion", T::Object}, {"ensemble", T::Object}, {"x0", T::NumberArray},
              {"params", T::Object}, {"output", T::Object}},
             "config");
  if (j.contains("schema_version") && j["schema_version"].get<int>() != kSchemaVersion)
    throw ConfigError("unsupported schema_version");
  if (!j.contains("experiment")) throw ConfigError("config.experiment is required");

  ExperimentConfig c;
  c.experiment = j["experiment"].get<std::string>();
  const auto& schemas = param_schemas();
  auto schema = schemas.find(c.experiment);
  if (schema == schemas.end()) throw ConfigError("unknown experiment '" + c.experiment + "'");

  c.manifold = parse_manifold(j.value("manifold", json::object()));

  const json d = j.value("diffusion", json::object());
  check_keys(d, {{"drift", T::Any}, {"noise", T::StringArray}, {"convention", T::String}}, "diffusion");
  if (d.contains("drift") && !d["drift"].is_null()) {
    if (!d["drift"].is_string()) throw ConfigError("diffusion.drift must be a string or null");
    if (d["drift"].get<std::string>() != "none") c.diffusion.drift = d["drift"].get<std::string>();
  }
  if (d.contains("noise")) c.diffusion.noise = d["noise"].get<std::vector<std::string>>();
  if (c.diffusion.noise.size() > kMaxDim) throw ConfigError("too many noise fields");
  if (d.contains("convention")) {
    const auto conv = d["convention"].get<std::string>();
    if (conv != "half" && conv != "unit") throw ConfigError("diffusion.convention must be half or unit");
    c.diffusion.convention = conv == "half" ? Convention::Half : Convention::Unit;
  }
  if (c.diffusion.drift) field_by_name(*c.diffusion.drift, c.manifold);
  for (const auto& n : c.diffusion.noise)
    if (n == "none" || !field_by_name(n, c.manifold)) throw ConfigError("noise field cannot be none");

  const json e = j.value("ensemble", json::object());
  check_keys(e,
             {{"n_paths", T::Integer}, {"horizon", T::Number}, {"dt", T::Number},
              {"base_seed", T::Integer}, {"burn_in", T::Number}},
             "ensemble");
  c.ensemble.n_paths = e.value("n_paths", c.ensemble.n_paths);
  c.ensemble.horizon = e.value("horizon", c.ensemble.horizon);
  c.ensemble.dt = e.value("dt", c.ensemble.dt);
  c.ensemble.base_seed = e.value("base_seed", c.ensemble.base_seed);
  c.ensemble.burn_in = e.value("burn_in", c.ensemble.burn_in);
  if (c.ensemble.n_paths == 0) throw ConfigError("ensemble.n_paths must be positive");
  if (!(c.ensemble.dt > 0.0) || !std::isfinite(c.ensemble.dt))
    throw ConfigError("ensemble.dt must be positive");
  if (!(c.ensemble.horizon > 0.0) || !std::isfinite(c.ensemble.horizon))
    throw ConfigError("ensemble.horizon must be positive");
  if (c.ensemble.dt > c.ensemble.horizon) throw ConfigError("ensemble.dt exceeds the horizon");
  if (!(c.ensemble.burn_in >= 0.0 && c.ensemble.burn_in < 1.0))
    throw ConfigError("ensemble.burn_in must lie in [0, 1)");

  if (j.contains("x0")) {
    const auto v = j["x0"].get<std::vector<double>>();
    if (v.size() != c.manifold.coord_dim())
      throw ConfigError("x0 needs " + std::to_string(c.manifold.coord_dim()) + " coordinates");
    c.x0 = Vec(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c.x0[i] = v[i];
  } else {
    c.x0 = Vec(c.manifold.coord_dim());
    if (c.manifold.is_torus()) {
      c.x0[0] = 0.25;
    } else {
      c.x0[1] = 1.0;
    }
  }
  try {
    ManifoldPoint(c.manifold, c.x0);
  } catch (const Error& err) {
    throw ConfigError(std::string("x0: ") + err.what());
  }

  c.params = j.value("params", json::object());
  check_keys(c.params, schema->second, "params");
  if (c.params.contains("binning")) check_binning(c.params["binning"]);
  if (c.params.contains("region")) check_region(c.params["region"]);

  const json o = j.value("output", json::object());
  check_keys(o, {{"dir", T::String}, {"csv", T::Bool}, {"plots", T::Bool}}, "output");
  c.output_dir = o.value("dir", c.output_dir);
  c.write_csv = o.value("csv", c.write_csv);
  c.write_plots = o.value("plots", c.write_plots);
  if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json ExperimentConfig::to_json() const {
  json x = json::array();
  for (std::size_t i = 0; i < x0.size(); ++i) x.push_back(x0[i]);
  return {
      {"schema_version", kSchemaVersion},
      {"experiment", experiment},
      {"manifold", manifold_json(manifold)},
      {"diffusion",
       {{"drift", diffusion.drift ? json(*diffusion.drift) : json(nullptr)},
        {"noise", diffusion.noise},
        {"convention", diffusion.convention == Convention::Half ? "half" : "unit"}}},
      {"ensemble",
       {{"n_paths", ensemble.n_paths},
        {"horizon", ensemble.horizon},
        {"dt", ensemble.dt},
        {"base_seed", ensemble.base_seed},
        {"burn_in", ensemble.burn_in}}},
      {"x0", x},
      {"params", params},
      {"output", {{"dir", output_dir}, {"csv", write_csv}, {"plots", write_plots}}},
  };
}

DiffusionSpec build_spec(const ExperimentConfig& cfg) {
  const auto& d = cfg.diffusion;
  const Convention c = d.convention;
  const auto& m = cfg.manifold;
  const std::vector<std::string> unit_xy = {"torus_unit_x", "torus_unit_y"};
  if (m.is_torus() && !d.drift && d.noise == std::vector<std::string>{"torus_sin_cos"})
    return specs::torus_sin_cos(c);
  if (m.is_sphere() && !d.drift && d.noise == std::vector<std::string>{"sphere_height_gradient"})
    return specs::sphere_height(m.dim(), c);
  if (m.is_torus() && d.drift && d.drift->rfind("gradient:", 0) == 0 && d.noise == unit_xy)
    return specs::torus_gradient_drift(scalars::by_name(d.drift->substr(9), m), c);
  if (m.is_torus() && d.drift && *d.drift == "torus_sin_cos" && d.noise.empty())
    return specs::torus_sin_cos_flow().with_convention(c);
  if (!d.drift && d.noise.empty()) return specs::still(m).with_convention(c);

  std::string id = "custom(" + (d.drift ? *d.drift : std::string("none")) + ";";
  std::vector<VectorField> noise;
  for (std::size_t i = 0; i < d.noise.size(); ++i) {
    id += (i ? "," : "") + d.noise[i];
    noise.push_back(*field_by_name(d.noise[i], m));
  }
  id += ")";
  std::optional<VectorField> drift;
  if (d.drift) drift = field_by_name(*d.drift, m);
  return DiffusionSpec(id, m, drift, noise, c, noise.empty());
}

ManifoldPoint build_x0(const ExperimentConfig& cfg) { return ManifoldPoint(cfg.manifold, cfg.x0); }

json default_config(const std::string& experiment) {
  const json torus = {{"kind", "torus"}};
  const json sphere = {{"kind", "sphere"}, {"n", 2}};
  const json torus_diffusion = {{"drift", nullptr}, {"noise", {"torus_sin_cos"}}, {"convention", "half"}};
  const json sphere_diffusion = {
      {"drift", nullptr}, {"noise", {"sphere_height_gradient"}}, {"convention", "half"}};
  auto base = [&](const json& m, const json& d, json ens, json x0, json params) {
    return json{{"schema_version", kSchemaVersion},
                {"experiment", experiment},
                {"manifold", m},
                {"diffusion", d},
                {"ensemble", std::move(ens)},
                {"x0", std::move(x0)},
                {"params", std::move(params)},
                {"output", {{"dir", "out/" + experiment}}}};
  };
  auto ens = [](std::size_t n, double horizon, double dt) {
    return json{{"n_paths", n}, {"horizon", horizon}, {"dt", dt}, {"base_seed", 20231}, {"burn_in", 0.1}};
  };
  const json tx0 = {0.25, 0.0};
  const json sx0 = {0.0, 1.0, 0.0};
  if (experiment == "simulate")
    return base(torus, torus_diffusion, ens(4, 10.0, 1e-3), tx0, {{"dump_paths", 4}});
  if (experiment == "generator-check")
    return base(torus, torus_diffusion, ens(400, 1.0, 1e-3), tx0,
                {{"functions", {"torus_y", "torus_log_sin_sq", "torus_sin_2pi_y"}},
                 {"points", 256},
                 {"martingale", true}});
  if (experiment == "integrate")
    return base(torus, torus_diffusion, ens(1, 10.0, 1e-3), tx0,
                {{"forms", {"torus_dx", "torus_dy", "exact:torus_sin_2pi_y"}}, {"decompose", true}});
  if (experiment == "estimate-cycle")
    return base(torus, torus_diffusion, ens(200, 200.0, 1e-3), tx0, {{"batches", 20}});
  if (experiment == "estimate-measure")
    return base(torus, torus_diffusion, ens(20, 200.0, 1e-3), tx0,
                {{"binning", {{"k", 64}}}, {"forms", {"torus_dy"}}});
  if (experiment == "validate-measure")
    return base(torus, torus_diffusion, ens(50, 200.0, 1e-3), tx0,
                {{"binning", {{"k", 64}}},
                 {"measure", "occupation"},
                 {"test_functions",
                  {"torus_y", "torus_sin_2pi_x", "torus_sin_2pi_y", "torus_cos_2pi_x", "torus_cos_2pi_y"}}});
  if (experiment == "check-lyapunov")
    return base(torus, torus_diffusion, ens(1, 1.0, 1e-3), tx0,
                {{"form", "torus_dy"},
                 {"region", {{"kind", "torus_circles"}, {"x", {0.0, 0.5}}, {"radius", 1e-3}}},
                 {"grid", 256}});
  if (experiment == "estimate-f")
    return base(torus, torus_diffusion, ens(2000, 1.0, 1e-4), tx0,
                {{"form", "torus_dy"}, {"times", {0.01, 0.05, 0.1, 0.2}}});
  if (experiment == "tail-bound")
    return base(sphere, sphere_diffusion, ens(10000, 0.5, 1e-3), sx0,
                {{"function", "sphere_log_one_minus_x1_sq"}, {"t", 0.5}, {"k", {2.0, 5.0, 10.0, 50.0}}});
  if (experiment == "fluctuation")
    return base(torus, torus_diffusion, ens(1000, 1.0, 1e-3), tx0,
                {{"form", "torus_dy"}, {"lambdas", {4.0, 16.0, 64.0}}, {"times", {0.25, 0.5, 0.75, 1.0}}});
  if (experiment == "paper-suite")
    return base(torus, torus_diffusion, ens(1, 1.0, 1e-3), tx0, json::object());
  throw ConfigError("unknown experiment '" + experiment + "'");
}

}  // namespace stochform::app
