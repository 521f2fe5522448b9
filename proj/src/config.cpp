#include "sparsewave/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spw {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// best-effort line for schema complaints: first occurrence of the quoted key
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_of_byte(text, pos);
}

struct Ctx {
  const std::string& text;
  const std::string& path;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw InvalidInput(path + ":" + std::to_string(line_of_key(text, key)) + ": " + msg);
  }
};

RadialTable parse_table(const json& j, const Ctx& ctx, const std::string& key) {
  if (!j.is_object() || !j.contains("r") || !j.contains("v"))
    ctx.fail(key, "profile needs arrays r and v");
  RadialTable t;
  t.r = j.at("r").get<std::vector<double>>();
  t.v = j.at("v").get<std::vector<double>>();
  if (t.r.size() != t.v.size() || t.r.size() < 2)
    ctx.fail(key, "profile arrays must match with at least two points");
  for (std::size_t i = 0; i + 1 < t.r.size(); ++i)
    if (!(t.r[i] < t.r[i + 1])) ctx.fail(key, "profile radii must increase");
  return t;
}

json table_to_json(const RadialTable& t) {
  return json{{"r", t.r}, {"v", t.v}};
}

LayerSpec parse_layer(const json& j, int index, const Ctx& ctx) {
  const std::string kind = j.value("kind", "");
  const double inner = j.value("inner_radius", -1.0);
  if (inner <= 0) ctx.fail("inner_radius", "layer inner_radius must be positive");
  if (kind == "constant") {
    return make_constant_layer(index, inner, j.value("value", 0.0));
  }
  if (kind == "radial") {
    if (!j.contains("profile")) ctx.fail("profile", "radial layer needs a profile");
    return make_radial_layer(index, inner, parse_table(j.at("profile"), ctx, "profile"));
  }
  if (kind == "harmonic") {
    std::vector<HarmonicComponent> parts;
    for (const json& c : j.value("components", json::array())) {
      if (!c.contains("profile")) ctx.fail("components", "harmonic component needs a profile");
      HarmonicComponent hc;
      hc.degree = c.value("degree", 0);
      hc.order = c.value("order", 0);
      hc.profile = parse_table(c.at("profile"), ctx, "components");
      parts.push_back(std::move(hc));
    }
    if (parts.empty()) ctx.fail("components", "harmonic layer needs components");
    return make_harmonic_layer(index, inner, std::move(parts));
  }
  if (kind == "bumps") {
    const int count = j.value("count", 0);
    if (count < 1) ctx.fail("count", "bump layer needs count >= 1");
    return make_random_bump_layer(index, inner, count, j.value("amplitude", 0.0),
                                  j.value("bump_radius", 0.1),
                                  j.value("seed", std::uint64_t{1}));
  }
  ctx.fail("kind", "unknown layer kind '" + kind + "'");
}

json layer_to_json(const LayerSpec& layer) {
  json j{{"inner_radius", layer.inner_radius}};
  switch (layer.kind) {
    case LayerKind::Constant:
      j["kind"] = "constant";
      j["value"] = layer.constant_value;
      break;
    case LayerKind::Radial:
      j["kind"] = "radial";
      j["profile"] = table_to_json(layer.radial);
      break;
    case LayerKind::Harmonic: {
      j["kind"] = "harmonic";
      json parts = json::array();
      for (const auto& c : layer.harmonics)
        parts.push_back(json{{"degree", c.degree}, {"order", c.order},
                             {"profile", table_to_json(c.profile)}});
      j["components"] = parts;
      break;
    }
    case LayerKind::RandomBumps:
      j["kind"] = "bumps";
      j["count"] = layer.bumps.size();
      j["amplitude"] = layer.bumps.empty() ? 0.0 : layer.bumps.front().amplitude;
      j["bump_radius"] = layer.bumps.empty() ? 0.0 : layer.bumps.front().radius;
      j["seed"] = layer.seed;
      break;
  }
  return j;
}

SourceSpec parse_source(const json& j, const Ctx& ctx) {
  const std::string kind = j.value("kind", "ball");
  if (kind == "ball") return ball_source();
  if (!j.contains("profile")) ctx.fail("source", "source of kind '" + kind + "' needs a profile");
  RadialTable profile = parse_table(j.at("profile"), ctx, "source");
  if (kind == "radial") return radial_source(std::move(profile));
  if (kind == "modulated")
    return modulated_source(std::move(profile), j.value("degree", 0), j.value("order", 0));
  ctx.fail("source", "unknown source kind '" + kind + "'");
}

json source_to_json(const SourceSpec& f) {
  if (!f.modulated)
    return json{{"kind", "radial"}, {"profile", table_to_json(f.profile)}};
  return json{{"kind", "modulated"}, {"degree", f.degree}, {"order", f.order},
              {"profile", table_to_json(f.profile)}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }
  Ctx ctx{text, path};

  ExperimentConfig c;
  c.schema_version = j.value("schema_version", 0);
  if (c.schema_version != 1) ctx.fail("schema_version", "expected schema_version 1");

  if (j.contains("potential")) {
    const json& p = j.at("potential");
    int index = 0;
    for (const json& layer : p.value("layers", json::array()))
      c.potential.layers.push_back(parse_layer(layer, index++, ctx));
    if (!c.potential.layers.empty()) c.potential.validate();
  }
  c.log_radii = j.value("log_radii", std::vector<double>{});

  c.source = j.contains("source") ? parse_source(j.at("source"), ctx) : ball_source();

  if (j.contains("k_grid")) {
    const json& k = j.at("k_grid");
    c.tau = k.value("tau", c.tau);
    c.eps = k.value("eps", c.eps);
  }
  for (double t : c.tau)
    if (!(t > 0)) ctx.fail("tau", "tau values must be positive");
  for (double e : c.eps)
    if (e < 0) ctx.fail("eps", "eps values must be nonnegative");

  c.grid_degree = j.value("grid_degree", c.grid_degree);
  if (c.grid_degree < 4 || c.grid_degree > 256)
    ctx.fail("grid_degree", "grid_degree outside [4, 256]");

  c.born_order = j.value("born_order", c.born_order);
  c.order_cap = j.value("order_cap", c.order_cap);
  if (c.born_order < 1 || c.order_cap < 1)
    ctx.fail("born_order", "order caps must be at least 1");
  c.tolerance = j.value("tolerance", c.tolerance);
  if (!(c.tolerance > 0)) ctx.fail("tolerance", "tolerance must be positive");
  c.alpha = j.value("alpha", c.alpha);

  if (j.contains("triangle")) {
    const json& t = j.at("triangle");
    c.tri_a = t.value("a", c.tri_a);
    c.tri_b = t.value("b", c.tri_b);
    c.tri_gamma1 = t.value("gamma1", c.tri_gamma1);
    c.entropy_n_max = t.value("n_max", c.entropy_n_max);
    c.measure_h = t.value("h", c.measure_h);
  }

  if (j.contains("eigcheck")) {
    const json& e = j.at("eigcheck");
    c.eig_E = e.value("E", c.eig_E);
    c.eig_gamma = e.value("gamma", c.eig_gamma);
    if (e.contains("schedule")) {
      const json& s = e.at("schedule");
      c.schedule.log_R0 = s.value("log_R0", c.schedule.log_R0);
      c.schedule.beta = s.value("beta", c.schedule.beta);
      c.schedule.count = s.value("count", c.schedule.count);
    }
  }

  c.trials = j.value("trials", c.trials);
  if (c.trials < 1) ctx.fail("trials", "trials must be at least 1");
  c.seed = j.value("seed", c.seed);

  if (j.contains("recursion")) {
    const json& r = j.at("recursion");
    c.eta_C = r.value("eta_C", c.eta_C);
    c.eta_d = r.value("eta_d", c.eta_d);
    c.envelope_C = r.value("envelope_C", c.envelope_C);
  }

  if (j.contains("parametrix")) {
    const json& p = j.at("parametrix");
    c.par_m_max = p.value("m_max", c.par_m_max);
    c.par_t_min = p.value("t_min", c.par_t_min);
    c.par_t_max = p.value("t_max", c.par_t_max);
    c.par_nt = p.value("n_t", c.par_nt);
    if (c.par_nt < 2 || !(c.par_t_min > 0) || !(c.par_t_max > c.par_t_min))
      ctx.fail("parametrix", "bad parametrix t range");
  }

  c.output_dir = j.value("output_dir", c.output_dir);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path + ":1: cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_to_json(const ExperimentConfig& c) {
  json layers = json::array();
  for (const LayerSpec& l : c.potential.layers) layers.push_back(layer_to_json(l));
  json j{{"schema_version", c.schema_version},
         {"potential", json{{"layers", layers}}},
         {"source", source_to_json(c.source)},
         {"k_grid", json{{"tau", c.tau}, {"eps", c.eps}}},
         {"grid_degree", c.grid_degree},
         {"born_order", c.born_order},
         {"order_cap", c.order_cap},
         {"tolerance", c.tolerance},
         {"alpha", c.alpha},
         {"triangle", json{{"a", c.tri_a},
                           {"b", c.tri_b},
                           {"gamma1", c.tri_gamma1},
                           {"n_max", c.entropy_n_max},
                           {"h", c.measure_h}}},
         {"eigcheck", json{{"E", c.eig_E},
                           {"gamma", c.eig_gamma},
                           {"schedule", json{{"log_R0", c.schedule.log_R0},
                                             {"beta", c.schedule.beta},
                                             {"count", c.schedule.count}}}}},
         {"trials", c.trials},
         {"seed", c.seed},
         {"recursion", json{{"eta_C", c.eta_C}, {"eta_d", c.eta_d},
                            {"envelope_C", c.envelope_C}}},
         {"parametrix", json{{"m_max", c.par_m_max},
                             {"t_min", c.par_t_min},
                             {"t_max", c.par_t_max},
                             {"n_t", c.par_nt}}},
         {"output_dir", c.output_dir}};
  if (!c.log_radii.empty()) j["log_radii"] = c.log_radii;
  return j.dump(2) + "\n";
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvFile::CsvFile(const std::string& path, const std::vector<std::string>& columns)
    : stream(nullptr), n_cols(columns.size()) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open output file " + path);
  stream = f;
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

CsvFile::~CsvFile() {
  if (stream) std::fclose(static_cast<FILE*>(stream));
}

void CsvFile::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols) throw Error("csv row width mismatch");
  FILE* f = static_cast<FILE*>(stream);
  for (std::size_t i = 0; i < cells.size(); ++i)
    std::fprintf(f, "%s%s", cells[i].c_str(), i + 1 < cells.size() ? "," : "\n");
}

void write_metadata(const std::string& path, const ExperimentConfig& config,
                    const std::string& subcommand, double wall_seconds) {
  json meta{{"subcommand", subcommand},
            {"config", json::parse(config_to_json(config))},
            {"versions", json{{"sparsewave", "0.1.0"}, {"compiler", __VERSION__}}},
            {"wall_seconds", wall_seconds},
            {"timestamp", static_cast<std::int64_t>(std::time(nullptr))}};
  std::ofstream out(path);
  if (!out) throw Error("cannot open metadata file " + path);
  out << meta.dump(2) << "\n";
}

}  // namespace spw
