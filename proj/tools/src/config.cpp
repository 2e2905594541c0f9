#include "dcki/app/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dcki::app {

using nlohmann::json;

namespace {

constexpr std::pair<SweepAxis, std::string_view> kAxes[] = {
    {SweepAxis::kK, "K"},
    {SweepAxis::kNa, "n_a"},
    {SweepAxis::kNaSmote, "n_a_smote"},
    {SweepAxis::kDTilde, "d_tilde"},
};

int line_at(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& why) const {
    const std::string field = section.empty() ? key : section + "." + key;
    std::string where = source_;
    if (const int line = line_of(section, key); line > 0) where += ":" + std::to_string(line);
    throw Error(ErrorCode::kConfig, where + ": field '" + field + "': " + why);
  }

  void only(const json& obj, const std::string& section,
            std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(section, "", "expected an object");
    const std::set<std::string_view> keys(allowed);
    for (const auto& item : obj.items())
      if (!keys.count(item.key())) fail(section, item.key(), "unknown key");
  }

  void integer(const json& obj, const std::string& section, const char* key, Index& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(section, key, "expected an integer");
    out = v.get<Index>();
  }

  void unsigned_integer(const json& obj, const std::string& section, const char* key,
                        std::uint64_t& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      fail(section, key, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void real(const json& obj, const std::string& section, const char* key, double& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(section, key, "expected a number");
    out = v.get<double>();
  }

  void boolean(const json& obj, const std::string& section, const char* key, bool& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(section, key, "expected true or false");
    out = v.get<bool>();
  }

  void string(const json& obj, const std::string& section, const char* key,
              std::string& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(section, key, "expected a string");
    out = v.get<std::string>();
  }

  std::vector<Index> integer_list(const json& obj, const std::string& section,
                                  const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_array()) fail(section, key, "expected an array of integers");
    std::vector<Index> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(section, key, "expected an array of integers");
      out.push_back(e.get<Index>());
    }
    return out;
  }

  std::vector<std::string> string_list(const json& obj, const std::string& section,
                                       const char* key) const {
    const json& v = obj.at(key);
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) fail(section, key, "expected a string or an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(section, key, "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

 private:
  // First line mentioning "key", searched after the section's own key.
  int line_of(const std::string& section, const std::string& key) const {
    std::size_t from = 0;
    if (!section.empty()) {
      const auto s = text_.find("\"" + section + "\"");
      if (s == std::string::npos) return 0;
      from = s;
    }
    if (key.empty()) return line_at(text_, from);
    const auto k = text_.find("\"" + key + "\"", from);
    return k == std::string::npos ? 0 : line_at(text_, k);
  }

  const std::string& text_;
  std::string source_;
};

std::string_view to_string(DataSource s) {
  switch (s) {
    case DataSource::kSynthetic: return "synthetic";
    case DataSource::kCsv: return "csv";
    case DataSource::kIdx: return "idx";
  }
  return "synthetic";
}

std::string_view to_string(FeatureScaling s) {
  switch (s) {
    case FeatureScaling::kNone: return "none";
    case FeatureScaling::kStandardize: return "standardize";
    case FeatureScaling::kUnit: return "unit";
  }
  return "none";
}

void read_data(const Reader& r, const json& obj, DataConfig& d) {
  const std::string sec = "data";
  r.only(obj, sec,
         {"source", "path", "labels_path", "header", "label_column", "scaling", "pool_size",
          "anchor_source_size", "oracle_size", "data_seed", "classes", "dim",
          "class_radius", "class_std", "map_scale", "noise", "map_seed"});
  std::string source = std::string(to_string(d.source));
  r.string(obj, sec, "source", source);
  if (source == "synthetic") d.source = DataSource::kSynthetic;
  else if (source == "csv") d.source = DataSource::kCsv;
  else if (source == "idx") d.source = DataSource::kIdx;
  else r.fail(sec, "source", "unknown source '" + source + "' (synthetic, csv, idx)");
  r.string(obj, sec, "path", d.path);
  r.string(obj, sec, "labels_path", d.labels_path);
  if (obj.contains("header")) {
    bool h = false;
    r.boolean(obj, sec, "header", h);
    d.header = h;
  }
  r.boolean(obj, sec, "label_column", d.label_column);
  if (obj.contains("scaling")) {
    std::string s;
    r.string(obj, sec, "scaling", s);
    if (s == "none") d.scaling = FeatureScaling::kNone;
    else if (s == "standardize") d.scaling = FeatureScaling::kStandardize;
    else if (s == "unit") d.scaling = FeatureScaling::kUnit;
    else r.fail(sec, "scaling", "unknown scaling '" + s + "' (none, standardize, unit)");
  }
  r.integer(obj, sec, "pool_size", d.pool_size);
  r.integer(obj, sec, "anchor_source_size", d.anchor_source_size);
  r.integer(obj, sec, "oracle_size", d.oracle_size);
  r.unsigned_integer(obj, sec, "data_seed", d.data_seed);
  r.integer(obj, sec, "classes", d.synthetic.classes);
  r.integer(obj, sec, "dim", d.synthetic.dim);
  r.real(obj, sec, "class_radius", d.synthetic.class_radius);
  r.real(obj, sec, "class_std", d.synthetic.class_std);
  r.real(obj, sec, "map_scale", d.synthetic.map_scale);
  r.real(obj, sec, "noise", d.synthetic.noise);
  r.unsigned_integer(obj, sec, "map_seed", d.synthetic.map_seed);
  if (d.source != DataSource::kSynthetic && d.path.empty())
    r.fail(sec, "path", "required for " + std::string(to_string(d.source)) + " data");
  if (d.source == DataSource::kIdx && d.label_column && d.labels_path.empty())
    r.fail(sec, "labels_path", "required for labelled IDX data");
  for (auto [key, v] : {std::pair{"pool_size", d.pool_size},
                        std::pair{"anchor_source_size", d.anchor_source_size},
                        std::pair{"oracle_size", d.oracle_size}})
    if (v < 0) r.fail(sec, key, "must be >= 0");
}

void read_attack(const Reader& r, const json& obj, AttackConfig& a) {
  const std::string sec = "attack";
  r.only(obj, sec,
         {"obfuscators", "d_tilde", "n_a", "n_per_party", "leak_labels", "eval_per_label",
          "oracle_k", "mlp_hidden", "mlp_learning_rate", "mlp_max_epochs", "mlp_patience",
          "mlp_tolerance", "mlp_validation_fraction"});
  if (obj.contains("obfuscators")) {
    a.obfuscators.clear();
    for (const auto& name : r.string_list(obj, sec, "obfuscators")) {
      const auto kind = parse_obfuscator(name);
      if (!kind) r.fail(sec, "obfuscators", "unknown obfuscator '" + name + "' (PCA, KPCA)");
      a.obfuscators.push_back(*kind);
    }
    if (a.obfuscators.empty()) r.fail(sec, "obfuscators", "must not be empty");
  }
  if (obj.contains("d_tilde")) {
    a.d_tilde = r.integer_list(obj, sec, "d_tilde");
    if (a.d_tilde.empty()) r.fail(sec, "d_tilde", "must not be empty");
  }
  r.integer(obj, sec, "n_a", a.audit.n_a);
  r.integer(obj, sec, "n_per_party", a.audit.n_per_party);
  if (obj.contains("leak_labels")) {
    const json& v = obj.at("leak_labels");
    if (!v.is_array()) r.fail(sec, "leak_labels", "expected an array of labels");
    a.audit.leak_labels.clear();
    for (const auto& e : v) {
      if (!e.is_number()) r.fail(sec, "leak_labels", "expected an array of labels");
      a.audit.leak_labels.push_back(e.get<double>());
    }
  }
  if (obj.contains("eval_per_label")) {
    if (obj.at("eval_per_label").is_null()) {
      a.audit.eval_per_label.reset();
    } else {
      Index e = 0;
      r.integer(obj, sec, "eval_per_label", e);
      a.audit.eval_per_label = e;
    }
  }
  r.integer(obj, sec, "oracle_k", a.audit.oracle_k);
  r.integer(obj, sec, "mlp_hidden", a.audit.mlp.hidden);
  r.real(obj, sec, "mlp_learning_rate", a.audit.mlp.learning_rate);
  r.integer(obj, sec, "mlp_max_epochs", a.audit.mlp.max_epochs);
  r.integer(obj, sec, "mlp_patience", a.audit.mlp.patience);
  r.real(obj, sec, "mlp_tolerance", a.audit.mlp.tolerance);
  r.real(obj, sec, "mlp_validation_fraction", a.audit.mlp.validation_fraction);
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  for (const auto& [a, name] : kAxes)
    if (a == axis) return name;
  return "K";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxes)
    if (n == name) return a;
  return std::nullopt;
}

AppConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, source + ":" + std::to_string(line_at(text, e.byte > 0 ? e.byte - 1 : 0)) +
                                        ": malformed JSON: " + e.what());
  }
  const Reader r(text, source);
  r.only(doc, "",
         {"task", "K", "n_per_party", "test_total", "d_tilde", "d_hat", "n_a", "n_a_smote",
          "k_nn", "balanced", "methods", "obfuscator", "kpca_bandwidth_spread", "gamma",
          "lambda", "mu", "epsilon", "sigma_y", "downstream_k", "seed", "n_seed",
          "min_timing_ms", "data", "sweep", "bench", "attack"});

  AppConfig c;
  ExperimentConfig& e = c.experiment;
  if (doc.contains("task")) {
    std::string task;
    r.string(doc, "", "task", task);
    if (task == "classification") e.task = TaskMode::kClassification;
    else if (task == "regression") e.task = TaskMode::kRegression;
    else r.fail("", "task", "unknown task '" + task + "' (classification, regression)");
    if (e.task == TaskMode::kRegression) e.balanced = false;
  }
  r.integer(doc, "", "K", e.K);
  r.integer(doc, "", "n_per_party", e.n_per_party);
  r.integer(doc, "", "test_total", e.test_total);
  r.integer(doc, "", "d_tilde", e.d_tilde);
  r.integer(doc, "", "d_hat", e.d_hat);
  r.integer(doc, "", "n_a", e.n_a);
  r.integer(doc, "", "n_a_smote", e.n_a_smote);
  r.integer(doc, "", "k_nn", e.k_nn);
  r.boolean(doc, "", "balanced", e.balanced);
  if (doc.contains("methods")) {
    e.methods.clear();
    for (const auto& name : r.string_list(doc, "", "methods")) {
      const auto m = parse_method(name);
      if (!m) r.fail("", "methods", "unknown method '" + name + "'");
      e.methods.push_back(*m);
    }
  }
  if (doc.contains("obfuscator")) {
    std::string name;
    r.string(doc, "", "obfuscator", name);
    const auto kind = parse_obfuscator(name);
    if (!kind) r.fail("", "obfuscator", "unknown obfuscator '" + name + "' (PCA, KPCA)");
    e.obfuscator = *kind;
  }
  r.real(doc, "", "kpca_bandwidth_spread", e.kpca_bandwidth_spread);
  r.real(doc, "", "gamma", e.gamma);
  r.real(doc, "", "lambda", e.lambda);
  r.real(doc, "", "mu", e.mu);
  r.real(doc, "", "epsilon", e.epsilon);
  r.real(doc, "", "sigma_y", e.sigma_y);
  r.integer(doc, "", "downstream_k", e.downstream_k);
  r.unsigned_integer(doc, "", "seed", e.seed);
  r.integer(doc, "", "n_seed", e.n_seed);
  r.real(doc, "", "min_timing_ms", e.min_timing_ms);

  if (doc.contains("data")) read_data(r, doc.at("data"), c.data);
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    r.only(s, "sweep", {"axis", "values"});
    if (s.contains("axis")) {
      std::string axis;
      r.string(s, "sweep", "axis", axis);
      const auto a = parse_axis(axis);
      if (!a) r.fail("sweep", "axis", "unknown axis '" + axis + "' (K, n_a, n_a_smote, d_tilde)");
      c.sweep.axis = *a;
    }
    if (s.contains("values")) c.sweep.values = r.integer_list(s, "sweep", "values");
  }
  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    r.only(b, "bench", {"n_a"});
    if (b.contains("n_a")) c.bench_n_a = r.integer_list(b, "bench", "n_a");
  }
  if (doc.contains("attack")) read_attack(r, doc.at("attack"), c.attack);

  try {
    validate(e);
  } catch (const Error& err) {
    // validate() names the field; point at its line when we can.
    const std::string msg = err.what();
    const auto q1 = msg.find('\'');
    const auto q2 = q1 == std::string::npos ? q1 : msg.find('\'', q1 + 1);
    if (q2 != std::string::npos) r.fail("", msg.substr(q1 + 1, q2 - q1 - 1), msg.substr(msg.find(": ") + 2));
    throw;
  }
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

json to_json(const AppConfig& c) {
  const ExperimentConfig& e = c.experiment;
  json methods = json::array();
  for (Method m : e.methods) methods.push_back(std::string(to_string(m)));
  json doc{
      {"task", e.task == TaskMode::kClassification ? "classification" : "regression"},
      {"K", e.K},
      {"n_per_party", e.n_per_party},
      {"test_total", e.test_total},
      {"d_tilde", e.d_tilde},
      {"d_hat", e.d_hat},
      {"n_a", e.n_a},
      {"n_a_smote", e.n_a_smote},
      {"k_nn", e.k_nn},
      {"balanced", e.balanced},
      {"methods", methods},
      {"obfuscator", std::string(to_string(e.obfuscator))},
      {"kpca_bandwidth_spread", e.kpca_bandwidth_spread},
      {"gamma", e.gamma},
      {"lambda", e.lambda},
      {"mu", e.mu},
      {"epsilon", e.epsilon},
      {"sigma_y", e.sigma_y},
      {"downstream_k", e.downstream_k},
      {"seed", e.seed},
      {"n_seed", e.n_seed},
      {"min_timing_ms", e.min_timing_ms},
  };
  const DataConfig& d = c.data;
  json data{
      {"source", std::string(to_string(d.source))},
      {"path", d.path},
      {"labels_path", d.labels_path},
      {"label_column", d.label_column},
      {"pool_size", d.pool_size},
      {"anchor_source_size", d.anchor_source_size},
      {"oracle_size", d.oracle_size},
      {"data_seed", d.data_seed},
      {"classes", d.synthetic.classes},
      {"dim", d.synthetic.dim},
      {"class_radius", d.synthetic.class_radius},
      {"class_std", d.synthetic.class_std},
      {"map_scale", d.synthetic.map_scale},
      {"noise", d.synthetic.noise},
      {"map_seed", d.synthetic.map_seed},
  };
  if (d.header) data["header"] = *d.header;
  if (d.scaling) data["scaling"] = std::string(to_string(*d.scaling));
  doc["data"] = data;
  doc["sweep"] = json{{"axis", std::string(to_string(c.sweep.axis))}, {"values", c.sweep.values}};
  doc["bench"] = json{{"n_a", c.bench_n_a}};

  const AuditConfig& a = c.attack.audit;
  json obf = json::array();
  for (auto k : c.attack.obfuscators) obf.push_back(std::string(to_string(k)));
  json attack{
      {"obfuscators", obf},
      {"d_tilde", c.attack.d_tilde},
      {"n_a", a.n_a},
      {"n_per_party", a.n_per_party},
      {"leak_labels", a.leak_labels},
      {"oracle_k", a.oracle_k},
      {"mlp_hidden", a.mlp.hidden},
      {"mlp_learning_rate", a.mlp.learning_rate},
      {"mlp_max_epochs", a.mlp.max_epochs},
      {"mlp_patience", a.mlp.patience},
      {"mlp_tolerance", a.mlp.tolerance},
      {"mlp_validation_fraction", a.mlp.validation_fraction},
  };
  attack["eval_per_label"] = a.eval_per_label ? json(*a.eval_per_label) : json(nullptr);
  doc["attack"] = attack;
  return doc;
}

std::string config_hash(const AppConfig& config) {
  const std::string canon = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dcki::app
