#include "mdbt/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "mdbt/errors.hpp"

namespace mdbt {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad number for '" + key + "': " + v);
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for '" + key + "': " + v);
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

Vec to_vec(const std::string& v, const std::string& key) {
  Vec out;
  std::istringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(to_double(trim(cell), key));
  if (out.empty()) throw ConfigError("empty vector for '" + key + "'");
  return out;
}

}  // namespace

ExperimentConfig load_config(std::istream& in) {
  ExperimentConfig cfg;
  SynthSpec synth;
  bool saw_synth_key = false;
  MethodSpec* current = nullptr;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      const std::string section = trim(line.substr(1, line.size() - 2));
      const std::string prefix = "method.";
      if (section.rfind(prefix, 0) != 0)
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section '" + section + "'");
      const std::string mname = section.substr(prefix.size());
      const auto method = method_from_name(mname);
      if (!method)
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown method '" + mname + "'");
      MethodSpec spec;
      spec.name = mname;
      spec.cfg.method = *method;
      spec.cfg.max_oracle_calls = 0;  // 0 = inherit the experiment budget
      cfg.methods.push_back(std::move(spec));
      current = &cfg.methods.back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

    if (current) {
      RunConfig& rc = current->cfg;
      if (key == "gamma") rc.gamma = to_double(value, key);
      else if (key == "c0") rc.c0 = to_double(value, key);
      else if (key == "forward_step") rc.forward_step = to_bool(value, key);
      else if (key == "refine_lambda") rc.refine_lambda = to_bool(value, key);
      else if (key == "budget") rc.max_oracle_calls = to_u64(value, key);
      else if (key == "grad_tol") rc.grad_tol = to_double(value, key);
      else if (key == "seed") rc.seed = to_u64(value, key);
      else if (key == "p_fixed") rc.p_fixed = to_vec(value, key);
      else if (key == "p_star") current->p_star = to_bool(value, key);
      else
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown method key '" + key + "'");
      continue;
    }

    if (key == "name") cfg.name = value;
    else if (key == "objective") cfg.objective = value;
    else if (key == "dataset") cfg.dataset_path = value;
    else if (key == "init") cfg.init_kind = value;
    else if (key == "init_seed") cfg.init_seed = to_u64(value, key);
    else if (key == "budget") cfg.budget = to_u64(value, key);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "synth_kind") {
      saw_synth_key = true;
      if (value == "diagonal") synth.kind = SynthSpec::Kind::diagonal;
      else if (value == "rotated") synth.kind = SynthSpec::Kind::rotated;
      else throw ConfigError("synth_kind must be diagonal or rotated");
    } else if (key == "synth_d") {
      saw_synth_key = true;
      synth.d = to_u64(value, key);
    } else if (key == "synth_cond") {
      saw_synth_key = true;
      synth.cond = to_double(value, key);
    } else if (key == "synth_seed") {
      saw_synth_key = true;
      synth.seed = to_u64(value, key);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }

  if (saw_synth_key) cfg.synth = synth;

  // Everything observable must be explicit.
  if (cfg.name.empty()) throw ConfigError("missing 'name'");
  if (cfg.objective != "quadratic" && cfg.objective != "linreg" &&
      cfg.objective != "logreg")
    throw ConfigError("objective must be quadratic, linreg or logreg");
  if (cfg.objective == "quadratic") {
    if (!cfg.synth) throw ConfigError("quadratic objective needs synth_* keys");
    if (!cfg.dataset_path.empty())
      throw ConfigError("quadratic objective does not take a dataset");
  } else {
    if (cfg.dataset_path.empty())
      throw ConfigError(cfg.objective + " objective needs 'dataset'");
    if (cfg.synth) throw ConfigError("synth_* keys are only for quadratic");
  }
  if (cfg.init_kind != "ones" && cfg.init_kind != "gaussian" && cfg.init_kind != "bias")
    throw ConfigError("init must be ones, gaussian or bias");
  if (cfg.objective == "quadratic" && cfg.init_kind == "bias")
    throw ConfigError("bias init needs a dataset objective");
  if (cfg.budget == 0) throw ConfigError("missing 'budget'");
  if (cfg.out_dir.empty()) throw ConfigError("missing 'out_dir'");
  if (cfg.methods.empty()) throw ConfigError("no [method.*] sections");
  for (auto& m : cfg.methods) {
    if (m.cfg.max_oracle_calls == 0) m.cfg.max_oracle_calls = cfg.budget;
    if (m.p_star && cfg.objective != "quadratic")
      throw ConfigError("p_star needs a quadratic objective");
    if (m.cfg.method == Method::precond_given_ls && !m.p_star && m.cfg.p_fixed.empty())
      throw ConfigError("precond_given_ls needs p_fixed or p_star = true");
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_config(in);
}

}  // namespace mdbt
