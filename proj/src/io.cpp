#include "flmc/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flmc {

namespace {

using nlohmann::json;

// nlohmann::json keeps object keys sorted, so dumping is canonical as long
// as we always finish with the same indent and a newline.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

// Objects must carry exactly the expected keys: anything missing or extra is
// an error, so typos never pass silently.
void require_keys(const json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) throw FormatError(std::string(what) + " must be an object");
  for (const char* k : keys) {
    if (!obj.contains(k)) {
      throw FormatError(std::string(what) + " is missing field '" + k + "'");
    }
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw FormatError(std::string(what) + " has unknown field '" + item.key() + "'");
    }
  }
}

std::int64_t get_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw FormatError(what + " must be an integer");
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw FormatError(what + " does not fit a signed 64-bit integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t get_nonneg(const json& v, const std::string& what) {
  const std::int64_t x = get_int(v, what);
  if (x < 0) throw FormatError(what + " must be non-negative");
  return x;
}

const json& get_array(const json& obj, const char* key, const char* what) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw FormatError(std::string(what) + "." + key + " must be an array");
  return v;
}

std::vector<Index> index_list(const json& arr, const std::string& what) {
  std::vector<Index> out;
  out.reserve(arr.size());
  for (size_t k = 0; k < arr.size(); ++k) {
    out.push_back(get_nonneg(arr[k], what + "[" + std::to_string(k) + "]"));
  }
  return out;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["kind"] = kind_name(inst.kind);
  json facilities = json::array();
  for (Index i = 0; i < inst.num_facilities(); ++i) {
    json f;
    f["capacity"] = inst.capacities(i);
    if (kind_has_opening_costs(inst.kind)) f["opening_cost"] = inst.opening_costs(i);
    facilities.push_back(std::move(f));
  }
  j["facilities"] = std::move(facilities);
  json clients = json::array();
  for (Index c = 0; c < inst.num_clients(); ++c) {
    json e;
    e["demand"] = inst.demands(c);
    if (kind_has_penalties(inst.kind)) e["penalty"] = inst.penalties(c);
    clients.push_back(std::move(e));
  }
  j["clients"] = std::move(clients);
  json costs = json::array();
  for (Index i = 0; i < inst.costs.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < inst.costs.cols(); ++c) row.push_back(inst.costs(i, c));
    costs.push_back(std::move(row));
  }
  j["costs"] = std::move(costs);
  j["metric"] = inst.metric_claim;
  return dump(j);
}

Instance instance_from_json(const std::string& text) {
  const json j = parse_text(text, "instance");
  require_keys(j, {"kind", "facilities", "clients", "costs", "metric"}, "instance");

  Instance inst;
  if (!j.at("kind").is_string()) throw FormatError("instance.kind must be a string");
  try {
    inst.kind = kind_from_name(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }

  const json& facilities = get_array(j, "facilities", "instance");
  const Index m = static_cast<Index>(facilities.size());
  inst.capacities.resize(m);
  inst.opening_costs.resize(kind_has_opening_costs(inst.kind) ? m : 0);
  for (Index i = 0; i < m; ++i) {
    const json& f = facilities[static_cast<size_t>(i)];
    const std::string label = "facilities[" + std::to_string(i) + "]";
    if (kind_has_opening_costs(inst.kind)) {
      require_keys(f, {"capacity", "opening_cost"}, label.c_str());
      inst.opening_costs(i) = get_nonneg(f.at("opening_cost"), label + ".opening_cost");
    } else {
      require_keys(f, {"capacity"}, label.c_str());
    }
    inst.capacities(i) = get_nonneg(f.at("capacity"), label + ".capacity");
  }

  const json& clients = get_array(j, "clients", "instance");
  const Index n = static_cast<Index>(clients.size());
  inst.demands.resize(n);
  inst.penalties.resize(kind_has_penalties(inst.kind) ? n : 0);
  for (Index c = 0; c < n; ++c) {
    const json& e = clients[static_cast<size_t>(c)];
    const std::string label = "clients[" + std::to_string(c) + "]";
    if (kind_has_penalties(inst.kind)) {
      require_keys(e, {"demand", "penalty"}, label.c_str());
      inst.penalties(c) = get_nonneg(e.at("penalty"), label + ".penalty");
    } else {
      require_keys(e, {"demand"}, label.c_str());
    }
    inst.demands(c) = get_nonneg(e.at("demand"), label + ".demand");
  }

  const json& costs = get_array(j, "costs", "instance");
  if (static_cast<Index>(costs.size()) != m) {
    throw FormatError("instance.costs must have one row per facility");
  }
  inst.costs.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    const json& row = costs[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw FormatError("instance.costs[" + std::to_string(i) +
                        "] must have one entry per client");
    }
    for (Index c = 0; c < n; ++c) {
      inst.costs(i, c) = get_nonneg(row[static_cast<size_t>(c)],
                                    "instance.costs[" + std::to_string(i) + "][" +
                                        std::to_string(c) + "]");
    }
  }

  if (!j.at("metric").is_boolean()) throw FormatError("instance.metric must be a boolean");
  inst.metric_claim = j.at("metric").get<bool>();

  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) throw FormatError("invalid instance: " + report.to_string());
  return inst;
}

std::string solution_to_json(const Solution& sol) {
  json j;
  json flows = json::array();
  for (const FlowEntry& e : sol.flows) {
    flows.push_back(json::array({e.facility, e.client, e.amount}));
  }
  j["flows"] = std::move(flows);
  j["unserved"] = sol.unserved;
  j["open"] = sol.open;
  j["objective"] = sol.objective;
  return dump(j);
}

Solution solution_from_json(const std::string& text) {
  const json j = parse_text(text, "solution");
  require_keys(j, {"flows", "unserved", "open", "objective"}, "solution");

  Solution sol;
  const json& flows = get_array(j, "flows", "solution");
  for (size_t k = 0; k < flows.size(); ++k) {
    const json& t = flows[k];
    const std::string label = "solution.flows[" + std::to_string(k) + "]";
    if (!t.is_array() || t.size() != 3) {
      throw FormatError(label + " must be a [facility, client, amount] triple");
    }
    FlowEntry e;
    e.facility = get_nonneg(t[0], label + "[0]");
    e.client = get_nonneg(t[1], label + "[1]");
    e.amount = get_nonneg(t[2], label + "[2]");
    sol.flows.push_back(e);
  }
  sol.unserved = index_list(get_array(j, "unserved", "solution"), "solution.unserved");
  sol.open = index_list(get_array(j, "open", "solution"), "solution.open");
  sol.objective = get_nonneg(j.at("objective"), "solution.objective");
  return sol;
}

std::string certificate_to_json(const ReductionCertificate& cert) {
  json j;
  j["direction"] = direction_name(cert.direction);
  j["mode"] = cost_mode_name(cert.mode);
  json map = json::array();
  for (const auto& [reduced, original] : cert.dummy_map) {
    map.push_back(json::array({reduced, original}));
  }
  j["dummy_map"] = std::move(map);
  if (cert.iub) j["iub"] = *cert.iub;
  j["source_dims"] =
      json::array({cert.source_num_facilities, cert.source_num_clients});
  return dump(j);
}

ReductionCertificate certificate_from_json(const std::string& text) {
  const json j = parse_text(text, "certificate");
  ReductionCertificate cert;
  if (!j.is_object() || !j.contains("direction") || !j.at("direction").is_string()) {
    throw FormatError("certificate.direction must be a string");
  }
  try {
    cert.direction = direction_from_name(j.at("direction").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    require_keys(j, {"direction", "mode", "dummy_map", "iub", "source_dims"}, "certificate");
    cert.iub = get_nonneg(j.at("iub"), "certificate.iub");
  } else {
    require_keys(j, {"direction", "mode", "dummy_map", "source_dims"}, "certificate");
  }
  if (!j.at("mode").is_string()) throw FormatError("certificate.mode must be a string");
  try {
    cert.mode = cost_mode_from_name(j.at("mode").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const json& map = get_array(j, "dummy_map", "certificate");
  for (size_t k = 0; k < map.size(); ++k) {
    const json& pair = map[k];
    const std::string label = "certificate.dummy_map[" + std::to_string(k) + "]";
    if (!pair.is_array() || pair.size() != 2) {
      throw FormatError(label + " must be a [reduced, original] pair");
    }
    cert.dummy_map.emplace_back(get_nonneg(pair[0], label + "[0]"),
                                get_nonneg(pair[1], label + "[1]"));
  }
  const json& dims = get_array(j, "source_dims", "certificate");
  if (dims.size() != 2) {
    throw FormatError("certificate.source_dims must be [facilities, clients]");
  }
  cert.source_num_facilities = get_nonneg(dims[0], "certificate.source_dims[0]");
  cert.source_num_clients = get_nonneg(dims[1], "certificate.source_dims[1]");
  return cert;
}

std::string report_to_json(const ValidationReport& report) {
  json j;
  j["ok"] = report.ok();
  json violations = json::array();
  for (const Violation& v : report.violations) {
    json item;
    item["code"] = v.code;
    item["detail"] = v.detail;
    violations.push_back(std::move(item));
  }
  j["violations"] = std::move(violations);
  return dump(j);
}

BenchConfig bench_config_from_json(const std::string& text) {
  const json j = parse_text(text, "bench config");
  require_keys(j, {"suites"}, "bench config");
  BenchConfig config;
  const json& suites = get_array(j, "suites", "bench config");
  for (size_t k = 0; k < suites.size(); ++k) {
    const json& s = suites[k];
    const std::string label = "suites[" + std::to_string(k) + "]";
    require_keys(s,
                 {"name", "kind", "mode", "count", "facilities", "clients", "grid",
                  "max_capacity", "max_demand", "max_penalty", "seed", "oracle_limit",
                  "max_iterations"},
                 label.c_str());
    BenchSuite suite;
    if (!s.at("name").is_string()) throw FormatError(label + ".name must be a string");
    suite.name = s.at("name").get<std::string>();
    try {
      suite.kind = kind_from_name(s.at("kind").get<std::string>());
      suite.mode = cost_mode_from_name(s.at("mode").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    if (suite.kind != Kind::tmc && suite.kind != Kind::utmc) {
      throw FormatError(label + ".kind must be tmc or utmc");
    }
    suite.count = static_cast<int>(get_nonneg(s.at("count"), label + ".count"));
    suite.base.kind = suite.kind;
    suite.base.num_facilities = get_nonneg(s.at("facilities"), label + ".facilities");
    suite.base.num_clients = get_nonneg(s.at("clients"), label + ".clients");
    suite.base.grid = get_nonneg(s.at("grid"), label + ".grid");
    suite.base.caps.max_capacity = get_nonneg(s.at("max_capacity"), label + ".max_capacity");
    suite.base.caps.max_demand = get_nonneg(s.at("max_demand"), label + ".max_demand");
    suite.base.caps.max_penalty = get_nonneg(s.at("max_penalty"), label + ".max_penalty");
    suite.base.seed = static_cast<std::uint64_t>(get_nonneg(s.at("seed"), label + ".seed"));
    suite.oracle_limit = get_nonneg(s.at("oracle_limit"), label + ".oracle_limit");
    suite.params.max_iterations =
        static_cast<int>(get_nonneg(s.at("max_iterations"), label + ".max_iterations"));
    config.suites.push_back(std::move(suite));
  }
  return config;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("failed reading " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

Instance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

Solution load_solution(const std::string& path) { return solution_from_json(read_file(path)); }

ReductionCertificate load_certificate(const std::string& path) {
  return certificate_from_json(read_file(path));
}

}  // namespace flmc
