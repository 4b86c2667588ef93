#include "crfem/study_config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crfem/quadrature.hpp"

namespace crfem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)).size() != 0) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + text + "'");
  }
  return value;
}

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

std::string full_precision(double value) { return format("%.17g", value); }

}  // namespace

ExactProblem StudyConfig::problem() const {
  ExactProblem pb = make_example(example);
  return nu_override ? with_viscosity(pb, *nu_override) : pb;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int("n", item));
  if (out.empty()) throw std::invalid_argument("config key 'n': empty list");
  return out;
}

void validate_config(const StudyConfig& c) {
  if (c.example != "1" && c.example != "2" && c.example != "custom" && c.example != "example1" &&
      c.example != "example2") {
    throw std::invalid_argument("unknown example '" + c.example + "' (expected 1, 2 or custom)");
  }
  make_mesh_family(c.mesh.kind, c.mesh.eps);
  if (c.n_list.empty()) throw std::invalid_argument("n list must not be empty");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (c.n_list[i] < 1) throw std::invalid_argument("n values must be positive");
    if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) throw std::invalid_argument("n list must be strictly ascending");
  }
  if (c.nu_override && !(*c.nu_override > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(c.solver.end_tol > 0.0)) throw std::invalid_argument("end_tol must be positive");
  if (c.solver.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (c.solver.quad_degree_load < 1 || c.solver.quad_degree_load > kMaxQuadratureDegree) {
    throw std::invalid_argument("quad_degree_load must be in 1.." + std::to_string(kMaxQuadratureDegree));
  }
  if (c.solver.gmres.restart < 1) throw std::invalid_argument("gmres_restart must be positive");
  if (!(c.solver.gmres.rtol > 0.0)) throw std::invalid_argument("gmres_rtol must be positive");
  if (c.threads < 0) throw std::invalid_argument("threads must be non-negative");
}

StudyConfig parse_config(std::istream& in) {
  CLI::ConfigINI ini;
  ini.arrayBounds('\0', '\0')->arrayDelimiter('\0');
  std::vector<CLI::ConfigItem> items;
  try {
    items = ini.from_config(in);
  } catch (const CLI::Error& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }

  StudyConfig c;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"example", [&](const std::string& v) { c.example = v; }},
      {"mesh", [&](const std::string& v) { c.mesh.kind = v; }},
      {"eps", [&](const std::string& v) { c.mesh.eps = parse_double("eps", v); }},
      {"n", [&](const std::string& v) { c.n_list = parse_n_list(v); }},
      {"nu", [&](const std::string& v) { c.nu_override = parse_double("nu", v); }},
      {"threads", [&](const std::string& v) { c.threads = parse_int("threads", v); }},
      {"error_rule", [&](const std::string& v) { c.error_rule = parse_error_rule(v); }},
      {"solver.end_tol", [&](const std::string& v) { c.solver.end_tol = parse_double("end_tol", v); }},
      {"solver.max_iters", [&](const std::string& v) { c.solver.max_iters = parse_int("max_iters", v); }},
      {"solver.init", [&](const std::string& v) { c.solver.init = parse_picard_init(v); }},
      {"solver.quad_degree_load",
       [&](const std::string& v) { c.solver.quad_degree_load = parse_int("quad_degree_load", v); }},
      {"solver.gmres_restart",
       [&](const std::string& v) { c.solver.gmres.restart = static_cast<std::size_t>(parse_int("gmres_restart", v)); }},
      {"solver.gmres_rtol", [&](const std::string& v) { c.solver.gmres.rtol = parse_double("gmres_rtol", v); }},
      {"solver.gmres_max_iters",
       [&](const std::string& v) { c.solver.gmres.max_iters = static_cast<std::size_t>(parse_int("gmres_max_iters", v)); }},
      {"output.csv", [&](const std::string& v) { c.output.csv = v; }},
      {"output.table", [&](const std::string& v) { c.output.table = v; }},
      {"output.vtk", [&](const std::string& v) { c.output.vtk = v; }},
  };

  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key;
    for (const auto& parent : item.parents) {
      if (parent == "default") continue;
      key += parent + ".";
    }
    key += item.name;
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    it->second(trim(value));
  }
  if (c.n_list.empty()) throw std::invalid_argument("config must set n");
  validate_config(c);
  return c;
}

StudyConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot read config file '" + path + "'");
  return parse_config(file);
}

int resolve_thread_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("CRFEM_MAX_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1) n = std::min(n, limit);
  }
  return n;
}

void write_study_csv(std::ostream& out, const StudyReport& r) {
  const auto& m = r.metadata;
  out << kCsvVersionLine << '\n';
  out << "# example=" << m.example << " mesh=" << m.mesh << " eps=" << full_precision(m.eps)
      << " nu=" << full_precision(m.nu) << " quad_degree_load=" << m.quad_degree_load
      << " end_tol=" << full_precision(m.end_tol) << " gmres_restart=" << m.gmres_restart
      << " gmres_rtol=" << full_precision(m.gmres_rtol) << " error_rule=" << to_string(m.error_rule) << '\n';
  out << "N,h,Err_Vh,rate,Err_L2,rate,Err_Qh,rate,iters,dofs\n";
  auto rate = [](const std::optional<double>& v) { return v ? full_precision(*v) : std::string(); };
  for (const auto& row : r.rows) {
    out << row.N << ',' << full_precision(row.h) << ',' << full_precision(row.err_vh) << ',' << rate(row.rate_vh)
        << ',' << full_precision(row.err_l2) << ',' << rate(row.rate_l2) << ',' << full_precision(row.err_qh) << ','
        << rate(row.rate_qh) << ',' << row.picard_iters << ',' << row.dofs << '\n';
  }
}

void write_study_table(std::ostream& out, const StudyReport& r) {
  const auto& m = r.metadata;
  out << "example " << m.example << ", " << (m.mesh == "mesh1" ? "mesh1 eps=" + format("%g", m.eps) : m.mesh)
      << ", nu=" << format("%g", m.nu) << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%5s  %12s  %12s  %5s  %12s  %5s  %12s  %5s  %5s  %8s\n", "N", "h", "Err(V_h)", "r",
                "Err(L2)", "r", "Err(Q_h)", "r", "iters", "#Np");
  out << line;
  auto rate = [](const std::optional<double>& v) { return v ? format("%.2f", *v) : std::string("-"); };
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%5d  %12.5e  %12.5e  %5s  %12.5e  %5s  %12.5e  %5s  %5d  %8zu\n", row.N, row.h,
                  row.err_vh, rate(row.rate_vh).c_str(), row.err_l2, rate(row.rate_l2).c_str(), row.err_qh,
                  rate(row.rate_qh).c_str(), row.picard_iters, row.dofs);
    out << line;
    if (!row.error.empty()) out << "  error: " << row.error << '\n';
  }
}

void write_quality_csv(std::ostream& out, const std::vector<int>& n_list, const std::vector<MeshQualityReport>& q) {
  out << "N,MinAngle,MaxAngle,DisSov,SemiRegularity,Np\n";
  for (std::size_t i = 0; i < q.size(); ++i) {
    out << n_list[i] << ',' << full_precision(q[i].min_angle_metric) << ',' << full_precision(q[i].max_angle_metric)
        << ',' << full_precision(q[i].dis_sov) << ',' << full_precision(q[i].semi_regularity) << ','
        << q[i].num_dofs << '\n';
  }
}

void write_quality_table(std::ostream& out, const std::vector<int>& n_list, const std::vector<MeshQualityReport>& q) {
  char line[256];
  std::snprintf(line, sizeof line, "%5s  %12s  %12s  %12s  %8s\n", "N", "MinAngle", "MaxAngle", "DisSov", "#Np");
  out << line;
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::snprintf(line, sizeof line, "%5d  %12.5e  %12.5e  %12.5e  %8zu\n", n_list[i], q[i].min_angle_metric,
                  q[i].max_angle_metric, q[i].dis_sov, q[i].num_dofs);
    out << line;
  }
}

}  // namespace crfem
