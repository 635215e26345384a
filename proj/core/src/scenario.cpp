#include "kreach/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "kreach/matrix_market.hpp"

namespace kreach {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<double> parse_numbers(const std::string& path, int line,
                                  const std::string& text) {
  std::istringstream is(text);
  std::vector<double> out;
  double v = 0.0;
  while (is >> v) out.push_back(v);
  if (!is.eof()) fail(path, line, "expected a whitespace-separated list of numbers");
  return out;
}

bool parse_bool(const std::string& path, int line, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(path, line, "expected a boolean (true/false)");
}

// Raw key-value pairs of one section, in file order. Repeatable keys
// (generator, projection, monitor) keep every occurrence.
struct RawEntry {
  int line;
  std::string key;
  std::string value;
};

struct RawScenario {
  std::map<std::string, std::vector<RawEntry>> sections;
};

RawScenario parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  RawScenario raw;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(path, lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) fail(path, lineno, "empty section name");
      raw.sections[section];  // record even if the section stays empty
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) fail(path, lineno, "expected 'key = value'");
    if (section.empty()) fail(path, lineno, "key outside of any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(path, lineno, "empty key");
    raw.sections[section].push_back({lineno, key, value});
  }
  return raw;
}

// Accessor over one section that tracks which keys were consumed so unknown
// keys can be reported with their line number.
class Section {
public:
  Section(const std::string& path, const std::string& name,
          const RawScenario& raw)
      : path_(path), name_(name) {
    auto it = raw.sections.find(name);
    if (it != raw.sections.end()) {
      entries_ = &it->second;
      present_ = true;
    }
  }

  bool present() const { return present_; }

  const RawEntry* find(const std::string& key) {
    const RawEntry* hit = nullptr;
    if (entries_) {
      for (const auto& e : *entries_) {
        if (e.key != key) continue;
        if (hit) fail(path_, e.line, "duplicate key '" + key + "' in [" + name_ + "]");
        hit = &e;
      }
    }
    used_.push_back(key);
    return hit;
  }

  std::vector<const RawEntry*> find_all(const std::string& key) {
    std::vector<const RawEntry*> hits;
    if (entries_) {
      for (const auto& e : *entries_) {
        if (e.key == key) hits.push_back(&e);
      }
    }
    used_.push_back(key);
    return hits;
  }

  void reject_unknown() const {
    if (!entries_) return;
    for (const auto& e : *entries_) {
      if (std::find(used_.begin(), used_.end(), e.key) == used_.end()) {
        fail(path_, e.line, "unknown key '" + e.key + "' in [" + name_ + "]");
      }
    }
  }

private:
  std::string path_;
  std::string name_;
  const std::vector<RawEntry>* entries_ = nullptr;
  bool present_ = false;
  std::vector<std::string> used_;
};

Zonotope parse_set(const std::string& path, Section& sec, Index dim,
                   const char* what) {
  Vec center = Vec::Zero(dim);
  if (const RawEntry* e = sec.find("center")) {
    std::vector<double> v = parse_numbers(path, e->line, e->value);
    if (static_cast<Index>(v.size()) != dim) {
      fail(path, e->line, std::string(what) + " center has wrong dimension");
    }
    center = Eigen::Map<const Vec>(v.data(), dim);
  }
  std::vector<Vec> generators;
  if (const RawEntry* e = sec.find("radius")) {
    std::vector<double> v = parse_numbers(path, e->line, e->value);
    if (static_cast<Index>(v.size()) != dim) {
      fail(path, e->line, std::string(what) + " radius has wrong dimension");
    }
    for (Index i = 0; i < dim; ++i) {
      if (v[static_cast<size_t>(i)] < 0.0) {
        fail(path, e->line, std::string(what) + " radius must be nonnegative");
      }
      if (v[static_cast<size_t>(i)] == 0.0) continue;
      Vec g = Vec::Zero(dim);
      g[i] = v[static_cast<size_t>(i)];
      generators.push_back(std::move(g));
    }
  }
  for (const RawEntry* e : sec.find_all("generator")) {
    std::vector<double> v = parse_numbers(path, e->line, e->value);
    if (static_cast<Index>(v.size()) != dim) {
      fail(path, e->line, std::string(what) + " generator has wrong dimension");
    }
    generators.push_back(Eigen::Map<const Vec>(v.data(), dim));
  }
  Mat g(dim, static_cast<Index>(generators.size()));
  for (Index j = 0; j < g.cols(); ++j) g.col(j) = generators[static_cast<size_t>(j)];
  return Zonotope(std::move(center), std::move(g));
}

std::string resolve(const std::string& scenario_path, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return rel;
  return (std::filesystem::path(scenario_path).parent_path() / p).string();
}

} // namespace

SecondOrderSystem assemble_second_order(const SparseMatrix& m, const SparseMatrix& d,
                                        const SparseMatrix& k) {
  const Index dof = m.rows();
  if (m.cols() != dof || d.rows() != dof || d.cols() != dof || k.rows() != dof ||
      k.cols() != dof) {
    throw std::invalid_argument(
        "assemble_second_order: M, D, K must be square with matching size");
  }
  if (dof == 0) {
    throw std::invalid_argument("assemble_second_order: empty system");
  }

  const Index n = 2 * dof;
  std::vector<Triplet> a_trip;
  std::vector<Triplet> b_trip;
  for (Index i = 0; i < dof; ++i) a_trip.push_back({i, dof + i, 1.0});

  SecondOrderSystem out;

  bool diagonal = true;
  for (const Triplet& t : m.to_triplets()) {
    if (t.row != t.col && t.value != 0.0) {
      diagonal = false;
      break;
    }
  }

  if (diagonal) {
    Vec inv = Vec::Zero(dof);
    Mat md = m.to_dense();
    for (Index i = 0; i < dof; ++i) {
      if (md(i, i) == 0.0) {
        throw std::invalid_argument("assemble_second_order: singular mass matrix");
      }
      inv[i] = 1.0 / md(i, i);
    }
    for (const Triplet& t : k.to_triplets()) {
      a_trip.push_back({dof + t.row, t.col, -inv[t.row] * t.value});
    }
    for (const Triplet& t : d.to_triplets()) {
      a_trip.push_back({dof + t.row, dof + t.col, -inv[t.row] * t.value});
    }
    for (Index i = 0; i < dof; ++i) b_trip.push_back({dof + i, i, inv[i]});
    out.residual = 0.0;
  } else {
    Eigen::SparseMatrix<double> em(dof, dof);
    {
      std::vector<Eigen::Triplet<double>> et;
      for (const Triplet& t : m.to_triplets()) {
        et.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
      }
      em.setFromTriplets(et.begin(), et.end());
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(em);
    if (lu.info() != Eigen::Success) {
      throw std::invalid_argument("assemble_second_order: singular mass matrix");
    }
    Mat kd = k.to_dense();
    Mat dd = d.to_dense();
    Mat xk = lu.solve(kd);
    Mat xd = lu.solve(dd);
    Mat minv = lu.solve(Mat(Mat::Identity(dof, dof)));
    Mat mdl = m.to_dense();
    double rk = (mdl * xk - kd).cwiseAbs().rowwise().sum().maxCoeff();
    double rd = (mdl * xd - dd).cwiseAbs().rowwise().sum().maxCoeff();
    out.residual = std::max(rk, rd);
    for (Index i = 0; i < dof; ++i) {
      for (Index j = 0; j < dof; ++j) {
        if (xk(i, j) != 0.0) a_trip.push_back({dof + i, j, -xk(i, j)});
        if (xd(i, j) != 0.0) a_trip.push_back({dof + i, dof + j, -xd(i, j)});
        if (minv(i, j) != 0.0) b_trip.push_back({dof + i, j, minv(i, j)});
      }
    }
  }

  out.a = SparseMatrix::from_triplets(n, n, std::move(a_trip));
  out.b = SparseMatrix::from_triplets(n, dof, std::move(b_trip));
  return out;
}

Scenario load_scenario(const std::string& path) {
  RawScenario raw = parse_file(path);
  for (const auto& [name, entries] : raw.sections) {
    (void)entries;
    if (name != "system" && name != "initial" && name != "input" &&
        name != "config" && name != "outputs") {
      throw std::runtime_error(path + ": unknown section [" + name + "]");
    }
  }

  Scenario sc;

  // --- [system] ---------------------------------------------------------
  Section sys(path, "system", raw);
  if (!sys.present()) throw std::runtime_error(path + ": missing [system] section");
  const RawEntry* ea = sys.find("a");
  const RawEntry* eb = sys.find("b");
  const RawEntry* em = sys.find("m");
  const RawEntry* ed = sys.find("d");
  const RawEntry* ek = sys.find("k");
  sys.reject_unknown();

  const bool first_order = ea != nullptr;
  const bool second_order = em != nullptr || ed != nullptr || ek != nullptr;
  if (first_order == second_order) {
    throw std::runtime_error(
        path + ": [system] needs either 'a' (optionally 'b') or all of 'm', 'd', 'k'");
  }
  if (first_order) {
    sc.a = load_matrix_market(resolve(path, ea->value));
    if (sc.a.rows() != sc.a.cols()) {
      fail(path, ea->line, "system matrix must be square");
    }
    if (eb) {
      sc.b = load_matrix_market(resolve(path, eb->value));
      sc.has_b = true;
      if (sc.b.rows() != sc.a.rows()) {
        fail(path, eb->line, "input matrix row count must match the system dimension");
      }
    }
  } else {
    if (!em || !ed || !ek) {
      throw std::runtime_error(path + ": second-order form needs all of 'm', 'd', 'k'");
    }
    SecondOrderSystem sos = assemble_second_order(
        load_matrix_market(resolve(path, em->value)),
        load_matrix_market(resolve(path, ed->value)),
        load_matrix_market(resolve(path, ek->value)));
    sc.a = std::move(sos.a);
    sc.b = std::move(sos.b);
    sc.has_b = true;
    sc.assembly_residual = sos.residual;
  }

  const Index n = sc.a.rows();
  const Index input_dim = sc.has_b ? sc.b.cols() : n;

  // --- [initial] --------------------------------------------------------
  Section init(path, "initial", raw);
  if (!init.present()) throw std::runtime_error(path + ": missing [initial] section");
  sc.x0 = parse_set(path, init, n, "initial set");
  init.reject_unknown();

  // --- [input] ----------------------------------------------------------
  Section inp(path, "input", raw);
  if (inp.present()) {
    sc.u = parse_set(path, inp, input_dim, "input set");
    inp.reject_unknown();
  } else {
    sc.u = Zonotope::point(Vec::Zero(input_dim));
  }

  // --- [config] ---------------------------------------------------------
  Section cfg(path, "config", raw);
  if (!cfg.present()) throw std::runtime_error(path + ": missing [config] section");
  const RawEntry* e_delta = cfg.find("delta");
  const RawEntry* e_tf = cfg.find("t_f");
  if (!e_delta) throw std::runtime_error(path + ": [config] is missing 'delta'");
  if (!e_tf) throw std::runtime_error(path + ": [config] is missing 't_f'");
  sc.cfg.delta = std::stod(e_delta->value);
  sc.cfg.t_f = std::stod(e_tf->value);
  if (const RawEntry* e = cfg.find("input_mode")) {
    if (e->value == "varying") {
      sc.cfg.input_mode = InputMode::varying;
    } else if (e->value == "constant") {
      sc.cfg.input_mode = InputMode::constant;
    } else {
      fail(path, e->line, "input_mode must be 'varying' or 'constant'");
    }
  }
  if (const RawEntry* e = cfg.find("error_channel")) {
    if (e->value == "interval") {
      sc.cfg.error_channel = ErrorChannel::interval;
    } else if (e->value == "generators") {
      sc.cfg.error_channel = ErrorChannel::generators;
    } else {
      fail(path, e->line, "error_channel must be 'interval' or 'generators'");
    }
  }
  if (const RawEntry* e = cfg.find("target_eps")) {
    sc.cfg.xi.target_eps = std::stod(e->value);
  }
  if (const RawEntry* e = cfg.find("xi_cap")) {
    sc.cfg.xi.cap = static_cast<Index>(std::stoll(e->value));
  }
  if (const RawEntry* e = cfg.find("xi_fixed")) {
    sc.cfg.xi.fixed = static_cast<Index>(std::stoll(e->value));
  }
  if (const RawEntry* e = cfg.find("eta_cap")) {
    sc.cfg.eta.cap = static_cast<Index>(std::stoll(e->value));
  }
  if (const RawEntry* e = cfg.find("strict")) {
    sc.cfg.strict_soundness = parse_bool(path, e->line, e->value);
  }
  cfg.reject_unknown();

  // --- [outputs] --------------------------------------------------------
  Section outs(path, "outputs", raw);
  for (const RawEntry* e : outs.find_all("projection")) {
    std::vector<double> v = parse_numbers(path, e->line, e->value);
    if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
      fail(path, e->line, "projection needs two coordinate indices");
    }
    Index i = static_cast<Index>(v[0]);
    Index j = static_cast<Index>(v[1]);
    if (i < 0 || i >= n || j < 0 || j >= n) {
      fail(path, e->line, "projection coordinate out of range");
    }
    sc.projections.emplace_back(i, j);
  }
  for (const RawEntry* e : outs.find_all("monitor")) {
    std::vector<double> v = parse_numbers(path, e->line, e->value);
    if (v.size() != 3 || v[0] != std::floor(v[0])) {
      fail(path, e->line, "monitor needs a coordinate index and an interval");
    }
    Monitor mon;
    mon.coord = static_cast<Index>(v[0]);
    mon.lo = v[1];
    mon.hi = v[2];
    if (mon.coord < 0 || mon.coord >= n) {
      fail(path, e->line, "monitor coordinate out of range");
    }
    if (!(mon.lo <= mon.hi)) {
      fail(path, e->line, "monitor interval must satisfy lo <= hi");
    }
    sc.monitors.push_back(mon);
  }
  outs.reject_unknown();

  return sc;
}

} // namespace kreach
