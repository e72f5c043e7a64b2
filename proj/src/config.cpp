#include "hypstab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError(key.empty() ? why : key + ": " + why);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) fail(key, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) fail(key, "value must be finite");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    fail(key, "expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

// Splits "[a, [b, c], d]" into its top-level items.
std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') fail(key, "expected a bracketed list");
  std::vector<std::string> items;
  const std::string body = trim(std::string_view(t).substr(1, t.size() - 2));
  if (body.empty()) return items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '[') ++depth;
    if (c == ']' && --depth < 0) fail(key, "unbalanced brackets");
    if (c == ',' && depth == 0) {
      items.push_back(trim(std::string_view(body).substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) fail(key, "unbalanced brackets");
  items.push_back(trim(std::string_view(body).substr(start)));
  for (const auto& it : items) {
    if (it.empty()) fail(key, "empty list item");
  }
  return items;
}

std::vector<double> parse_vector(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(key, text)) out.push_back(parse_double(key, item));
  return out;
}

RowMatrix parse_matrix(const std::string& key, const std::string& text) {
  RowMatrix out;
  for (const auto& row : split_list(key, text)) out.push_back(parse_vector(key, row));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_vector(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s + "]";
}

std::string format_matrix(const RowMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + format_vector(m[i]);
  return s + "]";
}

void require_square(const std::string& key, const RowMatrix& m, std::size_t n) {
  if (m.size() != n) fail(key, "expected " + std::to_string(n) + " rows");
  for (const auto& row : m) {
    if (row.size() != n) fail(key, "expected " + std::to_string(n) + " columns in every row");
  }
}

SystemKind parse_kind(const std::string& key, const std::string& v) {
  if (v == "euler") return SystemKind::euler;
  if (v == "explicit") return SystemKind::explicit_matrices;
  if (v == "random") return SystemKind::random;
  fail(key, "expected euler, explicit or random");
}

ControlMode parse_control_mode(const std::string& key, const std::string& v) {
  if (v == "zero") return ControlMode::zero;
  if (v == "scalar") return ControlMode::scalar;
  if (v == "componentwise") return ControlMode::componentwise;
  if (v == "prescribed") return ControlMode::prescribed;
  fail(key, "expected zero, scalar, componentwise or prescribed");
}

LmiMode parse_lmi_mode(const std::string& key, const std::string& v) {
  if (v == "plain") return LmiMode::plain;
  if (v == "with_remainder") return LmiMode::with_remainder;
  fail(key, "expected plain or with_remainder");
}

std::size_t state_size(const ScenarioConfig& c) {
  switch (c.kind) {
    case SystemKind::euler:
      return 3;
    case SystemKind::explicit_matrices:
      return c.explicit_system.n;
    case SystemKind::random:
      return c.random.n;
  }
  return 0;
}

}  // namespace

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::euler:
      return "euler";
    case SystemKind::explicit_matrices:
      return "explicit";
    case SystemKind::random:
      return "random";
  }
  return "?";
}

std::string to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::zero:
      return "zero";
    case ControlMode::scalar:
      return "scalar";
    case ControlMode::componentwise:
      return "componentwise";
    case ControlMode::prescribed:
      return "prescribed";
  }
  return "?";
}

std::string to_string(LmiMode mode) { return mode == LmiMode::plain ? "plain" : "with_remainder"; }

void ScenarioConfig::validate() const {
  switch (kind) {
    case SystemKind::euler: {
      EulerScenario s{euler.rho_bar, euler.v_bar, euler.a_bar};
      try {
        s.validate();
      } catch (const Error& e) {
        fail("system.euler", e.what());
      }
      break;
    }
    case SystemKind::explicit_matrices: {
      const auto& e = explicit_system;
      if (e.d < 1 || e.d > 3) fail("system.explicit.d", "must be 1, 2 or 3");
      if (e.n < 1) fail("system.explicit.n", "must be at least 1");
      if (e.jacobians.size() != e.d) {
        fail("system.explicit.jacobian", "expected one matrix per dimension (jacobian.1 .. jacobian.d)");
      }
      for (std::size_t k = 0; k < e.d; ++k) {
        require_square("system.explicit.jacobian." + std::to_string(k + 1), e.jacobians[k], e.n);
      }
      if (!e.source.empty()) require_square("system.explicit.source", e.source, e.n);
      break;
    }
    case SystemKind::random:
      if (random.d < 1 || random.d > 3) fail("system.random.d", "must be 1, 2 or 3");
      if (random.n < 1 || random.n > 10) fail("system.random.n", "must be in 1..10");
      break;
  }
  if (grid.N1 < 4 || grid.N2 < 4) fail("grid", "N1 and N2 must be at least 4");
  if (!(grid.L1 > 0.0) || !(grid.L2 > 0.0)) fail("grid", "L1 and L2 must be positive");
  if (!(time.t_end > 0.0)) fail("time.t_end", "must be positive");
  if (!(time.cfl > 0.0 && time.cfl <= 1.0)) fail("time.cfl", "must lie in (0, 1]");
  if (!std::isfinite(control.C)) fail("control.C", "must be finite");
  if (control.mode == ControlMode::scalar && !(control.C >= -1.0 && control.C <= 1.0)) {
    fail("control.C", "must lie in [-1, 1] for the scalar feedback law");
  }
  if (control.mode == ControlMode::prescribed && control.prescribed.size() != state_size(*this)) {
    fail("control.prescribed", "needs one value per state component");
  }
  if (lmi.C_A_override && !(*lmi.C_A_override > 0.0 && std::isfinite(*lmi.C_A_override))) {
    fail("lmi.C_A_override", "must be positive");
  }
  for (double t : output.snapshot_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("output.snapshot_times", "times must be finite and non-negative");
  }
  if (!std::isfinite(init_amplitude)) fail("init.amplitude", "must be finite");
}

ScenarioConfig parse_config(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) fail("", "line " + std::to_string(lineno) + ": empty key");
    if (!entries.emplace(key, std::make_pair(trim(std::string_view(t).substr(eq + 1)), lineno)).second) {
      fail(key, "repeated on line " + std::to_string(lineno));
    }
  }

  ScenarioConfig c;
  std::map<std::size_t, RowMatrix> jacobians;
  for (const auto& [key, entry] : entries) {
    const std::string& v = entry.first;
    if (key == "system.kind") {
      c.kind = parse_kind(key, v);
    } else if (key == "system.euler.rho_bar") {
      c.euler.rho_bar = parse_double(key, v);
    } else if (key == "system.euler.v_bar") {
      const auto vb = parse_vector(key, v);
      if (vb.size() != 2) fail(key, "expected two components");
      c.euler.v_bar = {vb[0], vb[1]};
    } else if (key == "system.euler.a_bar") {
      c.euler.a_bar = parse_double(key, v);
    } else if (key == "system.explicit.d") {
      c.explicit_system.d = parse_unsigned(key, v);
    } else if (key == "system.explicit.n") {
      c.explicit_system.n = parse_unsigned(key, v);
    } else if (key.rfind("system.explicit.jacobian.", 0) == 0) {
      const std::uint64_t k = parse_unsigned(key, key.substr(std::string("system.explicit.jacobian.").size()));
      if (k < 1 || k > 3) fail(key, "jacobian index must be 1, 2 or 3");
      jacobians[k] = parse_matrix(key, v);
    } else if (key == "system.explicit.source") {
      c.explicit_system.source = parse_matrix(key, v);
    } else if (key == "system.random.seed") {
      c.random.seed = parse_unsigned(key, v);
    } else if (key == "system.random.d") {
      c.random.d = parse_unsigned(key, v);
    } else if (key == "system.random.n") {
      c.random.n = parse_unsigned(key, v);
    } else if (key == "grid.N1") {
      c.grid.N1 = parse_unsigned(key, v);
    } else if (key == "grid.N2") {
      c.grid.N2 = parse_unsigned(key, v);
    } else if (key == "grid.L1") {
      c.grid.L1 = parse_double(key, v);
    } else if (key == "grid.L2") {
      c.grid.L2 = parse_double(key, v);
    } else if (key == "time.t_end") {
      c.time.t_end = parse_double(key, v);
    } else if (key == "time.cfl") {
      c.time.cfl = parse_double(key, v);
    } else if (key == "control.mode") {
      c.control.mode = parse_control_mode(key, v);
    } else if (key == "control.C") {
      c.control.C = parse_double(key, v);
    } else if (key == "control.prescribed") {
      c.control.prescribed = parse_vector(key, v);
    } else if (key == "lmi.mode") {
      c.lmi.mode = parse_lmi_mode(key, v);
    } else if (key == "lmi.C_A_override") {
      c.lmi.C_A_override = parse_double(key, v);
    } else if (key == "output.csv_path") {
      c.output.csv_path = v;
    } else if (key == "output.snapshot_times") {
      c.output.snapshot_times = parse_vector(key, v);
    } else if (key == "init.amplitude") {
      c.init_amplitude = parse_double(key, v);
    } else {
      fail(key, "unknown key (line " + std::to_string(entry.second) + ")");
    }
  }
  std::size_t expected = 1;
  for (auto& [k, m] : jacobians) {
    if (k != expected++) fail("system.explicit.jacobian." + std::to_string(k), "jacobian indices must be 1..d");
    c.explicit_system.jacobians.push_back(std::move(m));
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "system.kind = " << to_string(c.kind) << '\n';
  os << "system.euler.rho_bar = " << format_double(c.euler.rho_bar) << '\n';
  os << "system.euler.v_bar = " << format_vector({c.euler.v_bar[0], c.euler.v_bar[1]}) << '\n';
  os << "system.euler.a_bar = " << format_double(c.euler.a_bar) << '\n';
  os << "system.explicit.d = " << c.explicit_system.d << '\n';
  os << "system.explicit.n = " << c.explicit_system.n << '\n';
  for (std::size_t k = 0; k < c.explicit_system.jacobians.size(); ++k) {
    os << "system.explicit.jacobian." << (k + 1) << " = " << format_matrix(c.explicit_system.jacobians[k]) << '\n';
  }
  os << "system.explicit.source = " << format_matrix(c.explicit_system.source) << '\n';
  os << "system.random.seed = " << c.random.seed << '\n';
  os << "system.random.d = " << c.random.d << '\n';
  os << "system.random.n = " << c.random.n << '\n';
  os << "grid.N1 = " << c.grid.N1 << '\n';
  os << "grid.N2 = " << c.grid.N2 << '\n';
  os << "grid.L1 = " << format_double(c.grid.L1) << '\n';
  os << "grid.L2 = " << format_double(c.grid.L2) << '\n';
  os << "time.t_end = " << format_double(c.time.t_end) << '\n';
  os << "time.cfl = " << format_double(c.time.cfl) << '\n';
  os << "control.mode = " << to_string(c.control.mode) << '\n';
  os << "control.C = " << format_double(c.control.C) << '\n';
  os << "control.prescribed = " << format_vector(c.control.prescribed) << '\n';
  os << "lmi.mode = " << to_string(c.lmi.mode) << '\n';
  if (c.lmi.C_A_override) os << "lmi.C_A_override = " << format_double(*c.lmi.C_A_override) << '\n';
  os << "output.csv_path = " << c.output.csv_path << '\n';
  os << "output.snapshot_times = " << format_vector(c.output.snapshot_times) << '\n';
  os << "init.amplitude = " << format_double(c.init_amplitude) << '\n';
  return os.str();
}

HyperbolicSystem build_system(const ScenarioConfig& c) {
  switch (c.kind) {
    case SystemKind::euler:
      return euler_symmetrized(EulerScenario{c.euler.rho_bar, c.euler.v_bar, c.euler.a_bar});
    case SystemKind::explicit_matrices: {
      const auto& e = c.explicit_system;
      std::vector<SymMatrix> jac;
      try {
        for (const auto& m : e.jacobians) jac.push_back(SymMatrix::from_rows(m));
      } catch (const NotSymmetric& err) {
        throw ConfigError(std::string("system.explicit.jacobian: ") + err.what());
      }
      Matrix b = e.source.empty() ? Matrix(e.n) : Matrix::from_rows(e.source);
      return HyperbolicSystem(std::move(jac), std::move(b), "explicit");
    }
    case SystemKind::random:
      return random_constant_system(c.random.seed, c.random.d, c.random.n);
  }
  throw ConfigError("unknown system kind");
}

Grid build_grid(const ScenarioConfig& c, std::size_t d) {
  if (d == 1) return Grid({c.grid.N1}, {c.grid.L1});
  if (d == 2) return Grid({c.grid.N1, c.grid.N2}, {c.grid.L1, c.grid.L2});
  throw ConfigError("simulation supports only d = 1 or d = 2");
}

ControlSpec build_control(const ScenarioConfig& c) {
  ControlSpec spec;
  spec.mode = c.control.mode;
  spec.C = c.control.C;
  if (c.control.mode == ControlMode::prescribed) {
    const Vector value = c.control.prescribed;
    spec.prescribed = [value](double, std::span<const double>) { return value; };
  }
  return spec;
}

}  // namespace hypstab
