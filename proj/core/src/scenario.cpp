#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "roughkin/error.hpp"
#include "roughkin/harness.hpp"
#include "roughkin/io.hpp"

namespace roughkin {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(text);
  require(v >= 0.0 && v == std::floor(v) && v < 1e15, ErrorKind::Config, key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorKind::Config, key + " expects a boolean, got '" + text + "'");
}

// (name, args) of "name:a,b,c".
std::pair<std::string, std::vector<double>> parse_call(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  std::vector<double> args;
  for (const std::string& a : split(spec.substr(colon + 1), ',')) args.push_back(parse_number(a));
  return {spec.substr(0, colon), args};
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  require(!t.empty(), ErrorKind::Config, "empty number");
  const auto slash = t.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = parse_number(t.substr(0, slash));
      const double den = parse_number(t.substr(slash + 1));
      require(den != 0.0, ErrorKind::Config, "division by zero in '" + t + "'");
      return num / den;
    }
    const double v = std::stod(t, &used);
    require(used == t.size() && std::isfinite(v), ErrorKind::Config, "bad number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Config, "bad number '" + t + "'");
  }
}

std::size_t Scenario::n_steps() const {
  const double q = t_end / dt;
  const double n = std::round(q);
  require(n >= 1.0 && std::abs(q - n) <= 1e-9 * n, ErrorKind::Config, "t_end must be a whole number of dt steps");
  return static_cast<std::size_t>(n);
}

bool Scenario::stochastic() const {
  const bool forcing = model == "linear_multiplicative_noise" || (params.lambda && *params.lambda != 0.0);
  return driver == "brownian" || forcing;
}

void set_value(Scenario& s, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "model") s.model = value;
  else if (key == "c_amp") s.params.c_amp = parse_number(value);
  else if (key == "c_period") s.params.c_period = parse_number(value);
  else if (key == "velocity") s.params.velocity = parse_number(value);
  else if (key == "lambda") s.params.lambda = parse_number(value);
  else if (key == "driver") s.driver = value;
  else if (key == "M") require(parse_count(key, value) == 1, ErrorKind::Config, "built-in models have M = 1");
  else if (key == "K") {
    const std::size_t k = parse_count(key, value);
    require(k <= 1, ErrorKind::Config, "built-in forcing has K <= 1");
    if (k == 0) s.params.lambda = 0.0;
    else if (!s.params.lambda || *s.params.lambda == 0.0) s.params.lambda = 1.0;
  } else if (key == "eps") s.eps = parse_number(value);
  else if (key == "nx") s.nx = parse_count(key, value);
  else if (key == "nxi") s.nxi = parse_count(key, value);
  else if (key == "xi_max") s.xi_max = parse_number(value);
  else if (key == "torus") s.torus = parse_number(value);
  else if (key == "dt") s.dt = parse_number(value);
  else if (key == "t_end") s.t_end = parse_number(value);
  else if (key == "stride") s.stride = parse_count(key, value);
  else if (key == "substeps") s.substeps = parse_count(key, value);
  else if (key == "p") s.p = parse_number(value);
  else if (key == "initial") s.initial = value;
  else if (key == "initial2") s.initial2 = value;
  else if (key == "seed") {
    s.seed = static_cast<std::uint64_t>(std::stoull(value));
    s.seed_set = true;
  } else if (key == "n_paths") s.n_paths = parse_count(key, value);
  else if (key == "residual") s.residual = parse_bool(key, value);
  else if (key == "residual_form") s.residual_form = value;
  else if (key == "test_x") s.test.x_center = parse_number(value);
  else if (key == "test_rx") s.test.x_radius = parse_number(value);
  else if (key == "test_xi") s.test.xi_center = parse_number(value);
  else if (key == "test_rxi") s.test.xi_radius = parse_number(value);
  else if (key == "flow_target") s.flow_target = parse_number(value);
  else if (key == "check_indicator") s.check_indicator = parse_bool(key, value);
  else if (key == "ladder") {
    s.ladder.clear();
    for (const std::string& v : split(value, ',')) s.ladder.push_back(parse_number(v));
  } else if (key == "eps_ratio") s.eps_ratio = parse_number(value);
  else if (key == "dt_ratio") s.dt_ratio = parse_number(value);
  else if (key == "dxi_ratio") s.dxi_ratio = parse_number(value);
  else throw Error(ErrorKind::Config, "unknown scenario key '" + key + "'");
}

void apply_override(Scenario& scn, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, ErrorKind::Config, "override must look like key=value: '" + assignment + "'");
  set_value(scn, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in) {
  Scenario scn;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(scn, line);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return scn;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read scenario " + file.string());
  return parse_scenario(in);
}

FluxModel scenario_model(const Scenario& scn) { return make_model(scn.model, scn.params); }

PhaseGrid scenario_grid(const Scenario& scn) { return PhaseGrid(scn.nx, scn.nxi, scn.torus, scn.xi_max); }

std::function<double(double)> initial_profile(const std::string& spec, double torus) {
  const auto [name, args] = parse_call(spec);
  if (name == "riemann") {
    require(args.size() == 2 || args.size() == 3, ErrorKind::Config, "riemann:uL,uR[,jump]");
    const double ul = args[0], ur = args[1];
    const double jump = args.size() == 3 ? args[2] : 0.5;
    require(jump > 0.0 && jump < 1.0, ErrorKind::Config, "riemann jump must lie in (0, 1)");
    return [=](double x) {
      const double r = x / torus - std::floor(x / torus);
      return r < jump ? ul : ur;
    };
  }
  if (name == "sine") {
    require(args.size() == 2, ErrorKind::Config, "sine:mean,amp");
    const double mean = args[0], amp = args[1];
    return [=](double x) { return mean + amp * std::sin(2.0 * std::numbers::pi * x / torus); };
  }
  if (name == "constant") {
    require(args.size() == 1, ErrorKind::Config, "constant:v");
    const double v = args[0];
    return [v](double) { return v; };
  }
  throw Error(ErrorKind::Config, "unknown initial data '" + spec + "'");
}

std::vector<double> sample_initial(const std::string& spec, const PhaseGrid& grid) {
  const auto f = initial_profile(spec, grid.torus_length());
  std::vector<double> u(grid.nx());
  for (std::size_t i = 0; i < grid.nx(); ++i) u[i] = f(grid.x(i));
  return u;
}

std::function<double(double)> smooth_driver(const std::string& driver) {
  if (driver == "time") return [](double t) { return t; };
  if (driver == "smooth:linear2") return [](double t) { return 2.0 * t; };
  if (driver == "smooth:quadratic") return [](double t) { return t * t; };
  if (driver == "smooth:sine") return [](double t) { return t + 0.1 * std::sin(2.0 * std::numbers::pi * t); };
  throw Error(ErrorKind::Config, "'" + driver + "' is not a smooth driver");
}

void validate_scenario(const Scenario& scn) {
  require(scn.eps > 0.0, ErrorKind::Config, "eps must be positive");
  require(scn.nx >= 4, ErrorKind::Config, "nx must be at least 4");
  require(scn.nxi >= 4 && scn.nxi % 2 == 0, ErrorKind::Config, "nxi must be even (0 is a cell edge) and >= 4");
  require(scn.xi_max > 0.0 && scn.torus > 0.0, ErrorKind::Config, "xi_max and torus must be positive");
  require(scn.dt > 0.0 && scn.t_end > 0.0, ErrorKind::Config, "dt and t_end must be positive");
  (void)scn.n_steps();
  require(scn.stride >= 1, ErrorKind::Config, "stride must be >= 1");
  require(scn.substeps >= 4, ErrorKind::Config, "substeps must be >= 4");
  require(scn.p > 2.0 && scn.p < 3.0, ErrorKind::Config, "p must lie in (2, 3)");
  require(scn.n_paths >= 1, ErrorKind::Config, "n_paths must be >= 1");
  require(scn.flow_target > 0.0 && scn.flow_target <= 0.5, ErrorKind::Config, "flow_target must lie in (0, 0.5]");
  require(scn.residual_form == "bgk" || scn.residual_form == "kinetic", ErrorKind::Config,
          "residual_form is bgk or kinetic");
  require(scn.driver == "brownian" || scn.driver.rfind("file:", 0) == 0 || scn.driver == "time" ||
              scn.driver.rfind("smooth:", 0) == 0,
          ErrorKind::Config, "unknown driver '" + scn.driver + "'");
  if (scn.driver == "time" || scn.driver.rfind("smooth:", 0) == 0) (void)smooth_driver(scn.driver);
  (void)scenario_model(scn);
  (void)initial_profile(scn.initial, scn.torus);
  if (!scn.initial2.empty()) (void)initial_profile(scn.initial2, scn.torus);
  require(!scn.stochastic() || scn.seed_set, ErrorKind::Config, "stochastic scenarios need an explicit seed");
  for (double dx : scn.ladder) require(dx > 0.0, ErrorKind::Config, "ladder entries must be positive");
  require(scn.eps_ratio >= 0.0 && scn.dt_ratio >= 0.0 && scn.dxi_ratio >= 0.0, ErrorKind::Config,
          "ladder ratios must be non-negative");
}

Realization build_realization(const Scenario& scn, const FluxModel& model, std::size_t path_index) {
  const std::size_t n = scn.n_steps();
  const TimeGrid grid(0.0, scn.t_end, n);
  const std::size_t r = scn.substeps;
  std::optional<GeometricRoughPath> z;
  if (scn.driver == "brownian") {
    z = sample_brownian_lift(model.M, grid, r, derive_seed(scn.seed, 1, path_index), scn.p);
  } else if (scn.driver.rfind("file:", 0) == 0) {
    z = read_rough_path(scn.driver.substr(5), 0.0, scn.t_end);
    require(z->dim() == model.M && z->n_steps() == n, ErrorKind::GridMismatch,
            "driver dump does not match model dimension and step count");
  } else {
    const auto f = smooth_driver(scn.driver);
    std::vector<double> samples(n * r + 1);
    const double z0 = f(0.0);
    for (std::size_t m = 0; m <= n * r; ++m)
      samples[m] = f(scn.t_end * static_cast<double>(m) / static_cast<double>(n * r)) - z0;
    z = lift_smooth_path(samples, 1, scn.p, grid);
  }
  Realization out{std::move(*z), std::nullopt, {}};
  if (model.K > 0) {
    const auto w = sample_brownian_path(model.K, grid, r, derive_seed(scn.seed, 2, path_index));
    out.joint = joint_lift(out.z, w, model.K, grid);
    out.w_increments.resize(n * model.K);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < model.K; ++c)
        out.w_increments[k * model.K + c] = w[((k + 1) * r) * model.K + c] - w[(k * r) * model.K + c];
  }
  return out;
}

}  // namespace roughkin
