#include "roughkin/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "roughkin/error.hpp"

namespace roughkin {

double FluxModel::gsq(double x, double xi) const {
  double s = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double v = g(x, xi, k).v;
    s += v * v;
  }
  return s;
}

double FluxModel::dgsq_dxi(double x, double xi) const {
  double s = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const ScalarJet j = g(x, xi, k);
    s += 2.0 * j.v * j.dxi;
  }
  return s;
}

namespace {

ScalarJet zero_jet(double, double, std::size_t) { return {}; }

void add_linear_forcing(FluxModel& m, double lambda) {
  m.K = 1;
  m.g = [lambda](double, double xi, std::size_t) {
    ScalarJet j;
    j.v = lambda * xi;
    j.dxi = lambda;
    return j;
  };
}

}  // namespace

FluxModel make_model(const std::string& name, const ModelParams& params) {
  FluxModel m;
  m.name = name;
  m.M = 1;
  m.K = 0;
  m.g = zero_jet;
  m.b = zero_jet;
  if (name == "burgers") {
    m.x_independent = true;
    m.flux = [](double, double xi, std::size_t) { return 0.5 * xi * xi; };
    m.a = [](double, double xi, std::size_t) {
      ScalarJet j;
      j.v = xi;
      j.dxi = 1.0;
      return j;
    };
  } else if (name == "modulated_burgers") {
    require(params.c_period > 0.0, ErrorKind::Config, "c_period must be positive");
    const double amp = params.c_amp;
    const double w = 2.0 * std::numbers::pi / params.c_period;
    require(std::abs(amp) < 1.0, ErrorKind::Config, "c_amp must satisfy |c_amp| < 1");
    struct C {
      double c, c1, c2, c3;
    };
    auto c_of = [amp, w](double x) {
      const double s = std::sin(w * x);
      const double co = std::cos(w * x);
      return C{1.0 + amp * s, amp * w * co, -amp * w * w * s, -amp * w * w * w * co};
    };
    m.flux = [c_of](double x, double xi, std::size_t) { return 0.5 * c_of(x).c * xi * xi; };
    m.a = [c_of](double x, double xi, std::size_t) {
      const C c = c_of(x);
      return ScalarJet{c.c * xi, c.c1 * xi, c.c, c.c2 * xi, c.c1, 0.0};
    };
    m.b = [c_of](double x, double xi, std::size_t) {
      const C c = c_of(x);
      const double h = 0.5 * xi * xi;
      return ScalarJet{c.c1 * h, c.c2 * h, c.c1 * xi, c.c3 * h, c.c2 * xi, c.c1};
    };
  } else if (name == "linear_transport") {
    const double v = params.velocity;
    m.x_independent = true;
    m.flux = [v](double, double xi, std::size_t) { return v * xi; };
    m.a = [v](double, double, std::size_t) {
      ScalarJet j;
      j.v = v;
      return j;
    };
  } else if (name == "linear_multiplicative_noise") {
    m.x_independent = true;
    m.flux = [](double, double, std::size_t) { return 0.0; };
    m.a = zero_jet;
    add_linear_forcing(m, params.lambda.value_or(1.0));
    return m;
  } else {
    throw Error(ErrorKind::Config, "unknown model '" + name + "'");
  }
  if (params.lambda && *params.lambda != 0.0) add_linear_forcing(m, *params.lambda);
  return m;
}

CoefficientReport validate(const FluxModel& model, const Box& box, std::size_t n_samples) {
  require(box.x0 < box.x1 && box.xi0 < box.xi1, ErrorKind::InvalidArgument, "empty coefficient box");
  require(n_samples >= 16, ErrorKind::InvalidArgument, "validate needs at least 16 samples");
  require(model.M >= 1 && model.flux && model.a && model.b && (model.K == 0 || model.g),
          ErrorKind::InvalidArgument, "incomplete flux model");

  CoefficientReport rep;
  const double h = 1e-5;
  auto check = [](double v) {
    require(std::isfinite(v), ErrorKind::NonFinite, "coefficient evaluation is not finite");
  };
  auto rel = [&rep](double analytic, double fd) {
    rep.derivative_defect =
        std::max(rep.derivative_defect, std::abs(analytic - fd) / std::max(1.0, std::abs(analytic)));
  };
  auto jet_check = [&](const std::function<ScalarJet(double, double, std::size_t)>& f, double x,
                       double xi, std::size_t j, const ScalarJet& s) {
    const ScalarJet px = f(x + h, xi, j), mx = f(x - h, xi, j);
    const ScalarJet pz = f(x, xi + h, j), mz = f(x, xi - h, j);
    rel(s.dx, (px.v - mx.v) / (2 * h));
    rel(s.dxi, (pz.v - mz.v) / (2 * h));
    rel(s.dxx, (px.dx - mx.dx) / (2 * h));
    rel(s.dxxi, (pz.dx - mz.dx) / (2 * h));
    rel(s.dxixi, (pz.dxi - mz.dxi) / (2 * h));
  };
  auto sup1 = [](const ScalarJet& s) { return std::max(std::abs(s.dx), std::abs(s.dxi)); };
  auto sup2 = [](const ScalarJet& s) {
    return std::max({std::abs(s.dxx), std::abs(s.dxxi), std::abs(s.dxixi)});
  };

  for (std::size_t ix = 0; ix < n_samples; ++ix) {
    const double x = box.x0 + (box.x1 - box.x0) * static_cast<double>(ix) / static_cast<double>(n_samples - 1);
    for (std::size_t j = 0; j < model.M; ++j) {
      const double b0 = model.b(x, 0.0, j).v;
      check(b0);
      rep.null_condition_defect = std::max(rep.null_condition_defect, std::abs(b0));
    }
    for (std::size_t k = 0; k < model.K; ++k) {
      const double g0 = model.g(x, 0.0, k).v;
      check(g0);
      rep.null_condition_defect = std::max(rep.null_condition_defect, std::abs(g0));
    }
    for (std::size_t iz = 0; iz < n_samples; ++iz) {
      const double xi =
          box.xi0 + (box.xi1 - box.xi0) * static_cast<double>(iz) / static_cast<double>(n_samples - 1);
      for (std::size_t j = 0; j < model.M; ++j) {
        const ScalarJet a = model.a(x, xi, j);
        const ScalarJet b = model.b(x, xi, j);
        for (double v : {a.v, a.dx, a.dxi, a.dxx, a.dxxi, a.dxixi, b.v, b.dx, b.dxi, b.dxx, b.dxxi, b.dxixi})
          check(v);
        rel(a.v, (model.flux(x, xi + h, j) - model.flux(x, xi - h, j)) / (2 * h));
        rel(b.v, (model.flux(x + h, xi, j) - model.flux(x - h, xi, j)) / (2 * h));
        jet_check(model.a, x, xi, j, a);
        jet_check(model.b, x, xi, j, b);
        rep.divergence_defect = std::max(rep.divergence_defect, std::abs(a.dx - b.dxi));
        rep.bounds.a = std::max(rep.bounds.a, std::abs(a.v));
        rep.bounds.b = std::max(rep.bounds.b, std::abs(b.v));
        rep.bounds.da = std::max(rep.bounds.da, sup1(a));
        rep.bounds.db = std::max(rep.bounds.db, sup1(b));
        rep.bounds.d2a = std::max(rep.bounds.d2a, sup2(a));
        rep.bounds.d2b = std::max(rep.bounds.d2b, sup2(b));
      }
      for (std::size_t k = 0; k < model.K; ++k) {
        const ScalarJet g = model.g(x, xi, k);
        for (double v : {g.v, g.dx, g.dxi, g.dxx, g.dxxi, g.dxixi}) check(v);
        jet_check(model.g, x, xi, k, g);
        rep.bounds.g = std::max(rep.bounds.g, std::abs(g.v));
        rep.bounds.dg = std::max(rep.bounds.dg, sup1(g));
        rep.bounds.d2g = std::max(rep.bounds.d2g, sup2(g));
      }
      if (model.K > 0) {
        const double fd = (model.gsq(x, xi + h) - model.gsq(x, xi - h)) / (2 * h);
        rel(model.dgsq_dxi(x, xi), fd);
      }
    }
  }
  require(rep.null_condition_defect <= 1e-9, ErrorKind::NullCondition,
          "b(x,0) and g(x,0) must vanish, defect " + std::to_string(rep.null_condition_defect));
  return rep;
}

namespace {

// z-column (a_j, -b_j).
ColumnJet rough_column(const ScalarJet& a, const ScalarJet& b) {
  ColumnJet c;
  c.v = {a.v, -b.v};
  c.dv = {a.dx, a.dxi, -b.dx, -b.dxi};
  c.d2v[0] = {a.dxx, a.dxxi, -b.dxx, -b.dxxi};
  c.d2v[1] = {a.dxxi, a.dxixi, -b.dxxi, -b.dxixi};
  return c;
}

// W-column (0, g_k).
ColumnJet noise_column(const ScalarJet& g) {
  ColumnJet c;
  c.v = {0.0, g.v};
  c.dv = {0.0, 0.0, g.dx, g.dxi};
  c.d2v[0] = {0.0, 0.0, g.dxx, g.dxxi};
  c.d2v[1] = {0.0, 0.0, g.dxxi, g.dxixi};
  return c;
}

}  // namespace

CharacteristicFields assemble_characteristic_fields(const FluxModel& model) {
  auto shared = std::make_shared<const FluxModel>(model);
  CharacteristicFields out;

  out.unforced.columns = model.M;
  out.unforced.has_drift = false;
  out.unforced.evaluate = [shared](const Vec2& y, bool, BundleEval& ev) {
    const FluxModel& m = *shared;
    ev.drift = ColumnJet{};
    ev.columns.resize(m.M);
    for (std::size_t j = 0; j < m.M; ++j) ev.columns[j] = rough_column(m.a(y[0], y[1], j), m.b(y[0], y[1], j));
  };

  out.forced.columns = model.M + model.K;
  out.forced.has_drift = model.K > 0;
  out.forced.evaluate = [shared](const Vec2& y, bool, BundleEval& ev) {
    const FluxModel& m = *shared;
    ev.columns.resize(m.M + m.K);
    for (std::size_t j = 0; j < m.M; ++j) ev.columns[j] = rough_column(m.a(y[0], y[1], j), m.b(y[0], y[1], j));
    // Drift -¼ ∂_ξ G² with ∂_ξ G² = Σ 2 g g_ξ.
    double d = 0.0, d_x = 0.0, d_xi = 0.0;
    for (std::size_t k = 0; k < m.K; ++k) {
      const ScalarJet g = m.g(y[0], y[1], k);
      ev.columns[m.M + k] = noise_column(g);
      d += 2.0 * g.v * g.dxi;
      d_x += 2.0 * (g.dx * g.dxi + g.v * g.dxxi);
      d_xi += 2.0 * (g.dxi * g.dxi + g.v * g.dxixi);
    }
    ev.drift = ColumnJet{};
    ev.drift.v = {0.0, -0.25 * d};
    ev.drift.dv = {0.0, 0.0, -0.25 * d_x, -0.25 * d_xi};
  };
  return out;
}

}  // namespace roughkin
