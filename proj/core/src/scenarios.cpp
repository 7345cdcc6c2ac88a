#include "zk3d/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zk3d/error.hpp"
#include "zk3d/spectral.hpp"

namespace zk3d {
namespace {

struct KindInfo {
  ScenarioKind kind;
  std::string_view name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  bool soliton;
};

const std::vector<KindInfo>& kinds() {
  static const std::vector<KindInfo> table = {
      {ScenarioKind::scaled_soliton, "scaled_soliton", {"lambda"}, {}, true},
      {ScenarioKind::asym_perturbed_soliton, "asym_perturbed_soliton", {"alpha"}, {}, true},
      {ScenarioKind::gaussian, "gaussian", {"A"}, {}, false},
      {ScenarioKind::flat_gaussian, "flat_gaussian", {"A"}, {"flatten"}, false},
      {ScenarioKind::wall, "wall", {"A", "a"}, {}, false},
      {ScenarioKind::super_lorentzian, "super_lorentzian", {"A", "p"}, {}, false},
      {ScenarioKind::flat_polynomial, "flat_polynomial", {"A"}, {"p"}, false},
      {ScenarioKind::head_on_pair, "head_on_pair", {"c", "a"}, {}, true},
      {ScenarioKind::twin_pair, "twin_pair", {"a"}, {}, true},
      {ScenarioKind::offset_pair, "offset_pair", {"a"}, {}, true},
  };
  return table;
}

const KindInfo& info(ScenarioKind kind) {
  for (const auto& k : kinds()) {
    if (k.kind == kind) return k;
  }
  throw ScenarioError("scenario: unknown kind");
}

}  // namespace

std::string_view to_string(ScenarioKind kind) { return info(kind).name; }

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (const auto& k : kinds()) {
    if (k.name == name) return k.kind;
  }
  throw ScenarioError("scenario: unknown kind '" + std::string(name) + "'");
}

std::vector<std::string> required_params(ScenarioKind kind) { return info(kind).required; }
std::vector<std::string> optional_params(ScenarioKind kind) { return info(kind).optional; }
bool needs_soliton(ScenarioKind kind) { return info(kind).soliton; }

double ScenarioSpec::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) {
    throw ScenarioError("scenario " + std::string(to_string(kind)) + ": missing parameter '" + name + "'");
  }
  return it->second;
}

double ScenarioSpec::param_or(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

std::optional<double> companion_speed(const ScenarioSpec& spec) {
  if (spec.kind == ScenarioKind::head_on_pair) return spec.param("c");
  return std::nullopt;
}

void validate(const ScenarioSpec& spec) {
  const auto& k = info(spec.kind);
  for (const auto& name : k.required) (void)spec.param(name);
  for (const auto& [name, value] : spec.params) {
    const bool known = std::find(k.required.begin(), k.required.end(), name) != k.required.end() ||
                       std::find(k.optional.begin(), k.optional.end(), name) != k.optional.end();
    if (!known) {
      throw ScenarioError("scenario " + std::string(k.name) + ": unknown parameter '" + name + "'");
    }
    if (!std::isfinite(value)) throw ScenarioError("scenario: parameter '" + name + "' is not finite");
  }
  if (spec.kind == ScenarioKind::wall && spec.param("a") < 0.0) {
    throw ScenarioError("scenario wall: a must be >= 0");
  }
  if (spec.kind == ScenarioKind::super_lorentzian || spec.kind == ScenarioKind::flat_polynomial) {
    const double p = spec.param_or("p", 10.0);
    if (p < 1.0 || p != std::floor(p)) throw ScenarioError("scenario: p must be an integer >= 1");
  }
  if (spec.kind == ScenarioKind::head_on_pair && !(spec.param("c") > 0.0)) {
    throw ScenarioError("scenario head_on_pair: c must be positive");
  }
  if (!std::isfinite(spec.v_x)) throw ScenarioError("scenario: v_x must be finite");
}

double overlap(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid(), "overlap");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::min(std::abs(a[k]), std::abs(b[k])));
  return m;
}

namespace {

RealField sum_pair(const RealField& first, const RealField& second, double reference_peak,
                   std::vector<std::string>* warnings) {
  const double ov = overlap(first, second);
  if (warnings != nullptr && ov > 1e-12 * reference_peak) {
    std::ostringstream msg;
    msg << "pair overlap " << ov << " exceeds 1e-12 of the soliton peak; the profiles interact from t = 0";
    warnings->push_back(msg.str());
  }
  return first + second;
}

double ipow(double base, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

}  // namespace

RealField build_initial_data(const Grid& grid, const ScenarioSpec& spec, const RealField* q_ref,
                             const RealField* q_c, std::vector<std::string>* warnings) {
  validate(spec);
  if (needs_soliton(spec.kind)) {
    if (q_ref == nullptr) {
      throw ScenarioError("scenario " + std::string(to_string(spec.kind)) + " needs a reference soliton");
    }
    require_same_grid(grid, q_ref->grid(), "build_initial_data");
  }

  switch (spec.kind) {
    case ScenarioKind::scaled_soliton: {
      const double lambda = spec.param("lambda");
      if (lambda == 1.0) return *q_ref;
      return lambda * *q_ref;
    }
    case ScenarioKind::asym_perturbed_soliton: {
      const double alpha = spec.param("alpha");
      return *q_ref + RealField::sample(grid, [alpha](double x, double y, double z) {
               return std::exp(-(x * x + y * y + alpha * z * z));
             });
    }
    case ScenarioKind::gaussian: {
      const double amp = spec.param("A");
      return RealField::sample(grid, [amp](double x, double y, double z) {
        return amp * std::exp(-(x * x + y * y + z * z));
      });
    }
    case ScenarioKind::flat_gaussian: {
      const double amp = spec.param("A");
      const double flatten = spec.param_or("flatten", 0.05);
      return RealField::sample(grid, [amp, flatten](double x, double y, double z) {
        return amp * std::exp(-(x * x + flatten * (y * y + z * z)));
      });
    }
    case ScenarioKind::wall: {
      const double amp = spec.param("A");
      const double a = spec.param("a");
      return RealField::sample(grid, [amp, a](double x, double y, double z) {
        const double s = y + z;
        if (std::abs(s) <= a) return amp * std::exp(-x * x);
        const double d = s > a ? s - a : s + a;
        return amp * std::exp(-(x * x + ipow(d, 8)));
      });
    }
    case ScenarioKind::super_lorentzian: {
      const double amp = spec.param("A");
      const int p = static_cast<int>(spec.param("p"));
      return RealField::sample(grid, [amp, p](double x, double y, double z) {
        return amp / ipow(1.0 + x * x + y * y + z * z, p);
      });
    }
    case ScenarioKind::flat_polynomial: {
      const double amp = spec.param("A");
      const int p = static_cast<int>(spec.param_or("p", 10.0));
      return RealField::sample(grid, [amp, p](double x, double y, double z) {
        return amp / (1.0 + ipow(x * x + y * y + z * z, p));
      });
    }
    case ScenarioKind::head_on_pair: {
      if (q_c == nullptr) throw ScenarioError("scenario head_on_pair needs the Q_c profile");
      require_same_grid(grid, q_c->grid(), "build_initial_data");
      const double a = spec.param("a");
      return sum_pair(translate(*q_c, Vec3{a, 0.0, 0.0}), *q_ref, max_abs(*q_ref), warnings);
    }
    case ScenarioKind::twin_pair: {
      const double a = spec.param("a");
      return sum_pair(translate(*q_ref, Vec3{0.0, a, 0.0}), translate(*q_ref, Vec3{0.0, -a, 0.0}),
                      max_abs(*q_ref), warnings);
    }
    case ScenarioKind::offset_pair: {
      const double a = spec.param("a");
      return sum_pair(*q_ref, translate(*q_ref, Vec3{-a, -a, 0.0}), max_abs(*q_ref), warnings);
    }
  }
  throw ScenarioError("scenario: unhandled kind");
}

const std::vector<Preset>& preset_catalog() {
  using K = ScenarioKind;
  constexpr double pi = std::numbers::pi;
  static const std::vector<Preset> catalog = {
      {"soliton_test", "ground state propagated in its own frame, t in [0,1]",
       {K::scaled_soliton, {{"lambda", 1.0}}, 1.0}, 1.0, 1000, {128, 128, 128}, {3.0, 3.0, 3.0}},
      {"stability_1.1Q", "u0 = 1.1 Q, co-moving with Q",
       {K::scaled_soliton, {{"lambda", 1.1}}, 1.0}, 12.0, 10000},
      {"stability_0.9Q", "u0 = 0.9 Q, co-moving with Q",
       {K::scaled_soliton, {{"lambda", 0.9}}, 1.0}, 12.0, 10000},
      {"asym_alpha4", "u0 = Q + exp(-(x^2 + y^2 + 4 z^2))",
       {K::asym_perturbed_soliton, {{"alpha", 4.0}}, 1.0}, 12.0, 10000},
      {"asym_alpha4_radiation", "early radiation of the asymmetric perturbation, t <= 0.48",
       {K::asym_perturbed_soliton, {{"alpha", 4.0}}, 1.0}, 0.48, 400},
      {"gaussian_A10", "u0 = 10 exp(-r^2), co-moving with v_x = 2",
       {K::gaussian, {{"A", 10.0}}, 2.0}, 12.0, 10000},
      {"gaussian_A10_radiation", "early radiation cone of the Gaussian, t <= 0.5",
       {K::gaussian, {{"A", 10.0}}, 2.0}, 0.5, 500},
      {"flat_gaussian_A5", "u0 = 5 exp(-(x^2 + 0.05 rho^2))",
       {K::flat_gaussian, {{"A", 5.0}}, 0.0}, 4.0, 10000},
      {"wall_A3.6", "wall data, A = 3.6, a = 1.5",
       {K::wall, {{"A", 3.6}, {"a", 1.5}}, 0.0}, 5.0, 10000},
      {"super_lorentzian_A20_p10", "u0 = 20 / (1 + r^2)^10",
       {K::super_lorentzian, {{"A", 20.0}, {"p", 10.0}}, 0.0}, 0.5, 10000},
      {"super_lorentzian_A10_p10", "u0 = 10 / (1 + r^2)^10",
       {K::super_lorentzian, {{"A", 10.0}, {"p", 10.0}}, 0.0}, 0.5, 10000},
      {"super_lorentzian_A20_p20", "u0 = 20 / (1 + r^2)^20",
       {K::super_lorentzian, {{"A", 20.0}, {"p", 20.0}}, 0.0}, 0.5, 10000},
      {"flat_polynomial_A10", "u0 = 10 / (1 + r^20)",
       {K::flat_polynomial, {{"A", 10.0}, {"p", 10.0}}, 0.0}, 0.5, 10000},
      {"head_on_c2", "u0 = Q_2(x + 10, y, z) + Q(x, y, z), co-moving with Q",
       {K::head_on_pair, {{"c", 2.0}, {"a", -10.0}}, 1.0}, 15.0, 10000},
      {"twin_pair", "u0 = Q(x, y - a, z) + Q(x, y + a, z), a = pi L / 8",
       {K::twin_pair, {{"a", pi * 6.0 / 8.0}}, 1.0}, 15.0, 10000},
      {"offset_pair", "u0 = Q(x, y, z) + Q(x + a, y + a, z), a = 3 pi / 8",
       {K::offset_pair, {{"a", 3.0 * pi / 8.0}}, 1.0}, 15.0, 10000},
  };
  return catalog;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : preset_catalog()) {
    if (p.name == name) return p;
  }
  throw ScenarioError("unknown preset '" + std::string(name) + "'");
}

ScenarioSpec preset(std::string_view name) { return find_preset(name).spec; }

}  // namespace zk3d
