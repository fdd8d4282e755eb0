#include "catube/scene_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "catube/hypersurface.hpp"

namespace catube::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + what + " at " + path);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(path, "unknown key '" + key + "'");
  }
}

double get_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing '") + key + "'");
  if (!j[key].is_number()) fail(path + "." + key, "expected a number");
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) fail(path + "." + key, "expected an integer");
  return j[key].get<int>();
}

std::string get_kind(const json& j, const std::string& path) {
  if (!j.contains("kind") || !j["kind"].is_string()) {
    fail(path, "missing string 'kind'");
  }
  return j["kind"].get<std::string>();
}

Space parse_space(const json& j, const std::string& path) {
  const std::string kind = get_kind(j, path);
  if (kind == "product") {
    check_keys(j, path, {"kind", "factors"});
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty()) {
      fail(path, "product needs a nonempty 'factors' array");
    }
    std::vector<Space> factors;
    int i = 0;
    for (const auto& f : j["factors"]) {
      factors.push_back(parse_space(f, path + ".factors[" + std::to_string(i++) + "]"));
    }
    return Space::product(std::move(factors));
  }
  check_keys(j, path, {"kind", "dim", "curvature"});
  const int dim = get_int(j, path, "dim", -1);
  if (dim < 1) fail(path, "missing or invalid 'dim'");
  if (kind == "sphere") return Space::sphere(dim, get_number(j, path, "curvature"));
  if (kind == "hyperbolic") return Space::hyperbolic(dim, get_number(j, path, "curvature"));
  if (kind == "euclidean") {
    if (j.contains("curvature") && j["curvature"].get<double>() != 0.0) {
      fail(path, "euclidean curvature must be 0 or omitted");
    }
    return Space::euclidean(dim);
  }
  fail(path, "unknown space kind '" + kind + "'");
}

ProfileCurve::Component parse_component(const json& j, const std::string& path) {
  check_keys(j, path, {"const", "cos", "sin"});
  ProfileCurve::Component c;
  if (j.contains("const")) c.constant = j["const"].get<double>();
  auto coeffs = [&](const char* key) {
    std::vector<double> out;
    if (j.contains(key)) {
      if (!j[key].is_array()) fail(path + "." + key, "expected an array");
      for (const auto& v : j[key]) out.push_back(v.get<double>());
    }
    return out;
  };
  c.cos_coeffs = coeffs("cos");
  c.sin_coeffs = coeffs("sin");
  return c;
}

ProfileCurve parse_curve(const json& j, const std::string& path) {
  const std::string kind = get_kind(j, path);
  if (kind == "circle") {
    check_keys(j, path, {"kind", "radius"});
    return ProfileCurve::circle(get_number(j, path, "radius"));
  }
  if (kind == "ellipse") {
    check_keys(j, path, {"kind", "a", "b"});
    return ProfileCurve::ellipse(get_number(j, path, "a"), get_number(j, path, "b"));
  }
  if (kind == "fourier") {
    check_keys(j, path, {"kind", "u1", "u2"});
    if (!j.contains("u1") || !j.contains("u2")) fail(path, "fourier needs 'u1' and 'u2'");
    return ProfileCurve::fourier(parse_component(j["u1"], path + ".u1"),
                                 parse_component(j["u2"], path + ".u2"));
  }
  fail(path, "unknown curve kind '" + kind + "'");
}

struct SeedResult {
  HypersurfacePtr surface;
};

SeedResult parse_seed(const json& m, const json& x, const std::string& mpath,
                      const std::string& xpath, const SceneConfig& cfg);

Scene build_scene_impl(const json& x1, const json& m1, const json& x2, const json& m2,
                       const json& curve, const std::string& path, const SceneConfig& cfg) {
  const SeedResult s1 = parse_seed(m1, x1, path + ".m1", path + ".x1", cfg);
  const SeedResult s2 = parse_seed(m2, x2, path + ".m2", path + ".x2", cfg);
  ProfileCurve u = parse_curve(curve, path + ".curve");
  SampleOptions opt;
  opt.rng_seed = cfg.seed;
  Scene scene;
  scene.tube = ConstructedHypersurface::create(s1.surface, s2.surface, std::move(u), opt);
  return scene;
}

SeedResult parse_seed(const json& m, const json& x, const std::string& mpath,
                      const std::string& xpath, const SceneConfig& cfg) {
  if (m.is_null()) fail(mpath, "missing seed descriptor");
  const std::string kind = get_kind(m, mpath);

  if (kind == "constructed") {
    check_keys(m, mpath, {"kind", "scene"});
    if (!x.is_null()) {
      fail(xpath, "factor space must be omitted for a constructed seed");
    }
    if (!m.contains("scene")) fail(mpath, "constructed seed needs 'scene'");
    const json& sc = m["scene"];
    check_keys(sc, mpath + ".scene", {"x1", "m1", "x2", "m2", "curve"});
    auto get = [&](const char* key) -> json {
      return sc.contains(key) ? sc[key] : json();
    };
    const Scene nested = build_scene_impl(get("x1"), get("m1"), get("x2"), get("m2"),
                                          get("curve"), mpath + ".scene", cfg);
    return {as_hypersurface(nested.tube)};
  }

  if (x.is_null()) fail(xpath, "missing factor space descriptor");
  const Space ambient = parse_space(x, xpath);

  if (kind == "geodesic_sphere") {
    check_keys(m, mpath, {"kind", "radius"});
    return {make_geodesic_sphere(ambient, get_number(m, mpath, "radius"))};
  }
  if (kind == "horosphere") {
    check_keys(m, mpath, {"kind", "direction"});
    if (m.contains("direction")) {
      if (!m["direction"].is_array()) fail(mpath + ".direction", "expected an array");
      Eigen::VectorXd dir(m["direction"].size());
      int i = 0;
      for (const auto& v : m["direction"]) dir(i++) = v.get<double>();
      return {make_horosphere(ambient, dir)};
    }
    return {make_horosphere(ambient)};
  }
  if (kind == "equidistant") {
    check_keys(m, mpath, {"kind", "distance"});
    return {make_equidistant(ambient, get_number(m, mpath, "distance"))};
  }
  if (kind == "equator") {
    check_keys(m, mpath, {"kind"});
    return {make_equator(ambient)};
  }
  fail(mpath, "unknown seed kind '" + kind + "'");
}

}  // namespace

SceneConfig parse_scene_config(const json& j) {
  check_keys(j, "$", {"seed", "samples", "tolerances", "x1", "m1", "x2", "m2",
                      "curve", "verify", "out_dir"});
  SceneConfig cfg;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) {
      fail("$.seed", "expected a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    const json& s = j["samples"];
    check_keys(s, "$.samples", {"theta", "points"});
    cfg.theta_samples = get_int(s, "$.samples", "theta", cfg.theta_samples);
    cfg.point_samples = get_int(s, "$.samples", "points", cfg.point_samples);
    if (cfg.theta_samples < 1 || cfg.point_samples < 1) {
      fail("$.samples", "sample counts must be positive");
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, "$.tolerances", {"shape", "commutator", "fd_step", "gauss_step"});
    auto opt_num = [&](const char* key, double fallback) {
      if (!t.contains(key)) return fallback;
      const double v = t[key].get<double>();
      if (!(v > 0.0)) fail(std::string("$.tolerances.") + key, "must be positive");
      return v;
    };
    cfg.tol_shape = opt_num("shape", cfg.tol_shape);
    cfg.tol_commutator = opt_num("commutator", cfg.tol_commutator);
    cfg.fd_step = opt_num("fd_step", cfg.fd_step);
    cfg.gauss_step = opt_num("gauss_step", cfg.gauss_step);
  }
  if (j.contains("verify")) {
    if (!j["verify"].is_boolean()) fail("$.verify", "expected a boolean");
    cfg.verify_in_sweep = j["verify"].get<bool>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) fail("$.out_dir", "expected a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  if (!j.contains("m1") || !j.contains("m2") || !j.contains("curve")) {
    fail("$", "scene needs 'm1', 'm2' and 'curve'");
  }
  cfg.x1 = j.contains("x1") ? j["x1"] : json();
  cfg.m1 = j["m1"];
  cfg.x2 = j.contains("x2") ? j["x2"] : json();
  cfg.m2 = j["m2"];
  cfg.curve = j["curve"];
  return cfg;
}

SceneConfig load_scene_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: JSON parse error in " + path + ": " + e.what());
  }
  return parse_scene_config(j);
}

Scene build_scene(const SceneConfig& cfg) {
  return build_scene_impl(cfg.x1, cfg.m1, cfg.x2, cfg.m2, cfg.curve, "$", cfg);
}

}  // namespace catube::cli
