#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "catube/construct.hpp"

// Scene configuration for the command-line front end. Scenes are JSON:
//
//   {
//     "seed": 42,
//     "samples": {"theta": 64, "points": 5},
//     "tolerances": {"shape": 1e-5, "commutator": 1e-5,
//                    "fd_step": 1e-4, "gauss_step": 4e-3},
//     "x1": {"kind": "sphere", "dim": 2, "curvature": 1.0},
//     "m1": {"kind": "geodesic_sphere", "radius": 0.5},
//     "x2": {"kind": "sphere", "dim": 2, "curvature": 1.0},
//     "m2": {"kind": "geodesic_sphere", "radius": 0.5},
//     "curve": {"kind": "circle", "radius": 0.1},
//     "verify": false,
//     "out_dir": "."
//   }
//
// Factor spaces: sphere | hyperbolic | euclidean | product{factors: [...]}.
// Seeds: geodesic_sphere{radius} | horosphere{direction?} |
// equidistant{distance} | equator{} | constructed{scene: {x1,m1,x2,m2,curve}}.
// A constructed seed brings its own ambient, so the matching x_i must be
// omitted. Curves: circle{radius} | ellipse{a,b} |
// fourier{u1:{const?,cos?,sin?}, u2:{...}}. Unknown keys are rejected.

namespace catube::cli {

struct SceneConfig {
  std::uint64_t seed = 0;
  int theta_samples = 64;
  int point_samples = 5;
  double tol_shape = 1e-5;
  double tol_commutator = 1e-5;
  double fd_step = 1e-4;
  double gauss_step = 4e-3;
  bool verify_in_sweep = false;
  std::string out_dir = ".";
  nlohmann::json x1, m1, x2, m2, curve;
};

struct Scene {
  std::shared_ptr<const ConstructedHypersurface> tube;
};

// Throws std::invalid_argument on schema violations (unknown keys, missing
// fields, bad ranges) with the offending path in the message.
SceneConfig parse_scene_config(const nlohmann::json& j);
SceneConfig load_scene_config(const std::string& path);

// Builds seeds, curve and the validated construction. Curve admissibility
// failures surface as std::invalid_argument from the construction.
Scene build_scene(const SceneConfig& cfg);

}  // namespace catube::cli
