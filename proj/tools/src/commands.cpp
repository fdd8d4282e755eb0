#include "catube/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <vector>

#include "catube/oracle.hpp"
#include "catube/rng.hpp"

namespace catube::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed RNG streams per command so artifacts are reproducible and commands
// do not perturb each other.
constexpr std::uint64_t kStreamConstruct = 0xC0DE0001ULL;
constexpr std::uint64_t kStreamVerify = 0xC0DE0002ULL;
constexpr std::uint64_t kStreamSweep = 0xC0DE0003ULL;
constexpr std::uint64_t kStreamFocal = 0xC0DE0004ULL;

std::ofstream open_csv(const SceneConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path p = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream out(p, std::ios::binary);  // LF endings on every platform
  if (!out) throw std::invalid_argument("cannot open output file " + p.string());
  return out;
}

std::string row_label(const TubeRow& row) {
  switch (row.source) {
    case 0: return "E1[" + std::to_string(row.seed_pair) + "]";
    case 1: return "E2[" + std::to_string(row.seed_pair) + "]";
    default: return "theta";
  }
}

struct FdRowMatch {
  std::vector<double> lambda_fd;  // per tube row
  std::vector<double> err;
};

// Sorted assignment of FD shape eigenvalues to the closed rows, expanding
// multiplicities; per row the worst assigned error and the mean FD value.
FdRowMatch match_rows_to_fd(const std::vector<TubeRow>& rows,
                            const SymMatrix& fd_shape) {
  std::vector<std::pair<double, int>> expanded;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < rows[i].multiplicity; ++k) {
      expanded.emplace_back(rows[i].lambda, static_cast<int>(i));
    }
  }
  std::stable_sort(expanded.begin(), expanded.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const Eigen::VectorXd fd = sym_eigen(fd_shape).values;

  FdRowMatch match;
  match.lambda_fd.assign(rows.size(), 0.0);
  match.err.assign(rows.size(), 0.0);
  std::vector<int> hits(rows.size(), 0);
  for (std::size_t k = 0; k < expanded.size(); ++k) {
    const int row = expanded[k].second;
    match.lambda_fd[row] += fd(static_cast<Eigen::Index>(k));
    match.err[row] = std::max(match.err[row],
                              std::abs(expanded[k].first - fd(static_cast<Eigen::Index>(k))));
    ++hits[row];
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (hits[i] > 0) match.lambda_fd[i] /= hits[i];
  }
  return match;
}

}  // namespace

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_construct(const SceneConfig& cfg, std::ostream& out) {
  const Scene scene = build_scene(cfg);
  const auto& tube = *scene.tube;
  const CurveDiagnostics& d = tube.diagnostics();

  CounterRng rng(cfg.seed, kStreamConstruct);
  const Eigen::VectorXd q1 = tube.factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube.factor2().random_param(rng);
  const std::vector<TubeRow> rows = tube.spectrum_rows(q1, q2, 0.0);

  out << "scene: " << tube.describe() << "\n";
  out << "ambient: " << tube.space().describe() << ", hypersurface dimension "
      << tube.dim() << "\n";
  out << "rng seed: " << cfg.seed << "\n";
  out << "curve: winding " << d.winding << ", min |u'| = " << format17(d.min_speed)
      << ", max |u| = " << format17(d.max_radius) << "\n";
  out << "focal bound: " << format17(d.focal_bound)
      << ", admissible radius: " << format17(d.admissible)
      << ", margin: " << format17(d.admissible - d.max_radius) << "\n";
  out << "spectra at theta = 0 (reference point):\n";
  for (const TubeRow& row : rows) {
    out << "  " << row_label(row) << ": lambda = " << format17(row.lambda)
        << ", mu = " << format17(row.mu) << ", multiplicity = " << row.multiplicity
        << "\n";
  }
  return 0;
}

int cmd_verify(const SceneConfig& cfg, std::ostream& out) {
  const Scene scene = build_scene(cfg);
  const auto& tube = *scene.tube;
  const Space& X = tube.space();

  std::ofstream csv = open_csv(cfg, "verify_report.csv");
  csv << "point_index,theta_index,theta,row,lambda_closed,lambda_fd,mu_closed,mu_fd,"
         "abs_err,commutator_residual,pass,rng_seed\n";

  CounterRng rng(cfg.seed, kStreamVerify);
  FdOptions fd_opt;
  fd_opt.h = cfg.fd_step;

  bool all_pass = true;
  double worst_err = 0.0;
  double worst_comm = 0.0;
  for (int pi = 0; pi < cfg.point_samples; ++pi) {
    const Eigen::VectorXd q1 = tube.factor1().random_param(rng);
    const Eigen::VectorXd q2 = tube.factor2().random_param(rng);
    for (int ti = 0; ti < cfg.theta_samples; ++ti) {
      const double theta = kTwoPi * ti / cfg.theta_samples;
      const Eigen::VectorXd param = tube.make_param(q1, q2, theta);
      const HypersurfacePointData pd = tube.point_data(param);
      const FdPointResult fd = fd_shape_operator(X, tube.local_chart(param),
                                                 tube.dim(), pd.normal.v, fd_opt);
      const ComparisonReport rep = compare_spectra(pd.spectra, fd.shape,
                                                   fd.normal_jacobi, cfg.tol_shape,
                                                   cfg.fd_step);
      const bool pass = rep.max_error <= cfg.tol_shape &&
                        rep.commutator_residual <= cfg.tol_commutator;
      all_pass = all_pass && pass;
      worst_err = std::max(worst_err, rep.max_error);
      worst_comm = std::max(worst_comm, rep.commutator_residual);
      for (std::size_t ri = 0; ri < rep.rows.size(); ++ri) {
        const ComparisonRow& r = rep.rows[ri];
        csv << pi << ',' << ti << ',' << format17(theta) << ',' << ri << ','
            << format17(r.lambda_closed) << ',' << format17(r.lambda_numeric) << ','
            << format17(r.mu_closed) << ',' << format17(r.mu_numeric) << ','
            << format17(r.err) << ',' << format17(rep.commutator_residual) << ','
            << (pass ? 1 : 0) << ',' << cfg.seed << "\n";
      }
    }
  }

  out << "verify: " << cfg.point_samples << " base points x " << cfg.theta_samples
      << " theta samples\n";
  out << "max eigenvalue error: " << format17(worst_err)
      << " (tolerance " << format17(cfg.tol_shape) << ")\n";
  out << "max commutator residual: " << format17(worst_comm)
      << " (tolerance " << format17(cfg.tol_commutator) << ")\n";
  out << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? 0 : 2;
}

int cmd_sweep(const SceneConfig& cfg, std::ostream& out) {
  const Scene scene = build_scene(cfg);
  const auto& tube = *scene.tube;
  const Space& X = tube.space();

  CounterRng rng(cfg.seed, kStreamSweep);
  const Eigen::VectorXd q1 = tube.factor1().random_param(rng);
  const Eigen::VectorXd q2 = tube.factor2().random_param(rng);

  const std::vector<TubeRow> rows0 = tube.spectrum_rows(q1, q2, 0.0);
  std::ofstream csv = open_csv(cfg, "sweep.csv");
  csv << "theta,C_formula,C_via_P";
  for (std::size_t i = 0; i < rows0.size(); ++i) {
    csv << ",lambda_closed_" << i << ",mu_closed_" << i;
    if (cfg.verify_in_sweep) csv << ",lambda_fd_" << i << ",err_" << i;
  }
  csv << ",rng_seed\n";

  FdOptions fd_opt;
  fd_opt.h = cfg.fd_step;
  for (int ti = 0; ti < cfg.theta_samples; ++ti) {
    const double theta = kTwoPi * ti / cfg.theta_samples;
    const std::vector<TubeRow> rows = tube.spectrum_rows(q1, q2, theta);
    csv << format17(theta) << ',' << format17(tube.product_angle(theta)) << ','
        << format17(tube.product_angle_via_structure(q1, q2, theta));
    FdRowMatch match;
    if (cfg.verify_in_sweep) {
      const Eigen::VectorXd param = tube.make_param(q1, q2, theta);
      const HypersurfacePointData pd = tube.point_data(param);
      const FdPointResult fd = fd_shape_operator(X, tube.local_chart(param),
                                                 tube.dim(), pd.normal.v, fd_opt);
      match = match_rows_to_fd(rows, fd.shape);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << ',' << format17(rows[i].lambda) << ',' << format17(rows[i].mu);
      if (cfg.verify_in_sweep) {
        csv << ',' << format17(match.lambda_fd[i]) << ',' << format17(match.err[i]);
      }
    }
    csv << ',' << cfg.seed << "\n";
  }

  out << "sweep: " << cfg.theta_samples << " theta samples, " << rows0.size()
      << " eigenvalue rows\n";
  return 0;
}

int cmd_focal(const SceneConfig& cfg, std::ostream& out) {
  const Scene scene = build_scene(cfg);
  const auto& tube = *scene.tube;
  const CurveDiagnostics& d = tube.diagnostics();

  CounterRng rng(cfg.seed, kStreamFocal);
  std::ofstream csv = open_csv(cfg, "focal.csv");
  csv << "source,pair,lambda,mu,focal_radius,admissible,rng_seed\n";

  const Hypersurface* seeds[2] = {&tube.factor1(), &tube.factor2()};
  out << "focal radii at a reference point per seed:\n";
  for (int si = 0; si < 2; ++si) {
    const Eigen::VectorXd q = seeds[si]->random_param(rng);
    const HypersurfacePointData pd = seeds[si]->point_data(q);
    for (std::size_t pi = 0; pi < pd.spectra.pairs.size(); ++pi) {
      const JointEigenpair& pr = pd.spectra.pairs[pi];
      const double fr = focal_radius(pr.lambda, pr.mu);
      out << "  m" << si + 1 << " pair " << pi << ": lambda = " << format17(pr.lambda)
          << ", mu = " << format17(pr.mu) << ", focal radius = " << format17(fr)
          << "\n";
      csv << "m" << si + 1 << ',' << pi << ',' << format17(pr.lambda) << ','
          << format17(pr.mu) << ',' << format17(fr) << ',' << format17(d.admissible)
          << ',' << cfg.seed << "\n";
    }
  }
  out << "sampled focal bound: " << format17(d.focal_bound)
      << ", admissible radius: " << format17(d.admissible) << "\n";
  return 0;
}

int run_command(Command cmd, const SceneConfig& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    switch (cmd) {
      case Command::construct: return cmd_construct(cfg, out);
      case Command::verify: return cmd_verify(cfg, out);
      case Command::sweep: return cmd_sweep(cfg, out);
      case Command::focal: return cmd_focal(cfg, out);
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace catube::cli
