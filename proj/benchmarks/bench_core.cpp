#include <benchmark/benchmark.h>

#include "catube/construct.hpp"
#include "catube/oracle.hpp"
#include "catube/rng.hpp"

using namespace catube;

namespace {

SymMatrix random_symmetric(int n, CounterRng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rng.next_gauss();
  }
  return SymMatrix::symmetrized(m);
}

std::shared_ptr<const ConstructedHypersurface> bench_scene() {
  const Space s2 = Space::sphere(2, 1.0);
  return ConstructedHypersurface::create(make_geodesic_sphere(s2, 0.5),
                                         make_geodesic_sphere(s2, 0.5),
                                         ProfileCurve::circle(0.1));
}

void BM_SymEigen(benchmark::State& state) {
  CounterRng rng(1, 0);
  const SymMatrix s = random_symmetric(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym_eigen(s));
  }
}
BENCHMARK(BM_SymEigen)->Arg(8)->Arg(32);

void BM_SpectralCos(benchmark::State& state) {
  CounterRng rng(2, 0);
  const SymMatrix s = random_symmetric(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_cos(s, 0.7));
  }
}
BENCHMARK(BM_SpectralCos)->Arg(8)->Arg(32);

void BM_JointEigenspaces(benchmark::State& state) {
  CounterRng rng(3, 0);
  const int n = 16;
  const Eigen::MatrixXd q = sym_eigen(random_symmetric(n, rng)).vectors;
  Eigen::VectorXd a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a(i) = (i % 4) * 0.5;
    b(i) = (i % 2) ? 2.0 : -1.0;
  }
  const SymMatrix ma = SymMatrix::symmetrized(q * a.asDiagonal() * q.transpose());
  const SymMatrix mb = SymMatrix::symmetrized(q * b.asDiagonal() * q.transpose());
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_eigenspaces(ma, mb, 1e-8));
  }
}
BENCHMARK(BM_JointEigenspaces);

void BM_TubePointData(benchmark::State& state) {
  const auto tube = bench_scene();
  CounterRng rng(4, 0);
  const Eigen::VectorXd param = tube->random_param(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tube->point_data(param));
  }
}
BENCHMARK(BM_TubePointData);

void BM_FdShapeOperator(benchmark::State& state) {
  const auto tube = bench_scene();
  CounterRng rng(5, 0);
  const Eigen::VectorXd param = tube->random_param(rng);
  const HypersurfacePointData pd = tube->point_data(param);
  const Chart chart = tube->local_chart(param);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fd_shape_operator(tube->space(), chart, tube->dim(), pd.normal.v, FdOptions{}));
  }
}
BENCHMARK(BM_FdShapeOperator);

void BM_OdeJacobiSphere(benchmark::State& state) {
  const Space s2 = Space::sphere(2, 1.0);
  Eigen::Vector3d px{1, 0, 0}, vx{0, 1, 0}, w{0, 0, 1};
  const AmbientPoint p{s2, px};
  const TangentVector v{s2, px, vx};
  const TangentVector y0{s2, px, w};
  const TangentVector yp{s2, px, Eigen::Vector3d::Zero()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ode_jacobi(p, v, y0, yp, 1.0, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_OdeJacobiSphere)->Arg(100)->Arg(1000);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
