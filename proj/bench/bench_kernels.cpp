// Timing comparison of the OpenMP kernels against their serial
// reference implementations, plus a consistency column. Map-phase
// kernels write to disjoint slots, so the two paths must agree exactly.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include <Eigen/Dense>

#include "adg/diffusion.hpp"
#include "adg/eigensolver.hpp"
#include "adg/fem.hpp"
#include "adg/parallel.hpp"
#include "adg/shapes.hpp"
#include "adg/symmetry.hpp"

using namespace adg;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
double time_call(F&& fn, int repeats = 3) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

void report(const char* name, double serial, double parallel, double max_diff) {
  std::printf("%-24s serial %8.3f ms   openmp %8.3f ms   speedup %5.2fx   max|diff| %g\n", name,
              1e3 * serial, 1e3 * parallel, serial / parallel, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int freq = argc > 1 ? std::atoi(argv[1]) : 22;
  const TriangleMesh mesh = bumped_blob(21, freq, 1.0, 0.05);
  std::printf("mesh: %d vertices, %d faces, %d threads available\n", mesh.vertex_count(),
              mesh.face_count(), resolve_threads(0));

  MetricField field_par, field_ser;
  {
    const double t_ser =
        time_call([&] { field_ser = ref::compute_metric_field(mesh, MetricMode::equi_affine); });
    const double t_par =
        time_call([&] { field_par = compute_metric_field(mesh, MetricMode::equi_affine); });
    double diff = 0.0;
    for (int f = 0; f < field_par.face_count(); ++f)
      diff = std::max(diff, (field_par.G[static_cast<std::size_t>(f)] -
                             field_ser.G[static_cast<std::size_t>(f)])
                                .cwiseAbs()
                                .maxCoeff());
    report("metric field", t_ser, t_par, diff);
  }

  FemSystem sys_par, sys_ser;
  {
    const double t_ser = time_call([&] { sys_ser = ref::assemble(mesh, field_ser); });
    const double t_par = time_call([&] { sys_par = assemble(mesh, field_par); });
    const double diff =
        Eigen::MatrixXd(sys_par.stiffness - sys_ser.stiffness).cwiseAbs().maxCoeff();
    report("fem assembly", t_ser, t_par, diff);
  }

  const SpectralDecomposition spec = smallest_eigenpairs(sys_par, 100);
  const std::vector<double> scales = default_hks_scales();

  {
    HksDescriptor hks_par, hks_ser;
    const double t_ser = time_call([&] { hks_ser = ref::hks(spec, scales); });
    const double t_par = time_call([&] { hks_par = hks(spec, scales); });
    report("hks", t_ser, t_par, (hks_par.values - hks_ser.values).cwiseAbs().maxCoeff());
  }

  {
    std::vector<int> ids;
    for (int i = 0; i < 128 && i < mesh.vertex_count(); ++i)
      ids.push_back(i * 17 % mesh.vertex_count());
    Eigen::MatrixXd D_par, D_ser;
    const double t_ser = time_call([&] { D_ser = commute_time_matrix(spec, ids, 1); });
    const double t_par = time_call([&] { D_par = commute_time_matrix(spec, ids); });
    report("commute-time matrix", t_ser, t_par, (D_par - D_ser).cwiseAbs().maxCoeff());
  }

  {
    const Eigen::VectorXd areas = sys_par.lumped_mass();
    SignSignature sig;
    sig.signs = {1, -1, 1, -1, 1};
    double e_ser_val = 0.0, e_par_val = 0.0;
    const double t_ser =
        time_call([&] { e_ser_val = ref::signature_energy(spec, sig, areas); }, 1);
    const double t_par = time_call([&] { e_par_val = signature_energy(spec, sig, areas); }, 1);
    report("signature energy", t_ser, t_par, std::abs(e_par_val - e_ser_val));
  }

  return 0;
}
