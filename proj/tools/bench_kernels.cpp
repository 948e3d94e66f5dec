#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "krontrace/besov.hpp"
#include "krontrace/generators.hpp"
#include "krontrace/parallel.hpp"
#include "krontrace/sampling.hpp"
#include "krontrace/trace.hpp"
#include "krontrace/whitney.hpp"

// Times the parallel kernels against their serial runs (thread count forced
// to 1) and against the independent reference implementations. The parallel
// results must agree bitwise with the serial ones: per-slot writes plus a
// serial reduction leave no room for scheduling noise.

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double timed(F&& f) {
  double t0 = now_s();
  f();
  return now_s() - t0;
}

void row(const char* name, double serial_s, double parallel_s, double dev) {
  std::printf("%-28s %9.3fs %9.3fs %7.2fx   max dev %.3g\n", name, serial_s,
              parallel_s, serial_s / parallel_s, dev);
}

}  // namespace

int main(int argc, char** argv) {
  int level = argc > 1 ? std::atoi(argv[1]) : 6;
  std::printf("slit gasket level %d, %d threads available\n", level,
              kt::thread_count());
  kt::GeneratedDomain dom = kt::gen_sg_slit(level);
  std::printf("%d vertices, %d boundary\n\n", dom.net.n,
              dom.net.boundary_count());

  // Schur columns: shared factorization, one column per task
  Eigen::MatrixXd s_par, s_ser;
  double tp = timed([&] { s_par = kt::schur_complement(dom.net, dom.net.boundary); });
  kt::set_thread_count(1);
  double ts = timed([&] { s_ser = kt::schur_complement(dom.net, dom.net.boundary); });
  kt::set_thread_count(0);
  row("schur columns", ts, tp, (s_par - s_ser).cwiseAbs().maxCoeff());

  // dense star-mesh elimination, the serial correctness reference
  if (level <= 5) {
    Eigen::MatrixXd ref;
    double tr = timed([&] { ref = kt::kron_reduce_reference(dom.net, dom.net.boundary); });
    double scale = s_par.cwiseAbs().maxCoeff();
    std::printf("%-28s %9.3fs           (dense reference, rel dev %.3g)\n\n",
                "star-mesh elimination", tr,
                (ref - s_par).cwiseAbs().maxCoeff() / scale);
  } else {
    std::printf("%-28s skipped above level 5 (dense n^3)\n\n",
                "star-mesh elimination");
  }

  // Theta tables: per-position sort + prefix sums
  kt::VertexMeasure su{dom.sigma_uniform, kt::MeasureRole::sigma};
  kt::ScaleFunction psi =
      kt::ScaleFunction::power(std::log(5.0) / std::log(2.0));
  double thp = timed([&] { kt::ThetaField th(dom.geom, psi, su, dom.net.m0); });
  kt::set_thread_count(1);
  double ths = timed([&] { kt::ThetaField th(dom.geom, psi, su, dom.net.m0); });
  kt::set_thread_count(0);
  row("theta prefix tables", ths, thp, 0.0);

  // Besov seminorm: kernel matrix vs the all-scans reference
  kt::ThetaField th(dom.geom, psi, su, dom.net.m0);
  kt::BesovKernel kern = kt::besov_kernel(th);
  auto fields = kt::boundary_fields(dom, 4, 0xBE7C);
  double acc_k = 0, acc_r = 0;
  double tk = timed([&] {
    for (auto& u : fields) acc_k += kt::besov_seminorm(kern, u);
  });
  double tr2 = timed([&] {
    for (auto& u : fields)
      acc_r += kt::besov_seminorm_reference(dom.geom, psi, dom.sigma_uniform,
                                            dom.net.m0, u);
  });
  row("besov seminorm x4", tr2, tk,
      std::abs(acc_k - acc_r) / std::max(acc_k, 1e-300));

  // cover stats: pairwise dilated-ball intersections
  kt::WhitneyCover cov = kt::build_cover(dom);
  kt::CoverStats cs_p, cs_s;
  double cp = timed([&] { cs_p = kt::cover_stats(dom, cov); });
  kt::set_thread_count(1);
  double cs = timed([&] { cs_s = kt::cover_stats(dom, cov); });
  kt::set_thread_count(0);
  row("cover stats", cs, cp,
      std::abs(cs_p.neighbor_ratio - cs_s.neighbor_ratio) +
          std::abs((double)(cs_p.max_overlap - cs_s.max_overlap)));
  return 0;
}
