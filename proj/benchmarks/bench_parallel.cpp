// Compares the serial reference path (threads = 1) against the OpenMP path
// on the Monte-Carlo table workload and checks they agree bit for bit.
#include <chrono>
#include <cstdio>

#include "hazd/hazard_model.hpp"
#include "hazd/simulate.hpp"

using namespace hazd;

namespace {

double timed(const char* label, int threads, McReport* out) {
  TableScenario sc{HazardModel::const_exp(7e-3, 3e-2, 7e-2)};
  const auto start = std::chrono::steady_clock::now();
  *out = run_table(sc, {TableMethod::GammaGlobalMinimax}, {1000}, 16, 2024,
                   threads);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("%-22s %6.2f s   mise=%.6e\n", label, secs,
              out->rows[0].mise_mean);
  return secs;
}

}  // namespace

int main() {
  McReport serial, parallel;
  const double t1 = timed("serial reference", 1, &serial);
  const int n = worker_threads();
  std::printf("OpenMP threads: %d\n", n);
  const double tn = timed("OpenMP", n, &parallel);
  const bool same = serial.rows[0].mise_mean == parallel.rows[0].mise_mean &&
                    serial.rows[0].mise_sd == parallel.rows[0].mise_sd &&
                    serial.rows[0].mse0_mean == parallel.rows[0].mse0_mean;
  std::printf("speedup: %.2fx   results identical: %s\n", t1 / tn,
              same ? "yes" : "NO");
  return same ? 0 : 1;
}
