#include <chrono>
#include <cstdio>
#include "rc/oracle.hpp"
using namespace rc;
int main(int argc, char** argv) {
  bool neg = argc > 1;
  auto t0 = std::chrono::steady_clock::now();
  auto reports = oracle::run_suite(25.0, neg);
  auto t1 = std::chrono::steady_clock::now();
  int fails = 0;
  for (auto& r : reports) {
    std::printf("%-36s %s  dev=%.3e  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.max_deviation, r.detail.c_str());
    if (!r.pass) ++fails;
  }
  std::printf("total %zu, failures %d, wall %.1fs\n", reports.size(), fails,
              std::chrono::duration<double>(t1 - t0).count());
  return fails;
}
