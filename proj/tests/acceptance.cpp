// Acceptance suite runner: one criterion per invocation, one pass/fail line
// per criterion on stdout. Exit status reflects the verdict.

#include <cstdio>
#include <cstdlib>

#include "zetadyn/verify.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <criterion-id> [zeros-file] [out-dir]\n");
    return 2;
  }
  zetadyn::verify::Options opt;
  if (argc > 2) opt.zeros_path = argv[2];
  if (argc > 3) opt.out_dir = argv[3];

  int id = std::atoi(argv[1]);
  try {
    auto r = zetadyn::verify::run_criterion(id, opt);
    std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
    std::fputs(r.detail.c_str(), stdout);
    return r.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::printf("[FAIL] criterion %d: exception: %s\n", id, e.what());
    return 1;
  }
}
