// Runs every acceptance criterion and prints one line per criterion.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "limsup/verify.hpp"

int main(int argc, char** argv) {
  limsup::VerifyOptions opt;
  opt.seed = 42;
  opt.baseline_path = LIMSUP_BASELINE_PATH;
  if (argc > 1) opt.filter = argv[1];
  auto res = limsup::run_verify(opt);
  int failed = 0;
  for (const auto& r : res.results) {
    failed += !r.passed;
    std::printf("[%s] C%-2d %-58s %7.2fs / %gs  measured=%s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget, r.measured.dump().c_str());
    if (!r.detail.empty()) std::printf("  note: %s", r.detail.c_str());
    std::printf("\n");
  }
  std::printf("%zu/%zu criteria passed\n", res.results.size() - failed, res.results.size());
  return failed == 0 && !res.results.empty() ? EXIT_SUCCESS : EXIT_FAILURE;
}
