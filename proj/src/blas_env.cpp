#include "nilfrac/blas_env.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

#if defined(__linux__)
#include <unistd.h>
#endif

namespace nilfrac {

namespace {

bool cpu_has_avx512f() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("flags", 0) == 0) return line.find(" avx512f") != std::string::npos;
  }
  return false;
}

}  // namespace

void pin_openblas_core(int argc, char** argv) {
#if defined(__linux__)
  (void)argc;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr || !cpu_has_avx512f()) return;
  if (setenv("OPENBLAS_CORETYPE", "SkylakeX", 1) != 0) return;
  execv("/proc/self/exe", argv);
  // exec failed: carry on with the default kernels.
#else
  (void)argc;
  (void)argv;
#endif
}

}  // namespace nilfrac
