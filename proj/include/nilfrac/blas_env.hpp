#pragma once

namespace nilfrac {

/// OpenBLAS 0.3.20 selects its Cooperlake kernels on recent AVX-512 CPUs, and
/// dsyevd then returns non-orthogonal eigenvectors. OpenBLAS reads
/// OPENBLAS_CORETYPE only at load time, so executables call this first thing
/// in main: if the variable is unset and the CPU reports avx512f, it sets
/// OPENBLAS_CORETYPE=SkylakeX and re-executes the program (Linux only).
/// Otherwise it returns without doing anything. spectral_decompose validates
/// its result either way.
void pin_openblas_core(int argc, char** argv);

}  // namespace nilfrac
