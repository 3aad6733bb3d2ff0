#include <cstdlib>

// OpenBLAS probes the CPU at load time. Inside VMs with masked CPUID leaves
// it falls back to a generic kernel that is ~3x slower than the AVX-512 one
// this hardware supports. Setting OPENBLAS_CORETYPE before the library
// initializes fixes detection; priority 101 runs this before OpenBLAS's own
// constructor when the library is linked statically. setenv with
// overwrite=0 keeps any value the user exported.
__attribute__((constructor(101))) static void pickplace_blas_env(void) {
  setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 0);
  setenv("OPENBLAS_NUM_THREADS", "1", 0);
}
