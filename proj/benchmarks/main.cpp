#include <benchmark/benchmark.h>

// The packaged libbenchmark_main.a carries LTO bytecode from another GCC.
BENCHMARK_MAIN();
