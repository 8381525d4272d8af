#include <benchmark/benchmark.h>

// The packaged benchmark_main archive carries LTO bytecode tied to another
// compiler release; defining main here keeps the link to the shared library.
BENCHMARK_MAIN();
