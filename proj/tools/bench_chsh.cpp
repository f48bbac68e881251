// Times the exhaustive sign-assignment search: OpenMP kernel vs the serial
// reference, on a random square with equal corner sizes. The two must agree
// bit for bit; the benchmark fails loudly if they do not.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#include "bellsq/chsh.hpp"
#include "bellsq/localreal.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace bellsq;

BellSquare random_square(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  GlobalJoint g;
  for (std::size_t a = 0; a < 4; ++a) {
    g.axes[a].labels.resize(n);
    g.axes[a].probs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      g.axes[a].labels[i] = "x" + std::to_string(a) + "_" + std::to_string(i + 1);
  }
  g.table.resize(n * n * n * n);
  double mass = 0.0;
  for (double& v : g.table) mass += (v = exp1(rng));
  for (double& v : g.table) v /= mass;
  return bell_square_from_joints(pair_marginal(g, MeasPair::QS), pair_marginal(g, MeasPair::RS),
                                 pair_marginal(g, MeasPair::RT), pair_marginal(g, MeasPair::QT));
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 5;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
  if (n < 2 || n > 12) {
    std::cerr << "usage: bench_chsh [corner-size 2..12] [seed]\n";
    return 2;
  }
  const BellSquare bs = random_square(n, seed);
  std::cout << "corner size " << n << ", " << (1ull << (4 * n)) << " sign assignments\n";
#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: OpenMP disabled in this build\n";
#endif

  MaxChshResult serial, parallel;
  const double ts = timed([&] { serial = max_chsh_serial(bs); });
  const double tp = timed([&] { parallel = max_chsh(bs); });

  std::cout.precision(12);
  std::cout << "serial:   " << ts << " s, max " << serial.value << "\n";
  std::cout << "parallel: " << tp << " s, max " << parallel.value << "\n";
  std::cout << "speedup:  " << ts / tp << "x\n";

  if (serial.value != parallel.value || serial.mask != parallel.mask ||
      serial.assignment.minus_term != parallel.assignment.minus_term) {
    std::cerr << "MISMATCH between serial and parallel results\n";
    return 1;
  }
  std::cout << "results identical\n";
  return 0;
}
