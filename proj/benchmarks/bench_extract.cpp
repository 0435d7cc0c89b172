#include <benchmark/benchmark.h>

#include "abelroot/abelroot.hpp"
#include "cli/generator.hpp"

using namespace abelroot;

namespace {

// N slots per prime, exponents rising to e, r primes starting at 2.
GroupPtr shaped_group(long n, long e, long r) {
  std::vector<PrimePower> factors;
  Integer p = 2;
  for (long b = 0; b < r; ++b) {
    for (long i = 1; i <= n; ++i) factors.emplace_back(p, std::max(1L, (e * i + n - 1) / n));
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  }
  return make_group(std::move(factors));
}

void BM_Extract(benchmark::State& state) {
  const auto g = shaped_group(state.range(0), state.range(1), state.range(2));
  cli::InstanceGenerator gen(1);
  std::vector<ExtractionProblem> problems;
  for (int i = 0; i < 16; ++i) problems.push_back(gen.solvable(g));
  std::size_t i = 0;
  OpCounter ops;
  for (auto _ : state) {
    auto out = extract(problems[i++ % problems.size()], {&ops, nullptr});
    benchmark::DoNotOptimize(out);
  }
  state.counters["ops/call"] = benchmark::Counter(static_cast<double>(ops.total()) / state.iterations());
}
BENCHMARK(BM_Extract)->ArgsProduct({{2, 4, 8}, {2, 8}, {1, 3}})->ArgNames({"N", "e", "r"});

void BM_CheckOnly(benchmark::State& state) {
  const auto g = shaped_group(state.range(0), state.range(1), 1);
  cli::InstanceGenerator gen(2);
  const auto problem = gen.solvable(g);
  for (auto _ : state) benchmark::DoNotOptimize(existence_failure(problem));
}
BENCHMARK(BM_CheckOnly)->ArgsProduct({{2, 8}, {2, 8}})->ArgNames({"N", "e"});

void BM_VerifyBasis(benchmark::State& state) {
  const auto g = shaped_group(state.range(0), 8, 1);
  cli::InstanceGenerator gen(3);
  const auto basis = gen.random_basis(g);
  for (auto _ : state) benchmark::DoNotOptimize(verify_basis(basis));
}
BENCHMARK(BM_VerifyBasis)->Arg(2)->Arg(8)->Arg(32);

void BM_BigPrimeExtract(benchmark::State& state) {
  const auto g = make_group({PrimePower(Integer("1000000000000000000000007"), 4),
                             PrimePower(Integer("1000000000000000000000007"), 6)});
  cli::InstanceGenerator gen(4);
  const auto problem = gen.solvable(g);
  for (auto _ : state) benchmark::DoNotOptimize(extract(problem));
}
BENCHMARK(BM_BigPrimeExtract);

}  // namespace

BENCHMARK_MAIN();
