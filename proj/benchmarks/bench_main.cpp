#include <benchmark/benchmark.h>

#include <random>

#include "hb/curve.hpp"
#include "hb/finite_model.hpp"
#include "hb/heegner.hpp"
#include "hb/selmer.hpp"
#include "hb/zmod_module.hpp"

using namespace hb;

namespace {

const Coefficients k37a1{0, 0, 1, -1, 0};

void BM_TraceOfFrobenius(benchmark::State& state) {
  const EllipticCurveQ e(k37a1);
  const auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_of_frobenius(e, p));
}
BENCHMARK(BM_TraceOfFrobenius)->Arg(997)->Arg(1009)->Arg(100003)->Arg(1000003);

void BM_FourierCoefficients(benchmark::State& state) {
  const EllipticCurveQ e(k37a1);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_coefficients(e, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FourierCoefficients)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ModularParam(benchmark::State& state) {
  const int digits = static_cast<int>(state.range(0));
  const EllipticCurveQ e(k37a1);
  const auto s = make_heegner_setup(e, 7);
  const auto forms = heegner_forms(s, 1);
  const Complex tau = forms.front().tau(digits + 10);
  const long n = required_terms(forms.front().im_tau(), digits);
  const auto an = fourier_coefficients(e, static_cast<std::size_t>(n));
  for (auto _ : state) benchmark::DoNotOptimize(modular_param(an, tau, digits, n));
  state.counters["terms"] = static_cast<double>(n);
}
BENCHMARK(BM_ModularParam)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_ChiEllVerification(benchmark::State& state) {
  const EllipticCurveQ e(k37a1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_chi_ell(e, static_cast<std::uint64_t>(state.range(0)), 3));
}
BENCHMARK(BM_ChiEllVerification)->Arg(17)->Arg(101)->Unit(benchmark::kMillisecond);

void BM_SmithNormalForm(benchmark::State& state) {
  const ZmodRing R(3, 3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> u(0, R.q - 1);
  ZMat A(n, ZVec(n));
  for (auto& row : A)
    for (auto& c : row) c = R.mul(u(rng), 3);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(R, A, n));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(8)->Arg(16);

void BM_SelmerModule(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const int places = static_cast<int>(state.range(0));
  const auto model = random_model(3, 3, places, rng);
  const auto F = uniform_structure(places, LocalCondition::kummer());
  for (auto _ : state) benchmark::DoNotOptimize(selmer_module(model, F));
}
BENCHMARK(BM_SelmerModule)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
