// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance            run every criterion
//   acceptance --only N   run criterion N (exit status reflects it alone)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

#ifdef BOUNDCHAIN_HAVE_CLI
#include "cli.hpp"
#endif

using namespace boundchain;
using namespace boundchain::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

/// CFTP samples checked against the oracle. A sampler failure is a FAIL carrying its message.
template <class M>
Verdict exactness(const M& model, std::size_t samples, double tv_tol, bool need_tv, bool need_chi,
                  std::uint32_t max_levels = 40) {
  const auto exact = exact_distribution(model);
  Counts counts;
  try {
    for (std::uint64_t s = 0; s < samples; ++s)
      ++counts[canonical(model, cftp_sample(model, s, CftpOptions{0, max_levels}).state)];
  } catch (const MaxLevelsExceeded& e) {
    std::string first = e.what();
    first = first.substr(0, first.find('\n'));
    const auto& last = e.levels().back();
    return {false, "sample " + std::to_string(total(counts)) + ": " + first + "; deepest level W=" +
                       std::to_string(last.final_metric) + (last.detail.empty() ? "" : " (" + last.detail + ")")};
  }
  GoodnessReport report;
  try {
    report = chi_square(counts, exact);
  } catch (const ImpossibleStateError& e) {
    return {false, e.what()};
  }
  const bool tv_ok = report.tv_distance <= tv_tol;
  const bool pass = (!need_tv || tv_ok) && (!need_chi || report.pass);
  const std::string tv_gate = need_tv ? " (<= " + fmt(tv_tol, 2) + ")" : " (not gated)";
  const std::string chi_gate = need_chi ? "" : ", not gated";
  return {pass, std::to_string(exact.size()) + " states, TV " + fmt(report.tv_distance) + tv_gate + ", chi2 " +
                    fmt(report.chi_square_statistic, 2) + " vs " + fmt(report.critical_value, 2) + " (dof " +
                    std::to_string(report.dof) + chi_gate + ")"};
}

Verdict both(const std::string& label_a, const Verdict& a, const std::string& label_b, const Verdict& b) {
  return {a.pass && b.pass, label_a + ": " + (a.pass ? "ok, " : "FAIL, ") + a.detail + "; " + label_b + ": " +
                                (b.pass ? "ok, " : "FAIL, ") + b.detail};
}

Verdict criterion_1() {
  const PermutationModel m(10);
  const std::size_t runs = 2000;
  double sum = 0.0;
  std::size_t over = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto res = forward_couple_time(m, r, 1'000'000);
    if (!res.tau) return {false, "run " + std::to_string(r) + " hit the step cap"};
    sum += static_cast<double>(*res.tau);
    over += *res.tau > 329 ? 1 : 0;
  }
  const double mean = sum / runs, tail = static_cast<double>(over) / runs;
  return {mean <= 164.49 && tail <= 0.75,
          "mean tau " + fmt(mean, 2) + " (<= 164.49), P(tau > 329) " + fmt(tail) + " (<= 0.75)"};
}

Verdict criterion_2() {
  const HardcoreModel m(make_petersen(), HardcoreParams{0.5, 0.25});
  const double beta = theoretical_beta(m).value_or(1.0);
  const auto t_star = guarantee_steps(beta, 10, 10);
  std::size_t late = 0;
  double sum = 0.0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    const auto res = forward_couple_time(m, r, 100000);
    late += *res.tau > t_star ? 1 : 0;
    sum += static_cast<double>(*res.tau);
  }
  const double frac = late / 1000.0;
  return {frac <= 0.011, "beta " + fmt(beta, 3) + ", t* " + std::to_string(t_star) + ", fraction tau > t* " +
                             fmt(frac) + " (<= 0.011), mean tau " + fmt(sum / 1000.0, 1)};
}

Verdict criterion_3() {
  const ColoringModel m(make_cycle(6), ColoringParams{8});
  const double beta = *theoretical_beta(m);
  const auto theta = theta_for(beta, 0.1);
  const auto t_star = guarantee_steps(beta, 6, theta);
  const auto curve = mixing_bound_curve(m, 1000, t_star, 0);
  const double frac = curve.back().second;
  return {frac <= 0.13, "beta " + fmt(beta, 5) + ", theta " + std::to_string(theta) + ", t* " +
                            std::to_string(t_star) + ", fraction not coalesced " + fmt(frac) + " (<= 0.13)"};
}

Verdict criterion_4() {
  const auto a = exactness(HardcoreModel(make_path(3), HardcoreParams{1.0, 0.25}), 20000, 0.02, true, true);
  const auto b = exactness(HardcoreModel(make_path(3), HardcoreParams{2.0, 0.25}), 20000, 0.02, true, true);
  return both("lambda=1", a, "lambda=2", b);
}

Verdict criterion_5() {
  return exactness(ColoringModel(make_complete(3), ColoringParams{3}), 20000, 0.02, true, false, 12);
}

Verdict criterion_6() {
  const auto k2 = exactness(PottsModel(make_path(2), PottsParams{2, 2.0, -1}), 20000, 0.02, true, false);
  // T -> 0: Potts at γ = 1e12 steps exactly like the coloring chain on proper inputs.
  Rng rng(6);
  const Graph g = make_petersen();
  const auto potts = PottsModel::with_gamma(g, 5, 1e12);
  const ColoringModel coloring(g, ColoringParams{5});
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto xp = random_proper_coloring(g, 5, rng);
    auto xc = xp;
    auto yp = random_form1_around(xp, 5, rng);
    auto yc = yp;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const StepDraws d{static_cast<std::uint64_t>(trial), 0, 0, s};
      potts.forward_step(xp, d);
      coloring.forward_step(xc, d);
      potts.bounding_step(yp, d);
      coloring.bounding_step(yc, d);
      mismatches += (xp != xc || yp != yc) ? 1 : 0;
    }
  }
  return both("K2 k=2 T=2", k2, "T->0", Verdict{mismatches == 0, std::to_string(mismatches) + " mismatched steps"});
}

Verdict criterion_7() {
  const auto c3 = exactness(SinkFreeModel(make_cycle(3)), 20000, 0.02, true, false, 12);
  const auto k4 = exactness(SinkFreeModel(make_complete(4)), 20000, 0.02, true, false);
  return both("C3", c3, "K4", k4);
}

Verdict criterion_8() { return exactness(PermutationModel(3), 20000, 0.0, false, true); }

template <class M, class Pair>
std::size_t containment_model(const M& model, Pair make_pair, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto [x, y] = make_pair(rng);
    violations += containment_violations(model, x, y, rng(), 1000);
  }
  return violations;
}

Verdict criterion_9() {
  const Graph pet = make_petersen();
  const Graph grid = make_grid(3, 3);
  std::vector<std::pair<std::string, std::size_t>> results;
  const PermutationModel perm(8);
  results.emplace_back("perm", containment_model(perm, [](Rng& r) {
    auto x = random_permutation(8, r);
    return std::make_pair(x, random_perm_bound_around(x, r));
  }, 1));
  const HardcoreModel hc(pet, HardcoreParams{0.8, 0.25});
  results.emplace_back("hardcore", containment_model(hc, [&](Rng& r) {
    auto a = random_independent_set(pet, r);
    return std::make_pair(a, random_form2_around(a, r));
  }, 2));
  const ColoringModel col(grid, ColoringParams{5});
  results.emplace_back("coloring", containment_model(col, [&](Rng& r) {
    auto x = random_proper_coloring(grid, 5, r);
    return std::make_pair(x, random_form1_around(x, 5, r));
  }, 3));
  const PottsModel potts(pet, PottsParams{3, 1.0, -1});
  results.emplace_back("potts", containment_model(potts, [](Rng& r) {
    auto x = random_config(10, 3, r);
    return std::make_pair(x, random_form1_around(x, 3, r));
  }, 4));
  const SinkFreeModel sf(pet);
  results.emplace_back("sinkfree", containment_model(sf, [&](Rng& r) {
    auto x = random_sink_free(sf, r);
    return std::make_pair(x, random_form1_around(std::vector<std::uint32_t>(x.begin(), x.end()), 2, r));
  }, 5));
  bool pass = true;
  std::string detail = "violations over 100 pairs x 1000 steps:";
  for (const auto& [name, v] : results) {
    pass = pass && v == 0;
    detail += " " + name + " " + std::to_string(v);
  }
  return {pass, detail};
}

template <class M>
std::pair<std::size_t, std::size_t> kernel_misses(const M& m, const typename M::State& x) {
  const auto exact = analytic_kernel(m, x);
  Counts counts;
  const std::size_t trials = 100000;
  for (std::uint64_t s = 0; s < trials; ++s) {
    auto y = x;
    m.forward_step(y, StepDraws{10, 0, 0, s});
    ++counts[canonical(m, y)];
  }
  std::size_t misses = 0;
  for (const auto& [state, c] : counts) misses += exact.supports(state) ? 0 : 1;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const auto it = counts.find(exact.states[i]);
    misses += within_3_sigma(it == counts.end() ? 0 : it->second, trials, exact.probabilities[i]) ? 0 : 1;
  }
  return {misses, exact.size()};
}

Verdict criterion_10() {
  const auto [pm, pn] = kernel_misses(PermutationModel(4), Permutation{2, 0, 3, 1});
  const auto [cm, cn] = kernel_misses(ColoringModel(make_complete(3), ColoringParams{4}), Coloring{0, 1, 2});
  return {pm == 0 && cm == 0, "entries outside 3 sigma: permutation n=4 " + std::to_string(pm) + "/" +
                                  std::to_string(pn) + ", coloring triangle k=4 " + std::to_string(cm) + "/" +
                                  std::to_string(cn)};
}

Verdict criterion_11() {
  // The keyed PRF contract: Philox4x64-10 known-answer vector.
  const auto kat = detail::philox4x64_10({0, 0, 0, 0}, {0, 0});
  const bool prf_ok = kat[0] == 0x16554d9eca36314cULL && kat[3] == 0x7e68b68aec7ba23bULL;
#ifdef BOUNDCHAIN_HAVE_CLI
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "boundchain_acceptance_11";
  fs::create_directories(dir);
  std::ofstream(dir / "p3.g") << "3 2\n0 1\n1 2\n";
  auto run = [&](const std::string& out) {
    std::ostringstream sink, err;
    return cli::run_cli({"sample", "--model", "hardcore", "--graph", (dir / "p3.g").string(), "--lambda", "2",
                         "--samples", "200", "--seed", "11", "--out", (dir / out).string()},
                        sink, err);
  };
  const int a = run("a.jsonl"), b = run("b.jsonl");
  auto slurp = [&](const std::string& name) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string ta = slurp("a.jsonl"), tb = slurp("b.jsonl");
  fs::remove_all(dir);
  const bool same = a == 0 && b == 0 && !ta.empty() && ta == tb;
  return {same && prf_ok, std::string("two sample runs ") + (same ? "byte-identical" : "differ") + " (" +
                              std::to_string(ta.size()) + " bytes), PRF known-answer " + (prf_ok ? "ok" : "mismatch")};
#else
  const HardcoreModel m(make_path(3), HardcoreParams{2.0, 0.25});
  bool same = true;
  for (std::uint64_t s = 0; s < 200; ++s) same = same && cftp_sample(m, s).state == cftp_sample(m, s).state;
  return {same && prf_ok, std::string("repeated samples ") + (same ? "identical" : "differ")};
#endif
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "permutation n=10 coupling time", criterion_1},
      {2, "hard-core Petersen lambda=0.5 geometric coupling", criterion_2},
      {3, "coloring C6 k=8 coupling by t*", criterion_3},
      {4, "hard-core P3 exactness", criterion_4},
      {5, "coloring triangle k=3 exactness", criterion_5},
      {6, "Potts K2 exactness and zero-temperature limit", criterion_6},
      {7, "sink-free C3 and K4 exactness", criterion_7},
      {8, "permutation n=3 exactness", criterion_8},
      {9, "containment under shared draws", criterion_9},
      {10, "one-step kernels", criterion_10},
      {11, "determinism", criterion_11},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << v.detail << " ["
              << fmt(secs, 1) << " s]" << std::endl;
    failures += v.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
