/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Property suites. Each suite is a list of independent work units: random
// samples drawn from a per-unit seeded generator, or slices of an
// exhaustive enumeration. Units run on worker threads and their results
// are merged in unit order, so reports do not depend on scheduling.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ifmon/ast.hpp"
#include "ifmon/generator.hpp"
#include "ifmon/ideal.hpp"
#include "ifmon/intervals.hpp"
#include "ifmon/lattice.hpp"
#include "ifmon/monitors.hpp"
#include "ifmon/pretty.hpp"
#include "ifmon/relform.hpp"
#include "ifmon/semantics.hpp"
#include "ifmon/state.hpp"

namespace ifmon {

struct Counterexample {
  std::size_t unit = 0;
  std::string property;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct SuiteReport {
  std::string suite;
  OracleConfig config;
  std::size_t units = 0;
  std::size_t checks = 0;
  std::size_t skipped_budget = 0;
  std::size_t skipped_overflow = 0;
  std::size_t violations = 0;
  std::vector<Counterexample> counterexamples;
  std::map<std::string, std::size_t> stats;
  double seconds = 0;

  static constexpr std::size_t kMaxCounterexamples = 20;

  bool passed() const { return violations == 0; }
  std::size_t skipped() const { return skipped_budget + skipped_overflow; }
  double skip_rate() const {
    return units == 0 ? 0.0 : static_cast<double>(skipped()) / units;
  }
};

/// Renders a state in the `--state` argument form.
inline std::string state_arg(const State &s) {
  std::string out;
  for (const auto &[x, v] : s.bindings()) {
    if (!out.empty())
      out += ",";
    out += x + "=" + std::to_string(v);
  }
  return out;
}

/// Renders a formula set in the `--delta` argument form.
inline std::string delta_arg(const FormulaSet &D) {
  if (D.is_fault())
    return "fault";
  std::string out;
  for (const auto &f : D.items()) {
    if (!out.empty())
      out += ", ";
    out += pretty(f);
  }
  return out;
}

/// Renders a state set in the `--tracking` argument form.
inline std::string tracking_arg(const StateSet &S) {
  if (S.is_fault())
    return "fault";
  std::string out;
  for (const auto &s : S.states()) {
    if (!out.empty())
      out += "; ";
    out += state_arg(s);
  }
  return out;
}

namespace detail {

struct UnitResult {
  std::size_t checks = 0;
  bool skipped_budget = false;
  bool skipped_overflow = false;
  std::vector<Counterexample> failures;
  std::map<std::string, std::size_t> stats;
};

/// Per-unit context handed to suite bodies.
class Unit {
public:
  Unit(std::size_t index, const OracleConfig &cfg)
      : index(index), cfg(cfg), rng(sample_rng(cfg.seed, index)) {}

  /// Records one check; `describe` is only invoked on failure.
  template <typename F> bool check(bool ok, const char *property, F &&describe) {
    ++result.checks;
    if (!ok) {
      Counterexample cx;
      cx.unit = index;
      cx.property = property;
      cx.fields = describe();
      result.failures.push_back(std::move(cx));
    }
    return ok;
  }

  void count(const std::string &key, std::size_t n = 1) {
    result.stats[key] += n;
  }

  const std::size_t index;
  const OracleConfig &cfg;
  Rng rng;
  UnitResult result;
};

using UnitBody = std::function<void(Unit &)>;

inline UnitResult run_unit(std::size_t index, const OracleConfig &cfg,
                           const UnitBody &body) {
  Unit u(index, cfg);
  try {
    body(u);
  } catch (const BudgetExhausted &) {
    UnitResult r;
    r.skipped_budget = true;
    return r;
  } catch (const ArithmeticOverflow &) {
    UnitResult r;
    r.skipped_overflow = true;
    return r;
  } catch (const std::exception &e) {
    // An unexpected exception is a defect, not a skip.
    UnitResult r;
    r.checks = 1;
    r.failures.push_back({index, "no unexpected exception", {{"error", e.what()}}});
    return r;
  }
  return std::move(u.result);
}

inline unsigned worker_count(const OracleConfig &cfg, std::size_t units) {
  unsigned n = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  n = std::max(1u, n);
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(units, 1)));
}

inline SuiteReport run_units(const std::string &name, const OracleConfig &cfg,
                             std::size_t units, const UnitBody &body) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<UnitResult> results(units);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < units; i = next++)
      results[i] = run_unit(i, cfg, body);
  };
  const unsigned n = worker_count(cfg, units);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }

  SuiteReport rep;
  rep.suite = name;
  rep.config = cfg;
  rep.units = units;
  for (auto &r : results) {
    rep.checks += r.checks;
    rep.skipped_budget += r.skipped_budget;
    rep.skipped_overflow += r.skipped_overflow;
    rep.violations += r.failures.size();
    for (auto &cx : r.failures)
      if (rep.counterexamples.size() < SuiteReport::kMaxCounterexamples)
        rep.counterexamples.push_back(std::move(cx));
    for (const auto &[k, v] : r.stats)
      rep.stats[k] += v;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return rep;
}

using Fields = std::vector<std::pair<std::string, std::string>>;

inline StateSet full_universe(const OracleConfig &cfg) {
  return universe(cfg.var_set(), cfg.lo, cfg.hi);
}

inline PolicySpec random_policy(const OracleConfig &cfg, Rng &rng) {
  std::bernoulli_distribution coin(0.5);
  PolicySpec p;
  for (const auto &x : cfg.var_set()) {
    if (coin(rng))
      p.in_vars.insert(x);
    if (coin(rng))
      p.out_vars.insert(x);
  }
  if (p.out_vars.empty()) {
    auto vars = cfg.var_set();
    auto it = vars.begin();
    std::advance(it, std::uniform_int_distribution<std::size_t>(
                         0, vars.size() - 1)(rng));
    p.out_vars.insert(*it);
  }
  return p;
}

inline std::string var_list(const VarSet &v) {
  std::string out;
  for (const auto &x : v) {
    if (!out.empty())
      out += ",";
    out += x;
  }
  return out;
}

//
// Micro-domain: x, y over {0, 1} with a six-formula lattice
//

struct MicroDomain {
  VarSet vars{"x", "y"};
  std::vector<State> states;
  std::vector<BasicFormula> formulas;
  Lattice lattice;

  MicroDomain() {
    states = enumerate_states(vars, 0, 1);
    const BoolExpr lt = BoolExpr::less(Expr::var("x"), Expr::var("y"));
    formulas = {BasicFormula::agree_var("x"),
                BasicFormula::agree_var("y"),
                BasicFormula::both(lt),
                BasicFormula::both(negate(lt)),
                BasicFormula::cond_agree(lt, Expr::var("y")),
                BasicFormula::cond_agree(negate(lt), Expr::var("y"))};
    lattice = Lattice(formulas.begin(), formulas.end());
  }

  StateSet states_of(unsigned mask) const {
    std::set<State> out;
    for (std::size_t i = 0; i < states.size(); ++i)
      if (mask & (1u << i))
        out.insert(states[i]);
    return StateSet(std::move(out));
  }

  FormulaSet formulas_of(unsigned mask) const {
    std::set<BasicFormula> out;
    for (std::size_t i = 0; i < formulas.size(); ++i)
      if (mask & (1u << i))
        out.insert(formulas[i]);
    return FormulaSet(std::move(out));
  }

  // Brute-force satisfaction table: bit j of sat(s, t) is set iff formula j
  // holds for the pair, computed from the definitions of the three forms.
  unsigned sat(const State &s, const State &t) const {
    auto x = [](const State &u) { return u.get("x"); };
    auto y = [](const State &u) { return u.get("y"); };
    const bool ls = x(s) < y(s), lt = x(t) < y(t);
    unsigned m = 0;
    if (x(s) == x(t))
      m |= 1u << 0;
    if (y(s) == y(t))
      m |= 1u << 1;
    if (ls && lt)
      m |= 1u << 2;
    if (!ls && !lt)
      m |= 1u << 3;
    if (!(ls && lt) || y(s) == y(t))
      m |= 1u << 4;
    if (!(!ls && !lt) || y(s) == y(t))
      m |= 1u << 5;
    return m;
  }
};

inline const MicroDomain &micro_domain() {
  static const MicroDomain d;
  return d;
}

// Expected results from the satisfaction table, with nullopt for fault.
inline std::optional<unsigned> oracle_alpha(const MicroDomain &m, unsigned s,
                                            std::optional<unsigned> S) {
  if (!S)
    return std::nullopt;
  unsigned out = (1u << m.formulas.size()) - 1;
  for (std::size_t t = 0; t < m.states.size(); ++t)
    if (*S & (1u << t))
      out &= m.sat(m.states[s], m.states[t]);
  return out;
}

inline std::optional<unsigned> oracle_gamma(const MicroDomain &m, unsigned s,
                                            std::optional<unsigned> D) {
  if (!D)
    return std::nullopt;
  unsigned out = 0;
  for (std::size_t t = 0; t < m.states.size(); ++t)
    if ((m.sat(m.states[s], m.states[t]) & *D) == *D)
      out |= 1u << t;
  return out;
}

inline std::optional<unsigned> mask_of(const MicroDomain &m, const StateSet &S) {
  if (S.is_fault())
    return std::nullopt;
  unsigned out = 0;
  for (std::size_t i = 0; i < m.states.size(); ++i)
    if (S.states().count(m.states[i]))
      out |= 1u << i;
  return out;
}

inline std::optional<unsigned> mask_of(const MicroDomain &m,
                                       const FormulaSet &D) {
  if (D.is_fault())
    return std::nullopt;
  unsigned out = 0;
  for (std::size_t i = 0; i < m.formulas.size(); ++i)
    if (D.contains(m.formulas[i]))
      out |= 1u << i;
  return out;
}

inline std::string mask_string(std::optional<unsigned> m) {
  return m ? std::to_string(*m) : std::string("fault");
}

// Lattice operations on masks with fault as top (nullopt).
inline bool states_leq(std::optional<unsigned> a, std::optional<unsigned> b) {
  return !b || (a && (*a & ~*b) == 0);
}
inline bool formulas_leq(std::optional<unsigned> a, std::optional<unsigned> b) {
  return !b || (a && (*b & ~*a) == 0);
}

//
// Suites
//

inline SuiteReport suite_galois(const OracleConfig &cfg) {
  const MicroDomain &m = micro_domain();
  const unsigned nS = 1u << m.states.size();
  const unsigned nD = 1u << m.formulas.size();
  // Every subset plus the fault element (nullopt).
  std::vector<std::optional<unsigned>> Ss, Ds;
  for (unsigned i = 0; i < nS; ++i)
    Ss.emplace_back(i);
  Ss.emplace_back(std::nullopt);
  for (unsigned i = 0; i < nD; ++i)
    Ds.emplace_back(i);
  Ds.emplace_back(std::nullopt);

  auto to_states = [&](std::optional<unsigned> S) {
    return S ? m.states_of(*S) : StateSet::fault();
  };
  auto to_formulas = [&](std::optional<unsigned> D) {
    return D ? m.formulas_of(*D) : FormulaSet::fault();
  };

  return run_units("galois", cfg, m.states.size(), [&](Unit &u) {
    const unsigned si = static_cast<unsigned>(u.index);
    const State &s = m.states[si];
    const StateSet U(std::set<State>(m.states.begin(), m.states.end()));
    auto a = [&](std::optional<unsigned> S) {
      return mask_of(m, alpha(s, to_states(S), m.lattice));
    };
    auto g = [&](std::optional<unsigned> D) {
      return mask_of(m, gamma(s, to_formulas(D), U));
    };
    auto ctx = [&](Fields f) {
      f.insert(f.begin(), {"state", state_arg(s)});
      return f;
    };

    for (auto S : Ss)
      u.check(a(S) == oracle_alpha(m, si, S), "alpha matches enumeration",
              [&] { return ctx({{"tracking", tracking_arg(to_states(S))},
                                {"expected", mask_string(oracle_alpha(m, si, S))},
                                {"actual", mask_string(a(S))}}); });
    for (auto D : Ds)
      u.check(g(D) == oracle_gamma(m, si, D), "gamma matches enumeration",
              [&] { return ctx({{"delta", delta_arg(to_formulas(D))},
                                {"expected", mask_string(oracle_gamma(m, si, D))},
                                {"actual", mask_string(g(D))}}); });

    for (auto S : Ss)
      for (auto D : Ds)
        u.check(formulas_leq(a(S), D) == states_leq(S, g(D)), "adjunction",
                [&] { return ctx({{"tracking", tracking_arg(to_states(S))},
                                  {"delta", delta_arg(to_formulas(D))}}); });

    for (auto S1 : Ss)
      for (auto S2 : Ss) {
        std::optional<unsigned> un;
        if (S1 && S2)
          un = *S1 | *S2;
        auto lhs = a(un);
        auto rhs = mask_of(m, fs_join(alpha(s, to_states(S1), m.lattice),
                                      alpha(s, to_states(S2), m.lattice)));
        u.check(lhs == rhs, "alpha is additive", [&] {
          return ctx({{"tracking_1", tracking_arg(to_states(S1))},
                      {"tracking_2", tracking_arg(to_states(S2))}});
        });
      }

    for (auto D1 : Ds)
      for (auto D2 : Ds) {
        auto meet = mask_of(m, fs_meet(to_formulas(D1), to_formulas(D2)));
        auto g1 = g(D1), g2 = g(D2);
        std::optional<unsigned> inter =
            !g1 ? g2 : !g2 ? g1 : std::optional<unsigned>(*g1 & *g2);
        u.check(g(meet) == inter, "gamma is multiplicative", [&] {
          return ctx({{"delta_1", delta_arg(to_formulas(D1))},
                      {"delta_2", delta_arg(to_formulas(D2))}});
        });
      }

    for (auto S : Ss)
      u.check(states_leq(S, g(a(S))), "gamma after alpha is extensive",
              [&] { return ctx({{"tracking", tracking_arg(to_states(S))}}); });
    for (auto D : Ds)
      u.check(formulas_leq(a(g(D)), D), "alpha after gamma is reductive",
              [&] { return ctx({{"delta", delta_arg(to_formulas(D))}}); });
  });
}

inline SuiteReport suite_lifted(const OracleConfig &cfg) {
  const StateSet U = full_universe(cfg);
  return run_units("lemma1", cfg, cfg.samples, [&](Unit &u) {
    GenOptions opts;
    opts.annotations = false;
    const Cmd c = gen_program(cfg, u.rng, opts);
    const StateSet S(random_subset(U.states(), 0.35, u.rng));
    const StateSet got = collecting(c, S, cfg.fuel);
    std::set<State> lifted;
    for (const auto &t : S.states()) {
      Outcome o = run(c, t, cfg.fuel);
      if (!o.terminated())
        throw BudgetExhausted();
      lifted.insert(*o.state);
    }
    const StateSet want(std::move(lifted));
    u.check(got == want, "collecting equals lifted semantics", [&] {
      return Fields{{"program", pretty(c)},
                    {"tracking", tracking_arg(S)},
                    {"collecting", got.to_string()},
                    {"lifted", want.to_string()}};
    });
  });
}

inline SuiteReport suite_monstatic(const OracleConfig &cfg) {
  const StateSet U = full_universe(cfg);
  return run_units("monstatic", cfg, cfg.samples, [&](Unit &u) {
    const State s = random_state(cfg, u.rng);
    const StateSet S(random_subset(U.states(), 0.35, u.rng));

    GenOptions plain;
    plain.annotations = false;
    const Cmd c = gen_program(cfg, u.rng, plain);
    IdealResult r = ideal_monitor(c, s, S, cfg.fuel);
    if (r.indeterminate())
      throw BudgetExhausted();
    const StateSet want = collecting(c, S, cfg.fuel);
    Outcome major = run(c, s, cfg.fuel);
    auto describe = [&](const Cmd &p, const StateSet &got,
                        const StateSet &expected) {
      return Fields{{"program", pretty(p)},
                    {"state", state_arg(s)},
                    {"tracking", tracking_arg(S)},
                    {"ideal", got.to_string()},
                    {"collecting", expected.to_string()}};
    };
    u.check(major.state == r.major.state, "ideal major run is the plain run",
            [&] { return describe(c, *r.tracking, want); });
    u.check(*r.tracking == want, "annotation-free ideal equals collecting",
            [&] { return describe(c, *r.tracking, want); });

    GenOptions assumes;
    assumes.asserts = false;
    const Cmd c2 = gen_program(cfg, u.rng, assumes);
    IdealResult r2 = ideal_monitor(c2, s, S, cfg.fuel);
    if (r2.indeterminate())
      throw BudgetExhausted();
    const StateSet want2 = collecting(c2, S, cfg.fuel);
    u.check(leq(*r2.tracking, want2), "assertion-free ideal within collecting",
            [&] { return describe(c2, *r2.tracking, want2); });
  });
}

inline SuiteReport suite_tini(const OracleConfig &cfg) {
  return run_units("theorem1", cfg, cfg.samples, [&](Unit &u) {
    GenOptions plain;
    plain.annotations = false;
    const Cmd c = gen_program(cfg, u.rng, plain);
    const PolicySpec policy = random_policy(cfg, u.rng);
    const State s = random_state(cfg, u.rng);
    const TiniCheck r =
        check_monitor_tini_detail(c, policy, s, cfg.range(), cfg.fuel);
    u.count(r.tini ? "tini_secure" : "tini_insecure");
    u.check(r.agree(), "ideal monitor passes iff noninterference holds", [&] {
      return Fields{{"program", pretty(wrap_policy(c, policy))},
                    {"state", state_arg(s)},
                    {"in", var_list(policy.in_vars)},
                    {"out", var_list(policy.out_vars)},
                    {"ideal", r.monitor_secure ? "pass" : "fault"},
                    {"tini", r.tini ? "secure" : "insecure"}};
    });
  });
}

inline SuiteReport suite_soundness(MonitorKind kind, const OracleConfig &cfg) {
  const StateSet U = full_universe(cfg);
  const std::string name = std::string("soundness-") + kind_name(kind);
  return run_units(name, cfg, cfg.samples, [&](Unit &u) {
    MonitorOptions mo;
    mo.fuel = cfg.fuel;
    mo.intervals.widen_after = cfg.widen_after;
    mo.trace = false;

    // Pointwise soundness against the ideal monitor.
    const Cmd c = gen_program(cfg, u.rng);
    const Lattice L = collect_lattice(c, cfg.var_set());
    const State s = random_state(cfg, u.rng);
    const FormulaSet D = random_delta(L, u.rng);
    const StateSet S = gamma(s, D, U);
    MonitorOutcome mon = monitor(kind, c, s, D, L, mo);
    if (mon.budget_exhausted())
      throw BudgetExhausted();
    IdealResult id = ideal_monitor(c, s, S, cfg.fuel);
    if (id.indeterminate())
      throw BudgetExhausted();
    const FormulaSet abs = alpha(*id.major.state, *id.tracking, L);
    u.count(mon.fault() ? "monitor_fault" : "monitor_pass");
    u.count(id.fault() ? "ideal_fault" : "ideal_pass");
    auto describe = [&] {
      return Fields{{"program", pretty(c)},
                    {"state", state_arg(s)},
                    {"delta", delta_arg(D)},
                    {"alpha_of_ideal", abs.to_string()},
                    {"monitor", mon.formulas->to_string()}};
    };
    u.check(mon.major.state == id.major.state, "major runs coincide", describe);
    u.check(fs_leq(abs, *mon.formulas), "abstraction of ideal below monitor",
            describe);

    // Chain on a wrapped noninterference program.
    GenOptions plain;
    plain.annotations = false;
    const Cmd c0 = gen_program(cfg, u.rng, plain);
    const PolicySpec policy = random_policy(cfg, u.rng);
    const Cmd w = wrap_policy(c0, policy);
    const Lattice Lw = collect_lattice(w, cfg.var_set());
    MonitorOutcome m2 = monitor(kind, w, s, FormulaSet(), Lw, mo);
    if (m2.budget_exhausted())
      throw BudgetExhausted();
    IdealResult i2 = ideal_monitor(w, s, U, cfg.fuel);
    if (i2.indeterminate())
      throw BudgetExhausted();
    const bool secure = tini_holds(c0, policy, s, cfg.range(), cfg.fuel);
    auto describe2 = [&] {
      return Fields{{"program", pretty(w)},
                    {"state", state_arg(s)},
                    {"monitor", m2.fault() ? "fault" : "pass"},
                    {"ideal", i2.fault() ? "fault" : "pass"},
                    {"tini", secure ? "secure" : "insecure"}};
    };
    if (!m2.fault()) {
      u.count("wrapped_monitor_pass");
      u.check(!i2.fault(), "monitor pass implies ideal pass", describe2);
    }
    if (!i2.fault())
      u.check(secure, "ideal pass implies noninterference", describe2);
  });
}

inline SuiteReport suite_static(MonitorKind kind, const OracleConfig &cfg) {
  const StateSet U = full_universe(cfg);
  const std::string name = std::string("static-") + kind_name(kind);
  return run_units(name, cfg, cfg.samples, [&](Unit &u) {
    GenOptions plain;
    plain.annotations = false;
    const Cmd c = gen_program(cfg, u.rng, plain);
    const Cmd c_major = gen_program(cfg, u.rng, plain);
    const Lattice L = collect_lattice(Cmd::seq(c, c_major), cfg.var_set());
    const State s = random_state(cfg, u.rng);
    const FormulaSet D = random_delta(L, u.rng);
    Outcome major = run(c_major, s, cfg.fuel);
    if (!major.terminated())
      throw BudgetExhausted();
    const StateSet C = collecting(c, gamma(s, D, U), cfg.fuel);
    const FormulaSet abs = alpha(*major.state, C, L);
    FormulaSet got;
    switch (kind) {
    case MonitorKind::D:
      got = static_d(D, L);
      break;
    case MonitorKind::M:
      got = static_m(c, c_major, D, L);
      break;
    case MonitorKind::I:
      got = static_i(c, s, *major.state, D, L, {cfg.widen_after});
      break;
    }
    u.check(fs_leq(abs, got), "static transfer is sound", [&] {
      return Fields{{"program", pretty(c)},
                    {"major_program", pretty(c_major)},
                    {"state", state_arg(s)},
                    {"delta", delta_arg(D)},
                    {"alpha_of_collecting", abs.to_string()},
                    {"static", got.to_string()}};
    });
  });
}

inline SuiteReport suite_entailment(const OracleConfig &cfg) {
  const auto all = enumerate_states(cfg.var_set(), cfg.lo, cfg.hi);
  return run_units("entailment", cfg, cfg.samples, [&](Unit &u) {
    ProgramGenerator gen(cfg, u.rng);
    const Cmd c = gen_program(cfg, u.rng);
    const Lattice L = collect_lattice(c, cfg.var_set());
    const FormulaSet D = random_delta(L, u.rng, 4);

    std::vector<std::pair<State, State>> models;
    for (const auto &s : all)
      for (const auto &t : all)
        if (std::all_of(D.items().begin(), D.items().end(),
                        [&](const BasicFormula &f) { return holds(f, s, t); }))
          models.emplace_back(s, t);

    u.check(!contradictory(D) || models.empty(),
            "contradictory sets have no models",
            [&] { return Fields{{"delta", delta_arg(D)}}; });

    std::vector<BasicFormula> goals(L.begin(), L.end());
    for (int i = 0; i < 8; ++i)
      goals.push_back(gen.basic_formula());
    for (const auto &f : goals) {
      if (!entails(D, f))
        continue;
      u.count("entailed");
      for (const auto &[s, t] : models)
        if (!u.check(holds(f, s, t), "entailment is sound", [&] {
              return Fields{{"delta", delta_arg(D)},
                            {"goal", pretty(f)},
                            {"state_1", state_arg(s)},
                            {"state_2", state_arg(t)}};
            }))
          break;
    }

    // Assignment transfer: every pair of models is mapped to a model.
    const Expr e = gen.expr(2);
    const std::string x = *std::next(
        cfg.var_set().begin(),
        std::uniform_int_distribution<std::size_t>(0, cfg.vars - 1)(u.rng));
    const Cmd asg = Cmd::assign(x, e);
    MonitorOptions mo;
    mo.trace = false;
    const FormulaSet after =
        monitor(MonitorKind::D, asg, all.front(), D, L, mo).formulas.value();
    for (const auto &[s, t] : models) {
      const State s1 = s.with(x, eval_expr(e, s));
      const State t1 = t.with(x, eval_expr(e, t));
      for (const auto &f : after.items())
        if (!u.check(holds(f, s1, t1), "assignment transfer is sound", [&] {
              return Fields{{"program", pretty(asg)},
                            {"delta", delta_arg(D)},
                            {"formula", pretty(f)},
                            {"state_1", state_arg(s)},
                            {"state_2", state_arg(t)}};
            }))
          return;
    }
  });
}

inline bool has_loops(const Cmd &c) {
  if (c.as<cmd::While>())
    return true;
  if (auto *q = c.as<cmd::Seq>())
    return has_loops(q->first) || has_loops(q->second);
  if (auto *i = c.as<cmd::If>())
    return has_loops(i->then_branch) || has_loops(i->else_branch);
  return false;
}

inline IntervalEnv random_env_around(const State &s, Rng &rng) {
  std::uniform_int_distribution<Value> slack(0, 2);
  std::bernoulli_distribution open(0.2);
  IntervalEnv env = IntervalEnv::top();
  for (const auto &[x, v] : s.bindings()) {
    Interval::Bound lo = open(rng) ? Interval::Bound() : Interval::Bound(v - slack(rng));
    Interval::Bound hi = open(rng) ? Interval::Bound() : Interval::Bound(v + slack(rng));
    env = env.set(x, Interval::range(lo, hi));
  }
  return env;
}

inline Interval loosen(const Interval &i, Rng &rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  auto lo = i.lo();
  auto hi = i.hi();
  if (lo) {
    const int p = pick(rng);
    lo = p == 0 ? Interval::Bound() : Interval::Bound(*lo - (p - 1));
  }
  if (hi) {
    const int p = pick(rng);
    hi = p == 0 ? Interval::Bound() : Interval::Bound(*hi + (p - 1));
  }
  return Interval::range(lo, hi);
}

inline IntervalEnv loosen(const IntervalEnv &env, const VarSet &vars, Rng &rng) {
  IntervalEnv out = env;
  for (const auto &x : vars)
    out = out.set(x, loosen(env.get(x), rng));
  return out;
}

inline std::vector<Interval> small_intervals() {
  std::vector<Interval> out;
  for (Value lo = -4; lo <= 4; ++lo)
    for (Value hi = lo; hi <= lo + 8; ++hi)
      out.push_back(Interval::range(lo, hi));
  return out;
}

inline SuiteReport suite_interval_sound(const OracleConfig &cfg) {
  static const ArithOp ops[] = {ArithOp::add, ArithOp::sub, ArithOp::mul};
  static const char *op_names[] = {"+", "-", "*"};
  const std::vector<Interval> boxes = small_intervals();
  const std::size_t exhaustive = 3 * boxes.size();
  const VarSet vars = cfg.var_set();

  return run_units(
      "interval-sound", cfg, cfg.samples + exhaustive, [&](Unit &u) {
        if (u.index >= cfg.samples) {
          // Exact arithmetic on finite operands of width at most 8.
          const std::size_t k = u.index - cfg.samples;
          const ArithOp op = ops[k / boxes.size()];
          const Interval &a = boxes[k % boxes.size()];
          for (const auto &b : boxes) {
            Value lo = checked_arith(op, *a.lo(), *b.lo()), hi = lo;
            for (Value v1 = *a.lo(); v1 <= *a.hi(); ++v1)
              for (Value v2 = *b.lo(); v2 <= *b.hi(); ++v2) {
                const Value r = checked_arith(op, v1, v2);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
              }
            const Interval got = ivl_arith(op, a, b);
            u.count("arithmetic_pairs");
            u.check(got == Interval::range(lo, hi), "interval arithmetic is exact",
                    [&] {
                      return Fields{{"lhs", a.to_string()},
                                    {"op", op_names[k / boxes.size()]},
                                    {"rhs", b.to_string()},
                                    {"expected", Interval::range(lo, hi).to_string()},
                                    {"actual", got.to_string()}};
                    });
          }
          return;
        }

        u.count("programs");
        const Cmd c = gen_program(cfg, u.rng);
        const State s = random_state(cfg, u.rng);
        const IntervalEnv env = random_env_around(s, u.rng);
        const IntervalConfig icfg{cfg.widen_after};
        Outcome o = run(c, s, cfg.fuel);
        if (!o.terminated())
          throw BudgetExhausted();
        const IntervalEnv out = interval_exec(c, env, icfg);
        u.check(contains(out, *o.state), "terminating runs stay inside", [&] {
          return Fields{{"program", pretty(c)},
                        {"state", state_arg(s)},
                        {"env", env.to_string(vars)},
                        {"final_state", state_arg(*o.state)},
                        {"result", out.to_string(vars)}};
        });

        ProgramGenerator gen(cfg, u.rng);
        const Expr e = gen.expr(2);
        const BoolExpr b = gen.boolean(1);
        const Value v = eval_expr(e, s);
        const Interval ie = eval_interval(e, env);
        u.check(ie.contains(v), "expression evaluation is sound", [&] {
          return Fields{{"expr", pretty(e)},
                        {"state", state_arg(s)},
                        {"env", env.to_string(vars)},
                        {"result", ie.to_string()}};
        });
        const BoolExpr truth = eval_bool(b, s) ? b : negate(b);
        const IntervalEnv ge = guard_int(truth, env);
        u.check(contains(ge, s), "guard refinement is sound", [&] {
          return Fields{{"guard", pretty(truth)},
                        {"state", state_arg(s)},
                        {"env", env.to_string(vars)},
                        {"result", ge.to_string(vars)}};
        });
        std::uniform_int_distribution<Value> slack(0, 3);
        const Interval target = Interval::range(v - slack(u.rng), v + slack(u.rng));
        const IntervalEnv ae = app(e, target, env);
        u.check(contains(ae, s), "backward refinement is sound", [&] {
          return Fields{{"expr", pretty(e)},
                        {"target", target.to_string()},
                        {"state", state_arg(s)},
                        {"env", env.to_string(vars)},
                        {"result", ae.to_string(vars)}};
        });

        // Widening inside loops can make the result non-monotone in the
        // input, so the property is enforced on loop-free programs and only
        // counted otherwise.
        const IntervalEnv wider = loosen(env, vars, u.rng);
        const IntervalEnv out2 = interval_exec(c, wider, icfg);
        if (has_loops(c)) {
          if (!leq(out, out2))
            u.count("nonmonotone_with_loops");
          return;
        }
        u.count("loop_free_programs");
        u.check(leq(out, out2), "loop-free abstract execution is monotone", [&] {
          return Fields{{"program", pretty(c)},
                        {"env", env.to_string(vars)},
                        {"wider_env", wider.to_string(vars)},
                        {"result", out.to_string(vars)},
                        {"wider_result", out2.to_string(vars)}};
        });
      });
}

inline SuiteReport suite_granger(const OracleConfig &cfg) {
  const MicroDomain &m = micro_domain();
  const auto world = enumerate_states(m.vars, -1, 2);
  const StateSet W(std::set<State>(world.begin(), world.end()));

  std::vector<Interval> boxes;
  const std::vector<Interval::Bound> los = {std::nullopt, -1, 0, 1, 2};
  const std::vector<Interval::Bound> his = {-1, 0, 1, 2, std::nullopt};
  for (const auto &lo : los)
    for (const auto &hi : his) {
      Interval i = Interval::range(lo, hi);
      if (!i.is_empty())
        boxes.push_back(i);
    }
  std::vector<IntervalEnv> envs{IntervalEnv::bottom(), IntervalEnv::fault()};
  for (const auto &ix : boxes)
    for (const auto &iy : boxes)
      envs.push_back(IntervalEnv::top().set("x", ix).set("y", iy));

  std::vector<FormulaSet> deltas{FormulaSet::fault()};
  for (unsigned d = 0; d < (1u << m.formulas.size()); ++d)
    deltas.push_back(m.formulas_of(d));

  // gamma x of (env, D) over the world, or nullopt for fault.
  auto prod = [&](const IntervalEnv &env, const FormulaSet &D,
                  const State &s) -> std::optional<std::set<State>> {
    if (env.is_fault() || D.is_fault())
      return std::nullopt;
    std::set<State> out;
    const StateSet related = gamma(s, D, W);
    for (const auto &t : related.states())
      if (contains(env, t))
        out.insert(t);
    return out;
  };

  return run_units("granger", cfg, envs.size(), [&](Unit &u) {
    const IntervalEnv &env = envs[u.index];
    for (const auto &s : m.states)
      for (const auto &D : deltas) {
        const auto base = prod(env, D, s);
        const IntervalEnv ti = toint(env, D, s);
        const FormulaSet tf = toform(env, D, s, m.lattice);
        auto describe = [&] {
          return Fields{{"env", env.to_string(m.vars)},
                        {"delta", delta_arg(D)},
                        {"state", state_arg(s)},
                        {"toint", ti.to_string(m.vars)},
                        {"toform", tf.to_string()}};
        };
        u.check(prod(ti, D, s) == base, "toint preserves the product meaning",
                describe);
        u.check(prod(env, tf, s) == base,
                "toform preserves the product meaning", describe);
        u.check(leq(ti, env), "toint refines", describe);
        u.check(fs_leq(tf, D), "toform refines", describe);
      }
  });
}

inline SuiteReport suite_monotone(const OracleConfig &cfg) {
  const StateSet U = full_universe(cfg);
  return run_units("monotone", cfg, cfg.samples, [&](Unit &u) {
    const Cmd c = gen_program(cfg, u.rng);
    const State s = random_state(cfg, u.rng);
    std::set<State> small = random_subset(U.states(), 0.3, u.rng);
    std::set<State> big = random_subset(U.states(), 0.3, u.rng);
    big.insert(small.begin(), small.end());
    const StateSet S(std::move(small));
    const StateSet S2 = std::bernoulli_distribution(0.1)(u.rng)
                            ? StateSet::fault()
                            : StateSet(std::move(big));
    IdealResult r1 = ideal_monitor(c, s, S, cfg.fuel);
    IdealResult r2 = ideal_monitor(c, s, S2, cfg.fuel);
    if (r1.indeterminate() || r2.indeterminate())
      throw BudgetExhausted();
    auto describe = [&](const StateSet &a, const StateSet &b) {
      return Fields{{"program", pretty(c)},
                    {"state", state_arg(s)},
                    {"tracking", tracking_arg(S)},
                    {"tracking_wider", tracking_arg(S2)},
                    {"result", a.to_string()},
                    {"result_wider", b.to_string()}};
    };
    u.check(leq(*r1.tracking, *r2.tracking), "ideal monitor is monotone",
            [&] { return describe(*r1.tracking, *r2.tracking); });
    const StateSet c1 = collecting(c, S, cfg.fuel);
    const StateSet c2 = collecting(c, S2, cfg.fuel);
    u.check(leq(c1, c2), "collecting semantics is monotone",
            [&] { return describe(c1, c2); });
  });
}

} // namespace detail

inline const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {
      "galois",      "lemma1",      "monstatic",   "theorem1",
      "soundness-d", "soundness-m", "soundness-i", "granger",
      "interval-sound", "monotone", "static-d",    "static-m",
      "static-i",    "entailment"};
  return names;
}

/// Runs a named property suite. Throws std::invalid_argument for an
/// unknown name or an invalid configuration.
inline SuiteReport run_suite(const std::string &name, const OracleConfig &cfg) {
  cfg.validate();
  if (name == "galois")
    return detail::suite_galois(cfg);
  if (name == "lemma1")
    return detail::suite_lifted(cfg);
  if (name == "monstatic")
    return detail::suite_monstatic(cfg);
  if (name == "theorem1")
    return detail::suite_tini(cfg);
  if (name == "granger")
    return detail::suite_granger(cfg);
  if (name == "interval-sound")
    return detail::suite_interval_sound(cfg);
  if (name == "monotone")
    return detail::suite_monotone(cfg);
  if (name == "entailment")
    return detail::suite_entailment(cfg);
  for (MonitorKind k : {MonitorKind::D, MonitorKind::M, MonitorKind::I}) {
    if (name == std::string("soundness-") + kind_name(k))
      return detail::suite_soundness(k, cfg);
    if (name == std::string("static-") + kind_name(k))
      return detail::suite_static(k, cfg);
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace ifmon
