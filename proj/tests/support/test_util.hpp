#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "pptlsl/expand.hpp"
#include "pptlsl/formula.hpp"
#include "pptlsl/interval.hpp"
#include "pptlsl/memory.hpp"
#include "pptlsl/parser.hpp"
#include "pptlsl/printer.hpp"
#include "pptlsl/state_eval.hpp"

namespace pptlsl::test {

// ---- comparison modulo commutativity/associativity of && and || ----

inline StateF ac_normal(const StateF& f);

inline void ac_collect(StateOp op, const StateF& f, std::vector<StateF>& out) {
  if (f->op == op) {
    ac_collect(op, f->a, out);
    ac_collect(op, f->b, out);
    return;
  }
  out.push_back(ac_normal(f));
}

inline StateF ac_normal(const StateF& f) {
  switch (f->op) {
    case StateOp::Or:
    case StateOp::And: {
      std::vector<StateF> kids;
      ac_collect(f->op, f, kids);
      std::sort(kids.begin(), kids.end(),
                [](const StateF& a, const StateF& b) { return cmp(a, b) < 0; });
      return f->op == StateOp::Or ? StateFormula::disj_all(kids)
                                  : StateFormula::conj_all(kids);
    }
    case StateOp::Neg:
      return StateFormula::neg(ac_normal(f->a));
    case StateOp::Implies:
      return StateFormula::implies(ac_normal(f->a), ac_normal(f->b));
    case StateOp::SepConj:
      return StateFormula::sep(ac_normal(f->a), ac_normal(f->b));
    case StateOp::Exists:
      return StateFormula::exists(f->binder, ac_normal(f->a));
    case StateOp::Forall:
      return StateFormula::forall(f->binder, ac_normal(f->a));
    case StateOp::BoundedOr:
      return StateFormula::bounded_or(f->binders, ac_normal(f->a));
    default:
      return f;
  }
}

inline TempF ac_normal(const TempF& p);

inline void ac_collect_t(TempOp op, const TempF& p, std::vector<TempF>& out) {
  if (p->op == op) {
    ac_collect_t(op, p->kids[0], out);
    ac_collect_t(op, p->kids[1], out);
    return;
  }
  out.push_back(ac_normal(p));
}

inline TempF ac_normal(const TempF& p) {
  switch (p->op) {
    case TempOp::State:
      return TemporalFormula::lift(ac_normal(p->state));
    case TempOp::Or:
    case TempOp::And: {
      std::vector<TempF> kids;
      ac_collect_t(p->op, p, kids);
      std::sort(kids.begin(), kids.end(),
                [](const TempF& a, const TempF& b) { return cmp(a, b) < 0; });
      TempF out = kids.back();
      for (auto it = kids.rbegin() + 1; it != kids.rend(); ++it)
        out = p->op == TempOp::Or ? TemporalFormula::disj(*it, out)
                                  : TemporalFormula::conj(*it, out);
      return out;
    }
    default: {
      if (p->kids.empty()) return p;
      std::vector<TempF> kids;
      for (const auto& k : p->kids) kids.push_back(ac_normal(k));
      switch (p->op) {
        case TempOp::Neg: return TemporalFormula::neg(kids[0]);
        case TempOp::Implies: return TemporalFormula::implies(kids[0], kids[1]);
        case TempOp::Next: return TemporalFormula::next(kids[0]);
        case TempOp::NextN: return TemporalFormula::next_n(p->n, kids[0]);
        case TempOp::Chop: return TemporalFormula::chop(kids[0], kids[1], p->chop_tag);
        case TempOp::Star:
          return TemporalFormula::star_tagged(kids[0], p->star_tag_a, p->star_tag_b,
                                              p->star_parity);
        case TempOp::Plus: return TemporalFormula::plus(kids[0]);
        case TempOp::Sometimes: return TemporalFormula::sometimes(kids[0]);
        case TempOp::Always: return TemporalFormula::always(kids[0]);
        case TempOp::Prj: {
          TempF head = kids.back();
          kids.pop_back();
          return TemporalFormula::prj(std::move(kids), head, p->prj_tags);
        }
        default: return p;
      }
    }
  }
}

inline bool ac_equal(const StateF& a, const StateF& b) {
  return equal(ac_normal(a), ac_normal(b));
}
inline bool ac_equal(const TempF& a, const TempF& b) {
  return equal(ac_normal(a), ac_normal(b));
}

// ---- independent list-segment oracle: a graph walk over the heap ----

inline bool ls_walk(const MemoryState& s, unsigned from, unsigned to) {
  std::set<unsigned> visited;
  unsigned cur = from;
  do {
    auto it = s.heap.find(cur);
    if (it == s.heap.end()) return false;
    if (!visited.insert(cur).second) return false;
    cur = it->second;
  } while (cur != to);
  return visited.size() == s.heap.size();
}

// ---- interval enumeration ----

// all intervals with 1..max_states states drawn from the pool (with
// repetition); fn returns false to stop
inline void for_each_interval(const std::vector<MemoryState>& pool,
                              unsigned max_states,
                              const std::function<bool(const Interval&)>& fn) {
  for (unsigned len = 1; len <= max_states; ++len) {
    std::vector<std::size_t> idx(len, 0);
    for (;;) {
      Interval iv;
      iv.states.reserve(len);
      for (std::size_t i : idx) iv.states.push_back(pool[i]);
      if (!fn(iv)) return;
      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (idx[i] + 1 < pool.size()) {
          ++idx[i];
          break;
        }
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
}

// first model among all intervals over bounded states, or nullopt
inline std::optional<Interval> brute_force_model(const TempF& p, const Config& cfg,
                                                 unsigned heap_bound,
                                                 unsigned max_states) {
  auto pool = all_states(free_vars(p), cfg, heap_bound);
  std::optional<Interval> found;
  for_each_interval(pool, max_states, [&](const Interval& iv) {
    if (models(iv, p, cfg)) {
      found = iv;
      return false;
    }
    return true;
  });
  return found;
}

// ---- deterministic random formulas ----

class Gen {
 public:
  explicit Gen(uint32_t seed) : rng_(seed) {}

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  Term term(const std::vector<std::string>& vars, unsigned max_const) {
    if (!vars.empty() && chance(0.6)) return Term::var(vars[pick(vars.size())]);
    return Term::constant(pick(max_const + 1));
  }

  // core state formulas; heap atoms only when heap_ok
  StateF state(unsigned depth, const std::vector<std::string>& vars, unsigned max_const,
               bool heap_ok) {
    if (depth == 0) {
      if (heap_ok && chance(0.4))
        return StateFormula::points_to(term(vars, max_const), term(vars, max_const));
      return StateFormula::eq(term(vars, max_const), term(vars, max_const));
    }
    switch (pick(heap_ok ? 5u : 3u)) {
      case 0:
        return StateFormula::neg(state(depth - 1, vars, max_const, heap_ok));
      case 1:
        return StateFormula::disj(state(depth - 1, vars, max_const, heap_ok),
                                  state(depth - 1, vars, max_const, heap_ok));
      case 2:
        return StateFormula::conj(state(depth - 1, vars, max_const, heap_ok),
                                  state(depth - 1, vars, max_const, heap_ok));
      case 3:
        return StateFormula::sep(state(depth - 1, vars, max_const, heap_ok),
                                 state(depth - 1, vars, max_const, heap_ok));
      default:
        return StateFormula::exists("q" + std::to_string(pick(2)),
                                    state(depth - 1, vars, max_const, heap_ok));
    }
  }

  // temporal skeleton over given state leaves; connectives over pure-state
  // operands collapse to the state layer, as in the parser
  TempF temporal(unsigned depth, const std::function<StateF()>& leaf) {
    if (depth == 0) return TemporalFormula::lift(leaf());
    auto demote2 = [](TempOp op, TempF a, TempF b) {
      if (a->is_state() && b->is_state()) {
        StateF s = op == TempOp::Or ? StateFormula::disj(a->state, b->state)
                                    : StateFormula::conj(a->state, b->state);
        return TemporalFormula::lift(s);
      }
      return op == TempOp::Or ? TemporalFormula::disj(std::move(a), std::move(b))
                              : TemporalFormula::conj(std::move(a), std::move(b));
    };
    switch (pick(8)) {
      case 0: {
        TempF a = temporal(depth - 1, leaf);
        if (a->is_state()) return TemporalFormula::lift(StateFormula::neg(a->state));
        return TemporalFormula::neg(std::move(a));
      }
      case 1:
        return demote2(TempOp::Or, temporal(depth - 1, leaf), temporal(depth - 1, leaf));
      case 2:
        return demote2(TempOp::And, temporal(depth - 1, leaf), temporal(depth - 1, leaf));
      case 3: return TemporalFormula::next(temporal(depth - 1, leaf));
      case 4:
        return TemporalFormula::chop(temporal(depth - 1, leaf), temporal(depth - 1, leaf));
      case 5: return TemporalFormula::star(temporal(depth - 1, leaf));
      case 6: {
        std::vector<TempF> pieces;
        unsigned m = 1 + pick(2);
        for (unsigned i = 0; i < m; ++i) pieces.push_back(temporal(depth - 1, leaf));
        return TemporalFormula::prj(std::move(pieces), temporal(depth - 1, leaf));
      }
      default:
        return chance(0.5) ? TemporalFormula::sometimes(temporal(depth - 1, leaf))
                           : TemporalFormula::always(temporal(depth - 1, leaf));
    }
  }

  // heap-free restricted formulas (equations only, at least one var per atom)
  TempF restricted(unsigned depth, const std::vector<std::string>& vars,
                   unsigned max_const) {
    auto leaf = [&]() -> StateF {
      std::string x = vars[pick(vars.size())];
      if (chance(0.5)) return StateFormula::eq(Term::constant(pick(max_const + 1)),
                                               Term::var(x));
      std::string y = vars[pick(vars.size())];
      if (y == x) return StateFormula::eq(Term::constant(pick(max_const + 1)),
                                          Term::var(x));
      return StateFormula::eq(Term::var(x), Term::var(y));
    };
    return temporal(depth, leaf);
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

// ---- CLI driver ----

struct CliResult {
  int exit_code = -1;
  std::string out;
};

inline CliResult run_cli(const std::string& args) {
  CliResult res;
#ifdef PPTLSL_CLI_PATH
  std::string cmd = std::string(PPTLSL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)args;
#endif
  return res;
}

inline std::string write_temp_file(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/pptlsl_test_") + name;
  FILE* f = fopen(path.c_str(), "w");
  fwrite(content.data(), 1, content.size(), f);
  fclose(f);
  return path;
}

}  // namespace pptlsl::test
