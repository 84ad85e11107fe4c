#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pptlsl/expand.hpp"
#include "pptlsl/isomorphism.hpp"
#include "pptlsl/nfg.hpp"
#include "pptlsl/normal_form.hpp"
#include "pptlsl/parser.hpp"
#include "pptlsl/printer.hpp"
#include "pptlsl/trace_io.hpp"
#include "pptlsl/translate.hpp"

namespace {

using namespace pptlsl;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

struct CommonArgs {
  unsigned max_loc = 0;
  unsigned heap_bound = 0;  // 0: default to |C|_P
  unsigned node_budget = 100000;
  std::string format = "text";
  std::string formula_text;
  std::string formula_file;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_file = true) {
  cmd->add_option("--max-loc", args.max_loc, "number of valid locations (Loc = 1..N)")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--heap-bound", args.heap_bound,
                  "size of the heap vector C (default: computed from the formula)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--node-budget", args.node_budget, "graph node budget");
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"text", "json", "dot"}));
  cmd->add_option("--formula", args.formula_text, "formula given inline");
  if (with_file)
    cmd->add_option("file", args.formula_file, "file containing one formula");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TempF load_formula(const CommonArgs& args, const Config& cfg) {
  std::string text;
  if (!args.formula_text.empty()) {
    text = args.formula_text;
  } else if (!args.formula_file.empty()) {
    text = read_file(args.formula_file);
  } else {
    throw Error("no formula given: use --formula or a file argument");
  }
  TempF p = parse_formula(text);
  unsigned m = max_constant(p);
  if (m > cfg.max_loc)
    throw Error("constant " + std::to_string(m) + " exceeds --max-loc " +
                std::to_string(cfg.max_loc));
  return p;
}

VarVector pick_vector(const TempF& p, const CommonArgs& args, const Config& cfg) {
  std::size_t n = args.heap_bound > 0 ? args.heap_bound : vector_size(p, cfg);
  return VarVector::reserved(n);
}

nlohmann::json trace_json(const Interval& iv) {
  return nlohmann::json::parse(serialize_trace(iv));
}

// Materializes bounded disjunctions for display when the value domain is
// small; larger domains (or blowups past the cap) keep the symbolic binder
// form.
constexpr std::size_t kDisplayDisjunctCap = 256;

StateF display_state(const StateF& f, const Config& cfg) {
  if (cfg.max_loc > 2) return f;
  switch (f->op) {
    case StateOp::BoundedOr: {
      std::vector<StateF> parts;
      std::set<std::string> seen;
      bool capped = false;
      std::function<void(std::size_t, const StateF&)> go = [&](std::size_t i,
                                                               const StateF& body) {
        if (capped || body->op == StateOp::False) return;
        if (i == f->binders.size()) {
          StateF part = display_state(body, cfg);
          if (seen.insert(to_string(part)).second) {
            if (parts.size() >= kDisplayDisjunctCap)
              capped = true;
            else
              parts.push_back(part);
          }
          return;
        }
        for (unsigned v = 0; v <= cfg.max_loc && !capped; ++v)
          go(i + 1, fold_substitute(body, f->binders[i], v));
      };
      go(0, f->a);
      if (capped) return f;  // too large to materialize usefully
      if (parts.empty()) return StateFormula::fals();
      return StateFormula::disj_all(parts);
    }
    case StateOp::Neg:
      return StateFormula::neg(display_state(f->a, cfg));
    case StateOp::Or:
      return StateFormula::disj(display_state(f->a, cfg), display_state(f->b, cfg));
    case StateOp::And:
      return StateFormula::conj(display_state(f->a, cfg), display_state(f->b, cfg));
    default:
      return f;
  }
}

TempF display_formula(const TempF& p, const Config& cfg) {
  if (p->op == TempOp::State)
    return TemporalFormula::lift(fold(display_state(p->state, cfg)));
  if (p->kids.empty()) return p;
  std::vector<TempF> kids;
  for (const auto& k : p->kids) kids.push_back(display_formula(k, cfg));
  switch (p->op) {
    case TempOp::Neg: return TemporalFormula::neg(kids[0]);
    case TempOp::Or: return TemporalFormula::disj(kids[0], kids[1]);
    case TempOp::And: return TemporalFormula::conj(kids[0], kids[1]);
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

int cmd_check(const CommonArgs& args) {
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  VarVector c = pick_vector(p, args, cfg);
  DecisionOptions opts;
  opts.node_budget = args.node_budget;
  DecisionResult res = decide_sat(p, c, cfg, opts);
  bool json_out = args.format == "json";
  nlohmann::json out;
  switch (res.verdict) {
    case Verdict::Sat: {
      out["verdict"] = "SAT";
      if (res.witness->kind == ModelWitness::Kind::Finite) {
        Interval decoded = decode_states(res.witness->states, c);
        out["witness"] = trace_json(decoded);
      } else {
        out["witness"]["prefix"] =
            res.witness->states.empty()
                ? nlohmann::json::object({{"states", nlohmann::json::array()}})
                : trace_json(decode_states(res.witness->states, c));
        out["witness"]["cycle"] = trace_json(decode_states(res.witness->cycle, c));
      }
      if (json_out) {
        std::cout << out.dump(2) << "\n";
      } else {
        std::cout << "SAT\n" << out["witness"].dump(2) << "\n";
      }
      return kExitTrue;
    }
    case Verdict::Unsat:
      if (json_out)
        std::cout << nlohmann::json{{"verdict", "UNSAT"}}.dump(2) << "\n";
      else
        std::cout << "UNSAT\n";
      return kExitFalse;
    default:
      std::cerr << "unknown: " << res.note << "\n";
      return kExitError;
  }
}

int cmd_eval(CommonArgs args, std::string trace_file) {
  // with an inline --formula the first positional is the trace
  if (trace_file.empty() && !args.formula_text.empty() && !args.formula_file.empty()) {
    trace_file = args.formula_file;
    args.formula_file.clear();
  }
  if (trace_file.empty()) throw Error("eval requires a trace file");
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  Interval iv = parse_trace(read_file(trace_file), cfg);
  bool ok = models(iv, p, cfg);
  if (args.format == "json")
    std::cout << nlohmann::json{{"result", ok}}.dump(2) << "\n";
  else
    std::cout << (ok ? "true" : "false") << "\n";
  return ok ? kExitTrue : kExitFalse;
}

int cmd_translate(const CommonArgs& args) {
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  VarVector c = pick_vector(p, args, cfg);
  TranslationContext tctx;
  tctx.next_index = static_cast<unsigned>(c.size()) + 1;
  TempF r = translate_F(p, c, cfg, tctx);
  std::cout << to_string(display_formula(r, cfg)) << "\n";
  return 0;
}

int cmd_nf(const CommonArgs& args) {
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  VarVector c = pick_vector(p, args, cfg);
  NormalForm n = nf(p, c, cfg);
  if (args.format == "json") {
    nlohmann::json out;
    out["terminals"] = nlohmann::json::array();
    for (const auto& t : n.terminals)
      out["terminals"].push_back(to_string(t.to_formula()));
    out["futures"] = nlohmann::json::array();
    for (const auto& f : n.futures)
      out["futures"].push_back({{"guard", to_string(f.guard.to_formula())},
                                {"next", to_string(f.succ)}});
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& t : n.terminals)
      std::cout << "terminal: " << to_string(t.to_formula()) << " && eps\n";
    for (const auto& f : n.futures)
      std::cout << "future:   " << to_string(f.guard.to_formula()) << " && X ("
                << to_string(f.succ) << ")\n";
    if (n.is_false()) std::cout << "false (no clauses)\n";
  }
  return 0;
}

int cmd_nfg(const CommonArgs& args) {
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  VarVector c = pick_vector(p, args, cfg);
  DecisionOptions opts;
  opts.node_budget = args.node_budget;
  NormalFormGraph g = build_nfg(p, c, cfg, opts);
  std::cout << to_dot(g);
  return 0;
}

int cmd_iso(const CommonArgs& args) {
  Config cfg{args.max_loc};
  TempF p = load_formula(args, cfg);
  if (!is_restricted(p))
    throw Error("iso expects a restricted formula (equations only; translate first)");
  NameTable tbl;
  PptlF q = G(p, tbl);
  if (args.format == "json") {
    nlohmann::json out;
    out["pptl"] = to_string(q);
    out["vars"] = nlohmann::json::array();
    for (std::size_t i = 0; i < tbl.vars.size(); ++i)
      out["vars"].push_back({{"index", i}, {"name", tbl.vars[i]}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << to_string(q) << "\n";
    for (std::size_t i = 0; i < tbl.vars.size(); ++i)
      std::cout << i << "\t" << tbl.vars[i] << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satisfiability checker, translator and trace evaluator for PPTL-SL"};
  app.require_subcommand(1);

  CommonArgs check_args, eval_args, translate_args, nf_args, nfg_args, iso_args;
  std::string trace_file;

  auto* check = app.add_subcommand("check", "decide satisfiability");
  add_common(check, check_args);
  auto* eval = app.add_subcommand("eval", "evaluate a formula over a trace");
  add_common(eval, eval_args);
  eval->add_option("trace", trace_file, "JSON trace file");
  auto* translate = app.add_subcommand("translate", "print the heap-free translation");
  add_common(translate, translate_args);
  auto* nfcmd = app.add_subcommand("nf", "print the normal form");
  add_common(nfcmd, nf_args);
  auto* nfg = app.add_subcommand("nfg", "print the normal form graph as DOT");
  add_common(nfg, nfg_args);
  auto* iso = app.add_subcommand("iso", "print the isomorphic PPTL image");
  add_common(iso, iso_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;  // --help exits cleanly
  }

  try {
    if (check->parsed()) return cmd_check(check_args);
    if (eval->parsed()) return cmd_eval(eval_args, trace_file);
    if (translate->parsed()) return cmd_translate(translate_args);
    if (nfcmd->parsed()) return cmd_nf(nf_args);
    if (nfg->parsed()) return cmd_nfg(nfg_args);
    if (iso->parsed()) return cmd_iso(iso_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
