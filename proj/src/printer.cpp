#include "pptlsl/printer.hpp"

#include <sstream>

namespace pptlsl {

namespace {

// Precedence levels shared by the state and temporal layers:
//   0 quantifier body (maximal)   1 ->   2 ||   3 &&   4 ;   5 *
//   6 prefix (!, X, [], <>)       7 postfix (^*, ^+)   8 atom
constexpr int kQuant = 0;
constexpr int kImplies = 1;
constexpr int kOr = 2;
constexpr int kAnd = 3;
constexpr int kChop = 4;
constexpr int kSep = 5;
constexpr int kPrefix = 6;
constexpr int kAtom = 8;

void print_state(std::ostream& os, const StateF& f, int required);
void print_temp(std::ostream& os, const TempF& p, int required);

template <typename F>
void parens(std::ostream& os, bool need, F&& body) {
  if (need) os << '(';
  body();
  if (need) os << ')';
}

void print_state(std::ostream& os, const StateF& f, int required) {
  auto infix = [&](const char* sym, int prec, int lp, int rp) {
    parens(os, prec < required, [&] {
      print_state(os, f->a, lp);
      os << ' ' << sym << ' ';
      print_state(os, f->b, rp);
    });
  };
  switch (f->op) {
    case StateOp::True: os << "true"; return;
    case StateOp::False: os << "false"; return;
    case StateOp::Emp: os << "emp"; return;
    case StateOp::Eq:
      parens(os, kAtom - 1 < required, [&] { os << to_string(f->lhs) << " = " << to_string(f->rhs); });
      return;
    case StateOp::PointsTo:
      parens(os, kAtom - 1 < required, [&] { os << to_string(f->lhs) << " |-> " << to_string(f->rhs); });
      return;
    case StateOp::Hook:
      parens(os, kAtom - 1 < required, [&] { os << to_string(f->lhs) << " ~> " << to_string(f->rhs); });
      return;
    case StateOp::Alloc: os << "alloc(" << to_string(f->lhs) << ")"; return;
    case StateOp::PredGeq: os << "cnt(" << to_string(f->lhs) << ") >= " << f->count; return;
    case StateOp::PredLeq: os << "cnt(" << to_string(f->lhs) << ") <= " << f->count; return;
    case StateOp::PredEq: os << "cnt(" << to_string(f->lhs) << ") == " << f->count; return;
    case StateOp::RPlus:
      os << "rplus(" << to_string(f->lhs) << ", " << to_string(f->rhs) << ")";
      return;
    case StateOp::Ls:
      os << "ls(" << to_string(f->lhs) << ", " << to_string(f->rhs) << ")";
      return;
    case StateOp::Neg:
      parens(os, kPrefix < required, [&] {
        os << '!';
        print_state(os, f->a, kAtom);
      });
      return;
    case StateOp::Or: infix("||", kOr, kOr, kOr + 1); return;
    case StateOp::And: infix("&&", kAnd, kAnd, kAnd + 1); return;
    case StateOp::Implies: infix("->", kImplies, kImplies + 1, kImplies); return;
    case StateOp::SepConj: infix("*", kSep, kSep, kSep + 1); return;
    case StateOp::Exists:
    case StateOp::Forall:
      parens(os, kQuant < required, [&] {
        os << (f->op == StateOp::Exists ? "exists " : "forall ") << f->binder << " . ";
        print_state(os, f->a, kQuant);
      });
      return;
    case StateOp::BoundedOr:
      parens(os, kQuant < required, [&] {
        os << "bigvee {";
        for (std::size_t i = 0; i < f->binders.size(); ++i) {
          if (i) os << ", ";
          os << f->binders[i];
        }
        os << "} . ";
        print_state(os, f->a, kQuant);
      });
      return;
  }
}

void print_temp(std::ostream& os, const TempF& p, int required) {
  auto infix = [&](const char* sym, int prec, int lp, int rp) {
    parens(os, prec < required, [&] {
      print_temp(os, p->kids[0], lp);
      os << ' ' << sym << ' ';
      print_temp(os, p->kids[1], rp);
    });
  };
  auto prefix = [&](const std::string& sym) {
    parens(os, kPrefix < required, [&] {
      os << sym << ' ';
      print_temp(os, p->kids[0], kPrefix);
    });
  };
  switch (p->op) {
    case TempOp::State: print_state(os, p->state, required); return;
    case TempOp::Neg:
      parens(os, kPrefix < required, [&] {
        os << '!';
        print_temp(os, p->kids[0], kAtom);
      });
      return;
    case TempOp::Or: infix("||", kOr, kOr, kOr + 1); return;
    case TempOp::And: infix("&&", kAnd, kAnd, kAnd + 1); return;
    case TempOp::Implies: infix("->", kImplies, kImplies + 1, kImplies); return;
    case TempOp::Chop: infix(";", kChop, kChop, kChop + 1); return;
    case TempOp::Next: prefix("X"); return;
    case TempOp::NextN: prefix("X^" + std::to_string(p->n)); return;
    case TempOp::Always: prefix("[]"); return;
    case TempOp::Sometimes: prefix("<>"); return;
    case TempOp::Empty: os << "eps"; return;
    case TempOp::Star:
      os << '(';
      print_temp(os, p->kids[0], kQuant);
      os << ")^*";
      return;
    case TempOp::Plus:
      os << '(';
      print_temp(os, p->kids[0], kQuant);
      os << ")^+";
      return;
    case TempOp::Prj:
      os << '(';
      for (std::size_t i = 0; i + 1 < p->kids.size(); ++i) {
        if (i) os << ", ";
        print_temp(os, p->kids[i], kQuant);
      }
      os << ") prj ";
      print_temp(os, p->kids.back(), kPrefix);
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  return t.is_const() ? std::to_string(t.value) : t.name;
}

std::string to_string(const StateF& f) {
  std::ostringstream os;
  print_state(os, f, kQuant);
  return os.str();
}

std::string to_string(const TempF& p) {
  std::ostringstream os;
  print_temp(os, p, kQuant);
  return os.str();
}

}  // namespace pptlsl
