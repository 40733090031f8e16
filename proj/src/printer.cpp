#include "seqsl/formula.hpp"

namespace seqsl {

std::string to_string(const IndTerm& t) {
  switch (t.kind) {
    case IndTerm::Kind::Nil:
      return "nil";
    case IndTerm::Kind::Hash:
      return "#";
    case IndTerm::Kind::Nat:
      return std::to_string(t.n);
    case IndTerm::Kind::Var:
      break;
  }
  return t.name;
}

namespace {

void print_seq(const SeqTerm& t, std::string& out) {
  switch (t.kind()) {
    case SeqTerm::Kind::Empty:
      out += "eps";
      return;
    case SeqTerm::Kind::Lift:
      out += to_string(t.ind());
      return;
    case SeqTerm::Kind::Var:
      out += "@" + t.name();
      return;
    case SeqTerm::Kind::Concat:
      print_seq(t.left(), out);
      out += " ^ ";
      if (t.right().kind() == SeqTerm::Kind::Concat) {
        out += "(";
        print_seq(t.right(), out);
        out += ")";
      } else {
        print_seq(t.right(), out);
      }
      return;
  }
}

bool is_forall(const Formula& f) {
  return f.op() == Op::Not &&
         (f.a().op() == Op::ExistsProg || f.a().op() == Op::ExistsSeq) &&
         f.a().body().op() == Op::Not;
}

bool is_infix_macro(const Formula& f) {
  return f.op() == Op::Macro && (f.macro_name() == "hook" || f.macro_name() == "septraction") &&
         f.macro_args().size() == 2;
}

int prec(const Formula& f) {
  switch (f.op()) {
    case Op::ExistsProg:
    case Op::ExistsSeq:
      return 0;
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    case Op::Wand:
      return 4;
    case Op::SepConj:
      return 5;
    case Op::Not:
      return is_forall(f) ? 0 : 6;
    case Op::Macro:
      return f.macro_name() == "septraction" && is_infix_macro(f) ? 4 : 7;
    default:
      return 7;
  }
}

void print(const Formula& f, int min_prec, std::string& out);

void print_binder(const std::string& q, Op op, const std::string& var, const Formula& body,
                  std::string& out) {
  out += q;
  out += op == Op::ExistsSeq ? " @" : " ";
  out += var;
  out += ". ";
  print(body, 0, out);
}

void print_arg(const MacroArg& a, std::string& out) {
  switch (a.sort) {
    case MacroArg::Sort::Ind:
      out += to_string(a.ind);
      return;
    case MacroArg::Sort::Seq:
      print_seq(a.seq, out);
      return;
    case MacroArg::Sort::Nat:
      out += std::to_string(a.n);
      return;
    case MacroArg::Sort::Form:
      print(a.form, 0, out);
      return;
  }
}

void print_body(const Formula& f, std::string& out) {
  auto bin = [&](const char* sym, int lp, int rp) {
    print(f.a(), lp, out);
    out += sym;
    print(f.b(), rp, out);
  };
  switch (f.op()) {
    case Op::IndEq:
      out += to_string(f.lhs_ind()) + " = " + to_string(f.rhs_ind());
      return;
    case Op::SeqEq:
      print_seq(f.lhs_seq(), out);
      out += " == ";
      print_seq(f.rhs_seq(), out);
      return;
    case Op::PointsTo:
      out += to_string(f.loc()) + " |-> ";
      print_seq(f.content(), out);
      return;
    case Op::Emp:
      out += "emp";
      return;
    case Op::True:
      out += "true";
      return;
    case Op::False:
      out += "false";
      return;
    case Op::Not:
      if (is_forall(f)) {
        print_binder("forall", f.a().op(), f.a().var(), f.a().body().a(), out);
        return;
      }
      out += "~";
      print(f.a(), 6, out);
      return;
    case Op::Implies:
      bin(" => ", 2, 1);
      return;
    case Op::Or:
      bin(" \\/ ", 2, 3);
      return;
    case Op::And:
      bin(" /\\ ", 3, 4);
      return;
    case Op::Wand:
      bin(" -* ", 5, 4);
      return;
    case Op::SepConj:
      bin(" * ", 5, 6);
      return;
    case Op::ExistsProg:
    case Op::ExistsSeq:
      print_binder("exists", f.op(), f.var(), f.body(), out);
      return;
    case Op::Macro: {
      const auto& args = f.macro_args();
      if (is_infix_macro(f) && f.macro_name() == "hook") {
        print_arg(args[0], out);
        out += " ~> ";
        print_arg(args[1], out);
        return;
      }
      if (is_infix_macro(f)) {
        print(args[0].form, 5, out);
        out += " -o ";
        print(args[1].form, 4, out);
        return;
      }
      out += f.macro_name();
      out += "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        print_arg(args[i], out);
      }
      out += ")";
      return;
    }
  }
}

void print(const Formula& f, int min_prec, std::string& out) {
  if (prec(f) < min_prec) {
    out += "(";
    print_body(f, out);
    out += ")";
  } else {
    print_body(f, out);
  }
}

}  // namespace

std::string to_string(const SeqTerm& t) {
  std::string out;
  print_seq(t, out);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

}  // namespace seqsl
