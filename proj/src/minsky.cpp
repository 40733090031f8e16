#include "seqsl/minsky.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "seqsl/macros.hpp"

namespace seqsl::minsky {

Instruction inc(int counter, std::size_t next) {
  Instruction i;
  i.kind = Instruction::Kind::Inc;
  i.counter = counter;
  i.next = next;
  return i;
}

Instruction test(int counter, std::size_t on_zero, std::size_t on_dec) {
  Instruction i;
  i.kind = Instruction::Kind::Test;
  i.counter = counter;
  i.on_zero = on_zero;
  i.on_dec = on_dec;
  return i;
}

Instruction halt() { return {}; }

void validate_machine(const Machine& m) {
  const std::size_t n = m.n();
  if (n == 0) throw MachineError("machine has no instructions");
  auto target = [&](std::size_t i, std::size_t k) {
    if (k < 1 || k > n)
      throw MachineError("instruction " + std::to_string(i) + " jumps to " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const Instruction& ins = m.at(i);
    if ((ins.kind == Instruction::Kind::Halt) != (i == n))
      throw MachineError(i == n ? "last instruction must be halt"
                                : "halt at " + std::to_string(i) + " before the last instruction");
    if (ins.kind == Instruction::Kind::Halt) continue;
    if (ins.counter != 1 && ins.counter != 2)
      throw MachineError("instruction " + std::to_string(i) + " names counter C" + std::to_string(ins.counter));
    if (ins.kind == Instruction::Kind::Inc) {
      target(i, ins.next);
    } else {
      target(i, ins.on_zero);
      target(i, ins.on_dec);
    }
  }
}

Machine parse_machine(const std::string& text) {
  static const std::regex inc_re(R"(^\s*(\d+)\s*:\s*inc\s+C([0-9]+)\s+goto\s+(\d+)\s*$)", std::regex::icase);
  static const std::regex test_re(R"(^\s*(\d+)\s*:\s*test\s+C([0-9]+)\s+zero\s+(\d+)\s+dec\s+(\d+)\s*$)",
                                  std::regex::icase);
  static const std::regex halt_re(R"(^\s*(\d+)\s*:\s*halt\s*$)", std::regex::icase);
  std::map<std::size_t, Instruction> by_index;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto num = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch mt;
    Instruction ins;
    if (std::regex_match(line, mt, inc_re)) {
      ins = inc(static_cast<int>(num(mt[2])), num(mt[3]));
    } else if (std::regex_match(line, mt, test_re)) {
      ins = test(static_cast<int>(num(mt[2])), num(mt[3]), num(mt[4]));
    } else if (std::regex_match(line, mt, halt_re)) {
      ins = halt();
    } else {
      throw MachineError("line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
    }
    if (!by_index.emplace(num(mt[1]), ins).second)
      throw MachineError("line " + std::to_string(line_no) + ": instruction " + mt[1].str() + " defined twice");
  }
  Machine m;
  std::size_t expect = 1;
  for (const auto& [i, ins] : by_index) {
    if (i != expect) throw MachineError("instruction " + std::to_string(expect) + " is missing");
    m.instructions.push_back(ins);
    ++expect;
  }
  validate_machine(m);
  return m;
}

Machine load_machine(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MachineError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_machine(ss.str());
}

std::string to_string(const Machine& m) {
  std::string out;
  for (std::size_t i = 1; i <= m.n(); ++i) {
    const Instruction& ins = m.at(i);
    out += std::to_string(i) + ": ";
    switch (ins.kind) {
      case Instruction::Kind::Inc:
        out += "inc C" + std::to_string(ins.counter) + " goto " + std::to_string(ins.next);
        break;
      case Instruction::Kind::Test:
        out += "test C" + std::to_string(ins.counter) + " zero " + std::to_string(ins.on_zero) + " dec " +
               std::to_string(ins.on_dec);
        break;
      case Instruction::Kind::Halt:
        out += "halt";
        break;
    }
    out += "\n";
  }
  return out;
}

std::string to_string(const State& s) {
  return "(" + std::to_string(s.pointer) + ", " + std::to_string(s.c1) + ", " + std::to_string(s.c2) + ")";
}

Run simulate(const Machine& m, std::size_t max_steps) {
  validate_machine(m);
  Run run;
  State s;
  run.states.push_back(s);
  while (true) {
    const Instruction& ins = m.at(s.pointer);
    if (ins.kind == Instruction::Kind::Halt) {
      run.halted = true;
      return run;
    }
    if (run.steps() >= max_steps) return run;
    std::uint64_t& c = ins.counter == 1 ? s.c1 : s.c2;
    if (ins.kind == Instruction::Kind::Inc) {
      ++c;
      s.pointer = ins.next;
    } else if (c == 0) {
      s.pointer = ins.on_zero;
    } else {
      --c;
      s.pointer = ins.on_dec;
    }
    run.states.push_back(s);
  }
}

Formula sapling(const IndTerm& x0, const IndTerm& x0p) { return mk::and_all(sapling_parts(x0, x0p)); }

namespace {

SeqTerm nil() { return SeqTerm::lift(IndTerm::nil()); }
SeqTerm nils(std::size_t k) { return nil_block(k); }

Formula exists_all(const std::vector<std::string>& progs, const std::vector<std::string>& seqs, Formula body) {
  for (auto it = seqs.rbegin(); it != seqs.rend(); ++it) body = mk::exists_seq(*it, body);
  for (auto it = progs.rbegin(); it != progs.rend(); ++it) body = mk::exists_prog(*it, body);
  return body;
}

struct Period {
  std::string x0, xk, xc1, xc2;
};

Formula hook(const std::string& x, std::vector<SeqTerm> parts) { return mk::hook(iv(x), cat(parts)); }

// x0 ↪ xk∘ε * xk ↪ xc1∘k * xc1 ↪ xc2∘c1 * xc2 ↪ next∘c2, with next absent for the last period.
Formula period(const Period& p, SeqTerm k, SeqTerm c1, SeqTerm c2, const std::string* next) {
  return mk::sep_all({hook(p.x0, {lift_var(p.xk), SeqTerm::empty()}), hook(p.xk, {lift_var(p.xc1), k}),
                      hook(p.xc1, {lift_var(p.xc2), c1}),
                      hook(p.xc2, {next ? lift_var(*next) : SeqTerm::empty(), c2})});
}

Formula fin_state(const Period& p, std::size_t n, const SeqTerm& a1, const SeqTerm& a2) {
  return period(p, nils(n), cat({a1, nil()}), cat({a2, nil()}), nullptr);
}

Formula curr_state(const Period& p, const std::string& next, const SeqTerm& ak, const SeqTerm& a1,
                   const SeqTerm& a2) {
  return period(p, ak, cat({a1, nil()}), cat({a2, nil()}), &next);
}

Formula last_state(const Period& p, const SeqTerm& ak, const SeqTerm& a1, const SeqTerm& a2) {
  return period(p, ak, cat({a1, nil()}), cat({a2, nil()}), nullptr);
}

struct Alphas {
  SeqTerm k, c1, c2;
  const SeqTerm& c(int j) const { return j == 1 ? c1 : c2; }
};

Formula next_rel(const Machine& m, const Alphas& a, const Alphas& b) {
  std::vector<Formula> conj;
  for (std::size_t i = 1; i < m.n(); ++i) {
    const Instruction& ins = m.at(i);
    const int j = ins.counter, o = 3 - ins.counter;
    Formula at_i = mk::seq_eq(a.k, nils(i));
    Formula effect;
    if (ins.kind == Instruction::Kind::Inc) {
      effect = mk::and_all({mk::seq_eq(b.c(j), cat({a.c(j), nil()})), mk::seq_eq(b.c(o), a.c(o)),
                            mk::seq_eq(b.k, nils(ins.next))});
    } else {
      Formula zero = mk::seq_eq(a.c(j), SeqTerm::empty());
      Formula stay = mk::and_all({mk::seq_eq(b.c1, a.c1), mk::seq_eq(b.c2, a.c2), mk::seq_eq(b.k, nils(ins.on_zero))});
      Formula dec = mk::and_all({mk::seq_eq(cat({b.c(j), nil()}), a.c(j)), mk::seq_eq(b.c(o), a.c(o)),
                                 mk::seq_eq(b.k, nils(ins.on_dec))});
      effect = mk::and_(mk::implies(zero, stay), mk::implies(mk::not_(zero), dec));
    }
    conj.push_back(mk::implies(at_i, effect));
  }
  return mk::and_all(conj);
}

Formula init(const Alphas& a, const Alphas& b) {
  return mk::and_all({lib::ini(a.k), lib::ini(a.c1), lib::ini(a.c2), lib::ini(b.k), lib::ini(b.c1), lib::ini(b.c2)});
}

struct Parts {
  Formula phi1, phi2, phi3;
  // Quantifier-free bodies and binders for the regrouped form.
  std::vector<std::string> p2_progs, p2_seqs, p3_forall, p3_progs, p3_seqs;
  Formula phi2_body, phi3_body;
};

Parts parts(const Machine& m) {
  validate_machine(m);
  const std::size_t n = m.n();
  Parts out;
  auto psis = sapling_parts(iv(kFirst), iv(kLast));
  out.phi1 = mk::and_(psis[0], psis[1]);

  Period init_p{kFirst, "ik", "ic1", "ic2"};
  Period fin_p{"f0", "fk", "fc1", "fc2"};
  if (n == 1) {
    out.p2_progs = {"ik", "ic1", "ic2"};
    out.phi2_body = fin_state(init_p, 1, SeqTerm::empty(), SeqTerm::empty());
  } else {
    out.p2_progs = {"ik", "ic1", "ic2", "i1", "f0", "fk", "fc1", "fc2"};
    out.p2_seqs = {"fa1", "fa2"};
    const std::string after = "i1";
    out.phi2_body = mk::sep(period(init_p, nils(1), nil(), nil(), &after),
                            fin_state(fin_p, n, sv("fa1"), sv("fa2")));
  }
  out.phi2 = exists_all(out.p2_progs, out.p2_seqs, out.phi2_body);

  Period cur{"y0", "yk", "yc1", "yc2"};
  Period nxt{"z0", "zk", "zc1", "zc2"};
  Alphas a{sv("ak"), sv("ac1"), sv("ac2")};
  Alphas b{sv("bk"), sv("bc1"), sv("bc2")};
  Formula next_state =
      mk::and_all({init(a, b), mk::or_(curr_state(nxt, "w0", b.k, b.c1, b.c2), last_state(nxt, b.k, b.c1, b.c2)),
                   next_rel(m, a, b)});
  out.phi3_body = mk::implies(
      hook(cur.x0, {lift_var(cur.xk), SeqTerm::empty()}),
      mk::or_(fin_state(cur, n, a.c1, a.c2), mk::and_(curr_state(cur, nxt.x0, a.k, a.c1, a.c2), next_state)));
  out.p3_forall = {cur.x0, cur.xk};
  out.p3_progs = {cur.xc1, cur.xc2, nxt.x0, nxt.xk, nxt.xc1, nxt.xc2, "w0"};
  out.p3_seqs = {"ak", "ac1", "ac2", "bk", "bc1", "bc2"};
  Formula phi3 = exists_all(out.p3_progs, out.p3_seqs, out.phi3_body);
  for (auto it = out.p3_forall.rbegin(); it != out.p3_forall.rend(); ++it) phi3 = mk::forall_prog(*it, phi3);
  out.phi3 = phi3;
  return out;
}

}  // namespace

Formula encode(const Machine& m, const EncodeOptions& opt) {
  Parts p = parts(m);
  if (!opt.regrouped) return mk::and_all({p.phi1, p.phi2, p.phi3});
  std::vector<std::string> progs = p.p2_progs, seqs = p.p2_seqs;
  progs.insert(progs.end(), p.p3_progs.begin(), p.p3_progs.end());
  seqs.insert(seqs.end(), p.p3_seqs.begin(), p.p3_seqs.end());
  Formula rest = exists_all(progs, seqs, mk::and_(p.phi2_body, p.phi3_body));
  for (auto it = p.p3_forall.rbegin(); it != p.p3_forall.rend(); ++it) rest = mk::forall_prog(*it, rest);
  return mk::and_(p.phi1, rest);
}

Model chain_model(const std::vector<std::size_t>& paddings) {
  Model out;
  const std::size_t cells = paddings.size();
  for (std::size_t i = 0; i < cells; ++i) {
    Word w;
    if (i + 1 < cells) w.push_back(Value::nat(i + 2));
    w.insert(w.end(), paddings[i], Value::nil());
    out.heap.emplace(i + 1, std::move(w));
  }
  if (cells > 0) {
    out.stack[kFirst] = Value::nat(1);
    out.stack[kLast] = Value::nat(cells);
  }
  return out;
}

Model build_run_model(const Run& run) {
  if (!run.halted || run.states.empty()) throw std::invalid_argument("run did not halt");
  std::vector<std::size_t> pads;
  for (const State& s : run.states) {
    pads.push_back(0);
    pads.push_back(s.pointer);
    pads.push_back(static_cast<std::size_t>(s.c1) + 1);
    pads.push_back(static_cast<std::size_t>(s.c2) + 1);
  }
  return chain_model(pads);
}

namespace {

std::uint64_t first_free(const Model& m) {
  std::uint64_t top = 0;
  for (const auto& [l, w] : m.heap) {
    top = std::max(top, l);
    for (Value v : w)
      if (v.is_nat()) top = std::max(top, v.nat_value());
  }
  for (const auto& [x, v] : m.stack)
    if (v.is_nat()) top = std::max(top, v.nat_value());
  for (const auto& [a, w] : m.seq)
    for (Value v : w)
      if (v.is_nat()) top = std::max(top, v.nat_value());
  return top + 1;
}

}  // namespace

Model inject_circle(const Model& m, std::size_t length) {
  if (length == 0) throw std::invalid_argument("circle length must be positive");
  Model out = m;
  const std::uint64_t base = first_free(m);
  for (std::uint64_t i = 0; i < length; ++i) out.heap[base + i] = Word{Value::nat(base + (i + 1) % length)};
  return out;
}

Model remove_circles(const Model& m) {
  auto succ = [&](std::uint64_t l) -> std::optional<std::uint64_t> {
    auto it = m.heap.find(l);
    if (it == m.heap.end() || it->second.empty() || !it->second[0].is_nat()) return std::nullopt;
    std::uint64_t t = it->second[0].nat_value();
    if (!m.heap.count(t)) return std::nullopt;
    return t;
  };
  Model out = m;
  for (const auto& [l, w] : m.heap) {
    std::optional<std::uint64_t> cur = succ(l);
    for (std::size_t steps = 0; cur && steps < m.heap.size(); ++steps) {
      if (*cur == l) {
        out.heap.erase(l);
        break;
      }
      cur = succ(*cur);
    }
  }
  return out;
}

CheckConfig check_config(const Model& m) {
  CheckConfig cfg;
  std::size_t longest = 0;
  for (const auto& [l, w] : m.heap) longest = std::max(longest, w.size());
  cfg.seq_len_bound = longest;
  return cfg;
}

Validation validate(const Machine& m, std::size_t max_steps, const EncodeOptions& opt) {
  Validation out;
  out.run = simulate(m, max_steps);
  if (!out.run.halted) {
    out.reason = "no halt within " + std::to_string(max_steps) + " steps";
    return out;
  }
  Model model = build_run_model(out.run);
  Verdict3 v = check(model, encode(m, opt), check_config(model));
  out.truth = v.truth;
  out.reason = v.reason;
  return out;
}

Refutation refute_chains(const Machine& m, std::size_t max_periods, std::size_t max_padding,
                         const EncodeOptions& opt) {
  Refutation out;
  CheckConfig cfg;
  cfg.seq_len_bound = max_padding + 1;
  // Cheapest to falsify first: the initial/final state conjunct, then the transitions.
  std::vector<Formula> conj;
  std::vector<Formula> todo{encode(m, opt)};
  while (!todo.empty()) {
    Formula f = todo.back();
    todo.pop_back();
    if (f.op() == Op::And) {
      todo.push_back(f.a());
      todo.push_back(f.b());
    } else {
      conj.push_back(f);
    }
  }
  std::stable_partition(conj.begin(), conj.end(), [](const Formula& f) { return f.op() == Op::ExistsProg; });
  std::vector<Checker> checkers;
  for (const auto& f : conj) checkers.emplace_back(f, cfg);
  for (std::size_t periods = 1; periods <= max_periods; ++periods) {
    const std::size_t slots = 3 * periods;
    std::vector<std::size_t> digits(slots, 1);
    while (true) {
      std::vector<std::size_t> pads;
      for (std::size_t p = 0; p < periods; ++p) {
        pads.push_back(0);
        for (std::size_t j = 0; j < 3; ++j) pads.push_back(digits[3 * p + j]);
      }
      Model model = chain_model(pads);
      Truth t = Truth::True;
      for (const auto& c : checkers) {
        Truth r = c.check(model).truth;
        if (r == Truth::False) {
          t = r;
          break;
        }
        if (r == Truth::Unknown) t = r;
      }
      ++out.models;
      if (t == Truth::True) ++out.satisfying;
      if (t == Truth::Unknown) ++out.unknown;
      std::size_t i = 0;
      while (i < slots && digits[i] == max_padding) digits[i++] = 1;
      if (i == slots) break;
      ++digits[i];
    }
  }
  return out;
}

}  // namespace seqsl::minsky
