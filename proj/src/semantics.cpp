#include "seqsl/semantics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "seqsl/errors.hpp"
#include "seqsl/macros.hpp"

namespace seqsl {

std::string truth_name(Truth t) {
  switch (t) {
    case Truth::True:
      return "true";
    case Truth::False:
      return "false";
    case Truth::Unknown:
      break;
  }
  return "unknown";
}

namespace {

// F and T are certified, U is a bounded search that found nothing, D means
// the value depends on variables that are not assigned yet.
enum class T3 : std::uint8_t { F, T, U, D };

T3 neg(T3 a) { return a == T3::F ? T3::T : a == T3::T ? T3::F : a; }
T3 and3(T3 a, T3 b) {
  if (a == T3::F || b == T3::F) return T3::F;
  if (a == T3::D || b == T3::D) return T3::D;
  if (a == T3::U || b == T3::U) return T3::U;
  return T3::T;
}
T3 or3(T3 a, T3 b) { return neg(and3(neg(a), neg(b))); }

enum class K : std::uint8_t {
  IndEq, SeqEq, PointsTo, Emp, True, False, Not, And, Or, Implies, Sep, Wand, Exists
};

struct Sym {
  enum Kind : std::uint8_t { Const, Prog, Seq } kind = Const;
  Value v;
  int slot = -1;
};

struct BVar {
  bool seq = false;
  int slot = 0;
};

struct Node {
  K k = K::True;
  Sym a, b;
  std::vector<Sym> s1, s2;
  std::vector<int> kids;
  std::vector<BVar> vars;
  std::vector<int> fprog, fseq;
  bool qf = true;
  bool pure = true;
  std::size_t sz = 0;
  std::size_t bsz = 0;
  std::vector<std::vector<Sym>> terms;
};

struct Compiled {
  std::vector<Node> nodes;
  int root = 0;
  int nprog = 0;
  int nseq = 0;
  std::map<std::string, int> free_prog, free_seq;
  std::vector<std::string> prog_name, seq_name;
  std::vector<Value> constants;
};

bool has_slot(const std::vector<int>& v, int s) { return std::binary_search(v.begin(), v.end(), s); }

void merge_into(std::vector<int>& dst, const std::vector<int>& src) {
  std::vector<int> out;
  std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(out));
  dst = std::move(out);
}

class Compiler {
 public:
  explicit Compiler(Compiled& c) : c_(c) {}

  int compile(const Formula& f) {
    switch (f.op()) {
      case Op::IndEq: {
        Node n;
        n.k = K::IndEq;
        n.a = ind(f.lhs_ind());
        n.b = ind(f.rhs_ind());
        return add(std::move(n));
      }
      case Op::SeqEq: {
        Node n;
        n.k = K::SeqEq;
        n.s1 = seq(f.lhs_seq());
        n.s2 = seq(f.rhs_seq());
        return add(std::move(n));
      }
      case Op::PointsTo: {
        Node n;
        n.k = K::PointsTo;
        n.a = ind(f.loc());
        n.s1 = seq(f.content());
        return add(std::move(n));
      }
      case Op::Emp:
        return leaf(K::Emp);
      case Op::True:
        return leaf(K::True);
      case Op::False:
        return leaf(K::False);
      case Op::Not: {
        Node n;
        n.k = K::Not;
        n.kids = {compile(f.a())};
        return add(std::move(n));
      }
      case Op::And: {
        int a = compile(f.a());
        int b = compile(f.b());
        std::vector<BVar> vars;
        a = peel(a, vars);
        b = peel(b, vars);
        Node n;
        n.k = K::And;
        n.kids = {a, b};
        return exists(std::move(vars), add(std::move(n)));
      }
      case Op::Or:
      case Op::Implies:
      case Op::Wand: {
        Node n;
        n.k = f.op() == Op::Or ? K::Or : f.op() == Op::Implies ? K::Implies : K::Wand;
        n.kids = {compile(f.a()), compile(f.b())};
        return add(std::move(n));
      }
      case Op::SepConj: {
        std::vector<int> work = {compile(f.a()), compile(f.b())};
        std::vector<BVar> vars;
        std::vector<int> chain;
        while (!work.empty()) {
          int i = peel(work.front(), vars);
          work.erase(work.begin());
          if (c_.nodes[i].k == K::Sep) {
            auto ks = c_.nodes[i].kids;
            work.insert(work.begin(), ks.begin(), ks.end());
          } else {
            chain.push_back(i);
          }
        }
        Node n;
        n.k = K::Sep;
        n.kids = std::move(chain);
        return exists(std::move(vars), add(std::move(n)));
      }
      case Op::ExistsProg:
      case Op::ExistsSeq: {
        bool is_seq = f.op() == Op::ExistsSeq;
        auto& scope = is_seq ? seq_scope_ : prog_scope_;
        int slot = is_seq ? new_seq(f.var()) : new_prog(f.var());
        auto old = scope.find(f.var());
        std::optional<int> saved;
        if (old != scope.end()) saved = old->second;
        scope[f.var()] = slot;
        int body = compile(f.body());
        if (saved)
          scope[f.var()] = *saved;
        else
          scope.erase(f.var());
        return exists({BVar{is_seq, slot}}, body);
      }
      case Op::Macro:
        return compile(expand_macros(f));
    }
    throw std::logic_error("unhandled operator");
  }

 private:
  Compiled& c_;
  std::map<std::string, int> prog_scope_, seq_scope_;

  int new_prog(const std::string& name) {
    c_.prog_name.push_back(name);
    return c_.nprog++;
  }
  int new_seq(const std::string& name) {
    c_.seq_name.push_back(name);
    return c_.nseq++;
  }

  int prog_slot(const std::string& name) {
    if (auto it = prog_scope_.find(name); it != prog_scope_.end()) return it->second;
    if (auto it = c_.free_prog.find(name); it != c_.free_prog.end()) return it->second;
    int s = new_prog(name);
    c_.free_prog[name] = s;
    return s;
  }
  int seq_slot(const std::string& name) {
    if (auto it = seq_scope_.find(name); it != seq_scope_.end()) return it->second;
    if (auto it = c_.free_seq.find(name); it != c_.free_seq.end()) return it->second;
    int s = new_seq(name);
    c_.free_seq[name] = s;
    return s;
  }

  Sym ind(const IndTerm& t) {
    Sym s;
    if (!t.is_var()) {
      s.v = t.value();
      if (s.v.is_nat()) c_.constants.push_back(s.v);
      return s;
    }
    s.kind = Sym::Prog;
    s.slot = prog_slot(t.name);
    return s;
  }

  std::vector<Sym> seq(const SeqTerm& t) {
    std::vector<Sym> out;
    for (const auto& l : t.leaves()) {
      if (l.is_var) {
        Sym s;
        s.kind = Sym::Seq;
        s.slot = seq_slot(l.name);
        out.push_back(s);
      } else {
        out.push_back(ind(l.ind));
      }
    }
    return out;
  }

  int leaf(K k) {
    Node n;
    n.k = k;
    return add(std::move(n));
  }

  int peel(int i, std::vector<BVar>& vars) {
    while (c_.nodes[i].k == K::Exists) {
      const auto& vs = c_.nodes[i].vars;
      vars.insert(vars.end(), vs.begin(), vs.end());
      i = c_.nodes[i].kids[0];
    }
    return i;
  }

  int exists(std::vector<BVar> vars, int body) {
    if (vars.empty()) return body;
    if (c_.nodes[body].k == K::Exists) {
      auto inner = c_.nodes[body].vars;
      vars.insert(vars.end(), inner.begin(), inner.end());
      body = c_.nodes[body].kids[0];
    }
    Node n;
    n.k = K::Exists;
    n.vars = std::move(vars);
    n.kids = {body};
    return add(std::move(n));
  }

  static void sym_free(const Sym& s, Node& n) {
    if (s.kind == Sym::Prog) n.fprog.push_back(s.slot);
    if (s.kind == Sym::Seq) n.fseq.push_back(s.slot);
  }

  void collect_terms(int i, std::vector<std::vector<Sym>>& out) const {
    const Node& n = c_.nodes[i];
    switch (n.k) {
      case K::IndEq:
        out.push_back({n.a});
        out.push_back({n.b});
        return;
      case K::SeqEq:
        out.push_back(n.s1);
        out.push_back(n.s2);
        return;
      case K::PointsTo:
        out.push_back({n.a});
        out.push_back(n.s1);
        return;
      default:
        for (int k : n.kids) collect_terms(k, out);
    }
  }

  int add(Node n) {
    switch (n.k) {
      case K::IndEq:
        sym_free(n.a, n);
        sym_free(n.b, n);
        break;
      case K::SeqEq:
        for (const auto& s : n.s1) sym_free(s, n);
        for (const auto& s : n.s2) sym_free(s, n);
        break;
      case K::PointsTo:
        sym_free(n.a, n);
        for (const auto& s : n.s1) sym_free(s, n);
        n.pure = false;
        n.sz = 1;
        break;
      case K::Emp:
        n.pure = false;
        n.sz = 1;
        break;
      default:
        break;
    }
    std::sort(n.fprog.begin(), n.fprog.end());
    n.fprog.erase(std::unique(n.fprog.begin(), n.fprog.end()), n.fprog.end());
    std::sort(n.fseq.begin(), n.fseq.end());
    n.fseq.erase(std::unique(n.fseq.begin(), n.fseq.end()), n.fseq.end());
    for (int k : n.kids) {
      const Node& c = c_.nodes[k];
      merge_into(n.fprog, c.fprog);
      merge_into(n.fseq, c.fseq);
      n.qf = n.qf && c.qf;
      n.pure = n.pure && c.pure;
    }
    switch (n.k) {
      case K::Not:
      case K::Exists:
        n.sz = c_.nodes[n.kids[0]].sz;
        break;
      case K::And:
      case K::Or:
      case K::Implies:
        n.sz = std::max(c_.nodes[n.kids[0]].sz, c_.nodes[n.kids[1]].sz);
        break;
      case K::Sep:
        for (int k : n.kids) n.sz += c_.nodes[k].sz;
        n.pure = false;
        break;
      case K::Wand:
        n.sz = c_.nodes[n.kids[1]].sz;
        n.bsz = std::max(c_.nodes[n.kids[0]].sz, c_.nodes[n.kids[1]].sz);
        n.pure = false;
        for (int k : n.kids) collect_terms(k, n.terms);
        break;
      default:
        break;
    }
    if (n.k == K::Exists) {
      n.qf = false;
      std::vector<int> bp, bs;
      for (const auto& v : n.vars) (v.seq ? bs : bp).push_back(v.slot);
      std::sort(bp.begin(), bp.end());
      std::sort(bs.begin(), bs.end());
      std::vector<int> out;
      std::set_difference(n.fprog.begin(), n.fprog.end(), bp.begin(), bp.end(), std::back_inserter(out));
      n.fprog = std::move(out);
      out.clear();
      std::set_difference(n.fseq.begin(), n.fseq.end(), bs.begin(), bs.end(), std::back_inserter(out));
      n.fseq = std::move(out);
    }
    c_.nodes.push_back(std::move(n));
    return static_cast<int>(c_.nodes.size()) - 1;
  }
};

struct HCell {
  std::uint64_t loc;
  const Word* w;
};
using Heap = std::vector<HCell>;

const Word& empty_word() {
  static const Word w;
  return w;
}

const HCell* find_cell(const Heap& h, std::uint64_t loc) {
  auto it = std::lower_bound(h.begin(), h.end(), loc,
                             [](const HCell& c, std::uint64_t l) { return c.loc < l; });
  return it != h.end() && it->loc == loc ? &*it : nullptr;
}

// A sequence with a known prefix, a known suffix, and possibly an unknown middle.
struct PW {
  Word pre, suf;
  bool open = false;
  std::size_t min = 0;
  void clear() {
    pre.clear();
    suf.clear();
    open = false;
    min = 0;
  }
  void push(Value v) {
    (open ? suf : pre).push_back(v);
    ++min;
  }
  void hole(std::size_t m) {
    open = true;
    suf.clear();
    min += m;
  }
};

T3 pw_cmp(const PW& a, const PW& b) {
  if (!a.open && !b.open) return a.pre == b.pre ? T3::T : T3::F;
  std::size_t n = std::min(a.pre.size(), b.pre.size());
  if (!std::equal(a.pre.begin(), a.pre.begin() + n, b.pre.begin())) return T3::F;
  const Word& as = a.open ? a.suf : a.pre;
  const Word& bs = b.open ? b.suf : b.pre;
  n = std::min(as.size(), bs.size());
  if (!std::equal(as.end() - n, as.end(), bs.end() - n)) return T3::F;
  if (!a.open && a.pre.size() < b.min) return T3::F;
  if (!b.open && b.pre.size() < a.min) return T3::F;
  return T3::D;
}

using Cands = std::optional<std::vector<Word>>;

void add_nats(const Word& w, std::vector<Value>& out) {
  for (Value v : w)
    if (v.is_nat()) out.push_back(v);
}

void sort_unique(std::vector<Value>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sort_unique(std::vector<Word>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class Eval {
 public:
  Eval(const Compiled& c, const CheckConfig& cfg, const Model& m, std::vector<std::string>* trace)
      : C(c), cfg_(cfg), trace_(trace) {
    pv_.resize(C.nprog);
    pset_.assign(C.nprog, 0);
    sv_.resize(C.nseq);
    sst_.assign(C.nseq, 0);
    for (const auto& [name, slot] : C.free_prog) {
      auto it = m.stack.find(name);
      if (it == m.stack.end()) {
        missing_.push_back(name);
        continue;
      }
      pv_[slot] = it->second;
      pset_[slot] = 1;
    }
    for (const auto& [name, slot] : C.free_seq) {
      auto it = m.seq.find(name);
      if (it == m.seq.end()) {
        missing_.push_back("@" + name);
        continue;
      }
      sv_[slot] = it->second;
      sst_[slot] = 2;
    }
    base_ = C.constants;
    for (const auto& [k, v] : m.stack)
      if (v.is_nat()) base_.push_back(v);
    for (const auto& [k, w] : m.seq) add_nats(w, base_);
    for (const auto& [loc, w] : m.heap) {
      heap_.push_back({loc, &w});
      base_.push_back(Value::nat(loc));
      add_nats(w, base_);
    }
    sort_unique(base_);
  }

  // Unbound free variables are an error only when the verdict depends on them.
  T3 run() {
    T3 r = eval(C.root, heap_);
    if (r == T3::D) throw UnboundVariable(missing_.empty() ? "?" : missing_.front());
    return r;
  }
  const std::string& reason() const { return reason_; }

 private:
  const Compiled& C;
  const CheckConfig& cfg_;
  std::vector<std::string>* trace_;
  int depth_ = 0;
  std::string reason_;
  std::vector<std::string> missing_;
  std::vector<Value> pv_;
  std::vector<std::uint8_t> pset_;
  std::vector<Word> sv_;
  std::vector<std::uint8_t> sst_;  // 0 unassigned, 1 open prefix, 2 closed
  std::vector<Value> base_;
  Heap heap_;
  PW pa_, pb_;

  void note(const std::string& s) {
    if (trace_ && depth_ == 0 && trace_->size() < 1000) trace_->push_back(s);
  }
  void unknown(const std::string& why) {
    if (reason_.empty()) reason_ = why;
  }

  bool known(const Sym& s, Value& out) const {
    if (s.kind == Sym::Const) {
      out = s.v;
      return true;
    }
    if (s.kind == Sym::Prog && pset_[s.slot]) {
      out = pv_[s.slot];
      return true;
    }
    return false;
  }

  bool assigned(const Node& n) const {
    for (int s : n.fprog)
      if (!pset_[s]) return false;
    for (int s : n.fseq)
      if (sst_[s] != 2) return false;
    return true;
  }

  bool closed(const std::vector<Sym>& syms, Word& out) const {
    out.clear();
    for (const auto& s : syms) {
      Value v;
      if (s.kind == Sym::Seq) {
        if (sst_[s.slot] != 2) return false;
        const Word& w = sv_[s.slot];
        out.insert(out.end(), w.begin(), w.end());
      } else if (known(s, v)) {
        out.push_back(v);
      } else {
        return false;
      }
    }
    return true;
  }

  void build(const std::vector<Sym>& syms, PW& out) const {
    out.clear();
    for (const auto& s : syms) {
      Value v;
      if (s.kind == Sym::Seq) {
        std::uint8_t st = sst_[s.slot];
        if (st) {
          for (Value x : sv_[s.slot]) out.push(x);
        }
        if (st != 2) out.hole(0);
      } else if (known(s, v)) {
        out.push(v);
      } else {
        out.hole(1);
      }
    }
  }

  void build_word(const Word& w, PW& out) const {
    out.clear();
    out.pre = w;
    out.min = w.size();
  }

  std::string sym_str(const Sym& s) const {
    if (s.kind == Sym::Prog) return C.prog_name[s.slot];
    if (s.kind == Sym::Seq) return "@" + C.seq_name[s.slot];
    return s.v.str();
  }

  static std::string heap_str(const Heap& h) {
    std::string out = "{";
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(h[i].loc) + ": " + word_str(*h[i].w);
    }
    return out + "}";
  }

  // ---- evaluation ----

  T3 eval(int i, const Heap& h) {
    const Node& n = C.nodes[i];
    switch (n.k) {
      case K::IndEq: {
        Value a, b;
        if (!known(n.a, a) || !known(n.b, b)) return T3::D;
        return a == b ? T3::T : T3::F;
      }
      case K::SeqEq:
        build(n.s1, pa_);
        build(n.s2, pb_);
        return pw_cmp(pa_, pb_);
      case K::PointsTo: {
        if (h.size() != 1) return T3::F;
        Value loc;
        bool have = known(n.a, loc);
        if (have && (!loc.is_nat() || loc.nat_value() != h[0].loc)) return T3::F;
        build(n.s1, pa_);
        build_word(*h[0].w, pb_);
        T3 r = pw_cmp(pa_, pb_);
        return r == T3::F ? T3::F : have ? r : T3::D;
      }
      case K::Emp:
        return h.empty() ? T3::T : T3::F;
      case K::True:
        return T3::T;
      case K::False:
        return T3::F;
      case K::Not:
        return neg(eval(n.kids[0], h));
      case K::And: {
        T3 a = eval(n.kids[0], h);
        if (a == T3::F) return a;
        return and3(a, eval(n.kids[1], h));
      }
      case K::Or: {
        T3 a = eval(n.kids[0], h);
        if (a == T3::T) return a;
        return or3(a, eval(n.kids[1], h));
      }
      case K::Implies: {
        T3 a = eval(n.kids[0], h);
        if (a == T3::F) return T3::T;
        return or3(neg(a), eval(n.kids[1], h));
      }
      case K::Sep:
        return eval_sep(n, h);
      case K::Wand:
        if (!assigned(n)) return T3::D;
        return eval_wand(n, h);
      case K::Exists:
        if (!assigned(n)) return T3::D;
        return eval_exists(n, h);
    }
    return T3::D;
  }

  Heap sub_heap(const Heap& cells, std::uint64_t mask) const {
    Heap out;
    for (std::size_t i = 0; i < cells.size(); ++i)
      if ((mask >> i) & 1) out.push_back(cells[i]);
    return out;
  }

  T3 eval_sep(const Node& n, const Heap& h) {
    std::vector<std::uint8_t> used(h.size(), 0);
    std::vector<int> rest;
    T3 acc = T3::T;
    for (int k : n.kids) {
      const Node& c = C.nodes[k];
      Value loc;
      if (c.k == K::PointsTo && known(c.a, loc)) {
        if (!loc.is_nat()) return T3::F;
        const HCell* cell = find_cell(h, loc.nat_value());
        if (!cell) return T3::F;
        std::size_t idx = static_cast<std::size_t>(cell - h.data());
        if (used[idx]) return T3::F;
        used[idx] = 1;
        acc = and3(acc, eval(k, Heap{*cell}));
        if (acc == T3::F) return acc;
      } else {
        rest.push_back(k);
      }
    }
    for (int k : rest)
      if (!assigned(C.nodes[k])) return and3(acc, T3::D);
    Heap left;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (!used[i]) left.push_back(h[i]);
    bool absorber = false;
    std::vector<int> gen;
    for (int k : rest) {
      const Node& c = C.nodes[k];
      if (c.k == K::True) {
        absorber = true;
      } else if (c.k == K::Emp) {
      } else if (c.pure) {
        acc = and3(acc, eval(k, Heap{}));
        if (acc == T3::F) return acc;
        absorber = true;
      } else {
        gen.push_back(k);
      }
    }
    if (gen.empty()) return and3(acc, absorber || left.empty() ? T3::T : T3::F);
    if (gen.size() == 1 && !absorber) return and3(acc, eval(gen[0], left));
    if (left.size() > 63) throw std::runtime_error("heap too large for separating conjunction");

    // Cells no free variable of a quantifier-free conjunct can name are
    // interchangeable, so only their count per owner matters.
    std::vector<std::size_t> named, anon;
    bool all_qf = true;
    for (int k : gen) all_qf = all_qf && C.nodes[k].qf;
    std::vector<Value> names;
    if (all_qf) {
      for (int k : gen)
        for (int s : C.nodes[k].fprog) names.push_back(pv_[s]);
      sort_unique(names);
    }
    for (std::size_t i = 0; i < left.size(); ++i) {
      bool is_named = !all_qf || std::binary_search(names.begin(), names.end(), Value::nat(left[i].loc));
      (is_named ? named : anon).push_back(i);
    }
    const std::size_t g = gen.size();
    const std::size_t owners = g + (absorber ? 1 : 0);
    std::vector<std::unordered_map<std::uint64_t, T3>> memo(g);
    std::vector<std::size_t> owner(named.size(), 0);
    std::vector<std::size_t> counts(owners, 0);
    T3 best = T3::F;
    ++depth_;
    std::function<bool(std::size_t, std::size_t)> comp;
    auto evaluate = [&]() {
      std::vector<std::uint64_t> masks(owners, 0);
      for (std::size_t j = 0; j < named.size(); ++j) masks[owner[j]] |= std::uint64_t{1} << named[j];
      std::size_t pos = 0;
      for (std::size_t o = 0; o < owners; ++o)
        for (std::size_t c = 0; c < counts[o]; ++c) masks[o] |= std::uint64_t{1} << anon[pos++];
      T3 v = T3::T;
      for (std::size_t j = 0; j < g && v != T3::F; ++j) {
        auto it = memo[j].find(masks[j]);
        T3 r;
        if (it != memo[j].end()) {
          r = it->second;
        } else {
          r = eval(gen[j], sub_heap(left, masks[j]));
          memo[j].emplace(masks[j], r);
        }
        v = and3(v, r);
      }
      best = or3(best, v);
      if (best == T3::T && trace_ && depth_ == 1) {
        --depth_;
        std::string s = "split:";
        for (std::size_t j = 0; j < g; ++j) s += " " + heap_str(sub_heap(left, masks[j]));
        note(s);
        ++depth_;
      }
      return best == T3::T;
    };
    comp = [&](std::size_t o, std::size_t remaining) -> bool {
      if (o + 1 == owners) {
        counts[o] = remaining;
        return evaluate();
      }
      for (std::size_t c = 0; c <= remaining; ++c) {
        counts[o] = c;
        if (comp(o + 1, remaining - c)) return true;
      }
      return false;
    };
    while (true) {
      if (comp(0, anon.size())) break;
      std::size_t j = 0;
      while (j < named.size() && ++owner[j] == owners) owner[j++] = 0;
      if (j == named.size()) break;
    }
    --depth_;
    return and3(acc, best);
  }

  std::uint64_t fresh_nat(const Heap& h) const {
    std::uint64_t m = 0;
    auto see = [&](Value v) {
      if (v.is_nat()) m = std::max(m, v.nat_value());
    };
    for (Value v : base_) see(v);
    for (std::size_t s = 0; s < pv_.size(); ++s)
      if (pset_[s]) see(pv_[s]);
    for (std::size_t s = 0; s < sv_.size(); ++s)
      if (sst_[s])
        for (Value v : sv_[s]) see(v);
    for (const auto& c : h) {
      m = std::max(m, c.loc);
      for (Value v : *c.w) see(v);
    }
    return m + 1;
  }

  std::vector<Value> env_nats(const Heap& h) const {
    std::vector<Value> out = base_;
    for (std::size_t s = 0; s < pv_.size(); ++s)
      if (pset_[s] && pv_[s].is_nat()) out.push_back(pv_[s]);
    for (std::size_t s = 0; s < sv_.size(); ++s)
      if (sst_[s]) add_nats(sv_[s], out);
    for (const auto& c : h) {
      out.push_back(Value::nat(c.loc));
      add_nats(*c.w, out);
    }
    sort_unique(out);
    return out;
  }

  T3 eval_wand(const Node& n, const Heap& h) {
    const int a = n.kids[0];
    const int b = n.kids[1];
    if (C.nodes[b].k == K::True) return T3::T;
    std::vector<Value> lv;
    for (int s : n.fprog)
      if (pv_[s].is_nat()) lv.push_back(pv_[s]);
    sort_unique(lv);
    std::vector<std::uint64_t> named;
    for (Value v : lv)
      if (!find_cell(h, v.nat_value())) named.push_back(v.nat_value());
    const std::size_t nb = cfg_.loc_universe_extra.value_or(n.bsz);
    std::vector<std::uint64_t> block;
    for (std::uint64_t l = 1; block.size() < nb; ++l)
      if (!find_cell(h, l) && !std::binary_search(lv.begin(), lv.end(), Value::nat(l))) block.push_back(l);
    std::vector<Word> r = {Word{}, Word{Value::nat(fresh_nat(h))}};
    Word w;
    for (const auto& t : n.terms)
      if (closed(t, w)) r.push_back(w);
    sort_unique(r);

    // With quantifier-free operands the block cells are anonymous and their
    // contents are irrelevant; otherwise they range over r as well.
    const bool exact = C.nodes[a].qf && C.nodes[b].qf;
    std::vector<std::uint64_t> locs = named;
    std::vector<std::size_t> choice(named.size(), 0);
    if (!exact) {
      locs.insert(locs.end(), block.begin(), block.end());
      choice.assign(locs.size(), 0);
    }
    T3 acc = T3::T;
    ++depth_;
    while (true) {
      for (std::size_t cnt = 0; cnt <= (exact ? nb : 0); ++cnt) {
        Heap ext;
        for (std::size_t j = 0; j < locs.size(); ++j)
          if (choice[j] < r.size()) ext.push_back({locs[j], &r[choice[j]]});
        for (std::size_t j = 0; j < cnt; ++j) ext.push_back({block[j], &empty_word()});
        std::sort(ext.begin(), ext.end(), [](const HCell& x, const HCell& y) { return x.loc < y.loc; });
        T3 ra = eval(a, ext);
        if (ra == T3::F) continue;
        Heap uni;
        std::merge(h.begin(), h.end(), ext.begin(), ext.end(), std::back_inserter(uni),
                   [](const HCell& x, const HCell& y) { return x.loc < y.loc; });
        T3 rb = eval(b, uni);
        acc = and3(acc, or3(neg(ra), rb));
        if (acc == T3::F) {
          --depth_;
          note("wand counterexample: " + heap_str(ext));
          return acc;
        }
      }
      std::size_t j = 0;
      while (j < locs.size() && ++choice[j] == r.size() + 1) choice[j++] = 0;
      if (j == locs.size()) break;
    }
    --depth_;
    if (acc == T3::T && !exact) {
      unknown("magic wand over a quantified operand explored on a bounded extension set");
      return T3::U;
    }
    return acc;
  }

  // ---- quantifier blocks ----

  bool mentions(const Node& n, const BVar& v) const {
    return has_slot(v.seq ? n.fseq : n.fprog, v.slot);
  }

  bool is_var(const Sym& s, const BVar& v) const {
    return s.slot == v.slot && (v.seq ? s.kind == Sym::Seq : s.kind == Sym::Prog);
  }

  std::size_t sym_len(const Sym& s, bool& ok) const {
    if (s.kind == Sym::Seq) {
      if (sst_[s.slot] != 2) ok = false;
      return sv_[s.slot].size();
    }
    Value v;
    if (!known(s, v)) ok = false;
    return 1;
  }

  // Every value of v under which syms evaluates to w.
  std::vector<Word> match(const std::vector<Sym>& syms, const Word& w, const BVar& v) const {
    std::size_t first = syms.size(), last = 0, count = 0;
    for (std::size_t i = 0; i < syms.size(); ++i)
      if (is_var(syms[i], v)) {
        first = std::min(first, i);
        last = i;
        ++count;
      }
    bool start_ok = true, end_ok = true;
    std::size_t start = 0, end = 0;
    for (std::size_t i = 0; i < first; ++i) start += sym_len(syms[i], start_ok);
    for (std::size_t i = last + 1; i < syms.size(); ++i) end += sym_len(syms[i], end_ok);
    std::vector<Word> out;
    if (!v.seq) {
      auto take = [&](std::size_t p) {
        if (p < w.size() && w[p].is_nat()) out.push_back({w[p]});
      };
      if (start_ok) {
        take(start);
      } else if (end_ok && count == 1) {
        if (end < w.size()) take(w.size() - 1 - end);
      } else {
        for (Value x : w)
          if (x.is_nat()) out.push_back({x});
      }
    } else if (start_ok && end_ok && count == 1) {
      if (start + end <= w.size()) out.emplace_back(w.begin() + start, w.end() - end);
    } else if (start_ok) {
      for (std::size_t e = start; e <= w.size(); ++e) out.emplace_back(w.begin() + start, w.begin() + e);
    } else if (end_ok && count == 1) {
      if (end <= w.size()) {
        std::size_t e = w.size() - end;
        for (std::size_t s = 0; s <= e; ++s) out.emplace_back(w.begin() + s, w.begin() + e);
      }
    } else {
      for (std::size_t s = 0; s <= w.size(); ++s)
        for (std::size_t e = s; e <= w.size(); ++e) out.emplace_back(w.begin() + s, w.begin() + e);
    }
    sort_unique(out);
    return out;
  }

  static bool contains(const std::vector<Sym>& syms, const BVar& v, const Eval& self) {
    for (const auto& s : syms)
      if (self.is_var(s, v)) return true;
    return false;
  }

  Cands smallest(const std::vector<std::pair<int, bool>>& parts, const BVar& v, bool top, const Heap& h) {
    Cands best;
    for (const auto& [k, pol] : parts) {
      Cands c = cand(k, v, pol, top, h);
      if (c && (!best || c->size() < best->size())) best = std::move(c);
    }
    return best;
  }

  Cands either(const std::vector<std::pair<int, bool>>& parts, const BVar& v, bool top, const Heap& h) {
    std::vector<Word> out;
    for (const auto& [k, pol] : parts) {
      if (top || C.nodes[k].pure) {
        T3 r = eval(k, h);
        if ((pol && r == T3::F) || (!pol && r == T3::T)) continue;
      }
      Cands c = cand(k, v, pol, top, h);
      if (!c) return std::nullopt;
      out.insert(out.end(), c->begin(), c->end());
    }
    sort_unique(out);
    return out;
  }

  // Candidate values for v that can make node i take polarity pos; nullopt
  // when i does not restrict v.
  Cands cand(int i, const BVar& v, bool pos, bool top, const Heap& h) {
    const Node& n = C.nodes[i];
    switch (n.k) {
      case K::IndEq: {
        if (!pos || v.seq) return std::nullopt;
        Value o;
        if ((is_var(n.a, v) && known(n.b, o)) || (is_var(n.b, v) && known(n.a, o))) {
          if (!o.is_nat()) return std::vector<Word>{};
          return std::vector<Word>{Word{o}};
        }
        return std::nullopt;
      }
      case K::SeqEq: {
        if (!pos) return std::nullopt;
        Word w;
        if (contains(n.s1, v, *this) && closed(n.s2, w)) return match(n.s1, w, v);
        if (contains(n.s2, v, *this) && closed(n.s1, w)) return match(n.s2, w, v);
        return std::nullopt;
      }
      case K::PointsTo: {
        if (!pos) return std::nullopt;
        if (is_var(n.a, v)) {
          std::vector<Word> out;
          for (const auto& c : h) out.push_back({Value::nat(c.loc)});
          return out;
        }
        if (!contains(n.s1, v, *this)) return std::nullopt;
        Value loc;
        if (known(n.a, loc)) {
          const HCell* c = loc.is_nat() ? find_cell(h, loc.nat_value()) : nullptr;
          if (!c) return std::vector<Word>{};
          return match(n.s1, *c->w, v);
        }
        std::vector<Word> out;
        for (const auto& c : h) {
          auto m = match(n.s1, *c.w, v);
          out.insert(out.end(), m.begin(), m.end());
        }
        sort_unique(out);
        return out;
      }
      case K::False:
        if (pos) return std::vector<Word>{};
        return std::nullopt;
      case K::True:
        if (!pos) return std::vector<Word>{};
        return std::nullopt;
      case K::Emp:
      case K::Wand:
        return std::nullopt;
      default:
        break;
    }
    if (!mentions(n, v)) return std::nullopt;
    switch (n.k) {
      case K::Not:
        return cand(n.kids[0], v, !pos, top, h);
      case K::And:
        if (pos) return smallest({{n.kids[0], true}, {n.kids[1], true}}, v, top, h);
        return either({{n.kids[0], false}, {n.kids[1], false}}, v, top, h);
      case K::Or:
        if (pos) return either({{n.kids[0], true}, {n.kids[1], true}}, v, top, h);
        return smallest({{n.kids[0], false}, {n.kids[1], false}}, v, top, h);
      case K::Implies:
        if (pos) return either({{n.kids[0], false}, {n.kids[1], true}}, v, top, h);
        return smallest({{n.kids[0], true}, {n.kids[1], false}}, v, top, h);
      case K::Sep: {
        if (!pos) return std::nullopt;
        std::vector<std::pair<int, bool>> parts;
        for (int k : n.kids) parts.emplace_back(k, true);
        return smallest(parts, v, false, h);
      }
      case K::Exists:
        if (!pos) return std::nullopt;
        return cand(n.kids[0], v, pos, top, h);
      default:
        return std::nullopt;
    }
  }

  void assign(const BVar& v, const Word& w) {
    if (v.seq) {
      sv_[v.slot] = w;
      sst_[v.slot] = 2;
    } else {
      pv_[v.slot] = w[0];
      pset_[v.slot] = 1;
    }
  }
  void unassign(const BVar& v) {
    if (v.seq)
      sst_[v.slot] = 0;
    else
      pset_[v.slot] = 0;
  }

  std::string var_str(const BVar& v) const {
    return v.seq ? "@" + C.seq_name[v.slot] + " = " + word_str(sv_[v.slot])
                 : C.prog_name[v.slot] + " = " + pv_[v.slot].str();
  }

  T3 eval_exists(const Node& n, const Heap& h) {
    bool top = depth_ == 0;
    ++depth_;
    bool inexact = false;
    std::vector<BVar> rem = n.vars;
    T3 r = search(rem, n.kids[0], h, inexact, top, n.vars);
    for (const auto& v : n.vars) unassign(v);
    --depth_;
    if (r == T3::F && inexact) {
      unknown("sequence quantifier explored up to length " + std::to_string(cfg_.seq_len_bound));
      return T3::U;
    }
    return r;
  }

  T3 finish(T3 r, bool top, const std::vector<BVar>& block) {
    if (r == T3::T && top && trace_) {
      std::string s = "witness:";
      for (const auto& v : block)
        if (v.seq ? sst_[v.slot] == 2 : pset_[v.slot] != 0) s += " " + var_str(v);
      --depth_;
      note(s);
      ++depth_;
    }
    return r;
  }

  T3 search(std::vector<BVar>& rem, int body, const Heap& h, bool& inexact, bool top,
            const std::vector<BVar>& block) {
    T3 r = eval(body, h);
    if (r == T3::T) return finish(r, top, block);
    if (r == T3::F || rem.empty()) return r;
    const Node& bn = C.nodes[body];
    std::size_t pick = rem.size();
    Cands best;
    for (std::size_t j = 0; j < rem.size(); ++j) {
      if (!mentions(bn, rem[j])) {
        pick = j;
        best = std::vector<Word>{rem[j].seq ? Word{} : Word{Value::nat(0)}};
        break;
      }
      Cands c = cand(body, rem[j], true, true, h);
      if (c && (!best || c->size() < best->size())) {
        best = std::move(c);
        pick = j;
        if (best->size() <= 1) break;
      }
    }
    bool trie = false;
    if (!best) {
      for (std::size_t j = 0; j < rem.size() && pick == rem.size(); ++j)
        if (!rem[j].seq) pick = j;
      if (pick < rem.size()) {
        std::vector<Word> vals;
        for (Value x : env_nats(h)) vals.push_back({x});
        vals.push_back({Value::nat(fresh_nat(h))});
        best = std::move(vals);
      } else {
        pick = 0;
        trie = true;
      }
    }
    BVar v = rem[pick];
    rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(pick));
    T3 out = T3::F;
    if (!trie) {
      for (const auto& w : *best) {
        assign(v, w);
        T3 x = search(rem, body, h, inexact, top, block);
        unassign(v);
        if (x == T3::T) {
          out = x;
          break;
        }
        if (x == T3::U) out = T3::U;
      }
    } else {
      inexact = true;
      std::vector<Value> letters = env_nats(h);
      std::uint64_t f = fresh_nat(h);
      for (std::size_t k = 0; k < cfg_.alphabet_extra; ++k) letters.push_back(Value::nat(f + k));
      letters.push_back(Value::nil());
      letters.push_back(Value::hash());
      Word prefix;
      out = grow(v, prefix, letters, rem, body, h, inexact, top, block);
      unassign(v);
    }
    rem.insert(rem.begin() + static_cast<std::ptrdiff_t>(pick), v);
    return out;
  }

  T3 grow(const BVar& v, Word& prefix, const std::vector<Value>& letters, std::vector<BVar>& rem, int body,
          const Heap& h, bool& inexact, bool top, const std::vector<BVar>& block) {
    sv_[v.slot] = prefix;
    sst_[v.slot] = 1;
    T3 r = eval(body, h);
    if (r == T3::F) return r;
    sst_[v.slot] = 2;
    T3 out = search(rem, body, h, inexact, top, block);
    if (out == T3::T || prefix.size() >= cfg_.seq_len_bound) return out;
    for (Value x : letters) {
      prefix.push_back(x);
      T3 y = grow(v, prefix, letters, rem, body, h, inexact, top, block);
      prefix.pop_back();
      if (y == T3::T) return y;
      if (y == T3::U) out = T3::U;
    }
    return out;
  }
};

}  // namespace

struct Checker::Program {
  Compiled c;
};

Checker::Checker(const Formula& f, CheckConfig cfg) : prog_(std::make_unique<Program>()), cfg_(cfg) {
  Compiler comp(prog_->c);
  prog_->c.root = comp.compile(expand_macros(f));
  sort_unique(prog_->c.constants);
}

Checker::~Checker() = default;
Checker::Checker(Checker&&) noexcept = default;
Checker& Checker::operator=(Checker&&) noexcept = default;

Verdict3 Checker::check(const Model& m) const {
  Verdict3 out;
  Eval ev(prog_->c, cfg_, m, cfg_.trace ? &out.trace : nullptr);
  T3 r = ev.run();
  switch (r) {
    case T3::T:
      out.truth = Truth::True;
      break;
    case T3::F:
      out.truth = Truth::False;
      break;
    default:
      out.truth = Truth::Unknown;
      out.reason = ev.reason().empty() ? "undetermined" : ev.reason();
  }
  return out;
}

Verdict3 check(const Model& m, const Formula& f, const CheckConfig& cfg) { return Checker(f, cfg).check(m); }

Verdict3 check_derived(const Model& m, const Formula& macro_call, const CheckConfig& cfg) {
  return Checker(expand_macros(macro_call), cfg).check(m);
}

}  // namespace seqsl
