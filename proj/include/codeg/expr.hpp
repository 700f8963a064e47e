#pragma once
// Integer formula language for family data.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]
//   primary := INT | IDENT | IDENT '(' expr {',' expr} ')' | '(' expr ')'
//
// Functions: gcd(a, b), eps(q) = (-1)^((q-1)/2), sqrt(x) (exact),
// prod(i, lo, hi, body).
//
// A formula is evaluated factor-wise: the top-level product/quotient
// structure is kept and every additive atom is factorized separately, so a
// value like q^21 * prod(...) never has to fit in a machine word before
// cancellation.

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "codeg/error.hpp"
#include "codeg/exact_arith.hpp"

namespace codeg {

using Bindings = std::map<std::string, std::int64_t, std::less<>>;

namespace expr_detail {

enum class Op { Num, Sym, Add, Sub, Mul, Div, Pow, Neg, Call };

struct Node {
  Op op = Op::Num;
  std::int64_t num = 0;
  std::string name;  // symbol or function name
  std::vector<std::shared_ptr<const Node>> kids;
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make(Op op, std::vector<NodePtr> kids = {}, std::int64_t num = 0, std::string name = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->num = num;
  n->name = std::move(name);
  n->kids = std::move(kids);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : s_(src) {}

  NodePtr parse() {
    auto n = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse, "formula '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }
  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    return power();
  }
  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }
  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return make(Op::Num, {}, parse_i64(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (accept('(')) {
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        static const std::map<std::string, std::size_t, std::less<>> kArity = {
            {"gcd", 2}, {"eps", 1}, {"sqrt", 1}, {"prod", 4}};
        auto it = kArity.find(name);
        if (it == kArity.end()) error("unknown function " + name);
        if (args.size() != it->second) error("wrong arity for " + name);
        if (name == "prod" && args[0]->op != Op::Sym) error("prod index must be a symbol");
        return make(Op::Call, std::move(args), 0, name);
      }
      return make(Op::Sym, {}, 0, name);
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::int64_t lookup(const Bindings& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) fail(ErrorKind::Parameter, "unbound symbol '" + name + "'");
  return it->second;
}

inline std::int64_t eval_int(const Node& n, const Bindings& env);

inline std::int64_t eval_call(const Node& n, const Bindings& env) {
  if (n.name == "gcd") {
    std::int64_t a = eval_int(*n.kids[0], env), b = eval_int(*n.kids[1], env);
    return std::gcd(a, b);
  }
  if (n.name == "eps") {
    std::int64_t q = eval_int(*n.kids[0], env);
    if (q % 2 == 0) fail(ErrorKind::FormulaIntegrality, "eps(q) needs odd q");
    return ((q - 1) / 2) % 2 == 0 ? 1 : -1;
  }
  if (n.name == "sqrt") {
    std::int64_t v = eval_int(*n.kids[0], env);
    if (v < 0) fail(ErrorKind::FormulaIntegrality, "sqrt of negative value");
    auto r = exact_isqrt(static_cast<std::uint64_t>(v));
    if (!r) fail(ErrorKind::FormulaIntegrality, "sqrt(" + std::to_string(v) + ") is not an integer");
    return static_cast<std::int64_t>(*r);
  }
  // prod
  const std::string& idx = n.kids[0]->name;
  std::int64_t lo = eval_int(*n.kids[1], env), hi = eval_int(*n.kids[2], env);
  Bindings inner = env;
  std::int64_t r = 1;
  for (std::int64_t i = lo; i <= hi; ++i) {
    inner[idx] = i;
    r = checked_mul(r, eval_int(*n.kids[3], inner));
  }
  return r;
}

inline std::int64_t eval_int(const Node& n, const Bindings& env) {
  switch (n.op) {
    case Op::Num: return n.num;
    case Op::Sym: return lookup(env, n.name);
    case Op::Add: return checked_add(eval_int(*n.kids[0], env), eval_int(*n.kids[1], env));
    case Op::Sub: return checked_sub(eval_int(*n.kids[0], env), eval_int(*n.kids[1], env));
    case Op::Mul: return checked_mul(eval_int(*n.kids[0], env), eval_int(*n.kids[1], env));
    case Op::Neg: return checked_sub<std::int64_t>(0, eval_int(*n.kids[0], env));
    case Op::Div: {
      std::int64_t a = eval_int(*n.kids[0], env), b = eval_int(*n.kids[1], env);
      if (b == 0) fail(ErrorKind::FormulaIntegrality, "division by zero");
      if (a % b != 0)
        fail(ErrorKind::FormulaIntegrality, std::to_string(a) + " / " + std::to_string(b) + " is not exact");
      return a / b;
    }
    case Op::Pow: {
      std::int64_t e = eval_int(*n.kids[1], env);
      if (e < 0) fail(ErrorKind::FormulaIntegrality, "negative exponent");
      return checked_pow(eval_int(*n.kids[0], env), static_cast<std::uint64_t>(e));
    }
    case Op::Call: return eval_call(n, env);
  }
  return 0;
}

using Signed = std::map<std::uint64_t, std::int64_t>;

inline void accumulate(Signed& acc, const FactoredInt& f, std::int64_t sign) {
  for (const auto& [p, e] : f.factors()) acc[p] += sign * static_cast<std::int64_t>(e);
}

inline void eval_signed(const Node& n, const Bindings& env, Signed& acc, std::int64_t mult) {
  switch (n.op) {
    case Op::Mul:
      eval_signed(*n.kids[0], env, acc, mult);
      eval_signed(*n.kids[1], env, acc, mult);
      return;
    case Op::Div:
      eval_signed(*n.kids[0], env, acc, mult);
      eval_signed(*n.kids[1], env, acc, -mult);
      return;
    case Op::Pow: {
      std::int64_t e = eval_int(*n.kids[1], env);
      if (e < 0) fail(ErrorKind::FormulaIntegrality, "negative exponent");
      if (e == 0) return;
      eval_signed(*n.kids[0], env, acc, checked_mul(mult, e));
      return;
    }
    case Op::Call:
      if (n.name == "prod") {
        const std::string& idx = n.kids[0]->name;
        std::int64_t lo = eval_int(*n.kids[1], env), hi = eval_int(*n.kids[2], env);
        Bindings inner = env;
        for (std::int64_t i = lo; i <= hi; ++i) {
          inner[idx] = i;
          eval_signed(*n.kids[3], inner, acc, mult);
        }
        return;
      }
      [[fallthrough]];
    default: {
      std::int64_t v = eval_int(n, env);
      if (v <= 0) fail(ErrorKind::FormulaIntegrality, "non-positive factor " + std::to_string(v));
      accumulate(acc, factorize(v), mult);
    }
  }
}

/// Polynomial in one variable with a common rational denominator.
struct RatPoly {
  IntPoly num;
  std::int64_t den = 1;

  static RatPoly constant(std::int64_t v) { return {IntPoly::constant(v), 1}; }
  void reduce() {
    std::int64_t g = den;
    for (auto c : num.coeffs()) g = std::gcd(g, c);
    if (g > 1) {
      std::vector<std::int64_t> c = num.coeffs();
      for (auto& x : c) x /= g;
      num = IntPoly(std::move(c));
      den /= g;
    }
  }
};

inline RatPoly to_ratpoly(const Node& n, const Bindings& env, const std::string& var) {
  switch (n.op) {
    case Op::Num: return RatPoly::constant(n.num);
    case Op::Sym:
      if (n.name == var) return {IntPoly::x(), 1};
      return RatPoly::constant(lookup(env, n.name));
    case Op::Add:
    case Op::Sub: {
      auto a = to_ratpoly(*n.kids[0], env, var), b = to_ratpoly(*n.kids[1], env, var);
      std::int64_t l = std::lcm(a.den, b.den);
      IntPoly an = a.num.scaled(l / a.den), bn = b.num.scaled(l / b.den);
      RatPoly r{n.op == Op::Add ? an + bn : an - bn, l};
      r.reduce();
      return r;
    }
    case Op::Mul: {
      auto a = to_ratpoly(*n.kids[0], env, var), b = to_ratpoly(*n.kids[1], env, var);
      RatPoly r{a.num * b.num, checked_mul(a.den, b.den)};
      r.reduce();
      return r;
    }
    case Op::Neg: {
      auto a = to_ratpoly(*n.kids[0], env, var);
      return {-a.num, a.den};
    }
    case Op::Div: {
      auto a = to_ratpoly(*n.kids[0], env, var), b = to_ratpoly(*n.kids[1], env, var);
      if (b.num.degree() != 0) fail(ErrorKind::Reduction, "division by a non-constant polynomial");
      std::int64_t c = b.num.leading();
      RatPoly r{c < 0 ? -a.num.scaled(b.den) : a.num.scaled(b.den), checked_mul(a.den, c < 0 ? -c : c)};
      r.reduce();
      return r;
    }
    case Op::Pow: {
      std::int64_t e = eval_int(*n.kids[1], env);
      if (e < 0) fail(ErrorKind::Reduction, "negative exponent");
      auto b = to_ratpoly(*n.kids[0], env, var);
      return {b.num.pow(static_cast<std::uint64_t>(e)), checked_pow(b.den, static_cast<std::uint64_t>(e))};
    }
    case Op::Call:
      if (n.name == "prod") {
        const std::string& idx = n.kids[0]->name;
        std::int64_t lo = eval_int(*n.kids[1], env), hi = eval_int(*n.kids[2], env);
        Bindings inner = env;
        RatPoly r = RatPoly::constant(1);
        for (std::int64_t i = lo; i <= hi; ++i) {
          inner[idx] = i;
          auto f = to_ratpoly(*n.kids[3], inner, var);
          r = {r.num * f.num, checked_mul(r.den, f.den)};
          r.reduce();
        }
        return r;
      }
      fail(ErrorKind::Reduction, n.name + "() is not polynomial in " + var);
  }
  return {};
}

inline bool depends_on(const Node& n, const std::string& var) {
  if (n.op == Op::Sym) return n.name == var;
  if (n.op == Op::Call && n.name == "prod" && n.kids[0]->name == var) return false;
  for (const auto& k : n.kids)
    if (depends_on(*k, var)) return true;
  return false;
}

inline void collect_symbols(const Node& n, std::set<std::string>& out, const std::set<std::string>& bound) {
  if (n.op == Op::Sym) {
    if (!bound.count(n.name)) out.insert(n.name);
    return;
  }
  if (n.op == Op::Call && n.name == "prod") {
    auto b2 = bound;
    b2.insert(n.kids[0]->name);
    for (std::size_t i = 1; i < 3; ++i) collect_symbols(*n.kids[i], out, bound);
    collect_symbols(*n.kids[3], out, b2);
    return;
  }
  for (const auto& k : n.kids) collect_symbols(*k, out, bound);
}

}  // namespace expr_detail

/// Multiplicative decomposition of a formula at fixed auxiliary parameters,
/// as a function of one variable: q^monomial * prod(num) / (prod(den) * gcds).
struct FactorForm {
  std::int64_t monomial = 0;
  std::vector<IntPoly> num;
  std::vector<IntPoly> den;
  /// Upper bounds for gcd(...) atoms in the denominator.
  std::vector<std::int64_t> den_gcd_bounds;
};

/// A parsed integer-valued formula (ratio of products of polynomial atoms).
class RationalExpr {
 public:
  RationalExpr() = default;

  static RationalExpr parse(std::string_view src) {
    RationalExpr e;
    e.source_ = std::string(src);
    e.root_ = expr_detail::Parser(src).parse();
    return e;
  }

  const std::string& source() const noexcept { return source_; }
  bool empty() const noexcept { return root_ == nullptr; }

  /// Exact value at a point; integrality error unless the quotient is whole.
  FactoredInt eval(const Bindings& env) const {
    expr_detail::Signed acc;
    expr_detail::eval_signed(*root_, env, acc, 1);
    FactoredInt::Map m;
    for (const auto& [p, e] : acc) {
      if (e < 0)
        fail(ErrorKind::FormulaIntegrality, "'" + source_ + "' is not integral at " + describe(env));
      if (e > 0) m[p] = static_cast<std::uint32_t>(e);
    }
    return FactoredInt::from_factors(std::move(m));
  }

  /// Plain integer evaluation (signed, exact division required).
  std::int64_t eval_int(const Bindings& env) const { return expr_detail::eval_int(*root_, env); }

  std::set<std::string> symbols() const {
    std::set<std::string> s;
    expr_detail::collect_symbols(*root_, s, {});
    return s;
  }

  /// Whole formula as a rational polynomial in var (other symbols bound).
  std::pair<IntPoly, std::int64_t> to_poly(const Bindings& env, const std::string& var) const {
    auto r = expr_detail::to_ratpoly(*root_, env, var);
    return {r.num, r.den};
  }

  FactorForm factor_form(const Bindings& env, const std::string& var) const {
    FactorForm f;
    decompose(*root_, env, var, f, 1);
    return f;
  }

  static std::string describe(const Bindings& env) {
    std::string s;
    for (const auto& [k, v] : env) {
      if (!s.empty()) s += ",";
      s += k + "=" + std::to_string(v);
    }
    return s;
  }

 private:
  static void decompose(const expr_detail::Node& n, const Bindings& env, const std::string& var, FactorForm& f,
                        int sign) {
    using expr_detail::Op;
    switch (n.op) {
      case Op::Mul:
        decompose(*n.kids[0], env, var, f, sign);
        decompose(*n.kids[1], env, var, f, sign);
        return;
      case Op::Div:
        decompose(*n.kids[0], env, var, f, sign);
        decompose(*n.kids[1], env, var, f, -sign);
        return;
      case Op::Pow: {
        if (expr_detail::depends_on(*n.kids[1], var)) fail(ErrorKind::Reduction, "exponent depends on " + var);
        std::int64_t e = expr_detail::eval_int(*n.kids[1], env);
        if (n.kids[0]->op == Op::Sym && n.kids[0]->name == var) {
          f.monomial += sign * e;
          return;
        }
        for (std::int64_t i = 0; i < e; ++i) decompose(*n.kids[0], env, var, f, sign);
        return;
      }
      case Op::Sym:
        if (n.name == var) {
          f.monomial += sign;
          return;
        }
        break;
      case Op::Call:
        if (n.name == "prod") {
          const std::string& idx = n.kids[0]->name;
          std::int64_t lo = expr_detail::eval_int(*n.kids[1], env), hi = expr_detail::eval_int(*n.kids[2], env);
          Bindings inner = env;
          for (std::int64_t i = lo; i <= hi; ++i) {
            inner[idx] = i;
            decompose(*n.kids[3], inner, var, f, sign);
          }
          return;
        }
        if (n.name == "gcd") {
          if (sign > 0) return;  // gcd >= 1 in the numerator
          for (int k = 0; k < 2; ++k) {
            if (!expr_detail::depends_on(*n.kids[k], var)) {
              std::int64_t b = expr_detail::eval_int(*n.kids[k], env);
              f.den_gcd_bounds.push_back(b < 0 ? -b : b);
              return;
            }
          }
          fail(ErrorKind::Reduction, "gcd with both arguments depending on " + var);
        }
        break;
      default: break;
    }
    auto r = expr_detail::to_ratpoly(n, env, var);
    (sign > 0 ? f.num : f.den).push_back(r.num);
    if (r.den != 1) (sign > 0 ? f.den : f.num).push_back(IntPoly::constant(r.den));
  }

  std::string source_;
  expr_detail::NodePtr root_;
};

}  // namespace codeg
