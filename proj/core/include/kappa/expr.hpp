#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kappa/cyclic.hpp"
#include "kappa/fdb.hpp"
#include "kappa/kn_hopf.hpp"

namespace kappa {

struct parse_error : std::runtime_error {
  int column;  // 1-based
  parse_error(const std::string& msg, int col)
      : std::runtime_error(msg + " at column " + std::to_string(col)), column(col) {}
};
struct type_error : std::runtime_error {
  int column;
  type_error(const std::string& msg, int col)
      : std::runtime_error(msg + " at column " + std::to_string(col)), column(col) {}
};

// Expression AST. Leaves carry source columns for diagnostics.
struct Expr {
  enum Kind {
    Number,      // rational literal
    KGen,        // X<k>, s, sinv, s^p, s[i;J], logs
    FGenLit,     // b[i;J], binv, a[i;J], ainv
    Theta,       // th<k>
    Neg,
    Sum,         // chain with signs
    Prod,        // product chain
    Pow,         // base ^ int
    Tensor,      // (x)-joined legs
    Wedge,       // /\-joined legs
    Call         // S(...), cop(...), eps(...)
  } kind = Number;

  int column = 1;
  Rational number = 0;
  GeneratorSymbol kgen;            // for KGen
  FGen fgen;                       // for FGen (alpha if is_alpha)
  bool is_alpha = false;           // a[..] vs b[..]
  bool is_inv = false;             // binv / ainv
  int theta = 1;                   // for Theta
  int power = 1;                   // for Pow
  std::string call;                // for Call
  std::vector<Expr> args;          // children
  std::vector<int> signs;          // for Sum: +1/-1 per child
};

Expr parse(const std::string& text);

// Evaluated values with a small static kind system.
struct Value {
  enum Kind { Scalar, K, F, KTensorV, ThetaPart, CE } kind = Scalar;
  Rational scalar = 0;
  KnElement k;
  FdBElement f;
  KnTensor t;
  std::vector<int> thetas;  // wedge of theta generators
  CECochain ce;
};

std::string kind_name(Value::Kind k);

// Kind inference without evaluation (the static checker).
Value::Kind infer_kind(const Expr& e, int n);

// Evaluate in K_n / F-algebras of dimension n.
Value evaluate(const Expr& e, int n);

// Canonical printers; print(parse(t)) reparses to an equal value.
std::string print_value(const Value& v, int n);

// Jet literal: polynomial components in x (n = 1) or x1..xn, separated by ';'.
JetDiffeo<Rational> parse_jet(const std::string& text, int n, int order);
TruncSeries<Rational> parse_poly(const std::string& text, int n, int order);
std::string print_jet(const JetDiffeo<Rational>& j);

}  // namespace kappa
