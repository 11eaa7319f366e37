#include "kappa/expr.hpp"

#include <cctype>

namespace kappa {

namespace {

struct Token {
  enum Kind { Num, Ident, Star, Plus, Minus, Caret, LParen, RParen, TensorOp, WedgeOp,
              LBracket, RBracket, Semi, Comma, End } kind;
  std::string text;
  Rational num = 0;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      int col = static_cast<int>(pos_) + 1;
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string numerator = src_.substr(start, pos_ - start);
        std::string denom;
        if (pos_ < src_.size() && src_[pos_] == '/') {
          size_t save = pos_;
          ++pos_;
          size_t dstart = pos_;
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
          if (pos_ > dstart) {
            denom = src_.substr(dstart, pos_ - dstart);
          } else {
            pos_ = save;  // bare '/': not a rational
          }
        }
        Token t{Token::Num, numerator + (denom.empty() ? "" : "/" + denom), 0, col};
        t.num = rat_from_string(t.text);
        out.push_back(std::move(t));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({Token::Ident, src_.substr(start, pos_ - start), 0, col});
        continue;
      }
      switch (c) {
        case '*': out.push_back({Token::Star, "*", 0, col}); ++pos_; break;
        case '+': out.push_back({Token::Plus, "+", 0, col}); ++pos_; break;
        case '-': out.push_back({Token::Minus, "-", 0, col}); ++pos_; break;
        case '^': out.push_back({Token::Caret, "^", 0, col}); ++pos_; break;
        case '(':
          if (src_.compare(pos_, 3, "(x)") == 0) {
            out.push_back({Token::TensorOp, "(x)", 0, col});
            pos_ += 3;
          } else {
            out.push_back({Token::LParen, "(", 0, col});
            ++pos_;
          }
          break;
        case ')': out.push_back({Token::RParen, ")", 0, col}); ++pos_; break;
        case '/':
          if (src_.compare(pos_, 2, "/\\") == 0) {
            out.push_back({Token::WedgeOp, "/\\", 0, col});
            pos_ += 2;
          } else {
            throw parse_error("unexpected '/'", col);
          }
          break;
        case '[': out.push_back({Token::LBracket, "[", 0, col}); ++pos_; break;
        case ']': out.push_back({Token::RBracket, "]", 0, col}); ++pos_; break;
        case ';': out.push_back({Token::Semi, ";", 0, col}); ++pos_; break;
        case ',': out.push_back({Token::Comma, ",", 0, col}); ++pos_; break;
        default: throw parse_error(std::string("unexpected character '") + c + "'", col);
      }
    }
    out.push_back({Token::End, "", 0, static_cast<int>(src_.size()) + 1});
    return out;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;
};

// precedence: + -  <  (x)  <  /\  <  juxtaposition/*  <  ^  <  atoms
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr run() {
    Expr e = parse_sum();
    expect(Token::End, "end of input");
    return e;
  }

  Expr parse_sum() {
    Expr e;
    e.kind = Expr::Sum;
    e.column = cur().column;
    int sign = 1;
    if (cur().kind == Token::Minus) {
      sign = -1;
      next();
    } else if (cur().kind == Token::Plus) {
      next();
    }
    e.args.push_back(parse_tensor());
    e.signs.push_back(sign);
    while (cur().kind == Token::Plus || cur().kind == Token::Minus) {
      int s = cur().kind == Token::Plus ? 1 : -1;
      next();
      e.args.push_back(parse_tensor());
      e.signs.push_back(s);
    }
    if (e.args.size() == 1 && e.signs[0] == 1) return std::move(e.args[0]);
    return e;
  }

  Expr parse_tensor() {
    Expr first = parse_wedge();
    if (cur().kind != Token::TensorOp) return first;
    Expr e;
    e.kind = Expr::Tensor;
    e.column = first.column;
    e.args.push_back(std::move(first));
    while (cur().kind == Token::TensorOp) {
      next();
      e.args.push_back(parse_wedge());
    }
    return e;
  }

  Expr parse_wedge() {
    Expr first = parse_product();
    if (cur().kind != Token::WedgeOp) return first;
    Expr e;
    e.kind = Expr::Wedge;
    e.column = first.column;
    e.args.push_back(std::move(first));
    while (cur().kind == Token::WedgeOp) {
      next();
      e.args.push_back(parse_product());
    }
    return e;
  }

  bool starts_factor() const {
    switch (cur().kind) {
      case Token::Num:
      case Token::Ident:
      case Token::LParen: return true;
      default: return false;
    }
  }

  Expr parse_product() {
    Expr e;
    e.kind = Expr::Prod;
    e.column = cur().column;
    e.args.push_back(parse_power());
    for (;;) {
      if (cur().kind == Token::Star) {
        next();
        if (!starts_factor()) throw parse_error("expected a factor after '*'", cur().column);
        e.args.push_back(parse_power());
      } else if (starts_factor()) {
        e.args.push_back(parse_power());  // juxtaposition
      } else {
        break;
      }
    }
    if (e.args.size() == 1) return std::move(e.args[0]);
    return e;
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (cur().kind != Token::Caret) return base;
    next();
    int sign = 1;
    if (cur().kind == Token::Minus) {
      sign = -1;
      next();
    }
    if (cur().kind != Token::Num || cur().num.get_den() != 1)
      throw parse_error("expected an integer exponent", cur().column);
    Expr e;
    e.kind = Expr::Pow;
    e.column = base.column;
    e.power = sign * static_cast<int>(cur().num.get_num().get_si());
    next();
    e.args.push_back(std::move(base));
    return e;
  }

  Expr parse_atom() {
    const Token& t = cur();
    if (t.kind == Token::Num) {
      Expr e;
      e.kind = Expr::Number;
      e.number = t.num;
      e.column = t.column;
      next();
      return e;
    }
    if (t.kind == Token::LParen) {
      next();
      Expr e = parse_sum();
      expect(Token::RParen, "')'");
      return e;
    }
    if (t.kind == Token::Ident) return parse_ident();
    throw parse_error("expected an expression", t.column);
  }

  // bracketed index list i;j1,...,jk
  std::pair<int, std::vector<int>> parse_indices() {
    expect(Token::LBracket, "'['");
    int i = parse_int();
    expect(Token::Semi, "';'");
    std::vector<int> J;
    J.push_back(parse_int());
    while (cur().kind == Token::Comma) {
      next();
      J.push_back(parse_int());
    }
    expect(Token::RBracket, "']'");
    return {i, J};
  }

  int parse_int() {
    if (cur().kind != Token::Num || cur().num.get_den() != 1)
      throw parse_error("expected an integer index", cur().column);
    int v = static_cast<int>(cur().num.get_num().get_si());
    next();
    return v;
  }

  Expr parse_ident() {
    Token t = cur();
    next();
    Expr e;
    e.column = t.column;
    const std::string& id = t.text;
    auto tail_int = [&](size_t prefix) -> int {
      return std::stoi(id.substr(prefix));
    };
    if (id == "S" || id == "cop" || id == "eps") {
      expect(Token::LParen, "'(' after function name");
      Expr arg = parse_sum();
      expect(Token::RParen, "')'");
      e.kind = Expr::Call;
      e.call = id;
      e.args.push_back(std::move(arg));
      return e;
    }
    if (id.size() > 1 && id[0] == 'X' && std::isdigit(static_cast<unsigned char>(id[1]))) {
      e.kind = Expr::KGen;
      e.kgen = GeneratorSymbol::x(tail_int(1));
      return e;
    }
    if (id.size() > 2 && id.compare(0, 2, "th") == 0 &&
        std::isdigit(static_cast<unsigned char>(id[2]))) {
      e.kind = Expr::Theta;
      e.theta = tail_int(2);
      return e;
    }
    if (id == "s") {
      if (cur().kind == Token::LBracket) {
        auto [i, J] = parse_indices();
        e.kind = Expr::KGen;
        e.kgen = GeneratorSymbol::sigma(i, J);
        return e;
      }
      e.kind = Expr::KGen;
      e.kgen = GeneratorSymbol::sigma_pow(1);
      return e;
    }
    if (id == "sinv") {
      e.kind = Expr::KGen;
      e.kgen = GeneratorSymbol::sigma_pow(-1);
      return e;
    }
    if (id == "logs") {
      e.kind = Expr::KGen;
      e.kgen = GeneratorSymbol::log_sigma();
      return e;
    }
    if (id == "b" || id == "a") {
      if (cur().kind != Token::LBracket)
        throw parse_error("expected '[' after '" + id + "'", cur().column);
      auto [i, J] = parse_indices();
      e.kind = Expr::FGenLit;
      e.is_alpha = (id == "a");
      e.fgen = FGen(i, J);
      return e;
    }
    if (id == "binv" || id == "ainv") {
      e.kind = Expr::FGenLit;
      e.is_alpha = (id == "ainv");
      e.is_inv = true;
      return e;
    }
    throw parse_error("unknown identifier '" + id + "'", t.column);
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  void next() { ++pos_; }
  void expect(Token::Kind k, const std::string& what) {
    if (cur().kind != k) throw parse_error("expected " + what, cur().column);
    next();
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text) {
  Lexer lex(text);
  Parser p(lex.run());
  return p.run();
}

std::string kind_name(Value::Kind k) {
  switch (k) {
    case Value::Scalar: return "scalar";
    case Value::K: return "K-element";
    case Value::F: return "F-element";
    case Value::KTensorV: return "tensor";
    case Value::ThetaPart: return "theta-form";
    case Value::CE: return "CE-cochain";
  }
  return "?";
}

namespace {

Value::Kind join_kinds(Value::Kind a, Value::Kind b, const char* op, int col) {
  if (a == b) return a;
  if (a == Value::Scalar) return b;
  if (b == Value::Scalar) return a;
  throw type_error(std::string("cannot ") + op + " " + kind_name(a) + " and " + kind_name(b), col);
}

}  // namespace

Value::Kind infer_kind(const Expr& e, int n) {
  switch (e.kind) {
    case Expr::Number: return Value::Scalar;
    case Expr::KGen: return Value::K;
    case Expr::FGenLit: return Value::F;
    case Expr::Theta: return Value::ThetaPart;
    case Expr::Neg: return infer_kind(e.args[0], n);
    case Expr::Pow: {
      Value::Kind k = infer_kind(e.args[0], n);
      if (k != Value::Scalar && k != Value::K && k != Value::F)
        throw type_error("power of a " + kind_name(k), e.column);
      return k;
    }
    case Expr::Sum: {
      Value::Kind k = infer_kind(e.args[0], n);
      for (size_t i = 1; i < e.args.size(); ++i)
        k = join_kinds(k, infer_kind(e.args[i], n), "add", e.args[i].column);
      return k;
    }
    case Expr::Prod: {
      Value::Kind k = infer_kind(e.args[0], n);
      for (size_t i = 1; i < e.args.size(); ++i)
        k = join_kinds(k, infer_kind(e.args[i], n), "multiply", e.args[i].column);
      return k;
    }
    case Expr::Tensor: {
      // legs of K kind (with scalar lifts) -> tensor; theta (x) F-wedge -> CE
      Value::Kind first = infer_kind(e.args[0], n);
      if (first == Value::ThetaPart || (e.args.size() == 2 &&
                                        infer_kind(e.args[1], n) == Value::F &&
                                        e.args[1].kind == Expr::Wedge)) {
        return Value::CE;
      }
      for (const auto& a : e.args) {
        Value::Kind k = infer_kind(a, n);
        if (k != Value::K && k != Value::Scalar)
          throw type_error("tensor legs must be K-elements, found " + kind_name(k), a.column);
      }
      return Value::KTensorV;
    }
    case Expr::Wedge: {
      Value::Kind k = infer_kind(e.args[0], n);
      for (const auto& a : e.args) {
        Value::Kind ak = infer_kind(a, n);
        if (ak != k && !(k == Value::Scalar || ak == Value::Scalar))
          throw type_error("wedge legs must match, found " + kind_name(ak), a.column);
        if (ak != Value::Scalar) k = ak;
      }
      if (k == Value::ThetaPart) return Value::ThetaPart;
      if (k == Value::F || k == Value::Scalar) return Value::F;  // F-wedge context
      throw type_error("cannot wedge " + kind_name(k), e.column);
    }
    case Expr::Call: {
      Value::Kind k = infer_kind(e.args[0], n);
      if (e.call == "eps") return Value::Scalar;
      if (e.call == "cop") {
        if (k == Value::K) return Value::KTensorV;
        throw type_error("cop expects a K-element, found " + kind_name(k), e.column);
      }
      if (e.call == "S") {
        if (k == Value::K || k == Value::F) return k;
        throw type_error("S expects a K- or F-element, found " + kind_name(k), e.column);
      }
      throw type_error("unknown function " + e.call, e.column);
    }
  }
  throw type_error("unreachable", e.column);
}

namespace {

Value lift_to_k(const Value& v, int n, int col) {
  if (v.kind == Value::K) return v;
  if (v.kind == Value::Scalar) {
    Value r;
    r.kind = Value::K;
    r.k = KnElement::scalar(n, v.scalar);
    return r;
  }
  throw type_error("expected a K-element, found " + kind_name(v.kind), col);
}

}  // namespace

Value evaluate(const Expr& e, int n) {
  infer_kind(e, n);  // static pass: reject ill-kind expressions up front
  switch (e.kind) {
    case Expr::Number: {
      Value v;
      v.kind = Value::Scalar;
      v.scalar = e.number;
      return v;
    }
    case Expr::KGen: {
      Value v;
      v.kind = Value::K;
      v.k = KnElement::generator(n, e.kgen);
      return v;
    }
    case Expr::FGenLit: {
      Value v;
      v.kind = Value::F;
      FAlg alg = e.is_alpha ? (e.is_inv || e.fgen.J.size() == 1 ? FAlg::FGL : FAlg::FN)
                            : FAlg::FGd;
      v.f = e.is_inv ? FdBElement::inv_det(alg, n) : FdBElement::generator(alg, n, e.fgen);
      return v;
    }
    case Expr::Theta: {
      Value v;
      v.kind = Value::ThetaPart;
      v.thetas = {e.theta};
      return v;
    }
    case Expr::Neg: {
      Value v = evaluate(e.args[0], n);
      switch (v.kind) {
        case Value::Scalar: v.scalar = -v.scalar; break;
        case Value::K: v.k = -v.k; break;
        case Value::F: v.f = -v.f; break;
        case Value::KTensorV: v.t = -v.t; break;
        case Value::CE: v.ce = -v.ce; break;
        default: throw type_error("cannot negate " + kind_name(v.kind), e.column);
      }
      return v;
    }
    case Expr::Pow: {
      Value v = evaluate(e.args[0], n);
      int p = e.power;
      if (v.kind == Value::Scalar) {
        Value r;
        r.kind = Value::Scalar;
        r.scalar = 1;
        for (int i = 0; i < std::abs(p); ++i) r.scalar *= v.scalar;
        if (p < 0) r.scalar = 1 / r.scalar;
        return r;
      }
      if (v.kind == Value::K) {
        // negative powers only for the group-like sigma
        if (p >= 0) {
          Value r;
          r.kind = Value::K;
          r.k = KnElement::one(n);
          for (int i = 0; i < p; ++i) r.k = kn_mul(r.k, v.k);
          return r;
        }
        if (v.k == KnElement::from_ab(AbElement::sigma_power(n, 1))) {
          Value r;
          r.kind = Value::K;
          r.k = KnElement::from_ab(AbElement::sigma_power(n, p));
          return r;
        }
        if (v.k == KnElement::from_ab(AbElement::sigma_power(n, -1))) {
          Value r;
          r.kind = Value::K;
          r.k = KnElement::from_ab(AbElement::sigma_power(n, -p));
          return r;
        }
        throw type_error("negative power of a non-invertible element", e.column);
      }
      if (v.kind == Value::F) {
        if (p < 0) throw type_error("negative power of an F-element", e.column);
        Value r;
        r.kind = Value::F;
        r.f = v.f.pow(p);
        return r;
      }
      throw type_error("cannot raise " + kind_name(v.kind), e.column);
    }
    case Expr::Sum: {
      Value acc = evaluate(e.args[0], n);
      if (e.signs[0] < 0) {
        Expr neg;
        neg.kind = Expr::Neg;
        neg.args.push_back(e.args[0]);
        acc = evaluate(neg, n);
      }
      for (size_t i = 1; i < e.args.size(); ++i) {
        Value v = evaluate(e.args[i], n);
        if (e.signs[i] < 0) {
          Expr neg;
          neg.kind = Expr::Neg;
          neg.args.push_back(e.args[i]);
          v = evaluate(neg, n);
        }
        if (acc.kind == Value::Scalar && v.kind == Value::K) acc = lift_to_k(acc, n, e.column);
        if (v.kind == Value::Scalar && acc.kind == Value::K) v = lift_to_k(v, n, e.column);
        if (acc.kind != v.kind)
          throw type_error("cannot add " + kind_name(acc.kind) + " and " + kind_name(v.kind),
                           e.args[i].column);
        switch (acc.kind) {
          case Value::Scalar: acc.scalar += v.scalar; break;
          case Value::K: acc.k += v.k; break;
          case Value::F: acc.f += v.f; break;
          case Value::KTensorV: acc.t += v.t; break;
          case Value::CE: acc.ce = acc.ce + v.ce; break;
          default: throw type_error("cannot add theta forms", e.column);
        }
      }
      return acc;
    }
    case Expr::Prod: {
      Value acc = evaluate(e.args[0], n);
      for (size_t i = 1; i < e.args.size(); ++i) {
        Value v = evaluate(e.args[i], n);
        if (acc.kind == Value::Scalar) {
          Rational c = acc.scalar;
          acc = v;
          switch (acc.kind) {
            case Value::Scalar: acc.scalar *= c; break;
            case Value::K: acc.k = acc.k.scaled(c); break;
            case Value::F: acc.f = acc.f.scaled(c); break;
            case Value::KTensorV: acc.t = acc.t.scaled(c); break;
            case Value::CE: acc.ce = acc.ce.scaled(c); break;
            default: throw type_error("cannot scale " + kind_name(acc.kind), e.column);
          }
          continue;
        }
        if (v.kind == Value::Scalar) {
          switch (acc.kind) {
            case Value::K: acc.k = acc.k.scaled(v.scalar); break;
            case Value::F: acc.f = acc.f.scaled(v.scalar); break;
            case Value::KTensorV: acc.t = acc.t.scaled(v.scalar); break;
            case Value::CE: acc.ce = acc.ce.scaled(v.scalar); break;
            default: throw type_error("cannot scale " + kind_name(acc.kind), e.column);
          }
          continue;
        }
        if (acc.kind == Value::K && v.kind == Value::K) {
          acc.k = kn_mul(acc.k, v.k);
        } else if (acc.kind == Value::F && v.kind == Value::F) {
          acc.f = acc.f * v.f;
        } else if (acc.kind == Value::KTensorV && v.kind == Value::KTensorV) {
          acc.t = acc.t * v.t;
        } else {
          throw type_error("cannot multiply " + kind_name(acc.kind) + " and " + kind_name(v.kind),
                           e.args[i].column);
        }
      }
      return acc;
    }
    case Expr::Tensor: {
      // CE form: theta-part (x) F-wedge
      Value first = evaluate(e.args[0], n);
      if (first.kind == Value::ThetaPart ||
          (e.args.size() == 2 && infer_kind(e.args[1], n) == Value::F &&
           e.args[1].kind == Expr::Wedge)) {
        std::vector<int> thetas;
        size_t leg_start = 0;
        if (first.kind == Value::ThetaPart) {
          thetas = first.thetas;
          leg_start = 1;
        } else if (first.kind == Value::Scalar && first.scalar == 1) {
          leg_start = 1;
        } else {
          throw type_error("CE cochain needs a theta part or 1 up front", e.args[0].column);
        }
        if (e.args.size() != leg_start + 1)
          throw type_error("CE cochain wants exactly one wedge block", e.column);
        const Expr& wedge = e.args[leg_start];
        std::vector<FdBElement> legs;
        if (wedge.kind == Expr::Wedge) {
          for (const auto& a : wedge.args) {
            Value lv = evaluate(a, n);
            if (lv.kind == Value::Scalar)
              legs.push_back(FdBElement::scalar(FAlg::FGd, n, lv.scalar));
            else if (lv.kind == Value::F)
              legs.push_back(lv.f);
            else
              throw type_error("wedge legs must be F-elements", a.column);
          }
        } else {
          Value lv = evaluate(wedge, n);
          if (lv.kind != Value::F) throw type_error("expected an F-element wedge", wedge.column);
          legs.push_back(lv.f);
        }
        FAlg alg = FAlg::FGd;
        for (auto& l : legs)
          if (!l.terms.empty()) alg = l.alg;
        for (auto& l : legs)
          if (l.is_scalar()) l.alg = alg;
        Value r;
        r.kind = Value::CE;
        r.ce = CECochain::from_legs(alg, n, thetas, legs);
        return r;
      }
      std::vector<KnElement> legs;
      for (const auto& a : e.args) {
        Value v = lift_to_k(evaluate(a, n), n, a.column);
        legs.push_back(v.k);
      }
      Value r;
      r.kind = Value::KTensorV;
      r.t = KnTensor::from_elements(legs);
      return r;
    }
    case Expr::Wedge: {
      Value first = evaluate(e.args[0], n);
      if (first.kind == Value::ThetaPart) {
        Value r = first;
        for (size_t i = 1; i < e.args.size(); ++i) {
          Value v = evaluate(e.args[i], n);
          if (v.kind != Value::ThetaPart)
            throw type_error("theta wedge legs must be theta generators", e.args[i].column);
          r.thetas.insert(r.thetas.end(), v.thetas.begin(), v.thetas.end());
        }
        return r;
      }
      throw type_error("a bare F-wedge needs a CE context (theta (x) ...)", e.column);
    }
    case Expr::Call: {
      Value v = evaluate(e.args[0], n);
      Value r;
      if (e.call == "eps") {
        r.kind = Value::Scalar;
        if (v.kind == Value::K)
          r.scalar = counit(v.k);
        else if (v.kind == Value::F)
          r.scalar = fdb_counit(v.f);
        else if (v.kind == Value::Scalar)
          r.scalar = v.scalar;
        else
          throw type_error("eps expects an algebra element", e.column);
        return r;
      }
      if (e.call == "cop") {
        Value kv = lift_to_k(v, n, e.column);
        r.kind = Value::KTensorV;
        r.t = coproduct(kv.k);
        return r;
      }
      if (e.call == "S") {
        if (v.kind == Value::F) {
          r.kind = Value::F;
          r.f = fdb_antipode(v.f);
          return r;
        }
        Value kv = lift_to_k(v, n, e.column);
        r.kind = Value::K;
        r.k = antipode(kv.k);
        return r;
      }
      throw type_error("unknown function " + e.call, e.column);
    }
    default: break;
  }
  throw type_error("unreachable expression", e.column);
}

std::string print_value(const Value& v, int n) {
  switch (v.kind) {
    case Value::Scalar: return to_string(v.scalar);
    case Value::K: return v.k.str();
    case Value::F: return v.f.str();
    case Value::KTensorV: return v.t.str();
    case Value::ThetaPart: {
      std::string out;
      for (size_t i = 0; i < v.thetas.size(); ++i) {
        if (i) out += " /\\ ";
        out += "th" + std::to_string(v.thetas[i]);
      }
      return out.empty() ? "1" : out;
    }
    case Value::CE: return v.ce.str();
  }
  (void)n;
  return "?";
}

namespace {

// trivial polynomial parser for jet components: variables x (n=1) or x1..xn
TruncSeries<Rational> parse_poly_text(const std::string& text, int n, int order, int base_col) {
  struct PTok {
    enum K { Num, Var, Plus, Minus, Star, Caret, LP, RP, End } k;
    Rational num;
    int var = 0;
    int col = 1;
  };
  std::vector<PTok> toks;
  size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    int col = base_col + static_cast<int>(pos);
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string num = text.substr(start, pos - start);
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        size_t ds = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == ds) throw parse_error("expected denominator", col);
        num += "/" + text.substr(ds, pos - ds);
      }
      toks.push_back({PTok::Num, rat_from_string(num), 0, col});
      continue;
    }
    if (c == 'x') {
      ++pos;
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      int var = 1;
      if (pos > start) var = std::stoi(text.substr(start, pos - start));
      if (var < 1 || var > n) throw parse_error("variable index out of range", col);
      toks.push_back({PTok::Var, 0, var, col});
      continue;
    }
    switch (c) {
      case '+': toks.push_back({PTok::Plus, 0, 0, col}); break;
      case '-': toks.push_back({PTok::Minus, 0, 0, col}); break;
      case '*': toks.push_back({PTok::Star, 0, 0, col}); break;
      case '^': toks.push_back({PTok::Caret, 0, 0, col}); break;
      case '(': toks.push_back({PTok::LP, 0, 0, col}); break;
      case ')': toks.push_back({PTok::RP, 0, 0, col}); break;
      default: throw parse_error(std::string("unexpected character '") + c + "' in jet", col);
    }
    ++pos;
  }
  toks.push_back({PTok::End, 0, 0, base_col + static_cast<int>(text.size())});

  using TS = TruncSeries<Rational>;
  size_t tp = 0;
  auto cur = [&]() -> const PTok& { return toks[tp]; };
  std::function<TS()> sum;
  std::function<TS()> atom = [&]() -> TS {
    if (cur().k == PTok::Num) {
      TS r = TS::constant(n, order, cur().num);
      ++tp;
      return r;
    }
    if (cur().k == PTok::Var) {
      TS r = TS::variable(n, order, cur().var - 1);
      ++tp;
      return r;
    }
    if (cur().k == PTok::LP) {
      ++tp;
      TS r = sum();
      if (cur().k != PTok::RP) throw parse_error("expected ')'", cur().col);
      ++tp;
      return r;
    }
    throw parse_error("expected a term", cur().col);
  };
  std::function<TS()> power = [&]() -> TS {
    TS b = atom();
    if (cur().k == PTok::Caret) {
      ++tp;
      if (cur().k != PTok::Num || cur().num.get_den() != 1)
        throw parse_error("expected integer exponent", cur().col);
      int e = static_cast<int>(cur().num.get_num().get_si());
      ++tp;
      TS r = TS::constant(n, order, 1);
      for (int i = 0; i < e; ++i) r = r * b;
      return r;
    }
    return b;
  };
  std::function<TS()> prod = [&]() -> TS {
    TS acc = power();
    for (;;) {
      if (cur().k == PTok::Star) {
        ++tp;
        acc = acc * power();
      } else if (cur().k == PTok::Num || cur().k == PTok::Var || cur().k == PTok::LP) {
        acc = acc * power();
      } else {
        break;
      }
    }
    return acc;
  };
  sum = [&]() -> TS {
    int sign = 1;
    if (cur().k == PTok::Minus) {
      sign = -1;
      ++tp;
    } else if (cur().k == PTok::Plus) {
      ++tp;
    }
    TS acc = prod().scaled(Rational(sign));
    while (cur().k == PTok::Plus || cur().k == PTok::Minus) {
      int s = cur().k == PTok::Plus ? 1 : -1;
      ++tp;
      acc = s > 0 ? acc + prod() : acc - prod();
    }
    return acc;
  };
  TS r = sum();
  if (cur().k != PTok::End) throw parse_error("trailing input in jet component", cur().col);
  return r;
}

}  // namespace

JetDiffeo<Rational> parse_jet(const std::string& text, int n, int order) {
  std::vector<TruncSeries<Rational>> comps;
  size_t start = 0;
  int col = 1;
  for (int i = 0; i < n; ++i) {
    size_t semi = text.find(';', start);
    std::string part = semi == std::string::npos ? text.substr(start)
                                                 : text.substr(start, semi - start);
    if (i < n - 1 && semi == std::string::npos)
      throw parse_error("jet needs " + std::to_string(n) + " components separated by ';'", col);
    comps.push_back(parse_poly_text(part, n, order, col));
    col += static_cast<int>(part.size()) + 1;
    start = semi + 1;
  }
  return JetDiffeo<Rational>::from_components(std::move(comps));
}

TruncSeries<Rational> parse_poly(const std::string& text, int n, int order) {
  return parse_poly_text(text, n, order, 1);
}

std::string print_jet(const JetDiffeo<Rational>& j) {
  std::string out;
  std::vector<std::string> vars;
  for (int i = 1; i <= j.n; ++i)
    vars.push_back(j.n == 1 ? "x" : "x" + std::to_string(i));
  for (int i = 0; i < j.n; ++i) {
    if (i) out += "; ";
    out += j.full_component(i).str(vars);
  }
  return out;
}

}  // namespace kappa
