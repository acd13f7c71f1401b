#include "elid/symbolic/diff_expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace elid::sym {

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(std::string_view(s).substr(0, slash));
    Rational den = parse_rational(std::string_view(s).substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a number: '" + s + "'");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("not a number: '" + s + "'");
    std::size_t used = 0;
    exponent = std::stol(s.substr(pos + 1), &used);
    if (pos + 1 + used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - scale;
  mpz_class ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(mantissa * ten_power) : Rational(mantissa, ten_power);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational frac(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------

Atom Atom::indep(int dir) {
  Atom a;
  a.kind = AtomKind::Indep;
  a.idx = {static_cast<int8_t>(dir), -1, -1, -1};
  return a;
}

Atom Atom::dep(Field f, int comp) {
  Atom a;
  a.kind = AtomKind::Dep;
  a.idx = {static_cast<int8_t>(f), static_cast<int8_t>(comp), -1, -1};
  return a;
}

Atom Atom::d1(Field f, int comp, int dir) {
  Atom a;
  a.kind = AtomKind::D1;
  a.idx = {static_cast<int8_t>(f), static_cast<int8_t>(comp), static_cast<int8_t>(dir), -1};
  return a;
}

Atom Atom::d2(Field f, int comp, int dir_a, int dir_b) {
  Atom a;
  a.kind = AtomKind::D2;
  a.idx = {static_cast<int8_t>(f), static_cast<int8_t>(comp), static_cast<int8_t>(std::min(dir_a, dir_b)),
           static_cast<int8_t>(std::max(dir_a, dir_b))};
  return a;
}

Atom Atom::func(FuncSym s, int comp, std::vector<int> args) {
  if (args.size() > 2) throw OrderError("formal partials of potentials are limited to second order");
  std::sort(args.begin(), args.end());
  Atom a;
  a.kind = AtomKind::Func;
  a.idx = {static_cast<int8_t>(s), static_cast<int8_t>(comp), -1, -1};
  for (std::size_t i = 0; i < args.size(); ++i) a.idx[2 + i] = static_cast<int8_t>(args[i]);
  return a;
}

Atom Atom::aux(AuxSym s, int comp) {
  Atom a;
  a.kind = AtomKind::Aux;
  a.idx = {static_cast<int8_t>(s), static_cast<int8_t>(comp), -1, -1};
  return a;
}

int arg_code(const Atom& c) {
  if (c.kind == AtomKind::Indep) return c.idx[0];
  if (c.kind == AtomKind::Dep) return 8 + 5 * c.idx[0] + c.idx[1];
  throw std::invalid_argument("arg_code: not a jet coordinate");
}

Atom coordinate_from_code(int code) {
  if (code < 8) return Atom::indep(code);
  code -= 8;
  return Atom::dep(static_cast<Field>(code / 5), code % 5);
}

Atom modulus_atom(int i, int k, int j, int l, ModuliSymmetry symmetry) {
  std::array<int8_t, 4> best{static_cast<int8_t>(i), static_cast<int8_t>(k), static_cast<int8_t>(j),
                             static_cast<int8_t>(l)};
  auto consider = [&](int a, int b, int c, int d) {
    std::array<int8_t, 4> cand{static_cast<int8_t>(a), static_cast<int8_t>(b), static_cast<int8_t>(c),
                               static_cast<int8_t>(d)};
    best = std::min(best, cand);
  };
  consider(j, l, i, k);
  if (symmetry == ModuliSymmetry::Full) {
    consider(k, i, j, l);
    consider(i, k, l, j);
    consider(k, i, l, j);
    consider(l, j, i, k);
    consider(j, l, k, i);
    consider(l, j, k, i);
  }
  Atom a;
  a.kind = AtomKind::Modulus;
  a.idx = best;
  return a;
}

namespace {

std::string dir_name(int d) { return d == 0 ? std::string("t") : "x" + std::to_string(d); }

std::string coord_name(int code) {
  Atom c = coordinate_from_code(code);
  if (c.kind == AtomKind::Indep) return dir_name(c.idx[0]);
  return (c.field() == Field::U ? "u" : "v") + std::to_string(c.comp());
}

}  // namespace

std::string Atom::name() const {
  switch (kind) {
    case AtomKind::Indep:
      return dir_name(idx[0]);
    case AtomKind::Dep:
      return (field() == Field::U ? "u" : "v") + std::to_string(comp());
    case AtomKind::D1:
      return (field() == Field::U ? "u" : "v") + std::to_string(comp()) + "_" + dir_name(idx[2]);
    case AtomKind::D2: {
      std::string s = (field() == Field::U ? "u" : "v") + std::to_string(comp()) + "_";
      if (idx[2] == 0 && idx[3] == 0) return s + "tt";
      return s + dir_name(idx[2]) + dir_name(idx[3]);
    }
    case AtomKind::Func: {
      std::string s = func_sym() == FuncSym::F ? "F" : func_sym() == FuncSym::H ? "H" : "G";
      if (func_sym() == FuncSym::G) s += std::to_string(comp());
      if (idx[2] >= 0) {
        s += "_";
        for (int m = 2; m < 4; ++m)
          if (idx[m] >= 0) s += coord_name(idx[m]);
      }
      return s;
    }
    case AtomKind::Modulus:
      return "C" + std::to_string(idx[0]) + std::to_string(idx[1]) + std::to_string(idx[2]) + std::to_string(idx[3]);
    case AtomKind::Aux: {
      auto s = static_cast<AuxSym>(idx[0]);
      return std::string(s == AuxSym::W ? "w" : s == AuxSym::Wv ? "wv" : "nu") + std::to_string(idx[1]);
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------

Monomial normalize_monomial(Monomial m) {
  std::sort(m.begin(), m.end(), [](const Factor& a, const Factor& b) { return a.atom < b.atom; });
  Monomial out;
  out.reserve(m.size());
  for (const Factor& f : m) {
    if (f.power == 0) continue;
    if (!out.empty() && out.back().atom == f.atom)
      out.back().power += f.power;
    else
      out.push_back(f);
    if (out.back().power == 0) out.pop_back();
  }
  return out;
}

namespace {

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].atom < b[j].atom) {
      out.push_back(a[i++]);
    } else if (b[j].atom < a[i].atom) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].atom, a[i].power + b[j].power});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

}  // namespace

DiffExpr::DiffExpr(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

DiffExpr DiffExpr::of(const Atom& a, int power) {
  DiffExpr e;
  if (power == 0)
    e.terms_.emplace(Monomial{}, Rational(1));
  else
    e.terms_.emplace(Monomial{{a, power}}, Rational(1));
  return e;
}

DiffExpr DiffExpr::from_terms(TermMap terms) {
  DiffExpr e;
  for (auto& [m, c] : terms) e.add_term(normalize_monomial(m), c);
  return e;
}

void DiffExpr::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational DiffExpr::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Rational> DiffExpr::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

int DiffExpr::derivative_order() const {
  int order = 0;
  for (const auto& [m, c] : terms_)
    for (const Factor& f : m) {
      if (f.atom.kind == AtomKind::D1) order = std::max(order, 1);
      if (f.atom.kind == AtomKind::D2) order = 2;
    }
  return order;
}

bool DiffExpr::any_atom(const std::function<bool(const Atom&)>& pred) const {
  for (const auto& [m, c] : terms_)
    for (const Factor& f : m)
      if (pred(f.atom)) return true;
  return false;
}

std::string DiffExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (m.empty() || mag != 1) {
      os << mag.get_str();
      need_star = true;
    }
    for (const Factor& f : m) {
      if (need_star) os << "*";
      os << f.atom.name();
      if (f.power != 1) os << "^" << f.power;
      need_star = true;
    }
  }
  return os.str();
}

DiffExpr& DiffExpr::operator+=(const DiffExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffExpr& DiffExpr::operator-=(const DiffExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
  return *this;
}

DiffExpr& DiffExpr::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

DiffExpr& DiffExpr::operator*=(const DiffExpr& o) {
  DiffExpr out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(multiply(ma, mb), ca * cb);
  *this = std::move(out);
  return *this;
}

DiffExpr pow(const DiffExpr& e, int k) {
  if (k < 0) throw std::invalid_argument("negative power of a differential polynomial");
  DiffExpr out(1);
  for (int i = 0; i < k; ++i) out *= e;
  return out;
}

DiffExpr normalize(const DiffExpr& e) {
  DiffExpr out;
  for (const auto& [m, c] : e.terms()) out.add_term(normalize_monomial(m), c);
  return out;
}

DiffExpr substitute(const DiffExpr& e, const std::function<std::optional<DiffExpr>(const Atom&)>& rule) {
  std::map<Atom, std::optional<DiffExpr>> cache;
  DiffExpr out;
  for (const auto& [m, c] : e.terms()) {
    DiffExpr term(c);
    Monomial kept;
    for (const Factor& f : m) {
      auto it = cache.find(f.atom);
      if (it == cache.end()) it = cache.emplace(f.atom, rule(f.atom)).first;
      if (it->second)
        term *= pow(*it->second, f.power);
      else
        kept.push_back(f);
      if (term.is_zero()) break;
    }
    if (term.is_zero()) continue;
    if (!kept.empty()) {
      DiffExpr k;
      k.add_term(normalize_monomial(kept), Rational(1));
      term *= k;
    }
    out += term;
  }
  return out;
}

DiffExpr F_() { return DiffExpr::of(Atom::func(FuncSym::F, 0)); }
DiffExpr F_u(int k) { return DiffExpr::of(Atom::func(FuncSym::F, 0, {arg_code(Atom::dep(Field::U, k))})); }
DiffExpr H_() { return DiffExpr::of(Atom::func(FuncSym::H, 0)); }
DiffExpr H_u(int k) { return DiffExpr::of(Atom::func(FuncSym::H, 0, {arg_code(Atom::dep(Field::U, k))})); }
DiffExpr H_v(int k) { return DiffExpr::of(Atom::func(FuncSym::H, 0, {arg_code(Atom::dep(Field::V, k))})); }
DiffExpr G_(int i) { return DiffExpr::of(Atom::func(FuncSym::G, i)); }

}  // namespace elid::sym
