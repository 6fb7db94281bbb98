#include "sosw/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "sosw/error.hpp"

namespace sosw {
namespace {

enum class Tok { Ident, Number, String, Op, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int col = 0;
  std::size_t offset = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
bool op_char(char c) { return std::string_view("+.*&^%@~;").find(c) != std::string_view::npos; }

std::vector<Token> lex(const std::string& src, int line0 = 1, int col0 = 1) {
  std::vector<Token> out;
  int line = line0, col = col0;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    t.offset = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != '"') throw ParseError("unterminated string", line, col);
      t.kind = Tok::String;
      t.text = src.substr(i + 1, j - i - 1);
      advance(j - i + 1);
    } else if (src.compare(i, 3, "!->") == 0) {
      t.kind = Tok::Punct;
      t.text = "!->";
      advance(3);
    } else if (src.compare(i, 2, "->") == 0 || src.compare(i, 2, "|-") == 0) {
      t.kind = Tok::Punct;
      t.text = src.substr(i, 2);
      advance(2);
    } else if (op_char(c)) {
      std::size_t j = i;
      while (j < src.size() && op_char(src[j])) ++j;
      t.kind = Tok::Op;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::string_view("()[]{},:=/<>|-").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  end.offset = src.size();
  out.push_back(end);
  return out;
}

// Cursor over a token range; the range always ends with an End token.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(const std::string& text) const {
    return (peek().kind == Tok::Punct || peek().kind == Tok::Op || peek().kind == Tok::Ident) && peek().text == text;
  }
  bool accept(const std::string& text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(const std::string& text) {
    if (!is(text)) fail("expected '" + text + "'");
    return next();
  }
  std::string ident(const std::string& what = "identifier") {
    if (peek().kind != Tok::Ident) fail("expected " + what);
    return next().text;
  }
  int number() {
    if (peek().kind != Tok::Number) fail("expected number");
    return std::stoi(next().text);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of statement" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Term parse_term_at(const Signature& sig, Cursor& c, bool closed, int min_prec = 0);

Term parse_primary(const Signature& sig, Cursor& c, bool closed) {
  if (c.accept("(")) {
    Term t = parse_term_at(sig, c, closed);
    c.expect(")");
    return t;
  }
  if (c.peek().kind != Tok::Ident) c.fail("expected term");
  Token id = c.next();
  const Symbol* s = sig.find(id.text);
  if (c.is("(")) {
    if (!s) throw Error(ErrorKind::Arity, "undeclared symbol '" + id.text + "' at line " + std::to_string(id.line) +
                                              ", column " + std::to_string(id.col));
    c.next();
    std::vector<Term> args;
    if (!c.is(")")) {
      args.push_back(parse_term_at(sig, c, closed));
      while (c.accept(",")) args.push_back(parse_term_at(sig, c, closed));
    }
    c.expect(")");
    Term t = Term::app(id.text, std::move(args));
    sig.check(t);
    return t;
  }
  if (s) {
    Term t = Term::app(id.text);
    sig.check(t);
    return t;
  }
  if (closed) throw ParseError("'" + id.text + "' is not a declared constant", id.line, id.col);
  return Term::var(id.text);
}

Term parse_term_at(const Signature& sig, Cursor& c, bool closed, int min_prec) {
  Term lhs = parse_primary(sig, c, closed);
  while (c.peek().kind == Tok::Op) {
    const Symbol* s = sig.find_infix(c.peek().text);
    if (!s) c.fail("unknown infix operator");
    if (s->precedence < min_prec) break;
    c.next();
    Term rhs = parse_term_at(sig, c, closed, s->precedence + 1);
    lhs = Term::app(s->name, {lhs, rhs});
  }
  return lhs;
}


std::string strip_comments(const std::string& s) {
  std::string out;
  bool skip = false;
  for (char ch : s) {
    if (ch == '#') skip = true;
    if (ch == '\n') skip = false;
    if (!skip) out += ch;
  }
  return out;
}

struct Statement {
  std::vector<Token> toks;  // terminated by End
  std::string raw;          // source text without comments
};

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : text_(text) {}

  TSS run() {
    auto toks = lex(text_);
    std::vector<Statement> stmts;
    for (std::size_t i = 0; i + 1 < toks.size();) {
      if (toks[i].col != 1) throw ParseError("statement must start in column 1", toks[i].line, toks[i].col);
      std::size_t j = i + 1;
      while (j + 1 < toks.size() && toks[j].col != 1) ++j;
      Statement st;
      st.toks.assign(toks.begin() + i, toks.begin() + j);
      Token end;
      end.kind = Tok::End;
      end.line = toks[j].line;
      end.col = toks[j].col;
      st.toks.push_back(end);
      st.raw = strip_comments(text_.substr(toks[i].offset, toks[j].offset - toks[i].offset));
      stmts.push_back(std::move(st));
      i = j;
    }
    for (auto& st : stmts) statement(st);
    for (auto& m : P_.markings)
      for (auto it = m.delta.begin(); it != m.delta.end();)
        it = it->second.liquid.empty() ? m.delta.erase(it) : std::next(it);
    P_.validate();
    return std::move(P_);
  }

 private:
  void statement(Statement& st) {
    Cursor c(st.toks);
    const Token& kw = c.peek();
    if (kw.kind != Tok::Ident) c.fail("expected keyword");
    const std::string k = c.next().text;
    if (k == "tss") {
      P_.name = c.ident("specification name");
    } else if (k == "actions") {
      c.expect(":");
      while (!c.at_end()) {
        const Token& t = c.peek();
        std::string a = c.ident("action");
        if (a == kTau) throw ParseError("tau is implicit and cannot be declared", t.line, t.col);
        if (P_.has_label(a)) throw ParseError("duplicate action '" + a + "'", t.line, t.col);
        P_.actions.push_back(a);
      }
    } else if (k == "set") {
      std::string n = c.ident("set name");
      if (!c.accept("=")) c.expect(":");
      std::vector<std::string> ls;
      while (!c.at_end()) ls.push_back(label(c, {}));
      sets_[n] = ls;
    } else if (k == "order") {
      c.expect(":");
      order_.clear();
      order_.push_back(label(c, {}));
      while (c.accept("<")) order_.push_back(label(c, {}));
      if (!c.at_end()) c.fail("expected '<'");
    } else if (k == "constants") {
      c.expect(":");
      while (!c.at_end()) {
        const Token& t = c.peek();
        std::string n = c.ident("constant");
        if (P_.sig.has(n)) throw ParseError("duplicate symbol '" + n + "'", t.line, t.col);
        P_.sig.add({n, 0, "", 0});
      }
    } else if (k == "function") {
      const Token& t = c.peek();
      Symbol s;
      s.name = c.ident("function name");
      c.expect("/");
      s.arity = c.number();
      if (c.accept("infix")) {
        if (s.arity != 2) throw Error(ErrorKind::Arity, "infix symbol '" + s.name + "' must be binary");
        if (c.peek().kind != Tok::Op) c.fail("expected operator");
        s.infix = c.next().text;
        s.precedence = c.number();
        if (P_.sig.find_infix(s.infix)) throw ParseError("duplicate operator '" + s.infix + "'", t.line, t.col);
      }
      if (P_.sig.has(s.name)) throw ParseError("duplicate symbol '" + s.name + "'", t.line, t.col);
      P_.sig.add(s);
      if (!c.at_end()) c.fail("unexpected token");
    } else if (k == "rule") {
      rule(c);
    } else if (k == "markings") {
      const Token& t = c.peek();
      std::string n = c.ident("marking set name");
      c.expect(":");
      if (P_.find_markings(n)) throw Error(ErrorKind::DuplicateMarking, "marking set '" + n + "' at line " +
                                                                           std::to_string(t.line) + " declared twice");
      MarkingSet m;
      m.name = n;
      seen_keys_.clear();
      while (!c.at_end()) marking_line(c, m);
      P_.markings.push_back(std::move(m));
    } else if (k == "aleph" || k == "lambda" || k == "delta") {
      // Shorthand for the marking set named "default".
      MarkingSet* m = nullptr;
      for (auto& ms : P_.markings)
        if (ms.name == "default") m = &ms;
      if (!m) {
        P_.markings.push_back(MarkingSet{});
        m = &P_.markings.back();
        seen_keys_.clear();
      }
      Cursor c2(st.toks);
      marking_line(c2, *m);
      if (!c2.at_end()) c2.fail("unexpected token");
    } else if (k == "base") {
      c.expect(":");
      if (!c.at_end()) {
        P_.base.push_back(parse_term_at(P_.sig, c, true));
        while (c.accept(",")) P_.base.push_back(parse_term_at(P_.sig, c, true));
      }
      if (!c.at_end()) c.fail("expected ','");
    } else if (k == "expect") {
      expectation(st, kw);
    } else {
      throw ParseError("unknown statement '" + k + "'", kw.line, kw.col);
    }
  }

  std::string label(Cursor& c, const std::map<std::string, std::string>& env) {
    const Token& t = c.peek();
    std::string l = c.ident("label");
    auto it = env.find(l);
    if (it != env.end()) l = it->second;
    if (!P_.has_label(l))
      throw Error(ErrorKind::UnknownAction, "undeclared action '" + l + "' at line " + std::to_string(t.line) +
                                                ", column " + std::to_string(t.col));
    return l;
  }

  std::vector<std::string> label_set(const std::string& n, const Token& at) {
    if (sets_.count(n)) return sets_.at(n);
    if (n == "A") return P_.actions;
    if (n == "All") return P_.labels();
    if (P_.has_label(n)) return {n};
    throw ParseError("unknown label set '" + n + "'", at.line, at.col);
  }

  void marking_line(Cursor& c, MarkingSet& m) {
    const Token& kt = c.peek();
    std::string key = c.ident("aleph, lambda or delta");
    std::vector<std::string> delta_labels;
    std::string dedup = key;
    if (key == "delta") {
      c.expect("[");
      const Token& lt = c.peek();
      delta_labels = label_set(c.ident("label or set"), lt);
      c.expect("]");
    } else if (key != "aleph" && key != "lambda") {
      throw ParseError("unknown marking '" + key + "'", kt.line, kt.col);
    }
    c.expect(":");
    ArgumentMarking am;
    if (c.accept("*")) {
      am = ArgumentMarking::universal(P_.sig);
    } else {
      while (c.peek().kind == Tok::Ident && !(c.peek(1).text == ":" || c.peek(1).text == "[")) {
        const Token& ft = c.peek();
        std::string f = c.ident();
        c.expect("/");
        int i = c.number();
        const Symbol* s = P_.sig.find(f);
        if (!s || i < 1 || i > s->arity)
          throw Error(ErrorKind::Arity, "marking entry " + f + "/" + std::to_string(i) + " at line " +
                                            std::to_string(ft.line) + " does not name an argument");
        am.liquid.insert({f, i});
      }
    }
    auto dup = [&](const std::string& what) {
      if (!seen_keys_.insert(m.name + "/" + what).second)
        throw Error(ErrorKind::DuplicateMarking, what + " declared twice in marking set '" + m.name + "' (line " +
                                                     std::to_string(kt.line) + ")");
    };
    if (key == "aleph") {
      dup("aleph");
      m.aleph.liquid = am.liquid;
    } else if (key == "lambda") {
      dup("lambda");
      m.lambda.liquid = am.liquid;
    } else {
      for (const auto& l : delta_labels) {
        dup("delta[" + l + "]");
        m.delta[l] = ArgumentMarking{"delta:" + l, am.liquid};
      }
    }
  }

  // Parses "t -a-> u" or "t -a!->".
  Literal literal(Cursor& c, const std::map<std::string, std::string>& env) {
    Term lhs = parse_term_at(P_.sig, c, false);
    c.expect("-");
    std::string l = label(c, env);
    if (c.accept("!->")) return Literal::neg(lhs, l);
    c.expect("->");
    Term rhs = parse_term_at(P_.sig, c, false);
    return Literal::pos(lhs, l, rhs);
  }

  void premise_item(Cursor& c, const std::map<std::string, std::string>& env, std::vector<Literal>& out) {
    if (!c.accept("{")) {
      out.push_back(literal(c, env));
      return;
    }
    // { lit | m > l } or { lit | m in SET }: the literal is re-read per value of m.
    Cursor save = c;
    int depth = 0;
    while (!(depth == 0 && c.is("|"))) {
      if (c.at_end()) c.fail("expected '|'");
      if (c.is("(")) ++depth;
      if (c.is(")")) --depth;
      c.next();
    }
    c.expect("|");
    std::string m = c.ident("comprehension variable");
    std::vector<std::string> values;
    if (c.accept(">")) {
      const Token& lt = c.peek();
      std::string l = label(c, env);
      auto it = std::find(order_.begin(), order_.end(), l);
      if (it == order_.end()) throw ParseError("label '" + l + "' is not in the declared order", lt.line, lt.col);
      values.assign(it + 1, order_.end());
    } else if (c.accept("in")) {
      const Token& st = c.peek();
      values = label_set(c.ident("label set"), st);
    } else {
      c.fail("expected '>' or 'in'");
    }
    c.expect("}");
    Cursor after = c;
    for (const auto& v : values) {
      auto env2 = env;
      env2[m] = v;
      Cursor body = save;
      out.push_back(literal(body, env2));
      if (!body.is("|")) body.fail("expected '|'");
    }
    c = after;
  }

  void rule(Cursor& c) {
    ++P_.schema_count;
    std::string name;
    if (c.peek().kind == Tok::Ident || c.peek().kind == Tok::String) name = c.next().text;
    else name = "r" + std::to_string(P_.schema_count);

    std::vector<std::pair<std::string, std::vector<std::string>>> schema;
    if (c.accept("[")) {
      do {
        std::string v = c.ident("schema variable");
        c.expect("in");
        const Token& st = c.peek();
        schema.push_back({v, label_set(c.ident("label set"), st)});
      } while (c.accept(","));
      c.expect("]");
    }
    c.expect(":");
    const Cursor body = c;

    std::vector<std::map<std::string, std::string>> envs{{}};
    for (const auto& [v, vals] : schema) {
      std::vector<std::map<std::string, std::string>> next;
      for (const auto& e : envs)
        for (const auto& val : vals) {
          auto e2 = e;
          e2[v] = val;
          next.push_back(std::move(e2));
        }
      envs = std::move(next);
    }
    for (const auto& env : envs) {
      Cursor rc = body;
      Rule r = rule_body(rc, env);
      r.name = name;
      if (!schema.empty()) {
        r.name += "[";
        for (std::size_t i = 0; i < schema.size(); ++i) {
          if (i) r.name += ",";
          r.name += schema[i].first + "=" + env.at(schema[i].first);
        }
        r.name += "]";
      }
      for (const auto& old : P_.rules)
        if (old.name == r.name) throw ParseError("duplicate rule name '" + r.name + "'", c.peek().line, c.peek().col);
      P_.rules.push_back(std::move(r));
    }
  }

 public:
  Rule rule_body(Cursor& c, const std::map<std::string, std::string>& env) {
    Rule r;
    if (c.accept("|-")) {
      r.conclusion = literal(c, env);
    } else {
      std::vector<Literal> items;
      premise_item(c, env, items);
      while (c.accept(",")) premise_item(c, env, items);
      if (c.accept("|-")) {
        r.premises = std::move(items);
        r.conclusion = literal(c, env);
      } else if (items.size() == 1) {
        r.conclusion = items[0];
      } else {
        c.fail("expected '|-'");
      }
    }
    if (!c.at_end()) c.fail("unexpected token after rule");
    r.normalize();
    return r;
  }

  TSS& tss() { return P_; }

 private:
  void expectation(const Statement& st, const Token& kw) {
    std::istringstream in(st.raw);
    std::vector<std::string> w;
    for (std::string s; in >> s;) w.push_back(s);
    auto fail = [&](const std::string& m) -> void { throw ParseError(m, kw.line, kw.col); };
    if (w.size() < 2) fail("incomplete expectation");
    Expectation e;
    if (w[1] == "format") {
      e.kind = Expectation::Kind::Format;
      std::size_t i = 2;
      if (i >= w.size()) fail("expected format name");
      e.format = w[i++];
      if (i < w.size() && w[i].rfind("markings=", 0) == 0) e.markings = w[i++].substr(9);
      if (i >= w.size()) fail("expected pass, fail or inconclusive");
      e.result = w[i++];
      if (e.result != "pass" && e.result != "fail" && e.result != "inconclusive") fail("bad result '" + e.result + "'");
      if (i < w.size()) {
        if (w[i] != "conditions") fail("expected 'conditions'");
        e.conditions = std::vector<std::string>(w.begin() + i + 1, w.end());
      }
    } else if (w[1] == "congruence" || w[1] == "violation") {
      if (w.size() < 5 || w[3] != "depth") fail("expected '<kind> depth <n>'");
      auto k = parse_equivalence(w[2]);
      if (!k) fail("unknown equivalence '" + w[2] + "'");
      e.equiv = *k;
      e.depth = std::stoi(w[4]);
      if (w[1] == "congruence") {
        e.kind = Expectation::Kind::Congruence;
        if (w.size() != 6 || w[5] != "clean") fail("expected 'clean'");
      } else {
        e.kind = Expectation::Kind::Violation;
        // Locate the text after "depth N" and parse two consecutive terms.
        std::size_t pos = st.raw.find("depth");
        pos = st.raw.find(w[4], pos + 5) + w[4].size();
        Cursor c(lex(st.raw.substr(pos), kw.line, kw.col));
        e.left = parse_term_at(P_.sig, c, true);
        e.right = parse_term_at(P_.sig, c, true);
        if (!c.at_end()) c.fail("unexpected token after terms");
      }
    } else {
      fail("unknown expectation '" + w[1] + "'");
    }
    P_.expectations.push_back(std::move(e));
  }

  const std::string& text_;
  TSS P_;
  std::map<std::string, std::vector<std::string>> sets_;
  std::vector<std::string> order_;
  std::set<std::string> seen_keys_;
};

std::string marking_list(const ArgumentMarking& m) {
  std::string s;
  for (const auto& [f, i] : m.liquid) s += " " + f + "/" + std::to_string(i);
  return s;
}

}  // namespace

TSS parse_spec(const std::string& text) { return SpecParser(text).run(); }

Term parse_term(const Signature& sig, const std::string& text, bool closed) {
  Cursor c(lex(text));
  Term t = parse_term_at(sig, c, closed);
  if (!c.at_end()) c.fail("unexpected token after term");
  return t;
}

Rule parse_rule(const TSS& P, const std::string& text) {
  std::string src = "tss tmp\n";
  SpecParser p(src);
  p.tss() = P;
  Cursor c(lex(text));
  return p.rule_body(c, {});
}

std::string print_spec(const TSS& P) {
  std::ostringstream o;
  o << "tss " << (P.name.empty() ? "unnamed" : P.name) << "\n";
  if (!P.actions.empty()) {
    o << "actions:";
    for (const auto& a : P.actions) o << " " << a;
    o << "\n";
  }
  auto consts = P.sig.constants();
  if (!consts.empty()) {
    o << "constants:";
    for (const auto& s : consts) o << " " << s.name;
    o << "\n";
  }
  for (const auto& s : P.sig.functions()) {
    o << "function " << s.name << "/" << s.arity;
    if (!s.infix.empty()) o << " infix " << s.infix << " " << s.precedence;
    o << "\n";
  }
  for (const auto& m : P.markings) {
    o << "markings " << m.name << ":\n";
    o << "  aleph:" << marking_list(m.aleph) << "\n";
    o << "  lambda:" << marking_list(m.lambda) << "\n";
    for (const auto& [l, d] : m.delta) o << "  delta[" << l << "]:" << marking_list(d) << "\n";
  }
  for (const auto& r : P.rules) o << "rule \"" << r.name << "\": " << print_rule(P.sig, r) << "\n";
  if (!P.base.empty()) {
    o << "base:";
    for (std::size_t i = 0; i < P.base.size(); ++i) o << (i ? ", " : " ") << P.sig.print(P.base[i]);
    o << "\n";
  }
  for (const auto& e : P.expectations) {
    o << "expect ";
    switch (e.kind) {
      case Expectation::Kind::Format:
        o << "format " << e.format;
        if (!e.markings.empty()) o << " markings=" << e.markings;
        o << " " << e.result;
        if (e.conditions) {
          o << " conditions";
          for (const auto& c : *e.conditions) o << " " << c;
        }
        break;
      case Expectation::Kind::Congruence:
        o << "congruence " << equivalence_name(e.equiv) << " depth " << e.depth << " clean";
        break;
      case Expectation::Kind::Violation:
        o << "violation " << equivalence_name(e.equiv) << " depth " << e.depth << " " << P.sig.print(e.left) << " "
          << P.sig.print(e.right);
        break;
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace sosw
