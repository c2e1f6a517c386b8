#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dlkb/text_format.hpp"

namespace dlkb {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnexpectedToken: return "UnexpectedToken";
    case ParseErrorKind::UnknownKeyword: return "UnknownKeyword";
    case ParseErrorKind::UndeclaredEntity: return "UndeclaredEntity";
    case ParseErrorKind::MalformedNumber: return "MalformedNumber";
    case ParseErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ParseErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
  }
  return "ParseError";
}

ParseError::ParseError(SourceLocation location, ParseErrorKind kind, std::string message)
    : Error(std::to_string(location.line) + ":" + std::to_string(location.column) + ": " +
            to_string(kind) + ": " + message),
      location_(location),
      kind_(kind),
      detail_(std::move(message)) {}

namespace {

enum class TokenKind { Ident, Keyword, String, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceLocation loc;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_part(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = TokenKind::End;
        out.push_back(t);
        return out;
      }
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == '"') {
        t.kind = TokenKind::String;
        t.text = read_string(t.loc);
      } else if (std::isdigit(c) ||
                 ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = TokenKind::Number;
        t.text = read_number(t.loc);
      } else if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = TokenKind::Ident;
        if (pos_ < src_.size() && src_[pos_] == ':') {
          advance();
          t.kind = TokenKind::Keyword;
        }
      } else if ((c == '>' || c == '<') && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
        t.kind = TokenKind::Punct;
        t.text = std::string(src_.substr(pos_, 2));
        advance();
        advance();
      } else if (std::string_view("(){}[],@<>=").find(static_cast<char>(c)) !=
                 std::string_view::npos) {
        t.kind = TokenKind::Punct;
        t.text = std::string(1, static_cast<char>(c));
        advance();
      } else {
        throw ParseError(t.loc, ParseErrorKind::UnexpectedToken,
                         "unexpected character '" + std::string(1, static_cast<char>(c)) +
                             "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string read_string(SourceLocation start) {
    advance();  // opening quote
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        advance();
      }
      out.push_back(src_[pos_]);
      advance();
    }
    if (pos_ >= src_.size()) {
      throw ParseError(start, ParseErrorKind::UnexpectedToken, "unterminated string");
    }
    advance();  // closing quote
    return out;
  }

  std::string read_number(SourceLocation start) {
    std::size_t begin = pos_;
    advance();
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      advance();
    }
    bool malformed = false;
    while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) {
      malformed = true;
      advance();
    }
    std::string text(src_.substr(begin, pos_ - begin));
    if (malformed || !Decimal::parse(text)) {
      throw ParseError(start, ParseErrorKind::MalformedNumber,
                       "malformed number '" + text + "'");
    }
    return text;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words = {
      "and", "or",    "not",     "some",  "only",  "value", "min",
      "max", "exactly", "inverse", "Thing", "Nothing", "range", "label"};
  return words;
}

enum class PropertyKind { Object, Data };

class Parser {
 public:
  Parser(std::vector<Token> tokens, KnowledgeBase& kb) : toks_(std::move(tokens)), kb_(kb) {}

  void document() {
    while (!at_end()) frame();
    check_nominals(&kb_);
  }

  Concept standalone_expression(const KnowledgeBase* against) {
    Concept c = expression();
    if (!at_end()) unexpected(peek());
    check_nominals(against);
    return c;
  }

 private:
  // ---- token helpers -----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const char* p) const {
    return peek().kind == TokenKind::Punct && peek().text == p;
  }
  bool is_word(const char* w) const {
    return peek().kind == TokenKind::Ident && peek().text == w;
  }
  bool accept_punct(const char* p) {
    if (!is_punct(p)) return false;
    take();
    return true;
  }
  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    take();
    return true;
  }

  [[noreturn]] void unexpected(const Token& t) const {
    if (t.kind == TokenKind::End) {
      // Point at the last real token, the one left dangling.
      const Token& last = pos_ > 0 ? toks_[pos_ - 1] : t;
      throw ParseError(last.loc, ParseErrorKind::UnexpectedToken,
                       "input ends after '" + last.text + "'");
    }
    throw ParseError(t.loc, ParseErrorKind::UnexpectedToken,
                     "unexpected '" + t.text + (t.kind == TokenKind::Keyword ? ":" : "") +
                         "'");
  }

  void expect_punct(const char* p) {
    if (!accept_punct(p)) unexpected(peek());
  }

  // A plain identifier (not reserved) or a quoted string.
  std::string name() {
    const Token& t = peek();
    if (t.kind == TokenKind::String ||
        (t.kind == TokenKind::Ident && !reserved_words().contains(t.text))) {
      return take().text;
    }
    unexpected(t);
  }

  bool at_name() const {
    const Token& t = peek();
    return t.kind == TokenKind::String ||
           (t.kind == TokenKind::Ident && !reserved_words().contains(t.text));
  }

  void note_property(const std::string& p, PropertyKind kind, SourceLocation loc) {
    auto [it, inserted] = property_kinds_.emplace(p, kind);
    if (!inserted && it->second != kind) {
      throw ParseError(loc, ParseErrorKind::DuplicateDeclaration,
                       "'" + p + "' is declared both as object and data property");
    }
  }

  RoleExpr role() {
    if (accept_word("inverse")) {
      bool paren = accept_punct("(");
      RoleExpr inner = role();
      if (paren) expect_punct(")");
      return inner.inverse();
    }
    SourceLocation loc = peek().loc;
    std::string n = name();
    note_property(n, PropertyKind::Object, loc);
    return {n, false};
  }

  std::string individual_ref() {
    SourceLocation loc = peek().loc;
    std::string n = name();
    nominal_refs_.emplace_back(n, loc);
    return n;
  }

  // ---- expressions -------------------------------------------------------

  Concept expression() {
    std::vector<Concept> ops{conjunction()};
    while (accept_word("or")) ops.push_back(conjunction());
    return Concept::disjunction(std::move(ops));
  }

  Concept conjunction() {
    std::vector<Concept> ops{unary()};
    while (accept_word("and")) ops.push_back(unary());
    return Concept::conjunction(std::move(ops));
  }

  Concept unary() {
    if (accept_word("not")) return Concept::negation(unary());
    return primary();
  }

  static bool restriction_word(const Token& t) {
    if (t.kind != TokenKind::Ident) return false;
    return t.text == "some" || t.text == "only" || t.text == "value" || t.text == "min" ||
           t.text == "max" || t.text == "exactly";
  }

  Concept primary() {
    const Token& t = peek();
    if (accept_punct("(")) {
      Concept inner = expression();
      expect_punct(")");
      return inner;
    }
    if (accept_punct("{")) {
      std::vector<std::string> inds{individual_ref()};
      while (accept_punct(",")) inds.push_back(individual_ref());
      expect_punct("}");
      return Concept::one_of(std::move(inds));
    }
    if (accept_word("Thing")) return Concept::top();
    if (accept_word("Nothing")) return Concept::bottom();
    if (is_word("inverse") || (at_name() && restriction_word(peek(1)))) {
      return restriction();
    }
    if (at_name()) return Concept::atomic(take().text);
    unexpected(t);
  }

  unsigned cardinality() {
    const Token& t = peek();
    if (t.kind != TokenKind::Number) unexpected(t);
    const std::string& text = t.text;
    if (text.find_first_not_of("0123456789") != std::string::npos || text.size() > 9) {
      throw ParseError(t.loc, ParseErrorKind::MalformedNumber,
                       "cardinality must be a non-negative integer, got '" + text + "'");
    }
    take();
    return static_cast<unsigned>(std::stoul(text));
  }

  NumericRange range_literal() {
    expect_punct("[");
    NumericRange range;
    bool first = true;
    while (!is_punct("]")) {
      if (!first) expect_punct(",");
      first = false;
      const Token& op = peek();
      if (op.kind != TokenKind::Punct ||
          (op.text != ">=" && op.text != ">" && op.text != "<=" && op.text != "<")) {
        unexpected(op);
      }
      std::string facet = take().text;
      const Token& num = peek();
      if (num.kind != TokenKind::Number) unexpected(num);
      Decimal value = *Decimal::parse(take().text);
      bool lower = facet[0] == '>';
      if ((lower && range.has_lower()) || (!lower && range.has_upper())) {
        throw ParseError(op.loc, ParseErrorKind::UnexpectedToken,
                         "second " + std::string(lower ? "lower" : "upper") + " facet '" +
                             facet + "'");
      }
      if (facet == ">=") range.min_inclusive = value;
      if (facet == ">") range.min_exclusive = value;
      if (facet == "<=") range.max_inclusive = value;
      if (facet == "<") range.max_exclusive = value;
    }
    expect_punct("]");
    return range;
  }

  Concept restriction() {
    SourceLocation role_loc = peek().loc;
    bool inverted_syntax = is_word("inverse");

    // Data restriction: P some range[...] or P value <number>.
    if (!inverted_syntax) {
      const Token& kw = peek(1);
      const Token& after = peek(2);
      bool data_some = kw.text == "some" && after.kind == TokenKind::Ident &&
                       after.text == "range" && peek(3).kind == TokenKind::Punct &&
                       peek(3).text == "[";
      bool data_value = kw.text == "value" && after.kind == TokenKind::Number;
      if (data_some || data_value) {
        std::string prop = name();
        note_property(prop, PropertyKind::Data, role_loc);
        take();  // some / value
        if (data_some) {
          take();  // range
          return Concept::data_some(prop, range_literal());
        }
        Decimal v = *Decimal::parse(take().text);
        NumericRange point;
        point.min_inclusive = v;
        point.max_inclusive = v;
        return Concept::data_some(prop, point);
      }
    }

    RoleExpr r = role();
    const Token& kw = peek();
    if (!restriction_word(kw)) unexpected(kw);
    std::string op = take().text;
    if (op == "some" || op == "only") {
      if (at_end() || peek().kind == TokenKind::Keyword || is_punct(")") ||
          is_punct(",")) {
        // The filler is missing: report the dangling quantifier itself.
        throw ParseError(toks_[pos_ - 1].loc, ParseErrorKind::UnexpectedToken,
                         "missing filler after '" + op + "'");
      }
      Concept filler = unary();
      return op == "some" ? Concept::exists(r, filler) : Concept::forall(r, filler);
    }
    if (op == "value") {
      if (!at_name()) {
        throw ParseError(toks_[pos_ - 1].loc, ParseErrorKind::UnexpectedToken,
                         "missing individual after 'value'");
      }
      return Concept::has_value(r, individual_ref());
    }
    unsigned n = cardinality();
    if (op == "min") return Concept::at_least(n, r);
    if (op == "max") return Concept::at_most(n, r);
    return Concept::conjunction({Concept::at_least(n, r), Concept::at_most(n, r)});
  }

  std::vector<Concept> expression_list() {
    std::vector<Concept> out{expression()};
    while (accept_punct(",")) out.push_back(expression());
    return out;
  }

  // ---- frames ------------------------------------------------------------

  bool at_section() const { return peek().kind == TokenKind::Keyword; }

  static bool frame_keyword(const std::string& k) {
    return k == "Class" || k == "ObjectProperty" || k == "DataProperty" ||
           k == "Individual" || k == "GeneralAxiom";
  }

  void labels(const std::string& entity) {
    do {
      if (!accept_word("label")) unexpected(peek());
      const Token& text = peek();
      if (text.kind != TokenKind::String) unexpected(text);
      std::string value = take().text;
      expect_punct("@");
      const Token& tag = peek();
      if (tag.kind != TokenKind::Ident) unexpected(tag);
      kb_.set_label(entity, take().text, value);
    } while (accept_punct(","));
  }

  void frame() {
    const Token& t = peek();
    if (t.kind != TokenKind::Keyword) unexpected(t);
    if (!frame_keyword(t.text)) {
      throw ParseError(t.loc, ParseErrorKind::UnknownKeyword,
                       "unknown frame keyword '" + t.text + ":'");
    }
    std::string kind = take().text;
    if (kind == "GeneralAxiom") return general_axiom();
    SourceLocation name_loc = peek().loc;
    std::string entity = name();
    if (kind == "Class") {
      kb_.declare_class(entity);
      class_frame(entity);
    } else if (kind == "ObjectProperty") {
      note_property(entity, PropertyKind::Object, name_loc);
      kb_.declare_role(entity);
      property_frame(entity);
    } else if (kind == "DataProperty") {
      note_property(entity, PropertyKind::Data, name_loc);
      kb_.declare_data_property(entity);
      data_property_frame(entity);
    } else {
      kb_.declare_individual(entity);
      individual_frame(entity, name_loc);
    }
  }

  [[noreturn]] void unknown_section(const Token& t) const {
    throw ParseError(t.loc, ParseErrorKind::UnknownKeyword,
                     "unknown section '" + t.text + ":'");
  }

  void class_frame(const std::string& cls) {
    const Concept self = Concept::atomic(cls);
    while (at_section() && !frame_keyword(peek().text)) {
      const Token& t = take();
      if (t.text == "Annotations") {
        labels(cls);
      } else if (t.text == "SubClassOf") {
        for (Concept& c : expression_list()) kb_.add(SubClassOf{self, std::move(c)});
      } else if (t.text == "EquivalentTo") {
        for (Concept& c : expression_list()) kb_.add(EquivalentClasses{self, std::move(c)});
      } else if (t.text == "DisjointWith") {
        for (Concept& c : expression_list()) kb_.add(DisjointClasses{self, std::move(c)});
      } else {
        unknown_section(t);
      }
    }
  }

  std::vector<RoleExpr> role_list() {
    std::vector<RoleExpr> out{role()};
    while (accept_punct(",")) out.push_back(role());
    return out;
  }

  void property_frame(const std::string& r) {
    const RoleExpr self{r, false};
    while (at_section() && !frame_keyword(peek().text)) {
      const Token& t = take();
      if (t.text == "Annotations") {
        labels(r);
      } else if (t.text == "SubPropertyOf") {
        for (const RoleExpr& s : role_list()) kb_.add_sub_role(self, s);
      } else if (t.text == "InverseSubPropertyOf") {
        for (const RoleExpr& s : role_list()) kb_.add_sub_role(self.inverse(), s);
      } else if (t.text == "InverseOf") {
        SourceLocation loc = peek().loc;
        std::string inv = name();
        note_property(inv, PropertyKind::Object, loc);
        kb_.add_inverse_pair(r, inv);
      } else if (t.text == "EquivalentTo") {
        do {
          SourceLocation loc = peek().loc;
          std::string other = name();
          note_property(other, PropertyKind::Object, loc);
          kb_.add_equivalent_roles(r, other);
        } while (accept_punct(","));
      } else if (t.text == "Characteristics") {
        characteristics(r, /*data=*/false);
      } else if (t.text == "Domain") {
        for (Concept& c : expression_list()) kb_.add(Domain{self, std::move(c)});
      } else if (t.text == "Range") {
        for (Concept& c : expression_list()) kb_.add(Range{self, std::move(c)});
      } else {
        unknown_section(t);
      }
    }
  }

  void characteristics(const std::string& r, bool data) {
    bool any = false;
    for (;;) {
      const Token& t = peek();
      if (t.kind != TokenKind::Ident) break;
      if (t.text == "Functional") {
        data ? kb_.set_functional_data(r) : kb_.set_functional(r);
      } else if (!data && t.text == "Transitive") {
        kb_.set_transitive(r);
      } else if (!data && t.text == "Symmetric") {
        kb_.set_symmetric(r);
      } else if (!data && t.text == "InverseFunctional") {
        kb_.set_inverse_functional(r);
      } else {
        throw ParseError(t.loc, ParseErrorKind::UnsupportedConstruct,
                         "unsupported characteristic '" + t.text + "'");
      }
      take();
      any = true;
      accept_punct(",");
    }
    if (!any) unexpected(peek());
  }

  void data_property_frame(const std::string& p) {
    while (at_section() && !frame_keyword(peek().text)) {
      const Token& t = take();
      if (t.text == "Annotations") {
        labels(p);
      } else if (t.text == "Characteristics") {
        characteristics(p, /*data=*/true);
      } else {
        unknown_section(t);
      }
    }
  }

  void add_assertion(const ABoxAssertion& a, SourceLocation loc) {
    try {
      kb_.add(a);
    } catch (const KbError& e) {
      throw ParseError(loc, ParseErrorKind::UnexpectedToken, e.what());
    }
  }

  void individual_frame(const std::string& ind, SourceLocation) {
    while (at_section() && !frame_keyword(peek().text)) {
      const Token& t = take();
      if (t.text == "Annotations") {
        labels(ind);
      } else if (t.text == "Types") {
        for (Concept& c : expression_list()) kb_.add(ClassAssertion{std::move(c), ind});
      } else if (t.text == "Facts") {
        do {
          fact(ind);
        } while (accept_punct(","));
      } else if (t.text == "SameAs" || t.text == "DifferentFrom") {
        bool same = t.text == "SameAs";
        do {
          SourceLocation loc = peek().loc;
          std::string other = name();
          if (same) {
            add_assertion(SameAs{ind, other}, loc);
          } else {
            add_assertion(DifferentFrom{ind, other}, loc);
          }
        } while (accept_punct(","));
      } else {
        unknown_section(t);
      }
    }
  }

  void fact(const std::string& subject) {
    SourceLocation loc = peek().loc;
    if (at_name() && peek(1).kind == TokenKind::Number) {
      std::string prop = take().text;
      note_property(prop, PropertyKind::Data, loc);
      Decimal value = *Decimal::parse(take().text);
      kb_.add(DataAssertion{prop, subject, value});
      return;
    }
    RoleExpr r = role();
    SourceLocation obj_loc = peek().loc;
    if (!at_name()) unexpected(peek());
    add_assertion(RoleAssertion{r, subject, take().text}, obj_loc);
  }

  void general_axiom() {
    Concept lhs = expression();
    const Token& t = peek();
    if (t.kind != TokenKind::Keyword) unexpected(t);
    take();
    if (t.text == "SubClassOf") {
      kb_.add(SubClassOf{lhs, expression()});
    } else if (t.text == "EquivalentTo") {
      kb_.add(EquivalentClasses{lhs, expression()});
    } else if (t.text == "DisjointWith") {
      kb_.add(DisjointClasses{lhs, expression()});
    } else {
      unknown_section(t);
    }
  }

  void check_nominals(const KnowledgeBase* against) const {
    if (against == nullptr) return;
    for (const auto& [ind, loc] : nominal_refs_) {
      if (!against->individual_names().contains(ind)) {
        throw ParseError(loc, ParseErrorKind::UndeclaredEntity,
                         "nominal refers to undeclared individual '" + ind + "'");
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  KnowledgeBase& kb_;
  std::map<std::string, PropertyKind> property_kinds_;
  std::vector<std::pair<std::string, SourceLocation>> nominal_refs_;
};

}  // namespace

KnowledgeBase parse_text(std::string_view source) {
  KnowledgeBase kb;
  Parser parser(Lexer(source).run(), kb);
  parser.document();
  return kb;
}

Concept parse_concept(std::string_view text, const KnowledgeBase* kb) {
  KnowledgeBase scratch;
  Parser parser(Lexer(text).run(), scratch);
  return parser.standalone_expression(kb);
}

std::string quote_name(const std::string& name) {
  bool plain = !name.empty() && ident_start(static_cast<unsigned char>(name[0])) &&
               !reserved_words().contains(name);
  for (char c : name) plain = plain && ident_part(static_cast<unsigned char>(c));
  if (plain) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace dlkb
