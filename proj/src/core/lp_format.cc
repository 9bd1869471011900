// Copyright 2026 The primalkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "primalkit/core/lp_format.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace primalkit {

LpParseError::LpParseError(const std::string& message, int line, int column,
                           std::string token)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message +
                         (token.empty() ? "" : " at token '" + token + "'")),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

namespace {

enum class TokenKind {
  kIdent,
  kNumber,
  kSense,
  kPlus,
  kMinus,
  kColon,
  kDoubleColon,
  kEof,
};

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
  bool line_start;
  double number = 0.0;
};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentBody(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '_': case '.': case '[': case ']': case '!': case '#': case '$':
    case '%': case '&': case ';': case '?': case '@': case '\'': case '{':
    case '}': case '|': case '~':
      return true;
    default:
      return false;
  }
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> Tokenize(std::string_view text, std::string* problem_name) {
  std::vector<Token> tokens;
  int line = 1;
  size_t line_begin = 0;
  bool line_start = true;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    const int column = static_cast<int>(i - line_begin) + 1;
    if (c == '\n') {
      ++line;
      line_begin = ++i;
      line_start = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') {
      size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = n;
      std::string_view comment = text.substr(i + 1, end - i - 1);
      constexpr std::string_view kNameTag = "Problem name:";
      const size_t pos = comment.find(kNameTag);
      if (pos != std::string_view::npos && problem_name->empty()) {
        std::string_view rest = comment.substr(pos + kNameTag.size());
        auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
        while (!rest.empty() && space(rest.front())) rest.remove_prefix(1);
        while (!rest.empty() && space(rest.back())) rest.remove_suffix(1);
        *problem_name = std::string(rest);
      }
      i = end;
      continue;
    }
    Token tok{TokenKind::kEof, "", line, column, line_start};
    line_start = false;
    if (IsIdentStart(c)) {
      size_t j = i + 1;
      while (j < n && IsIdentBody(text[j])) ++j;
      tok.kind = TokenKind::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t j = i;
      while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < n && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      tok.kind = TokenKind::kNumber;
      tok.text = std::string(text.substr(i, j - i));
      char* end = nullptr;
      tok.number = std::strtod(tok.text.c_str(), &end);
      if (end != tok.text.c_str() + tok.text.size()) {
        throw LpParseError("malformed number", line, column, tok.text);
      }
      i = j;
    } else if (c == '<' || c == '>' || c == '=') {
      size_t j = i + 1;
      if (j < n && (text[j] == '=' || (c == '=' && (text[j] == '<' || text[j] == '>')))) ++j;
      tok.kind = TokenKind::kSense;
      tok.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (c == '+') {
      tok.kind = TokenKind::kPlus;
      tok.text = "+";
      ++i;
    } else if (c == '-') {
      tok.kind = TokenKind::kMinus;
      tok.text = "-";
      ++i;
    } else if (c == ':') {
      if (i + 1 < n && text[i + 1] == ':') {
        tok.kind = TokenKind::kDoubleColon;
        tok.text = "::";
        i += 2;
      } else {
        tok.kind = TokenKind::kColon;
        tok.text = ":";
        ++i;
      }
    } else if (c == '[' || c == '^' || c == '*' || c == '/') {
      throw LpParseError("quadratic terms are not supported", line, column,
                         std::string(1, c));
    } else {
      throw LpParseError("unexpected character", line, column,
                         std::string(1, c));
    }
    tokens.push_back(std::move(tok));
  }
  tokens.push_back({TokenKind::kEof, "", line, static_cast<int>(n - line_begin) + 1, true});
  return tokens;
}

enum class Section {
  kNone,
  kObjective,
  kConstraints,
  kBounds,
  kGenerals,
  kBinaries,
  kSos,
  kEnd,
};

struct RawConstraint {
  std::string name;
  std::vector<Term> terms;
  ConstraintSense sense = ConstraintSense::kLessEqual;
  double rhs = 0.0;
  std::optional<std::string> sos1_group;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    tokens_ = Tokenize(text, &name_);
  }

  MilpInstance Parse() {
    // Header: only an objective section may come first.
    Section section = SectionAt(pos_, &section_width_);
    if (section != Section::kObjective) {
      if (Peek().kind == TokenKind::kEof) Fail("missing objective section");
      Fail(section == Section::kNone ? "unknown section" : "expected objective section");
    }
    bool maximize = false;
    while (section != Section::kEnd) {
      const Token& head = Peek();
      const bool is_max = Lower(head.text).starts_with("max");
      pos_ += section_width_;
      switch (section) {
        case Section::kObjective:
          if (seen_objective_) Fail("duplicate objective section", head);
          seen_objective_ = true;
          maximize = is_max;
          ParseObjective();
          break;
        case Section::kConstraints:
          ParseConstraints();
          break;
        case Section::kBounds:
          ParseBounds();
          break;
        case Section::kGenerals:
          ParseVariableList(&generals_);
          break;
        case Section::kBinaries:
          ParseVariableList(&binaries_);
          break;
        case Section::kSos:
          ParseSos();
          break;
        case Section::kNone:
        case Section::kEnd:
          break;
      }
      if (Peek().kind == TokenKind::kEof) break;
      section = SectionAt(pos_, &section_width_);
      if (section == Section::kNone) Fail("unknown section");
    }
    return Build(maximize);
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& Next() {
    const Token& t = Peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void Fail(const std::string& message) const { Fail(message, Peek()); }
  [[noreturn]] void Fail(const std::string& message, const Token& t) const {
    throw LpParseError(message, t.line, t.column,
                       t.kind == TokenKind::kEof ? "<eof>" : t.text);
  }

  // Recognizes a section keyword at token position `at`; `width` receives the
  // number of tokens it spans.
  Section SectionAt(size_t at, size_t* width) const {
    *width = 1;
    const Token& t = tokens_[std::min(at, tokens_.size() - 1)];
    if (t.kind == TokenKind::kEof) return Section::kEnd;
    if (t.kind != TokenKind::kIdent) return Section::kNone;
    const std::string w = Lower(t.text);
    // Long keywords also open a section in the middle of a line (one-line
    // models); short ones only at line start.
    if (!t.line_start) {
      const Token& u = tokens_[std::min(at + 1, tokens_.size() - 1)];
      if (u.kind == TokenKind::kColon) return Section::kNone;
      const bool long_keyword =
          w == "minimize" || w == "maximize" || w == "minimise" ||
          w == "maximise" || w == "subject" || w == "such" || w == "bounds" ||
          w == "generals" || w == "general" || w == "integers" ||
          w == "binaries" || w == "binary" || w == "end";
      if (!long_keyword) return Section::kNone;
    }
    auto next_is = [&](std::string_view word) {
      const Token& u = tokens_[std::min(at + 1, tokens_.size() - 1)];
      return u.kind == TokenKind::kIdent && !u.line_start && Lower(u.text) == word;
    };
    if (w == "minimize" || w == "minimise" || w == "minimum" || w == "min" ||
        w == "maximize" || w == "maximise" || w == "maximum" || w == "max") {
      return Section::kObjective;
    }
    if (w == "subject" && next_is("to")) {
      *width = 2;
      return Section::kConstraints;
    }
    if (w == "such" && next_is("that")) {
      *width = 2;
      return Section::kConstraints;
    }
    if (w == "st" || w == "s.t." || w == "st.") return Section::kConstraints;
    if (w == "bounds" || w == "bound") return Section::kBounds;
    if (w == "generals" || w == "general" || w == "gen" || w == "integers") {
      return Section::kGenerals;
    }
    if (w == "binaries" || w == "binary" || w == "bin") return Section::kBinaries;
    if (w == "sos") return Section::kSos;
    if (w == "end") return Section::kEnd;
    if (w == "semi" || w == "semis" || w == "semi-continuous" || w == "pwl" ||
        w == "quadratic" || w == "qmatrix" || (w == "lazy" && next_is("constraints")) ||
        (w == "user" && next_is("cuts"))) {
      Fail("unsupported section", t);
    }
    return Section::kNone;
  }

  bool AtSection() const {
    size_t width;
    const Token& t = Peek();
    return t.kind == TokenKind::kEof || SectionAt(pos_, &width) != Section::kNone;
  }

  int VarIndex(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }

  static bool IsInfinityWord(const Token& t) {
    if (t.kind != TokenKind::kIdent) return false;
    const std::string w = Lower(t.text);
    return w == "inf" || w == "infinity";
  }

  // Reads "[+|-] (number | inf)".
  double ParseSignedValue() {
    double sign = 1.0;
    while (Peek().kind == TokenKind::kPlus || Peek().kind == TokenKind::kMinus) {
      if (Next().kind == TokenKind::kMinus) sign = -sign;
    }
    const Token& t = Peek();
    if (t.kind == TokenKind::kNumber) {
      Next();
      return sign * t.number;
    }
    if (IsInfinityWord(t)) {
      Next();
      return sign * kInfinity;
    }
    Fail("expected a number");
  }

  // Linear expression; stops at a sense operator or a section keyword.
  // Returns the constant part.
  double ParseExpression(std::vector<Term>* terms) {
    double constant = 0.0;
    bool first = true;
    while (true) {
      if (AtSection()) break;
      const Token& t = Peek();
      if (t.kind == TokenKind::kSense) break;
      double sign = 1.0;
      bool had_sign = false;
      while (Peek().kind == TokenKind::kPlus || Peek().kind == TokenKind::kMinus) {
        if (Next().kind == TokenKind::kMinus) sign = -sign;
        had_sign = true;
      }
      if (!first && !had_sign) Fail("expected '+' or '-' between terms");
      double coef = 1.0;
      bool had_number = false;
      if (Peek().kind == TokenKind::kNumber) {
        coef = Next().number;
        had_number = true;
      }
      if (Peek().kind == TokenKind::kIdent && !IsInfinityWord(Peek()) &&
          !AtSection()) {
        const int var = VarIndex(Next().text);
        if (coef != 0.0) terms->push_back({var, sign * coef});
      } else if (had_number) {
        constant += sign * coef;
      } else {
        Fail("expected a term");
      }
      first = false;
    }
    CanonicalizeTerms(*terms);
    std::erase_if(*terms, [](const Term& t) { return t.coef == 0.0; });
    return constant;
  }

  static ConstraintSense SenseOf(const std::string& op) {
    if (op == "=") return ConstraintSense::kEqual;
    if (op[0] == '<' || op == "=<") return ConstraintSense::kLessEqual;
    return ConstraintSense::kGreaterEqual;
  }

  bool AtLabel() const {
    return Peek().kind == TokenKind::kIdent && Peek(1).kind == TokenKind::kColon;
  }

  void ParseObjective() {
    if (AtLabel()) {
      Next();
      Next();
    }
    objective_offset_ = ParseExpression(&objective_terms_);
  }

  void ParseConstraints() {
    while (!AtSection()) {
      RawConstraint row;
      if (AtLabel()) {
        row.name = Next().text;
        Next();
      }
      const Token& start = Peek();
      const double constant = ParseExpression(&row.terms);
      if (Peek().kind != TokenKind::kSense) Fail("expected a comparison operator");
      if (row.terms.empty() && constant == 0.0 && &start == &Peek()) {
        Fail("empty constraint");
      }
      row.sense = SenseOf(Next().text);
      row.rhs = ParseSignedValue() - constant;
      if (row.name.empty()) row.name = "R" + std::to_string(rows_.size() + 1);
      rows_.push_back(std::move(row));
    }
  }

  void DeclareLower(int var, double value, const Token& at) {
    auto& d = bounds_[var];
    if (d.has_lower) Fail("duplicate lower bound declaration", at);
    d.has_lower = true;
    d.lower = value;
  }
  void DeclareUpper(int var, double value, const Token& at) {
    auto& d = bounds_[var];
    if (d.has_upper) Fail("duplicate upper bound declaration", at);
    d.has_upper = true;
    d.upper = value;
  }
  void Declare(int var, const std::string& op, double value, bool var_on_left,
               const Token& at) {
    ConstraintSense s = SenseOf(op);
    if (s == ConstraintSense::kEqual) {
      DeclareLower(var, value, at);
      DeclareUpper(var, value, at);
      return;
    }
    // "x <= v" and "v >= x" both give an upper bound.
    const bool upper = (s == ConstraintSense::kLessEqual) == var_on_left;
    if (upper) {
      DeclareUpper(var, value, at);
    } else {
      DeclareLower(var, value, at);
    }
  }

  void ParseBounds() {
    while (!AtSection()) {
      const Token& start = Peek();
      if (start.kind == TokenKind::kIdent && !IsInfinityWord(start)) {
        const int var = VarIndex(Next().text);
        if (Peek().kind == TokenKind::kIdent && Lower(Peek().text) == "free") {
          Next();
          DeclareLower(var, -kInfinity, start);
          DeclareUpper(var, kInfinity, start);
          continue;
        }
        if (Peek().kind != TokenKind::kSense) Fail("expected a comparison operator");
        const std::string op = Next().text;
        Declare(var, op, ParseSignedValue(), true, start);
        continue;
      }
      const double left = ParseSignedValue();
      if (Peek().kind != TokenKind::kSense) Fail("expected a comparison operator");
      const std::string op1 = Next().text;
      if (Peek().kind != TokenKind::kIdent || IsInfinityWord(Peek())) {
        Fail("expected a variable name");
      }
      const int var = VarIndex(Next().text);
      Declare(var, op1, left, false, start);
      if (Peek().kind == TokenKind::kSense && !Peek().line_start) {
        const std::string op2 = Next().text;
        Declare(var, op2, ParseSignedValue(), true, start);
      }
    }
  }

  void ParseVariableList(std::vector<int>* out) {
    while (!AtSection()) {
      if (Peek().kind != TokenKind::kIdent) Fail("expected a variable name");
      out->push_back(VarIndex(Next().text));
    }
  }

  static bool IsSosType(const Token& t) {
    const std::string w = Lower(t.text);
    return t.kind == TokenKind::kIdent && (w == "s1" || w == "s2");
  }

  void ParseSos() {
    while (!AtSection()) {
      RawConstraint set;
      if (AtLabel() && IsSosType(Peek(2)) && Peek(3).kind == TokenKind::kDoubleColon) {
        set.name = Next().text;
        Next();
      }
      if (!IsSosType(Peek()) || Peek(1).kind != TokenKind::kDoubleColon) {
        Fail("expected SOS set declaration 'S1::'");
      }
      if (Lower(Peek().text) == "s2") Fail("SOS2 sets are not supported");
      Next();
      Next();
      while (Peek().kind == TokenKind::kIdent && Peek(1).kind == TokenKind::kColon &&
             Peek(2).kind == TokenKind::kNumber && !AtSection()) {
        const int var = VarIndex(Next().text);
        Next();
        set.terms.push_back({var, Next().number});
      }
      if (set.terms.empty()) Fail("SOS set without members");
      if (set.name.empty()) set.name = "sos" + std::to_string(++sos_count_);
      set.sos1_group = set.name;
      CanonicalizeTerms(set.terms);
      rows_.push_back(std::move(set));
    }
  }

  MilpInstance Build(bool maximize) {
    MilpInstance inst;
    inst.name = name_;
    inst.variables.resize(names_.size());
    for (size_t j = 0; j < names_.size(); ++j) inst.variables[j].name = names_[j];
    for (int j : generals_) inst.variables[j].integrality = Integrality::kInteger;
    for (int j : binaries_) {
      VariableDef& v = inst.variables[j];
      v.integrality = Integrality::kBinary;
      v.upper = 1.0;
    }
    for (const auto& [var, d] : bounds_) {
      VariableDef& v = inst.variables[var];
      if (d.has_lower) v.lower = d.lower;
      if (d.has_upper) v.upper = d.upper;
    }
    inst.objective.terms = std::move(objective_terms_);
    inst.objective.offset = objective_offset_;
    if (maximize) {
      for (Term& t : inst.objective.terms) t.coef = -t.coef;
      inst.objective.offset = -inst.objective.offset;
      inst.negated_from_max = true;
    }
    for (RawConstraint& r : rows_) {
      inst.constraints.push_back({std::move(r.name), std::move(r.terms), r.sense,
                                  r.rhs, std::move(r.sos1_group)});
    }
    try {
      inst.Validate();
    } catch (const StructuralError& e) {
      throw LpParseError(e.what(), Peek().line, Peek().column, "");
    }
    return inst;
  }

  struct BoundDecl {
    bool has_lower = false;
    bool has_upper = false;
    double lower = 0.0;
    double upper = kInfinity;
  };

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  size_t section_width_ = 1;
  std::string name_;
  bool seen_objective_ = false;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
  std::vector<Term> objective_terms_;
  double objective_offset_ = 0.0;
  std::vector<RawConstraint> rows_;
  std::map<int, BoundDecl> bounds_;
  std::vector<int> generals_;
  std::vector<int> binaries_;
  int sos_count_ = 0;
};

std::string FormatNumber(double v) {
  if (v == kInfinity) return "+inf";
  if (v == -kInfinity) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteTerms(std::ostringstream& out, std::span<const Term> terms,
                const MilpInstance& inst) {
  int on_line = 0;
  for (const Term& t : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    const double mag = std::abs(t.coef);
    out << (std::signbit(t.coef) ? " - " : " + ") << FormatNumber(mag) << ' '
        << inst.variables[t.var].name;
    ++on_line;
  }
}

}  // namespace

MilpInstance ParseLpFile(std::string_view text) { return Parser(text).Parse(); }

std::string WriteLpFile(const MilpInstance& inst) {
  std::ostringstream out;
  out << "\\ Problem name: " << inst.name << "\n";
  out << "Minimize\n obj:";
  // Every variable is listed in the objective so the reader reproduces the
  // variable order exactly.
  std::vector<double> c = inst.DenseObjective();
  std::vector<Term> all;
  all.reserve(c.size());
  for (int j = 0; j < inst.num_variables(); ++j) all.push_back({j, c[j]});
  WriteTerms(out, all, inst);
  if (inst.objective.offset != 0.0 || all.empty()) {
    out << (std::signbit(inst.objective.offset) ? " - " : " + ")
        << FormatNumber(std::abs(inst.objective.offset));
  }
  out << "\nSubject To\n";
  for (const LinearConstraint& row : inst.constraints) {
    if (row.IsSos1()) continue;
    out << ' ' << row.name << ':';
    if (row.terms.empty()) {
      out << " 0";
    } else {
      WriteTerms(out, row.terms, inst);
    }
    out << ' ' << ToString(row.sense) << ' ' << FormatNumber(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const VariableDef& v : inst.variables) {
    const bool binary = v.integrality == Integrality::kBinary;
    const double def_upper = binary ? 1.0 : kInfinity;
    if (v.lower == 0.0 && !std::signbit(v.lower) && v.upper == def_upper) continue;
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << FormatNumber(v.lower) << '\n';
    } else {
      out << ' ' << FormatNumber(v.lower) << " <= " << v.name
          << " <= " << FormatNumber(v.upper) << '\n';
    }
  }
  auto write_list = [&](std::string_view header, Integrality kind) {
    int on_line = 0;
    bool any = false;
    for (const VariableDef& v : inst.variables) {
      if (v.integrality != kind) continue;
      if (!any) out << header << '\n';
      any = true;
      out << ' ' << v.name;
      if (++on_line == 10) {
        out << '\n';
        on_line = 0;
      }
    }
    if (any && on_line != 0) out << '\n';
  };
  write_list("Generals", Integrality::kInteger);
  write_list("Binaries", Integrality::kBinary);
  bool sos_header = false;
  for (const LinearConstraint& row : inst.constraints) {
    if (!row.IsSos1()) continue;
    if (!sos_header) out << "SOS\n";
    sos_header = true;
    out << ' ' << row.name << ": S1::";
    for (const Term& t : row.terms) {
      out << ' ' << inst.variables[t.var].name << ':' << FormatNumber(t.coef);
    }
    out << '\n';
  }
  out << "End\n";
  return out.str();
}

MilpInstance ReadLpFileFromPath(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  MilpInstance inst = ParseLpFile(buf.str());
  if (inst.name.empty()) inst.name = std::filesystem::path(path).stem().string();
  return inst;
}

}  // namespace primalkit
