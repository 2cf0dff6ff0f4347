#include "lexer.hpp"

#include <cctype>
#include <map>

namespace dst {

const char* token_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::LtLt: return "'<<'";
    case Tok::GtGt: return "'>>'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::ColonColon: return "'::'";
    case Tok::Semi: return "';'";
    case Tok::Eq: return "'='";
    case Tok::Bar: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::At: return "'@'";
    case Tok::Star: return "'*'";
    case Tok::Amp: return "'&'";
    case Tok::Plus: return "'+'";
    case Tok::Lolli: return "'-o'";
    case Tok::Arrow: return "'->'";
    case Tok::Dollar: return "'$'";
    case Tok::Question: return "'?'";
    case Tok::One: return "'1'";
    case Tok::Eof: return "end of input";
    default: return "keyword";
  }
}

std::vector<Token> lex(const std::string& src, Diagnostics& diags) {
  static const std::map<std::string, Tok> keywords = {
      {"new", Tok::KwNew},         {"in", Tok::KwIn},
      {"share", Tok::KwShare},     {"fwd", Tok::KwFwd},
      {"case", Tok::KwCase},       {"all", Tok::KwAll},
      {"ex", Tok::KwEx},           {"here", Tok::KwHere},
      {"end", Tok::KwEnd},         {"move", Tok::KwMove},
      {"to", Tok::KwTo},           {"then", Tok::KwThen},
      {"closure", Tok::KwClosure}, {"access", Tok::KwAccess},
      {"domain", Tok::KwDomain},   {"type", Tok::KwType},
      {"local", Tok::KwLocal},     {"global", Tok::KwGlobal},
      {"process", Tok::KwProcess}, {"check", Tok::KwCheck},
      {"run", Tok::KwRun},         {"graph", Tok::KwGraph},
      {"project", Tok::KwProject}, {"wf", Tok::KwWf},
      {"medium", Tok::KwMedium},   {"verify", Tok::KwVerify},
      {"compose", Tok::KwCompose}, {"under", Tok::KwUnder},
      {"with", Tok::KwWith},       {"reflexive", Tok::KwReflexive},
      {"transitive", Tok::KwTransitive}, {"symmetric", Tok::KwSymmetric},
  };

  std::vector<Token> out;
  uint32_t line = 1, col = 1;
  size_t i = 0;
  const size_t n = src.size();

  auto at = [&](size_t k) -> char { return k < n ? src[k] : '\0'; };
  auto mkspan = [&](uint32_t l0, uint32_t c0) { return Span{l0, c0, line, col}; };
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (at(i) == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && at(i + 1) == '/') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      uint32_t l0 = line, c0 = col;
      advance(2);
      while (i < n && !(src[i] == '*' && at(i + 1) == '/')) advance(1);
      if (i >= n) {
        diags.push_back({Severity::Error, mkspan(l0, c0), "lex", "unterminated comment"});
        break;
      }
      advance(2);
      continue;
    }

    uint32_t l0 = line, c0 = col;
    auto emit = [&](Tok k, size_t len, std::string text = "") {
      advance(len);
      out.push_back({k, std::move(text), mkspan(l0, c0)});
    };

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                       src[j] == '\''))
        ++j;
      std::string word = src.substr(i, j - i);
      auto kw = keywords.find(word);
      if (kw != keywords.end())
        emit(kw->second, j - i, word);
      else
        emit(Tok::Ident, j - i, word);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string num = src.substr(i, j - i);
      if (num == "1" && !(j < n && (std::isalnum(static_cast<unsigned char>(src[j])))))
        emit(Tok::One, 1, num);
      else
        emit(Tok::Number, j - i, num);
      continue;
    }

    switch (c) {
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case '{': emit(Tok::LBrace, 1); continue;
      case '}': emit(Tok::RBrace, 1); continue;
      case '[': emit(Tok::LBracket, 1); continue;
      case ']': emit(Tok::RBracket, 1); continue;
      case '<':
        if (at(i + 1) == '<') emit(Tok::LtLt, 2);
        else emit(Tok::Lt, 1);
        continue;
      case '>':
        if (at(i + 1) == '>') emit(Tok::GtGt, 2);
        else emit(Tok::Gt, 1);
        continue;
      case '.': emit(Tok::Dot, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case ':':
        if (at(i + 1) == ':') emit(Tok::ColonColon, 2);
        else emit(Tok::Colon, 1);
        continue;
      case ';': emit(Tok::Semi, 1); continue;
      case '=': emit(Tok::Eq, 1); continue;
      case '|': emit(Tok::Bar, 1); continue;
      case '!': emit(Tok::Bang, 1); continue;
      case '@': emit(Tok::At, 1); continue;
      case '*': emit(Tok::Star, 1); continue;
      case '&': emit(Tok::Amp, 1); continue;
      case '+': emit(Tok::Plus, 1); continue;
      case '$': emit(Tok::Dollar, 1); continue;
      case '?': emit(Tok::Question, 1); continue;
      case '-':
        if (at(i + 1) == 'o') emit(Tok::Lolli, 2);
        else if (at(i + 1) == '>') emit(Tok::Arrow, 2);
        else {
          diags.push_back({Severity::Error, mkspan(l0, c0), "lex",
                           "'-' must begin '-o' or '->'"});
          advance(1);
        }
        continue;
      default:
        diags.push_back({Severity::Error, mkspan(l0, c0), "lex",
                         std::string("unexpected character '") + c + "'"});
        advance(1);
        continue;
    }
  }
  out.push_back({Tok::Eof, "", Span{line, col, line, col}});
  return out;
}

}  // namespace dst
