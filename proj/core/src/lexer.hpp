#pragma once

#include <string>
#include <vector>

#include "dst/span.hpp"

namespace dst {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Lt,
  Gt,
  LtLt,
  GtGt,
  Dot,
  Comma,
  Colon,
  ColonColon,
  Semi,
  Eq,
  Bar,
  Bang,
  At,
  Star,
  Amp,
  Plus,
  Lolli,   // -o
  Arrow,   // ->
  Dollar,
  Question,
  One,     // the literal 1 used as a type
  KwNew, KwIn, KwShare, KwFwd, KwCase, KwAll, KwEx, KwHere, KwEnd, KwMove, KwTo,
  KwThen, KwClosure, KwAccess, KwDomain, KwType, KwLocal, KwGlobal, KwProcess,
  KwCheck, KwRun, KwGraph, KwProject, KwWf, KwMedium, KwVerify, KwCompose,
  KwUnder, KwWith, KwReflexive, KwTransitive, KwSymmetric,
  Eof,
  Error,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  Span span;
};

std::vector<Token> lex(const std::string& src, Diagnostics& diags);

const char* token_name(Tok t);

}  // namespace dst
