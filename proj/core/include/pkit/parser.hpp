#pragma once

#include "pkit/formula.hpp"
#include "pkit/model.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pkit {

/// Unnormalized term tree as written by the user.
struct TermExpr {
  enum class Op { Const, Var, Add, Sub, Neg, Scale };
  Op op = Op::Const;
  Integer value = 0; // Const literal, or Scale factor
  std::string name;  // Var
  std::vector<std::shared_ptr<const TermExpr>> args;

  static std::shared_ptr<const TermExpr> constant(const Integer &v);
  static std::shared_ptr<const TermExpr> variable(const std::string &n);
  static std::shared_ptr<const TermExpr> add(std::shared_ptr<const TermExpr> a,
                                             std::shared_ptr<const TermExpr> b);
  static std::shared_ptr<const TermExpr> sub(std::shared_ptr<const TermExpr> a,
                                             std::shared_ptr<const TermExpr> b);
  static std::shared_ptr<const TermExpr> neg(std::shared_ptr<const TermExpr> a);
  static std::shared_ptr<const TermExpr> scale(const Integer &k,
                                               std::shared_ptr<const TermExpr> a);
};
using TermPtr = std::shared_ptr<const TermExpr>;

LinearTerm normalize_term(const TermExpr &t);
Integer eval_raw(const TermExpr &t, const std::map<std::string, Integer> &env);

Formula parse(std::string_view text);
TermPtr parse_raw_term(std::string_view text);
LinearTerm parse_term(std::string_view text);

/// Contents of a .pres file: optional `let NAME = <element>` lines binding
/// parameters, `#` comments, and one formula.
struct Document {
  Formula formula;
  Assignment params;
};
Document parse_document(std::string_view text);
Document load_document(const std::string &path);

std::string read_file(const std::string &path);

} // namespace pkit
