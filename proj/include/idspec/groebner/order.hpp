#pragma once

#include <string>
#include <vector>

#include "idspec/algebra/variables.hpp"

namespace idspec::groebner {

using algebra::VarId;

/// Product of graded-reverse-lex blocks. Earlier blocks dominate; inside a
/// block variables listed first are larger. Lex is the special case of
/// singleton blocks.
class MonomialOrder {
 public:
  enum class Kind { Lex, Grevlex, Block };

  static MonomialOrder lex(std::vector<VarId> vars);
  static MonomialOrder grevlex(std::vector<VarId> vars);
  /// Every monomial involving `first` beats any monomial free of it.
  static MonomialOrder block(std::vector<VarId> first, std::vector<VarId> second);
  static MonomialOrder blocks(std::vector<std::vector<VarId>> blocks);

  Kind kind() const { return kind_; }
  const std::vector<std::vector<VarId>>& block_list() const { return blocks_; }
  /// Precedence list (flattened blocks).
  std::vector<VarId> variables() const;
  std::string describe() const;

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind_ == b.kind_ && a.blocks_ == b.blocks_;
  }

 private:
  Kind kind_ = Kind::Grevlex;
  std::vector<std::vector<VarId>> blocks_;
};

}  // namespace idspec::groebner
