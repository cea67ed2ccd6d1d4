#include "idspec/groebner/order.hpp"

namespace idspec::groebner {

MonomialOrder MonomialOrder::lex(std::vector<VarId> vars) {
  MonomialOrder o;
  o.kind_ = Kind::Lex;
  for (VarId v : vars) o.blocks_.push_back({v});
  return o;
}

MonomialOrder MonomialOrder::grevlex(std::vector<VarId> vars) {
  MonomialOrder o;
  o.kind_ = Kind::Grevlex;
  if (!vars.empty()) o.blocks_.push_back(std::move(vars));
  return o;
}

MonomialOrder MonomialOrder::block(std::vector<VarId> first, std::vector<VarId> second) {
  std::vector<std::vector<VarId>> bs;
  if (!first.empty()) bs.push_back(std::move(first));
  if (!second.empty()) bs.push_back(std::move(second));
  return blocks(std::move(bs));
}

MonomialOrder MonomialOrder::blocks(std::vector<std::vector<VarId>> blocks) {
  MonomialOrder o;
  o.kind_ = Kind::Block;
  for (auto& b : blocks)
    if (!b.empty()) o.blocks_.push_back(std::move(b));
  return o;
}

std::vector<VarId> MonomialOrder::variables() const {
  std::vector<VarId> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string MonomialOrder::describe() const {
  std::string out = kind_ == Kind::Lex ? "lex(" : kind_ == Kind::Grevlex ? "grevlex(" : "block(";
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += kind_ == Kind::Lex ? " > " : " | ";
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
      if (i) out += ' ';
      out += algebra::variable_name(blocks_[b][i]);
    }
  }
  return out + ")";
}

}  // namespace idspec::groebner
