#pragma once

// Finite cell windows over the group and symbol arrays on them.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "odoforge/words.hpp"

namespace odoforge {

class QuotientChain;

// An explicit, ordered, duplicate-free list of cells.
class Window {
 public:
  Window() = default;
  explicit Window(std::vector<GroupWord> cells);

  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const GroupWord& cell(size_t i) const { return cells_[i]; }
  const std::vector<GroupWord>& cells() const { return cells_; }
  int position(const GroupWord& g) const;  // -1 when absent

  Window translated(const GroupWord& g) const;  // cells g * w

  // Z: "a..b". Z^2: "a..b,c..d" (x range, y range; rows rendered with y
  // descending). Any backend: "ball:R". Explicit: "cells:w1;w2;...".
  static Window parse(const QuotientChain& chain, const std::string& spec);

 private:
  std::vector<GroupWord> cells_;
  std::unordered_map<GroupWord, int, WordHash> index_;
};

constexpr int kHole = -1;

// Symbols are indices into `alphabet`; kHole marks cells left unresolved by
// the generation depth.
struct SymbolWindow {
  Window window;
  std::vector<int> symbols;
  std::string alphabet;

  int at(size_t i) const { return symbols[i]; }
  std::optional<int> value_at(const GroupWord& g) const;
  std::string row_string() const;  // Z windows only: one char per cell
};

std::string render_text(const SymbolWindow& w);
std::string render_pgm(const SymbolWindow& w);  // Z^2 windows
nlohmann::json window_to_json(const SymbolWindow& w);

}  // namespace odoforge
