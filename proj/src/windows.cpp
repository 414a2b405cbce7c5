#include "odoforge/windows.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "odoforge/chain.hpp"
#include "odoforge/errors.hpp"

namespace odoforge {

using nlohmann::json;

Window::Window(std::vector<GroupWord> cells) : cells_(std::move(cells)) {
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (!index_.emplace(cells_[i], static_cast<int>(i)).second)
      throw FormatError("duplicate cell in window: " + cells_[i].str());
  }
}

int Window::position(const GroupWord& g) const {
  auto it = index_.find(g);
  return it == index_.end() ? -1 : it->second;
}

Window Window::translated(const GroupWord& g) const {
  std::vector<GroupWord> cells;
  cells.reserve(cells_.size());
  for (const auto& c : cells_) cells.push_back(g * c);
  return Window(std::move(cells));
}

namespace {

std::pair<long long, long long> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw FormatError("range needs '..': " + s);
  long long a = std::stoll(s.substr(0, dots));
  long long b = std::stoll(s.substr(dots + 2));
  if (b < a) throw FormatError("empty range: " + s);
  return {a, b};
}

}  // namespace

Window Window::parse(const QuotientChain& chain, const std::string& spec) {
  std::vector<GroupWord> cells;
  if (spec.rfind("ball:", 0) == 0) {
    int r = std::stoi(spec.substr(5));
    return Window(word_ball(chain.backend(), chain.rank(), r));
  }
  if (spec.rfind("cells:", 0) == 0) {
    std::string rest = spec.substr(6);
    size_t start = 0;
    while (start <= rest.size()) {
      size_t semi = rest.find(';', start);
      std::string tok = rest.substr(start, semi == std::string::npos
                                               ? std::string::npos
                                               : semi - start);
      if (!tok.empty()) cells.push_back(chain.parse_word(tok));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return Window(std::move(cells));
  }
  if (chain.backend() != Backend::Zd)
    throw FormatError("range windows need the Z^d backend; use ball: or cells:");
  auto comma = spec.find(',');
  if (comma == std::string::npos) {
    if (chain.rank() != 1) throw FormatError("one range given for rank " +
                                             std::to_string(chain.rank()));
    auto [a, b] = parse_range(spec);
    for (long long x = a; x <= b; ++x) cells.push_back(GroupWord::zd({x}));
    return Window(std::move(cells));
  }
  if (chain.rank() != 2)
    throw FormatError("two ranges given for rank " + std::to_string(chain.rank()));
  auto [xa, xb] = parse_range(spec.substr(0, comma));
  auto [ya, yb] = parse_range(spec.substr(comma + 1));
  for (long long y = yb; y >= ya; --y)
    for (long long x = xa; x <= xb; ++x) cells.push_back(GroupWord::zd({x, y}));
  return Window(std::move(cells));
}

std::optional<int> SymbolWindow::value_at(const GroupWord& g) const {
  int pos = window.position(g);
  if (pos < 0) return std::nullopt;
  return symbols[static_cast<size_t>(pos)];
}

std::string SymbolWindow::row_string() const {
  std::string s;
  s.reserve(symbols.size());
  for (int v : symbols) s += v == kHole ? '.' : alphabet[static_cast<size_t>(v)];
  return s;
}

std::string render_text(const SymbolWindow& w) {
  if (w.window.empty()) return "";
  const auto& first = w.window.cell(0);
  if (first.backend() == Backend::Zd && first.coords().size() == 2) {
    std::string out;
    long long row = first.coords()[1];
    for (size_t i = 0; i < w.window.size(); ++i) {
      long long y = w.window.cell(i).coords()[1];
      if (y != row) {
        out += '\n';
        row = y;
      }
      int v = w.symbols[i];
      out += v == kHole ? '.' : w.alphabet[static_cast<size_t>(v)];
    }
    out += '\n';
    return out;
  }
  if (first.backend() == Backend::Zd && first.coords().size() == 1)
    return w.row_string() + "\n";
  std::string out;
  for (size_t i = 0; i < w.window.size(); ++i) {
    int v = w.symbols[i];
    out += w.window.cell(i).str();
    out += '=';
    out += v == kHole ? '.' : w.alphabet[static_cast<size_t>(v)];
    out += '\n';
  }
  return out;
}

std::string render_pgm(const SymbolWindow& w) {
  if (w.window.empty()) return "P2\n0 0\n1\n";
  const auto& first = w.window.cell(0);
  if (first.backend() != Backend::Zd || first.coords().size() != 2)
    throw FormatError("pgm export needs a Z^2 window");
  long long xmin = first.coords()[0], xmax = xmin;
  long long ymin = first.coords()[1], ymax = ymin;
  for (const auto& c : w.window.cells()) {
    xmin = std::min(xmin, c.coords()[0]);
    xmax = std::max(xmax, c.coords()[0]);
    ymin = std::min(ymin, c.coords()[1]);
    ymax = std::max(ymax, c.coords()[1]);
  }
  long long width = xmax - xmin + 1, height = ymax - ymin + 1;
  int maxval = static_cast<int>(w.alphabet.size());
  std::string out = "P2\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  // rows top-down: y descending; missing cells render as holes
  std::vector<int> grid(static_cast<size_t>(width * height), kHole);
  for (size_t i = 0; i < w.window.size(); ++i) {
    const auto& c = w.window.cell(i);
    long long col = c.coords()[0] - xmin;
    long long row = ymax - c.coords()[1];
    grid[static_cast<size_t>(row * width + col)] = w.symbols[i];
  }
  for (long long r = 0; r < height; ++r) {
    for (long long c = 0; c < width; ++c) {
      if (c) out += ' ';
      int v = grid[static_cast<size_t>(r * width + c)];
      out += std::to_string(v == kHole ? 0 : v + 1);
    }
    out += '\n';
  }
  return out;
}

json window_to_json(const SymbolWindow& w) {
  json cells = json::array();
  for (const auto& c : w.window.cells()) cells.push_back(c.str());
  json j;
  j["cells"] = cells;
  j["symbols"] = w.symbols;
  j["alphabet"] = w.alphabet;
  return j;
}

}  // namespace odoforge
