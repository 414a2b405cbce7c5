#include "odoforge/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "odoforge/errors.hpp"

namespace odoforge {

namespace {

void check_same_backend(const GroupWord& a, const GroupWord& b) {
  if (a.backend() != b.backend())
    throw BackendMismatch("group words from different backends");
  if (a.backend() == Backend::Zd && a.coords().size() != b.coords().size())
    throw BackendMismatch("Z^d words of different rank");
}

std::vector<int> reduce(std::vector<int> letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (l == 0) throw FormatError("zero letter in table word");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

}  // namespace

GroupWord GroupWord::zd(std::vector<long long> coords) {
  GroupWord w;
  w.backend_ = Backend::Zd;
  w.coords_ = std::move(coords);
  return w;
}

GroupWord GroupWord::table(std::vector<int> letters) {
  GroupWord w;
  w.backend_ = Backend::Table;
  w.letters_ = reduce(std::move(letters));
  return w;
}

GroupWord GroupWord::identity(Backend backend, int rank) {
  if (backend == Backend::Zd)
    return zd(std::vector<long long>(static_cast<size_t>(rank), 0));
  return table({});
}

bool GroupWord::is_identity() const {
  if (backend_ == Backend::Zd)
    return std::all_of(coords_.begin(), coords_.end(),
                       [](long long c) { return c == 0; });
  return letters_.empty();
}

long long GroupWord::norm() const {
  if (backend_ == Backend::Zd) {
    long long n = 0;
    for (long long c : coords_) n += std::llabs(c);
    return n;
  }
  return static_cast<long long>(letters_.size());
}

GroupWord operator*(const GroupWord& a, const GroupWord& b) {
  check_same_backend(a, b);
  if (a.backend_ == Backend::Zd) {
    std::vector<long long> c(a.coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
    return GroupWord::zd(std::move(c));
  }
  std::vector<int> letters(a.letters_);
  letters.insert(letters.end(), b.letters_.begin(), b.letters_.end());
  return GroupWord::table(std::move(letters));
}

GroupWord GroupWord::inverse() const {
  if (backend_ == Backend::Zd) {
    std::vector<long long> c(coords_);
    for (auto& x : c) x = -x;
    return zd(std::move(c));
  }
  std::vector<int> letters(letters_.rbegin(), letters_.rend());
  for (auto& l : letters) l = -l;
  GroupWord w;
  w.backend_ = Backend::Table;
  w.letters_ = std::move(letters);  // reversal of a reduced word stays reduced
  return w;
}

bool GroupWord::operator==(const GroupWord& o) const {
  return backend_ == o.backend_ && coords_ == o.coords_ &&
         letters_ == o.letters_;
}

bool GroupWord::operator<(const GroupWord& o) const {
  if (norm() != o.norm()) return norm() < o.norm();
  if (backend_ == Backend::Zd) return coords_ < o.coords_;
  return letters_ < o.letters_;
}

std::string GroupWord::str() const {
  if (backend_ == Backend::Zd) {
    std::string s;
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(coords_[i]);
    }
    return s;
  }
  if (letters_.empty()) return "e";
  std::string s;
  for (int l : letters_) {
    s += static_cast<char>('a' + (l > 0 ? l : -l) - 1);
    if (l < 0) s += '\'';
  }
  return s;
}

GroupWord GroupWord::parse(Backend backend, int rank, const std::string& s) {
  if (s == "e" || s.empty()) return identity(backend, rank);
  if (backend == Backend::Zd) {
    std::vector<long long> coords;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) throw FormatError("empty coordinate in '" + s + "'");
      coords.push_back(std::stoll(cur));
      cur.clear();
    };
    for (char c : s) {
      if (c == ',')
        flush();
      else if (c == '-' || c == '+' || (c >= '0' && c <= '9'))
        cur += c;
      else if (c != ' ' && c != '(' && c != ')')
        throw FormatError(std::string("bad character '") + c + "' in word");
    }
    flush();
    if (static_cast<int>(coords.size()) != rank)
      throw FormatError("expected " + std::to_string(rank) +
                        " coordinates in '" + s + "'");
    return zd(std::move(coords));
  }
  std::vector<int> letters;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ') continue;
    if (c < 'a' || c >= 'a' + rank)
      throw FormatError(std::string("unknown generator '") + c + "' in '" + s + "'");
    int l = c - 'a' + 1;
    if (i + 1 < s.size() && s[i + 1] == '\'') {
      l = -l;
      ++i;
    }
    letters.push_back(l);
  }
  return table(std::move(letters));
}

size_t GroupWord::hash() const {
  size_t h = backend_ == Backend::Zd ? 0x9e3779b97f4a7c15ULL : 0x2545f4914f6cdd1dULL;
  auto mix = [&h](size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (long long c : coords_) mix(std::hash<long long>{}(c));
  for (int l : letters_) mix(std::hash<int>{}(l));
  return h;
}

namespace {

void zd_sphere(int rank, int radius, std::vector<GroupWord>& out) {
  // all vectors with l1 norm exactly `radius`, lexicographic
  std::vector<long long> v(static_cast<size_t>(rank), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == rank - 1) {
      for (long long c : {static_cast<long long>(-left), static_cast<long long>(left)}) {
        v[static_cast<size_t>(pos)] = c;
        out.push_back(GroupWord::zd(v));
        if (left == 0) break;
      }
      return;
    }
    for (int a = -left; a <= left; ++a) {
      v[static_cast<size_t>(pos)] = a;
      rec(pos + 1, left - std::abs(a));
    }
  };
  if (rank == 0) return;
  rec(0, radius);
}

}  // namespace

std::vector<GroupWord> word_ball(Backend backend, int rank, int radius) {
  std::vector<GroupWord> out;
  if (backend == Backend::Zd) {
    for (int r = 0; r <= radius; ++r) {
      std::vector<GroupWord> sphere;
      zd_sphere(rank, r, sphere);
      std::sort(sphere.begin(), sphere.end());
      out.insert(out.end(), sphere.begin(), sphere.end());
    }
    return out;
  }
  // reduced words by length, then by letter sequence (+1 < -1 < +2 < ...)
  std::vector<std::vector<int>> frontier = {{}};
  out.push_back(GroupWord::table({}));
  std::vector<int> letter_order;
  for (int g = 1; g <= rank; ++g) {
    letter_order.push_back(g);
    letter_order.push_back(-g);
  }
  for (int len = 1; len <= radius; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier) {
      for (int l : letter_order) {
        if (!w.empty() && w.back() == -l) continue;
        auto nw = w;
        nw.push_back(l);
        next.push_back(std::move(nw));
      }
    }
    for (const auto& w : next) out.push_back(GroupWord::table(w));
    frontier = std::move(next);
  }
  return out;
}

}  // namespace odoforge
