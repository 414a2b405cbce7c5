#pragma once

// Group elements in backend normal form: integer vectors for Z^d, freely
// reduced generator words for table-backed groups.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace odoforge {

enum class Backend { Zd, Table };

class GroupWord {
 public:
  GroupWord() = default;

  static GroupWord zd(std::vector<long long> coords);
  // Signed 1-based letters: +k is generator k, -k its inverse. Reduced on entry.
  static GroupWord table(std::vector<int> letters);
  static GroupWord identity(Backend backend, int rank);

  Backend backend() const { return backend_; }
  bool is_identity() const;
  // Word-metric length: l1 norm for Z^d, reduced length for table words.
  long long norm() const;

  const std::vector<long long>& coords() const { return coords_; }
  const std::vector<int>& letters() const { return letters_; }

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b);
  GroupWord inverse() const;

  bool operator==(const GroupWord& o) const;
  bool operator!=(const GroupWord& o) const { return !(*this == o); }
  bool operator<(const GroupWord& o) const;  // (norm, payload) order

  // Z^d: "1,-2"; table: compact letters with ' for inverses, e.g. "ab'a",
  // identity: "e".
  std::string str() const;
  static GroupWord parse(Backend backend, int rank, const std::string& s);

  size_t hash() const;

 private:
  Backend backend_ = Backend::Zd;
  std::vector<long long> coords_;
  std::vector<int> letters_;
};

struct WordHash {
  size_t operator()(const GroupWord& w) const { return w.hash(); }
};

// All words of norm <= radius, ordered by (norm, lexicographic payload).
std::vector<GroupWord> word_ball(Backend backend, int rank, int radius);

}  // namespace odoforge
