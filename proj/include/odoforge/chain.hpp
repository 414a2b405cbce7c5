#pragma once

// Finite-quotient presentations of a decreasing chain of finite index
// subgroups. Every group-level question downstream reduces to arithmetic in
// the quotients stored here.

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "odoforge/words.hpp"

namespace odoforge {

using Cell = int;  // class id inside one quotient, 0 = class of the identity

enum class Side { Right, Left };

// One level of a table-backed chain: a finite group given by its
// multiplication table plus the images of the group generators.
struct TableQuotient {
  int size = 0;
  std::vector<Cell> mul;         // size*size, row-major: mul[a*size+b]
  std::vector<Cell> inv;         // derived
  std::vector<Cell> gen_images;  // one per generator
};

class QuotientChain {
 public:
  static QuotientChain load_file(const std::string& path);
  static QuotientChain from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Backend backend() const { return backend_; }
  int rank() const { return rank_; }  // d for Z^d, generator count for table
  int depth() const { return depth_; }
  Side side() const { return side_; }

  long long index(int level) const;  // |G : Gamma_level|
  const std::vector<long long>& moduli(int level) const;

  Cell coset(int level, const GroupWord& g) const;
  Cell qmul(int level, Cell a, Cell b) const;
  Cell qinv(int level, Cell a) const;
  // Canonical projection between consecutive quotients, fromLevel >= 2.
  Cell project(int fromLevel, Cell a) const;
  Cell project_to(int fromLevel, int toLevel, Cell a) const;

  GroupWord make_identity() const;
  GroupWord parse_word(const std::string& s) const;

  // Depth-truncated view of the same chain.
  QuotientChain truncated(int newDepth) const;
  QuotientChain with_side(Side s) const;

  // Chain re-based at a projection-compatible sequence (z_n): same subgroups
  // up to conjugation, coset labels relabelled by the inner automorphisms
  // induced by the z_n. Identity on Z^d.
  QuotientChain conjugated(const std::vector<GroupWord>& zs) const;

  // Structural validation: strict index growth, divisibility, identity row,
  // projection homomorphism + generator-image compatibility. Throws.
  void validate() const;

 private:
  Backend backend_ = Backend::Zd;
  int rank_ = 0;
  int depth_ = 0;
  Side side_ = Side::Right;

  // Z^d payload
  std::vector<std::vector<long long>> moduli_;    // per level
  std::vector<std::vector<long long>> strides_;   // per level, mixed radix

  // table payload
  std::vector<TableQuotient> quotients_;
  std::vector<std::vector<Cell>> projections_;  // projections_[i]: level i+2 -> i+1

  void build_derived();
};

using ChainPtr = std::shared_ptr<const QuotientChain>;

}  // namespace odoforge
