#pragma once

#include <string>

#include "odoforge/chain.hpp"

namespace odoforge::test {

inline std::string fixture(const std::string& name) {
  return std::string(ODOFORGE_FIXTURE_DIR) + "/" + name;
}

inline ChainPtr dyadic_chain() {
  return std::make_shared<QuotientChain>(
      QuotientChain::load_file(fixture("dyadic_z.json")));
}

inline ChainPtr z2_chain() {
  return std::make_shared<QuotientChain>(
      QuotientChain::load_file(fixture("z2_quartic.json")));
}

inline ChainPtr table_chain() {
  return std::make_shared<QuotientChain>(
      QuotientChain::load_file(fixture("table_dihedral.json")));
}

}  // namespace odoforge::test
