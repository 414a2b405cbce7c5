#include "odoforge/chain.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "odoforge/errors.hpp"

namespace odoforge {

using nlohmann::json;

void QuotientChain::build_derived() {
  if (backend_ == Backend::Zd) {
    strides_.clear();
    for (const auto& m : moduli_) {
      std::vector<long long> s(m.size());
      long long acc = 1;
      for (size_t i = 0; i < m.size(); ++i) {
        s[i] = acc;
        acc *= m[i];
      }
      strides_.push_back(std::move(s));
    }
    return;
  }
  for (auto& q : quotients_) {
    q.inv.assign(static_cast<size_t>(q.size), -1);
    for (Cell a = 0; a < q.size; ++a)
      for (Cell b = 0; b < q.size; ++b)
        if (q.mul[static_cast<size_t>(a) * q.size + b] == 0) q.inv[a] = b;
  }
}

long long QuotientChain::index(int level) const {
  if (level < 1 || level > depth_)
    throw LevelOutOfRange("level " + std::to_string(level) + " outside 1.." +
                          std::to_string(depth_));
  if (backend_ == Backend::Zd) {
    long long n = 1;
    for (long long m : moduli_[static_cast<size_t>(level - 1)]) n *= m;
    return n;
  }
  return quotients_[static_cast<size_t>(level - 1)].size;
}

const std::vector<long long>& QuotientChain::moduli(int level) const {
  if (backend_ != Backend::Zd) throw BackendMismatch("moduli on table chain");
  if (level < 1 || level > depth_) throw LevelOutOfRange("bad level");
  return moduli_[static_cast<size_t>(level - 1)];
}

Cell QuotientChain::coset(int level, const GroupWord& g) const {
  if (level < 1 || level > depth_)
    throw LevelOutOfRange("coset: level " + std::to_string(level) +
                          " outside 1.." + std::to_string(depth_));
  if (backend_ == Backend::Zd) {
    if (g.backend() != Backend::Zd ||
        static_cast<int>(g.coords().size()) != rank_)
      throw BackendMismatch("word does not belong to this chain");
    const auto& m = moduli_[static_cast<size_t>(level - 1)];
    const auto& s = strides_[static_cast<size_t>(level - 1)];
    long long id = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      long long r = g.coords()[i] % m[i];
      if (r < 0) r += m[i];
      id += r * s[i];
    }
    return static_cast<Cell>(id);
  }
  if (g.backend() != Backend::Table)
    throw BackendMismatch("word does not belong to this chain");
  const auto& q = quotients_[static_cast<size_t>(level - 1)];
  Cell acc = 0;
  for (int l : g.letters()) {
    int gen = (l > 0 ? l : -l) - 1;
    if (gen >= rank_) throw FormatError("word uses a generator beyond the chain rank");
    Cell img = q.gen_images[static_cast<size_t>(gen)];
    if (l < 0) img = q.inv[static_cast<size_t>(img)];
    acc = q.mul[static_cast<size_t>(acc) * q.size + img];
  }
  return acc;
}

Cell QuotientChain::qmul(int level, Cell a, Cell b) const {
  if (backend_ == Backend::Zd) {
    const auto& m = moduli_[static_cast<size_t>(level - 1)];
    const auto& s = strides_[static_cast<size_t>(level - 1)];
    long long id = 0;
    for (size_t i = m.size(); i-- > 0;) {
      long long ra = (a / s[i]) % m[i];
      long long rb = (b / s[i]) % m[i];
      id += ((ra + rb) % m[i]) * s[i];
    }
    return static_cast<Cell>(id);
  }
  const auto& q = quotients_[static_cast<size_t>(level - 1)];
  return q.mul[static_cast<size_t>(a) * q.size + b];
}

Cell QuotientChain::qinv(int level, Cell a) const {
  if (backend_ == Backend::Zd) {
    const auto& m = moduli_[static_cast<size_t>(level - 1)];
    const auto& s = strides_[static_cast<size_t>(level - 1)];
    long long id = 0;
    for (size_t i = m.size(); i-- > 0;) {
      long long r = (a / s[i]) % m[i];
      id += ((m[i] - r) % m[i]) * s[i];
    }
    return static_cast<Cell>(id);
  }
  return quotients_[static_cast<size_t>(level - 1)].inv[static_cast<size_t>(a)];
}

Cell QuotientChain::project(int fromLevel, Cell a) const {
  if (fromLevel < 2 || fromLevel > depth_)
    throw LevelOutOfRange("project: bad source level");
  if (backend_ == Backend::Zd) {
    const auto& mf = moduli_[static_cast<size_t>(fromLevel - 1)];
    const auto& sf = strides_[static_cast<size_t>(fromLevel - 1)];
    const auto& mt = moduli_[static_cast<size_t>(fromLevel - 2)];
    const auto& st = strides_[static_cast<size_t>(fromLevel - 2)];
    long long id = 0;
    for (size_t i = mf.size(); i-- > 0;) {
      long long r = (a / sf[i]) % mf[i];
      id += (r % mt[i]) * st[i];
    }
    return static_cast<Cell>(id);
  }
  return projections_[static_cast<size_t>(fromLevel - 2)][static_cast<size_t>(a)];
}

Cell QuotientChain::project_to(int fromLevel, int toLevel, Cell a) const {
  if (toLevel > fromLevel) throw LevelOutOfRange("project_to: target deeper than source");
  Cell c = a;
  for (int l = fromLevel; l > toLevel; --l) c = project(l, c);
  return c;
}

GroupWord QuotientChain::make_identity() const {
  return GroupWord::identity(backend_, rank_);
}

GroupWord QuotientChain::parse_word(const std::string& s) const {
  return GroupWord::parse(backend_, rank_, s);
}

QuotientChain QuotientChain::truncated(int newDepth) const {
  if (newDepth < 1 || newDepth > depth_)
    throw LevelOutOfRange("truncate: bad depth");
  QuotientChain c(*this);
  c.depth_ = newDepth;
  if (backend_ == Backend::Zd) {
    c.moduli_.resize(static_cast<size_t>(newDepth));
    c.strides_.resize(static_cast<size_t>(newDepth));
  } else {
    c.quotients_.resize(static_cast<size_t>(newDepth));
    c.projections_.resize(static_cast<size_t>(newDepth - 1));
  }
  return c;
}

QuotientChain QuotientChain::with_side(Side s) const {
  QuotientChain c(*this);
  c.side_ = s;
  return c;
}

QuotientChain QuotientChain::conjugated(const std::vector<GroupWord>& zs) const {
  if (static_cast<int>(zs.size()) != depth_)
    throw FormatError("conjugation needs one word per level");
  for (int n = 1; n < depth_; ++n) {
    if (coset(n, zs[static_cast<size_t>(n)]) != coset(n, zs[static_cast<size_t>(n - 1)]))
      throw FormatError("conjugating sequence is not projection-compatible at level " +
                        std::to_string(n));
  }
  if (backend_ == Backend::Zd) return *this;  // inner automorphisms are trivial

  QuotientChain c(*this);
  std::vector<Cell> cls(static_cast<size_t>(depth_));
  for (int n = 1; n <= depth_; ++n)
    cls[static_cast<size_t>(n - 1)] = coset(n, zs[static_cast<size_t>(n - 1)]);
  auto conj = [&](int level, Cell by, Cell x) {
    return qmul(level, qmul(level, by, x), qinv(level, by));
  };
  for (int n = 1; n <= depth_; ++n) {
    auto& q = c.quotients_[static_cast<size_t>(n - 1)];
    Cell cn = cls[static_cast<size_t>(n - 1)];
    Cell cni = qinv(n, cn);
    for (auto& img : q.gen_images) img = conj(n, cni, img);
    if (n >= 2) {
      Cell cp = cls[static_cast<size_t>(n - 2)];
      auto& proj = c.projections_[static_cast<size_t>(n - 2)];
      for (Cell x = 0; x < q.size; ++x)
        proj[static_cast<size_t>(x)] =
            conj(n - 1, qinv(n - 1, cp), project(n, conj(n, cn, x)));
    }
  }
  c.build_derived();
  c.validate();
  return c;
}

void QuotientChain::validate() const {
  if (depth_ < 1) throw ChainInvalid("chain depth must be >= 1");
  for (int n = 1; n < depth_; ++n) {
    long long a = index(n), b = index(n + 1);
    if (!(a < b)) throw ChainInvalid("index sizes must strictly increase at level " +
                                     std::to_string(n + 1));
    if (b % a != 0) throw ChainInvalid("index of level " + std::to_string(n) +
                                       " must divide level " + std::to_string(n + 1));
  }
  if (backend_ == Backend::Zd) {
    if (rank_ < 1) throw ChainInvalid("Z^d chain needs d >= 1");
    for (int n = 1; n <= depth_; ++n) {
      const auto& m = moduli_[static_cast<size_t>(n - 1)];
      if (static_cast<int>(m.size()) != rank_)
        throw ChainInvalid("moduli vector of wrong length at level " + std::to_string(n));
      for (long long v : m)
        if (v < 1) throw ChainInvalid("moduli must be positive");
      if (n > 1) {
        const auto& prev = moduli_[static_cast<size_t>(n - 2)];
        for (int i = 0; i < rank_; ++i)
          if (m[static_cast<size_t>(i)] % prev[static_cast<size_t>(i)] != 0)
            throw ChainInvalid("componentwise divisibility fails at level " +
                               std::to_string(n));
      }
    }
    return;
  }
  if (rank_ < 1) throw ChainInvalid("table chain needs at least one generator");
  for (int n = 1; n <= depth_; ++n) {
    const auto& q = quotients_[static_cast<size_t>(n - 1)];
    if (q.size < 1) throw ChainInvalid("empty quotient");
    if (static_cast<long long>(q.mul.size()) !=
        static_cast<long long>(q.size) * q.size)
      throw ChainInvalid("multiplication table of wrong shape at level " +
                         std::to_string(n));
    for (Cell v : q.mul)
      if (v < 0 || v >= q.size) throw ChainInvalid("table entry out of range");
    for (Cell a = 0; a < q.size; ++a) {
      if (q.mul[static_cast<size_t>(a) * q.size] != a ||
          q.mul[static_cast<size_t>(a)] != a)
        throw ChainInvalid("cell 0 is not an identity at level " + std::to_string(n));
      if (q.inv[static_cast<size_t>(a)] < 0)
        throw ChainInvalid("missing inverse at level " + std::to_string(n));
    }
    if (static_cast<int>(q.gen_images.size()) != rank_)
      throw ChainInvalid("generator image count mismatch at level " + std::to_string(n));
    // associativity on the full table keeps the quotient an honest group
    for (Cell a = 0; a < q.size; ++a)
      for (Cell b = 0; b < q.size; ++b)
        for (Cell cc = 0; cc < q.size; ++cc) {
          Cell ab = q.mul[static_cast<size_t>(a) * q.size + b];
          Cell bc = q.mul[static_cast<size_t>(b) * q.size + cc];
          if (q.mul[static_cast<size_t>(ab) * q.size + cc] !=
              q.mul[static_cast<size_t>(a) * q.size + bc])
            throw ChainInvalid("non-associative table at level " + std::to_string(n));
        }
  }
  for (int n = 2; n <= depth_; ++n) {
    const auto& hi = quotients_[static_cast<size_t>(n - 1)];
    const auto& proj = projections_[static_cast<size_t>(n - 2)];
    if (static_cast<int>(proj.size()) != hi.size)
      throw ChainInvalid("projection array of wrong length at level " + std::to_string(n));
    long long lo_size = index(n - 1);
    std::vector<char> hit(static_cast<size_t>(lo_size), 0);
    for (Cell v : proj) {
      if (v < 0 || v >= lo_size) throw ChainInvalid("projection value out of range");
      hit[static_cast<size_t>(v)] = 1;
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end())
      throw ChainInvalid("projection not surjective at level " + std::to_string(n));
    if (proj[0] != 0) throw ChainInvalid("projection must fix the identity");
    for (Cell a = 0; a < hi.size; ++a)
      for (Cell b = 0; b < hi.size; ++b) {
        Cell ab = hi.mul[static_cast<size_t>(a) * hi.size + b];
        if (proj[static_cast<size_t>(ab)] !=
            qmul(n - 1, proj[static_cast<size_t>(a)], proj[static_cast<size_t>(b)]))
          throw ChainInvalid("projection is not a homomorphism at level " +
                             std::to_string(n));
      }
    for (int g = 0; g < rank_; ++g)
      if (proj[static_cast<size_t>(hi.gen_images[static_cast<size_t>(g)])] !=
          quotients_[static_cast<size_t>(n - 2)].gen_images[static_cast<size_t>(g)])
        throw ChainInvalid("generator images incompatible with projection at level " +
                           std::to_string(n));
  }
}

QuotientChain QuotientChain::from_json(const json& j) {
  QuotientChain c;
  std::string backend = j.at("backend").get<std::string>();
  c.depth_ = j.at("depth").get<int>();
  std::string side = j.value("side", "right");
  if (side == "right")
    c.side_ = Side::Right;
  else if (side == "left")
    c.side_ = Side::Left;
  else
    throw FormatError("side must be \"right\" or \"left\"");
  if (backend == "zd") {
    c.backend_ = Backend::Zd;
    const auto& zd = j.at("zd");
    c.rank_ = zd.at("d").get<int>();
    for (const auto& lv : zd.at("moduli"))
      c.moduli_.push_back(lv.get<std::vector<long long>>());
    if (static_cast<int>(c.moduli_.size()) != c.depth_)
      throw FormatError("moduli count differs from depth");
  } else if (backend == "table") {
    c.backend_ = Backend::Table;
    const auto& tb = j.at("table");
    for (const auto& qj : tb.at("quotients")) {
      TableQuotient q;
      q.size = qj.at("size").get<int>();
      for (const auto& row : qj.at("mul"))
        for (const auto& v : row) q.mul.push_back(v.get<Cell>());
      q.gen_images = qj.at("gen_images").get<std::vector<Cell>>();
      c.quotients_.push_back(std::move(q));
    }
    if (static_cast<int>(c.quotients_.size()) != c.depth_)
      throw FormatError("quotient count differs from depth");
    c.rank_ = static_cast<int>(c.quotients_.front().gen_images.size());
    for (const auto& pj : tb.at("projections"))
      c.projections_.push_back(pj.get<std::vector<Cell>>());
    if (static_cast<int>(c.projections_.size()) != c.depth_ - 1)
      throw FormatError("projection count differs from depth");
  } else {
    throw FormatError("backend must be \"zd\" or \"table\"");
  }
  c.build_derived();
  c.validate();
  return c;
}

QuotientChain QuotientChain::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open chain file: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json QuotientChain::to_json() const {
  json j;
  j["backend"] = backend_ == Backend::Zd ? "zd" : "table";
  j["depth"] = depth_;
  j["side"] = side_ == Side::Right ? "right" : "left";
  if (backend_ == Backend::Zd) {
    j["zd"] = {{"d", rank_}, {"moduli", moduli_}};
  } else {
    json quotients = json::array();
    for (const auto& q : quotients_) {
      json rows = json::array();
      for (Cell a = 0; a < q.size; ++a) {
        json row = json::array();
        for (Cell b = 0; b < q.size; ++b)
          row.push_back(q.mul[static_cast<size_t>(a) * q.size + b]);
        rows.push_back(std::move(row));
      }
      quotients.push_back(
          {{"size", q.size}, {"mul", rows}, {"gen_images", q.gen_images}});
    }
    j["table"] = {{"quotients", quotients}, {"projections", projections_}};
  }
  return j;
}

}  // namespace odoforge
