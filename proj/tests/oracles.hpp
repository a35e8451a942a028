#pragma once

// Independent brute-force references used by the tests. Nothing here calls the
// library's enumeration code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using Blocks = std::vector<std::vector<int>>;

/// All set partitions of {1..n} via restricted growth strings.
inline std::vector<Blocks> all_set_partitions(int n) {
  std::vector<Blocks> out;
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int max_label) {
    if (pos == n) {
      Blocks b(max_label + 1);
      for (int i = 0; i < n; ++i) b[rgs[i]].push_back(i + 1);
      out.push_back(b);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      rgs[pos] = l;
      rec(pos + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {Blocks{}};
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

/// Crossing test straight from the definition: a<b<c<d with a,c in one block and b,d in another.
inline bool crosses(const std::vector<int>& p, const std::vector<int>& q) {
  for (int a : p)
    for (int c : p)
      for (int b : q)
        for (int d : q)
          if (a < b && b < c && c < d) return true;
  return false;
}

inline bool noncrossing_by_definition(const Blocks& blocks) {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j)
      if (i != j && crosses(blocks[i], blocks[j])) return false;
  return true;
}

inline std::vector<Blocks> nc_by_filter(int n) {
  std::vector<Blocks> out;
  for (auto& p : all_set_partitions(n))
    if (noncrossing_by_definition(p)) out.push_back(p);
  return out;
}

/// A type B pairing written as sorted blocks of circle positions
/// (1..n -> 0..n-1, -1..-n -> n..2n-1).
struct BPairing {
  Blocks blocks;
  bool has_zero = false;
  bool operator<(const BPairing& o) const { return blocks < o.blocks; }
  bool operator==(const BPairing& o) const { return blocks == o.blocks; }
};

inline int pos(int signed_point, int n) { return signed_point > 0 ? signed_point - 1 : n - signed_point - 1; }

/// Direct backtracking over symmetric matchings of {+-1..+-n} with at most one block
/// {i, j, -i, -j}, pruned by the circular crossing test.
inline std::vector<BPairing> b_pairings_direct(int n) {
  std::vector<BPairing> out;
  std::vector<bool> used(2 * n, false);
  Blocks blocks;
  bool zero = false;
  auto ok = [&](const std::vector<int>& b) {
    for (const auto& other : blocks)
      if (crosses(b, other) || crosses(other, b)) return false;
    return true;
  };
  std::function<void()> rec = [&]() {
    int p = 0;
    for (int k = 1; k <= n; ++k)
      if (!used[pos(k, n)]) {
        p = k;
        break;
      }
    if (p == 0) {
      BPairing bp;
      bp.blocks = blocks;
      for (auto& b : bp.blocks) std::sort(b.begin(), b.end());
      std::sort(bp.blocks.begin(), bp.blocks.end());
      bp.has_zero = zero;
      out.push_back(bp);
      return;
    }
    for (int q = -n; q <= n; ++q) {
      if (q == 0 || q == p || q == -p) continue;
      if (used[pos(q, n)] || used[pos(-q, n)]) continue;
      // symmetric pair of pairs {p,q}, {-p,-q}
      std::vector<int> b1{pos(p, n), pos(q, n)}, b2{pos(-p, n), pos(-q, n)};
      std::sort(b1.begin(), b1.end());
      std::sort(b2.begin(), b2.end());
      if (ok(b1) && ok(b2) && !crosses(b1, b2) && !crosses(b2, b1)) {
        for (int x : {p, q, -p, -q}) used[pos(x, n)] = true;
        blocks.push_back(b1);
        blocks.push_back(b2);
        rec();
        blocks.pop_back();
        blocks.pop_back();
        for (int x : {p, q, -p, -q}) used[pos(x, n)] = false;
      }
      if (!zero && q > 0) {
        std::vector<int> z{pos(p, n), pos(q, n), pos(-p, n), pos(-q, n)};
        std::sort(z.begin(), z.end());
        if (ok(z)) {
          for (int x : {p, q, -p, -q}) used[pos(x, n)] = true;
          blocks.push_back(z);
          zero = true;
          rec();
          zero = false;
          blocks.pop_back();
          for (int x : {p, q, -p, -q}) used[pos(x, n)] = false;
        }
      }
    }
  };
  rec();
  return out;
}

inline std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::int64_t catalan(int n) { return binomial(2 * n, n) / (n + 1); }

}  // namespace oracle
