#pragma once

// Subsets, permutations, shuffles and wedge normalization.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace difop {

/// Sorts a wedge of indices. Returns the sign of the sorting permutation,
/// or nullopt when an index repeats (the wedge vanishes).
template <class T>
std::optional<int> normalize_wedge(std::vector<T>& w) {
  int sign = 1;
  // insertion sort: each adjacent swap flips the sign
  for (std::size_t i = 1; i < w.size(); ++i)
    for (std::size_t j = i; j > 0 && w[j - 1] > w[j]; --j) {
      std::swap(w[j - 1], w[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i - 1] == w[i]) return std::nullopt;
  return sign;
}

/// All k-subsets of {0..n-1}, increasing, in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Complement of an increasing subset of {0..n-1}.
inline std::vector<std::size_t> complement_of(const std::vector<std::size_t>& sub, std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < sub.size() && sub[j] == i)
      ++j;
    else
      out.push_back(i);
  }
  return out;
}

/// sum over u of (j_u - u) for a 0-based increasing subset; the parity of
/// the shuffle moving the subset to the front.
inline int shuffle_exponent(const std::vector<std::size_t>& sub) {
  int e = 0;
  for (std::size_t u = 0; u < sub.size(); ++u) e += static_cast<int>(sub[u]) - static_cast<int>(u);
  return e;
}

inline int parity_sign(int e) { return (e % 2 == 0) ? 1 : -1; }

/// All permutations of {0..n-1} with their signs, in lexicographic order.
inline std::vector<std::pair<std::vector<std::size_t>, int>> permutations_with_sign(std::size_t n) {
  std::vector<std::pair<std::vector<std::size_t>, int>> out;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[i] > p[j]) ++inv;
    out.emplace_back(p, parity_sign(inv));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// All words of length r over an alphabet of size n (lexicographic).
inline std::vector<std::vector<std::size_t>> words(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0 && r > 0) return out;
  std::vector<std::size_t> cur(r, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = r;
    while (i > 0 && cur[i - 1] == n - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < r; ++j) cur[j] = 0;
  }
  return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace difop
