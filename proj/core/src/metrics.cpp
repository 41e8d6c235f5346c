#include "gnnseed/metrics.hpp"

#include <string>
#include <unordered_map>

namespace gnnseed {

namespace {

// Compacts arbitrary label values to 0..k-1 by first occurrence.
std::vector<int> compact(const std::vector<int>& v, int& k) {
  std::unordered_map<int, int> map;
  std::vector<int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    auto [it, fresh] = map.try_emplace(v[i], static_cast<int>(map.size()));
    out[i] = it->second;
  }
  k = static_cast<int>(map.size());
  return out;
}

inline __int128 choose2(long long x) {
  return static_cast<__int128>(x) * (x - 1) / 2;
}

}  // namespace

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw SizeMismatchError("ari: label vectors of length " + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()));
  const long long n = static_cast<long long>(a.size());
  if (n < 2) throw ShapeError("ari: need at least 2 nodes");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0 || b[i] < 0) throw OutOfRangeError("ari: masked entry at node " + std::to_string(i));

  int ka = 0, kb = 0;
  std::vector<int> ca = compact(a, ka);
  std::vector<int> cb = compact(b, kb);

  std::vector<long long> table(static_cast<size_t>(ka) * static_cast<size_t>(kb), 0);
  std::vector<long long> row(static_cast<size_t>(ka), 0), col(static_cast<size_t>(kb), 0);
  for (long long i = 0; i < n; ++i) {
    int x = ca[static_cast<size_t>(i)], y = cb[static_cast<size_t>(i)];
    ++table[static_cast<size_t>(x) * static_cast<size_t>(kb) + static_cast<size_t>(y)];
    ++row[static_cast<size_t>(x)];
    ++col[static_cast<size_t>(y)];
  }

  __int128 index = 0, sum_a = 0, sum_b = 0;
  for (long long t : table) index += choose2(t);
  for (long long r : row) sum_a += choose2(r);
  for (long long c : col) sum_b += choose2(c);
  const __int128 total = choose2(n);

  // ARI = (index - sum_a*sum_b/total) / ((sum_a+sum_b)/2 - sum_a*sum_b/total);
  // multiply through by 2*total to stay in exact integers (no halving error).
  __int128 num = 2 * (index * total - sum_a * sum_b);
  __int128 den = (sum_a + sum_b) * total - 2 * sum_a * sum_b;
  if (den == 0) {
    // Both partitions all-singletons or all-one-cluster (in any mix): ARI is
    // defined as 1 when they are the same partition, 0 otherwise.
    bool identical = ka == kb && index == sum_a && index == sum_b;
    return identical ? 1.0 : 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double ari(const LabelVector& a, const LabelVector& b) { return ari(a.values, b.values); }

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                const std::vector<int>& mask) {
  if (mask.empty()) throw EmptyMaskError("accuracy: empty mask");
  long long correct = 0;
  for (int i : mask) {
    if (i < 0 || static_cast<size_t>(i) >= pred.size() || static_cast<size_t>(i) >= truth.size())
      throw OutOfRangeError("accuracy: mask index " + std::to_string(i) + " out of range");
    if (truth[static_cast<size_t>(i)] < 0)
      throw OutOfRangeError("accuracy: truth masked at node " + std::to_string(i));
    if (pred[static_cast<size_t>(i)] == truth[static_cast<size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

}  // namespace gnnseed
