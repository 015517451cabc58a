#include "qtoda/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qtoda {

int weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

bool is_partition(const Partition& p) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1) return false;
    if (i > 0 && p[i] > p[i - 1]) return false;
  }
  return true;
}

Partition conjugate(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  c.assign(p.front(), 0);
  for (int part : p) {
    for (int j = 0; j < part; ++j) ++c[j];
  }
  return c;
}

std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: negative weight");
  std::vector<Partition> out;
  Partition cur;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      cur.push_back(part);
      rec(remaining - part, part);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

std::vector<Partition> partitions_up_to(int n) {
  std::vector<Partition> out;
  for (int w = 0; w <= n; ++w) {
    auto block = partitions_of(w);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

long long z_factor(const Partition& p) {
  long long z = 1;
  size_t i = 0;
  while (i < p.size()) {
    size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    for (size_t m = 1; m <= j - i; ++m) z *= static_cast<long long>(m) * p[i];
    i = j;
  }
  return z;
}

long long multiplicity_factorial(const Partition& p) {
  long long f = 1;
  size_t i = 0;
  while (i < p.size()) {
    size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    for (size_t m = 1; m <= j - i; ++m) f *= static_cast<long long>(m);
    i = j;
  }
  return f;
}

long long n_statistic(const Partition& p) {
  long long n = 0;
  for (size_t i = 0; i < p.size(); ++i) n += static_cast<long long>(i) * p[i];
  return n;
}

std::vector<int> hook_lengths(const Partition& p) {
  const Partition c = conjugate(p);
  std::vector<int> hooks;
  for (size_t i = 0; i < p.size(); ++i) {
    for (int j = 0; j < p[i]; ++j) hooks.push_back((p[i] - j - 1) + (c[j] - static_cast<int>(i) - 1) + 1);
  }
  return hooks;
}

bool interlaces(const Partition& lambda, const Partition& mu) {
  if (mu.size() > lambda.size()) return false;
  for (size_t i = 0; i < lambda.size(); ++i) {
    const int m = i < mu.size() ? mu[i] : 0;
    if (m > lambda[i]) return false;
    if (i + 1 < lambda.size() && m < lambda[i + 1]) return false;
  }
  return true;
}

Partition parse_partition(const std::string& text) {
  Partition p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    p.push_back(std::stoi(item));
  }
  std::sort(p.rbegin(), p.rend());
  if (!is_partition(p)) throw std::invalid_argument("not a partition: " + text);
  return p;
}

std::string format_partition(const Partition& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

}  // namespace qtoda
