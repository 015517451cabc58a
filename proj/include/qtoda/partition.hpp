#pragma once

#include <compare>
#include <string>
#include <vector>

namespace qtoda {

/// Weakly decreasing list of positive parts.
using Partition = std::vector<int>;

int weight(const Partition& p);
bool is_partition(const Partition& p);
Partition conjugate(const Partition& p);

/// All partitions of n in lexicographically decreasing order, (n) first.
std::vector<Partition> partitions_of(int n);
/// Partitions of every weight 0..n, by weight, each block as in partitions_of.
std::vector<Partition> partitions_up_to(int n);

/// Multiplicities m_i, z = prod i^{m_i} m_i!, and prod m_i!.
long long z_factor(const Partition& p);
long long multiplicity_factorial(const Partition& p);

/// Sum of (i-1) lambda_i.
long long n_statistic(const Partition& p);
std::vector<int> hook_lengths(const Partition& p);

/// mu is obtained from lambda by removing a horizontal strip (mu interlaces lambda).
bool interlaces(const Partition& lambda, const Partition& mu);

Partition parse_partition(const std::string& text);
std::string format_partition(const Partition& p);

}  // namespace qtoda
