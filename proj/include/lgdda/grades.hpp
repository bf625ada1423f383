#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lgdda/error.hpp"

namespace lgdda {

/// An element of N ∪ {ω}. Finite values are ordered as integers and every
/// finite value is below ω.
class Grade {
 public:
  constexpr Grade() = default;
  constexpr Grade(std::uint64_t n) : value_(n) {
    if (n == kOmega) throw std::overflow_error("grade value out of range");
  }

  static constexpr Grade omega() {
    Grade g;
    g.value_ = kOmega;
    return g;
  }

  constexpr bool is_finite() const { return value_ != kOmega; }
  constexpr bool is_omega() const { return value_ == kOmega; }

  /// Finite value; throws on ω.
  constexpr std::uint64_t value() const {
    if (is_omega()) throw std::domain_error("value() of infinite grade");
    return value_;
  }

  friend constexpr auto operator<=>(Grade, Grade) = default;

  friend constexpr Grade operator+(Grade a, Grade b) {
    if (a.is_omega() || b.is_omega()) return omega();
    if (a.value_ > kOmega - 1 - b.value_) throw std::overflow_error("grade sum overflow");
    return Grade(a.value_ + b.value_);
  }
  constexpr Grade& operator+=(Grade other) { return *this = *this + other; }

  std::string to_string() const { return is_omega() ? "w" : std::to_string(value_); }

  /// Accepts a decimal literal or "w".
  static Grade parse(std::string_view text) {
    if (text == "w") return omega();
    if (text.empty() || text.size() > 18) throw Error("malformed grade '" + std::string(text) + "'");
    std::uint64_t n = 0;
    for (char c : text) {
      if (c < '0' || c > '9') throw Error("malformed grade '" + std::string(text) + "'");
      n = n * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return Grade(n);
  }

 private:
  static constexpr std::uint64_t kOmega = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Grade g) { return os << g.to_string(); }

inline Grade grade_sum(std::span<const Grade> values) {
  Grade total = 0;
  for (Grade g : values) total += g;
  return total;
}

inline Grade grade_sum(std::initializer_list<Grade> values) {
  return grade_sum(std::span<const Grade>(values.begin(), values.size()));
}

enum class Extremum { min, max };

/// min* and max*: the empty minimum is ω and the empty maximum is 0.
inline Grade bounded_extrema(std::span<const Grade> values, Extremum mode) {
  if (values.empty()) return mode == Extremum::min ? Grade::omega() : Grade(0);
  return mode == Extremum::min ? *std::min_element(values.begin(), values.end())
                               : *std::max_element(values.begin(), values.end());
}

inline Grade min_star(std::span<const Grade> values) { return bounded_extrema(values, Extremum::min); }
inline Grade max_star(std::span<const Grade> values) { return bounded_extrema(values, Extremum::max); }

using Agent = std::string;

/// A nonempty set of agents, kept sorted. The sort order is the global agent
/// order used by every partition-dependent algorithm.
class Group {
 public:
  Group(std::vector<Agent> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw Error("empty group");
  }
  Group(std::initializer_list<Agent> members) : Group(std::vector<Agent>(members)) {}

  const std::vector<Agent>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(const Agent& a) const { return std::binary_search(members_.begin(), members_.end(), a); }
  bool subset_of(const Group& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
  }

  /// Space-separated member list, as written inside `D{...}`.
  std::string to_string() const {
    std::string out;
    for (const auto& m : members_) {
      if (!out.empty()) out += ' ';
      out += m;
    }
    return out;
  }

  friend auto operator<=>(const Group&, const Group&) = default;
  friend bool operator==(const Group&, const Group&) = default;

 private:
  std::vector<Agent> members_;
};

/// All nonempty subsets of `agents`, ordered by bitmask over the sorted agent
/// list (bit 0 = first agent).
inline std::vector<Group> all_groups(std::vector<Agent> agents) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  if (agents.size() >= 20) throw Error("too many agents to enumerate groups");
  std::vector<Group> out;
  for (std::uint32_t mask = 1; mask < (1u << agents.size()); ++mask) {
    std::vector<Agent> members;
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (mask & (1u << i)) members.push_back(agents[i]);
    out.emplace_back(std::move(members));
  }
  return out;
}

/// A division of a finite grade among the members of a group.
class Partition {
 public:
  Partition(Group group, std::vector<std::uint64_t> shares) : group_(std::move(group)), shares_(std::move(shares)) {
    if (shares_.size() != group_.size()) throw Error("partition arity does not match group");
  }

  const Group& group() const { return group_; }
  const std::vector<std::uint64_t>& shares() const { return shares_; }

  std::uint64_t operator[](const Agent& a) const {
    auto it = std::lower_bound(group_.begin(), group_.end(), a);
    if (it == group_.end() || *it != a) throw Error("agent '" + a + "' outside partition domain");
    return shares_[static_cast<std::size_t>(it - group_.begin())];
  }

  /// Σ_{i∈sub} δ(i); `sub` must be a subset of the domain.
  std::uint64_t sum_over(const Group& sub) const {
    std::uint64_t s = 0;
    for (const auto& a : sub) s += (*this)[a];
    return s;
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto v : shares_) s += v;
    return s;
  }

  std::string to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < shares_.size(); ++i) {
      if (i) out += ',';
      out += group_.members()[i] + ":" + std::to_string(shares_[i]);
    }
    return out + ")";
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  Group group_;
  std::vector<std::uint64_t> shares_;
};

/// Visits every δ with Σ δ(i) = k in lexicographic order over the group's
/// agent order. The visitor returns false to stop early; the function
/// returns false iff it was stopped.
template <class Visitor>
bool for_each_partition(Grade k, const Group& group, Visitor&& visit) {
  if (k.is_omega()) throw Error("partition of infinite grade");
  const std::size_t n = group.size();
  std::vector<std::uint64_t> shares(n, 0);
  // Odometer over the first n-1 shares; the last takes the remainder.
  std::function<bool(std::size_t, std::uint64_t)> rec = [&](std::size_t idx, std::uint64_t remaining) -> bool {
    if (idx + 1 == n) {
      shares[idx] = remaining;
      return visit(Partition(group, shares));
    }
    for (std::uint64_t v = 0; v <= remaining; ++v) {
      shares[idx] = v;
      if (!rec(idx + 1, remaining - v)) return false;
    }
    return true;
  };
  return rec(0, k.value());
}

inline std::vector<Partition> partitions(Grade k, const Group& group) {
  std::vector<Partition> out;
  for_each_partition(k, group, [&](Partition p) {
    out.push_back(std::move(p));
    return true;
  });
  return out;
}

}  // namespace lgdda
