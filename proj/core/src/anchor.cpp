#include "dcki/anchor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dcki/random.hpp"

namespace dcki {

namespace {

using Groups = std::map<double, std::vector<Index>>;

Groups group_by_label(const Targets& y) {
  Groups groups;
  for (Index i = 0; i < y.size(); ++i) groups[y(i)].push_back(i);
  return groups;
}

// k nearest members of `group` to row `self`, excluding self; ties by index.
std::vector<Index> nearest_in_group(const Matrix& X, Index self,
                                    const std::vector<Index>& group, Index k) {
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(group.size());
  for (Index j : group) {
    if (j == self) continue;
    cand.emplace_back((X.row(j) - X.row(self)).squaredNorm(), j);
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(take),
                    cand.end());
  std::vector<Index> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(cand[i].second);
  return out;
}

}  // namespace

AnchorSet generate_anchor(const Matrix& source_X, const Targets& source_y,
                          const SmoteOptions& options, std::uint64_t seed) {
  const Index n_s = source_X.rows();
  const Index n_a = options.n_a;
  require(source_y.size() == n_s, ErrorCode::kShapeMismatch,
          "source labels and rows differ in count");
  require(n_s >= 1, ErrorCode::kInsufficientSource, "no source samples");
  require(n_a >= n_s, ErrorCode::kInvalidArgument,
          "n_a must be at least the number of source samples");
  require(options.k_nn >= 1, ErrorCode::kInvalidArgument, "k_nn must be >= 1");
  const bool classify = options.mode == TaskMode::kClassification;
  require(classify || !options.balanced, ErrorCode::kInvalidArgument,
          "class balancing requires classification mode");

  AnchorSet out;
  out.A.resize(n_a, source_X.cols());
  out.y.resize(n_a);
  out.A.topRows(n_s) = source_X;
  out.y.head(n_s) = source_y;
  out.source_count = n_s;
  out.neighbor_count = options.k_nn;
  if (n_a == n_s) return out;

  Groups groups;
  if (classify) {
    groups = group_by_label(source_y);
  } else {
    std::vector<Index> all(static_cast<std::size_t>(n_s));
    std::iota(all.begin(), all.end(), Index{0});
    groups[0.0] = std::move(all);
  }

  // How many rows each group must receive, in ascending label order.
  std::vector<std::pair<const std::vector<Index>*, Index>> plan;
  if (options.balanced) {
    const auto classes = static_cast<Index>(groups.size());
    require(n_a % classes == 0, ErrorCode::kDivisibility,
            "n_a = " + std::to_string(n_a) + " is not divisible by " +
                std::to_string(classes) + " classes");
    const Index per_class = n_a / classes;
    for (const auto& [label, members] : groups) {
      const auto have = static_cast<Index>(members.size());
      require(have <= per_class, ErrorCode::kDivisibility,
              "class holds more sources than its balanced quota");
      if (per_class > have) plan.emplace_back(&members, per_class - have);
    }
  } else {
    plan.emplace_back(nullptr, n_a - n_s);
  }

  std::vector<Index> eligible;  // unbalanced mode: sources with a partner
  for (const auto& [label, members] : groups) {
    if (!options.balanced) {
      require(members.size() >= 2, ErrorCode::kInsufficientSource,
              "a class has fewer than two source samples");
      eligible.insert(eligible.end(), members.begin(), members.end());
    }
  }
  std::sort(eligible.begin(), eligible.end());

  auto group_of = [&](Index row) -> const std::vector<Index>& {
    return classify ? groups.at(source_y(row)) : groups.begin()->second;
  };

  CounterRng rng = CounterRng::stream(seed, Purpose::kSmote);
  std::map<Index, std::vector<Index>> neighbor_cache;
  Index at = n_s;
  for (const auto& [members, count] : plan) {
    const std::vector<Index>& pickable = members ? *members : eligible;
    require(pickable.size() >= 2, ErrorCode::kInsufficientSource,
            "a class needing augmentation has fewer than two source samples");
    for (Index c = 0; c < count; ++c) {
      const Index base = pickable[rng.uniform_index(pickable.size())];
      auto it = neighbor_cache.find(base);
      if (it == neighbor_cache.end()) {
        it = neighbor_cache
                 .emplace(base, nearest_in_group(source_X, base, group_of(base),
                                                 options.k_nn))
                 .first;
      }
      const std::vector<Index>& nbrs = it->second;
      const Index partner = nbrs[rng.uniform_index(nbrs.size())];
      const double u = rng.uniform01();
      out.A.row(at) =
          source_X.row(base) + u * (source_X.row(partner) - source_X.row(base));
      out.y(at) = source_y(base);
      ++at;
    }
  }
  return out;
}

AnchorSet anchor_real_only(const Matrix& source_X, const Targets& source_y,
                           Index n_a, std::uint64_t seed) {
  const Index n_s = source_X.rows();
  require(source_y.size() == n_s, ErrorCode::kShapeMismatch,
          "source labels and rows differ in count");
  require(n_a >= 1 && n_a <= n_s, ErrorCode::kInsufficientSource,
          "need " + std::to_string(n_a) + " real anchors but only " +
              std::to_string(n_s) + " sources");

  const Groups groups = group_by_label(source_y);
  std::vector<Index> quota(groups.size(), 0);
  std::vector<Index> avail;
  for (const auto& [label, members] : groups)
    avail.push_back(static_cast<Index>(members.size()));

  // Water-filling: spread the remaining budget equally over classes that
  // still have spare rows; leftovers go to the lowest labels first.
  Index remaining = n_a;
  while (remaining > 0) {
    std::vector<std::size_t> open;
    for (std::size_t c = 0; c < quota.size(); ++c)
      if (quota[c] < avail[c]) open.push_back(c);
    const Index share = remaining / static_cast<Index>(open.size());
    if (share == 0) {
      for (std::size_t c : open) {
        if (remaining == 0) break;
        ++quota[c];
        --remaining;
      }
      break;
    }
    for (std::size_t c : open) {
      const Index add = std::min(share, avail[c] - quota[c]);
      quota[c] += add;
      remaining -= add;
    }
  }

  CounterRng rng = CounterRng::stream(seed, Purpose::kAnchorSelect);
  std::vector<Index> chosen;
  std::size_t c = 0;
  for (const auto& [label, members] : groups) {
    const auto picks = sample_without_replacement(
        static_cast<Index>(members.size()), quota[c++], rng);
    for (Index p : picks) chosen.push_back(members[static_cast<std::size_t>(p)]);
  }
  std::sort(chosen.begin(), chosen.end());

  AnchorSet out;
  out.A = select_rows(source_X, chosen);
  out.y = select_rows(source_y, chosen);
  out.source_count = n_a;
  out.neighbor_count = 0;
  return out;
}

}  // namespace dcki
