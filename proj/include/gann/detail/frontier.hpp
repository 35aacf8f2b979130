// Copyright 2026 The GANN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "gann/core.hpp"

namespace gann::detail {

/// Sorted fixed-capacity candidate pool: the l closest known candidates with
/// an expanded flag. This is the beam traversal's candidate set C, with the
/// unexpanded subset (C minus V) tracked in place.
class Frontier {
 public:
  explicit Frontier(std::size_t l) : l_(l) { pool_.reserve(l + 1); }

  /// Inserts unless the pool is already full of closer entries. The caller
  /// guarantees each node id is proposed at most once per query.
  void insert(const Candidate& cand) {
    if (pool_.size() == l_ && !candidate_less(cand, pool_.back().cand)) {
      return;
    }
    Entry e{cand, false};
    auto it = std::lower_bound(pool_.begin(), pool_.end(), e,
                               [](const Entry& a, const Entry& b) {
                                 return candidate_less(a.cand, b.cand);
                               });
    const auto pos = static_cast<std::size_t>(it - pool_.begin());
    pool_.insert(it, e);
    if (pool_.size() > l_) pool_.pop_back();
    if (pos < next_unexpanded_) next_unexpanded_ = pos;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Marks and returns the index of the closest unexpanded candidate.
  std::size_t pop_nearest_unexpanded() {
    for (std::size_t i = next_unexpanded_; i < pool_.size(); ++i) {
      if (!pool_[i].expanded) {
        pool_[i].expanded = true;
        next_unexpanded_ = i + 1;
        return i;
      }
    }
    next_unexpanded_ = pool_.size();
    return npos;
  }

  const Candidate& at(std::size_t i) const { return pool_[i].cand; }
  std::size_t size() const { return pool_.size(); }

 private:
  struct Entry {
    Candidate cand;
    bool expanded;
  };
  std::size_t l_;
  std::size_t next_unexpanded_ = 0;
  std::vector<Entry> pool_;
};

}  // namespace gann::detail
