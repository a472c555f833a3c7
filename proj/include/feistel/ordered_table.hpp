#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace feistel {

// Associative table that iterates in insertion order. All round-function
// and permutation histories use this so that table scans (and therefore
// transcripts) are deterministic.
template <class K, class V>
class OrderedTable {
 public:
  bool contains(const K& k) const { return index_.count(k) != 0; }

  const V* find(const K& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return nullptr;
    return &items_[it->second].second;
  }

  const V& at(const K& k) const { return *find(k); }

  // Inserts a fresh entry; returns false if the key exists (no change).
  bool insert(const K& k, const V& v) {
    auto [it, fresh] = index_.emplace(k, items_.size());
    if (!fresh) return false;
    items_.emplace_back(k, v);
    return true;
  }

  // Writes unconditionally, keeping the original insertion slot.
  // Returns the previous value if one was overwritten.
  const V* set(const K& k, const V& v) {
    auto it = index_.find(k);
    if (it == index_.end()) {
      insert(k, v);
      return nullptr;
    }
    prev_ = items_[it->second].second;
    items_[it->second].second = v;
    return &prev_;
  }

  // Removes the most recently inserted entry (used by instrumentation to
  // look at the pre-assignment state).
  void pop_last() {
    index_.erase(items_.back().first);
    items_.pop_back();
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<std::pair<K, V>>& items() const { return items_; }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<std::pair<K, V>> items_;
  std::unordered_map<K, std::size_t> index_;
  V prev_{};
};

}  // namespace feistel
