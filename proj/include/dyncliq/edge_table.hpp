#pragma once

#include <cstdint>
#include <vector>

#include "dyncliq/errors.hpp"
#include "dyncliq/update_stream.hpp"

namespace dyncliq {

// Per-vertex neighbor table mapping neighbor id -> 1-byte edge state.
// Small tables are a flat unsorted array; past kFlatCap entries the table
// converts to linear-probed open addressing with tombstone deletion.
class EdgeTable {
 public:
  static constexpr size_t kFlatCap = 128;

  const uint8_t* find(vertex_id nbr) const {
    return const_cast<EdgeTable*>(this)->find(nbr);
  }

  uint8_t* find(vertex_id nbr) {
    if (flat_) {
      for (size_t i = 0; i < size_; ++i)
        if (keys_[i] == nbr) return &states_[i];
      return nullptr;
    }
    size_t mask = keys_.size() - 1;
    for (size_t slot = hash(nbr) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == nbr) return &states_[slot];
      if (keys_[slot] == kEmpty) return nullptr;
    }
  }

  // nbr must be absent; duplicate insertion is a caller bug.
  void insert(vertex_id nbr, uint8_t state) {
    if (flat_) {
      for (size_t i = 0; i < size_; ++i)
        if (keys_[i] == nbr) throw ContractViolation("duplicate neighbor insert");
      if (size_ < kFlatCap) {
        keys_.push_back(nbr);
        states_.push_back(state);
        ++size_;
        return;
      }
      to_hash(kFlatCap * 4);
    } else if ((used_ + 1) * 4 > keys_.size() * 3) {
      rehash();
    }
    size_t mask = keys_.size() - 1;
    size_t target = SIZE_MAX;
    for (size_t slot = hash(nbr) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == nbr) throw ContractViolation("duplicate neighbor insert");
      if (keys_[slot] == kTomb && target == SIZE_MAX) target = slot;
      if (keys_[slot] == kEmpty) {
        if (target == SIZE_MAX) {
          target = slot;
          ++used_;
        }
        break;
      }
    }
    keys_[target] = nbr;
    states_[target] = state;
    ++size_;
  }

  bool erase(vertex_id nbr) {
    if (flat_) {
      for (size_t i = 0; i < size_; ++i) {
        if (keys_[i] == nbr) {
          keys_[i] = keys_[size_ - 1];
          states_[i] = states_[size_ - 1];
          keys_.pop_back();
          states_.pop_back();
          --size_;
          return true;
        }
      }
      return false;
    }
    size_t mask = keys_.size() - 1;
    for (size_t slot = hash(nbr) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == nbr) {
        keys_[slot] = kTomb;
        --size_;
        return true;
      }
      if (keys_[slot] == kEmpty) return false;
    }
  }

  size_t size() const { return size_; }

  template <class F>
  void for_each(F&& f) const {
    if (flat_) {
      for (size_t i = 0; i < size_; ++i) f(keys_[i], states_[i]);
      return;
    }
    for (size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != kEmpty && keys_[i] != kTomb) f(keys_[i], states_[i]);
  }

  template <class F>
  void for_each_mut(F&& f) {
    if (flat_) {
      for (size_t i = 0; i < size_; ++i) f(keys_[i], states_[i]);
      return;
    }
    for (size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != kEmpty && keys_[i] != kTomb) f(keys_[i], states_[i]);
  }

 private:
  static constexpr vertex_id kEmpty = 0xffffffffu;
  static constexpr vertex_id kTomb = 0xfffffffeu;

  static size_t hash(vertex_id v) {
    uint64_t x = v;
    x *= 0x9e3779b97f4a7c15ull;
    x ^= x >> 32;
    return static_cast<size_t>(x);
  }

  void to_hash(size_t cap) {
    std::vector<vertex_id> old_keys = std::move(keys_);
    std::vector<uint8_t> old_states = std::move(states_);
    keys_.assign(cap, kEmpty);
    states_.assign(cap, 0);
    flat_ = false;
    used_ = size_;
    size_t mask = cap - 1;
    for (size_t i = 0; i < old_keys.size(); ++i) {
      size_t slot = hash(old_keys[i]) & mask;
      while (keys_[slot] != kEmpty) slot = (slot + 1) & mask;
      keys_[slot] = old_keys[i];
      states_[slot] = old_states[i];
    }
  }

  // Rebuilds without tombstones; drops back to flat storage when the live
  // set has shrunk far enough.
  void rehash() {
    std::vector<vertex_id> live_keys;
    std::vector<uint8_t> live_states;
    live_keys.reserve(size_);
    live_states.reserve(size_);
    for (size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty && keys_[i] != kTomb) {
        live_keys.push_back(keys_[i]);
        live_states.push_back(states_[i]);
      }
    }
    if (live_keys.size() < kFlatCap / 2) {
      keys_ = std::move(live_keys);
      states_ = std::move(live_states);
      flat_ = true;
      used_ = 0;
      return;
    }
    size_t cap = 16;
    while (cap < live_keys.size() * 2) cap <<= 1;
    keys_.assign(cap, kEmpty);
    states_.assign(cap, 0);
    used_ = live_keys.size();
    size_t mask = cap - 1;
    for (size_t i = 0; i < live_keys.size(); ++i) {
      size_t slot = hash(live_keys[i]) & mask;
      while (keys_[slot] != kEmpty) slot = (slot + 1) & mask;
      keys_[slot] = live_keys[i];
      states_[slot] = live_states[i];
    }
  }

  bool flat_ = true;
  size_t size_ = 0;  // live entries
  size_t used_ = 0;  // hash mode: live + tombstones
  std::vector<vertex_id> keys_;
  std::vector<uint8_t> states_;
};

// Linear-probed map from canonical vertex-pair key to V, with tombstones.
// Valid pair keys never collide with the sentinels because their upper half
// is a strict minimum of the pair.
template <class V>
class PairMap {
 public:
  V* find(uint64_t key) {
    if (keys_.empty()) return nullptr;
    size_t mask = keys_.size() - 1;
    for (size_t slot = hash(key) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == key) return &values_[slot];
      if (keys_[slot] == kEmpty) return nullptr;
    }
  }
  const V* find(uint64_t key) const { return const_cast<PairMap*>(this)->find(key); }

  V& get_or_insert(uint64_t key) {
    if (keys_.empty() || (used_ + 1) * 4 > keys_.size() * 3) rehash();
    size_t mask = keys_.size() - 1;
    size_t target = SIZE_MAX;
    for (size_t slot = hash(key) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == key) return values_[slot];
      if (keys_[slot] == kTomb && target == SIZE_MAX) target = slot;
      if (keys_[slot] == kEmpty) {
        if (target == SIZE_MAX) {
          target = slot;
          ++used_;
        }
        break;
      }
    }
    keys_[target] = key;
    values_[target] = V{};
    ++size_;
    return values_[target];
  }

  bool erase(uint64_t key) {
    if (keys_.empty()) return false;
    size_t mask = keys_.size() - 1;
    for (size_t slot = hash(key) & mask;; slot = (slot + 1) & mask) {
      if (keys_[slot] == key) {
        keys_[slot] = kTomb;
        --size_;
        return true;
      }
      if (keys_[slot] == kEmpty) return false;
    }
  }

  size_t size() const { return size_; }
  void clear() {
    keys_.clear();
    values_.clear();
    size_ = used_ = 0;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != kEmpty && keys_[i] != kTomb) f(keys_[i], values_[i]);
  }

 private:
  static constexpr uint64_t kEmpty = ~uint64_t{0};
  static constexpr uint64_t kTomb = ~uint64_t{0} - 1;

  static size_t hash(uint64_t key) {
    key ^= key >> 33;
    key *= 0xff51afd7ed558ccdull;
    key ^= key >> 33;
    return static_cast<size_t>(key);
  }

  void rehash() {
    std::vector<uint64_t> old_keys = std::move(keys_);
    std::vector<V> old_values = std::move(values_);
    size_t cap = 16;
    while (cap < size_ * 2 + 16) cap <<= 1;
    keys_.assign(cap, kEmpty);
    values_.assign(cap, V{});
    used_ = size_;
    size_t mask = cap - 1;
    for (size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == kEmpty || old_keys[i] == kTomb) continue;
      size_t slot = hash(old_keys[i]) & mask;
      while (keys_[slot] != kEmpty) slot = (slot + 1) & mask;
      keys_[slot] = old_keys[i];
      values_[slot] = old_values[i];
    }
  }

  size_t size_ = 0;
  size_t used_ = 0;
  std::vector<uint64_t> keys_;
  std::vector<V> values_;
};

}  // namespace dyncliq
