#pragma once

#include <cstddef>
#include <vector>

#include "simpleds/errors.hpp"
#include "simpleds/random.hpp"

namespace simpleds {

struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
  // Actions the bootstrap max ranges over; empty only for terminal steps.
  std::vector<int> valid_next;

  bool operator==(const Experience&) const = default;
};

// Fixed-capacity FIFO ring of experiences.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ContractError("replay buffer capacity must be positive");
    items_.reserve(capacity);
  }

  void push(Experience e) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(e));
    } else {
      items_[cursor_] = std::move(e);
    }
    cursor_ = (cursor_ + 1) % capacity_;
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }

  // i = 0 is the oldest stored experience.
  const Experience& at(std::size_t i) const {
    if (i >= items_.size()) throw ContractError("replay buffer index out of range");
    if (items_.size() < capacity_) return items_[i];
    return items_[(cursor_ + i) % capacity_];
  }

  // Storage slot drawn uniformly; callers treat the index as opaque.
  std::size_t sample_index(Rng& rng) const {
    if (items_.empty()) throw ContractError("cannot sample from an empty replay buffer");
    return uniform_index(rng, items_.size());
  }
  const Experience& slot(std::size_t storage_index) const { return items_.at(storage_index); }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Experience> items_;
};

}  // namespace simpleds
