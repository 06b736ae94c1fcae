#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "propcheck/domain.hpp"

namespace propcheck::mini {

/// Anything that can put back a single removed value.
class ValueRestorer {
public:
  virtual void restore_value(Value v) = 0;

protected:
  ~ValueRestorer() = default;
};

/// Undo log. Each frame holds the entries recorded since its push_state(),
/// undone in reverse order by pop_state().
class Trail {
public:
  void push_state() { marks_.push_back(entries_.size()); }

  void pop_state() {
    if (marks_.empty()) throw ContractError("pop_state with no open frame");
    const std::size_t mark = marks_.back();
    marks_.pop_back();
    while (entries_.size() > mark) {
      Entry& e = entries_.back();
      if (e.owner) {
        e.owner->restore_value(e.value);
      } else {
        *e.slot = e.old;
      }
      entries_.pop_back();
    }
  }

  [[nodiscard]] std::size_t frames() const noexcept { return marks_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

  void record_removal(ValueRestorer& owner, Value v) { entries_.push_back(Entry{&owner, v, nullptr, 0}); }
  void record_int(std::int64_t& slot) { entries_.push_back(Entry{nullptr, 0, &slot, slot}); }

private:
  struct Entry {
    ValueRestorer* owner;
    Value value;
    std::int64_t* slot;
    std::int64_t old;
  };

  std::vector<Entry> entries_;
  std::vector<std::size_t> marks_;
};

/// Integer restored on backtrack. Must not move once created.
class RevInt {
public:
  RevInt(Trail& trail, std::int64_t initial) : trail_(&trail), value_(initial) {}
  RevInt(const RevInt&) = delete;
  RevInt& operator=(const RevInt&) = delete;

  [[nodiscard]] std::int64_t get() const noexcept { return value_; }
  operator std::int64_t() const noexcept { return value_; }

  void set(std::int64_t v) {
    if (v == value_) return;
    trail_->record_int(value_);
    value_ = v;
  }

  /// Overwrites without an undo entry; the old value is lost on backtrack.
  void set_untrailed(std::int64_t v) noexcept { value_ = v; }

private:
  Trail* trail_;
  std::int64_t value_;
};

}  // namespace propcheck::mini
