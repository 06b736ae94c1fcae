#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "propcheck/domain.hpp"
#include "propcheck/minisolver/trail.hpp"

namespace propcheck::mini {

/// Raised when a domain would become empty. Callers at the filter boundary
/// translate it to an Inconsistent outcome.
class Inconsistency : public std::exception {
public:
  [[nodiscard]] const char* what() const noexcept override { return "inconsistency"; }
};

class Solver;
class Propagator;

/// Integer variable whose removals are recorded on the solver's trail, one
/// undo entry per removed value.
class TrailedVar final : public ValueRestorer {
public:
  TrailedVar(Solver& solver, std::size_t id, const Domain& initial);
  TrailedVar(const TrailedVar&) = delete;
  TrailedVar& operator=(const TrailedVar&) = delete;

  [[nodiscard]] std::size_t id() const noexcept { return id_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] Value min() const noexcept { return min_; }
  [[nodiscard]] Value max() const noexcept { return max_; }
  [[nodiscard]] bool is_fixed() const noexcept { return size_ == 1; }
  [[nodiscard]] Value value() const {
    if (!is_fixed()) throw ContractError("value() of an unfixed variable");
    return min_;
  }
  [[nodiscard]] bool contains(std::int64_t v) const noexcept {
    return v >= offset_ && v < offset_ + static_cast<std::int64_t>(present_.size()) &&
           present_[static_cast<std::size_t>(v - offset_)];
  }
  [[nodiscard]] Domain domain() const {
    std::vector<Value> values;
    values.reserve(size_);
    for (std::int64_t v = min_; v <= max_; ++v) {
      if (contains(v)) values.push_back(static_cast<Value>(v));
    }
    return Domain(std::move(values));
  }

  void remove_value(std::int64_t v);
  /// Removes every value strictly below `bound`.
  void remove_below(std::int64_t bound);
  /// Removes every value strictly above `bound`.
  void remove_above(std::int64_t bound);
  void assign(std::int64_t v);

  void watch(Propagator& p) { watchers_.push_back(&p); }

  void restore_value(Value v) override;

private:
  void notify();

  Solver& solver_;
  std::size_t id_;
  std::int64_t offset_;
  std::vector<std::uint8_t> present_;
  std::size_t size_;
  Value min_;
  Value max_;
  std::vector<Propagator*> watchers_;
};

class Propagator {
public:
  virtual ~Propagator() = default;

  /// Removes values from the scope toward this propagator's fixpoint.
  /// Throws Inconsistency (directly or through a variable) on failure.
  virtual void propagate() = 0;
  [[nodiscard]] virtual std::span<TrailedVar* const> scope() const = 0;
  [[nodiscard]] virtual std::string_view name() const = 0;
  /// For documentation and reports only.
  [[nodiscard]] virtual std::string_view declared_consistency() const = 0;

private:
  friend class Solver;
  bool queued_ = false;
};

class Solver {
public:
  enum class QueueOrder { Fifo, Lifo };

  Solver() = default;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  TrailedVar& make_var(const Domain& initial) {
    if (initial.empty()) throw ContractError("cannot create a variable with an empty domain");
    return vars_.emplace_back(*this, vars_.size(), initial);
  }

  [[nodiscard]] std::size_t num_vars() const noexcept { return vars_.size(); }
  [[nodiscard]] TrailedVar& var(std::size_t i) { return vars_.at(i); }
  [[nodiscard]] const TrailedVar& var(std::size_t i) const { return vars_.at(i); }

  /// Registers the propagator on its scope and runs the fixpoint.
  Propagator& post(std::unique_ptr<Propagator> p) {
    Propagator& ref = *props_.emplace_back(std::move(p));
    for (TrailedVar* x : ref.scope()) x->watch(ref);
    schedule(ref);
    fixpoint();
    return ref;
  }

  void schedule(Propagator& p) {
    if (p.queued_) return;
    p.queued_ = true;
    queue_.push_back(&p);
  }

  void schedule_all() {
    for (auto& p : props_) schedule(*p);
  }

  /// Runs queued propagators until none is left. A propagator is re-queued
  /// whenever a variable of its scope changes.
  void fixpoint() {
    try {
      while (!queue_.empty()) {
        Propagator* p;
        if (order_ == QueueOrder::Fifo) {
          p = queue_.front();
          queue_.pop_front();
        } else {
          p = queue_.back();
          queue_.pop_back();
        }
        p->queued_ = false;
        p->propagate();
      }
    } catch (const Inconsistency&) {
      for (Propagator* q : queue_) q->queued_ = false;
      queue_.clear();
      throw;
    }
  }

  void push_state() { trail_.push_state(); }
  void pop_state() { trail_.pop_state(); }
  [[nodiscard]] std::size_t frames() const noexcept { return trail_.frames(); }

  [[nodiscard]] Trail& trail() noexcept { return trail_; }
  void set_queue_order(QueueOrder order) noexcept { order_ = order; }

  [[nodiscard]] Instance domains() const {
    std::vector<Domain> out;
    out.reserve(vars_.size());
    for (const TrailedVar& x : vars_) out.push_back(x.domain());
    return Instance(std::move(out));
  }

private:
  Trail trail_;
  std::deque<TrailedVar> vars_;
  std::vector<std::unique_ptr<Propagator>> props_;
  std::deque<Propagator*> queue_;
  QueueOrder order_ = QueueOrder::Fifo;
};

inline TrailedVar::TrailedVar(Solver& solver, std::size_t id, const Domain& initial)
    : solver_(solver),
      id_(id),
      offset_(initial.min()),
      present_(static_cast<std::size_t>(std::int64_t{initial.max()} - initial.min() + 1), 0),
      size_(initial.size()),
      min_(initial.min()),
      max_(initial.max()) {
  for (Value v : initial) present_[static_cast<std::size_t>(v - offset_)] = 1;
}

inline void TrailedVar::remove_value(std::int64_t v) {
  if (!contains(v)) return;
  if (size_ == 1) throw Inconsistency{};
  present_[static_cast<std::size_t>(v - offset_)] = 0;
  --size_;
  solver_.trail().record_removal(*this, static_cast<Value>(v));
  if (v == min_) {
    while (!contains(min_)) ++min_;
  } else if (v == max_) {
    while (!contains(max_)) --max_;
  }
  notify();
}

inline void TrailedVar::remove_below(std::int64_t bound) {
  if (bound > max_) throw Inconsistency{};
  while (min_ < bound) remove_value(min_);
}

inline void TrailedVar::remove_above(std::int64_t bound) {
  if (bound < min_) throw Inconsistency{};
  while (max_ > bound) remove_value(max_);
}

inline void TrailedVar::assign(std::int64_t v) {
  if (!contains(v)) throw Inconsistency{};
  while (min_ < v) remove_value(min_);
  while (max_ > v) remove_value(max_);
}

inline void TrailedVar::restore_value(Value v) {
  present_[static_cast<std::size_t>(std::int64_t{v} - offset_)] = 1;
  ++size_;
  if (v < min_) min_ = v;
  if (v > max_) max_ = v;
}

inline void TrailedVar::notify() {
  for (Propagator* p : watchers_) solver_.schedule(*p);
}

}  // namespace propcheck::mini
