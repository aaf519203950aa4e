#include "scp/event_scheduler.hpp"

#include <cmath>

#include "scp/rng.hpp"

namespace scp {
namespace {

// Expected number of arrivals per window.
constexpr double kArrivalsPerWindow = 4.0;

}  // namespace

EventScheduler::EventScheduler(std::shared_ptr<const Geometry> geometry,
                               const ModelParams& params, std::uint64_t seed)
    : geometry_(std::move(geometry)),
      seed_(seed),
      degree_(geometry_->degree()),
      slots_(1 + 4 * degree_) {
  slot_rate_.assign(static_cast<std::size_t>(slots_), 0.0);
  slot_rate_[0] = 1.0;
  for (int kind = 0; kind < 4; ++kind) {
    const int type = kind / 2 + 1;
    const bool fertile = kind % 2 == 0;
    double rate = 0.0;
    if (!params.infinite(type)) {
      rate = params.lambda(type) * (fertile ? params.p(type) : params.q(type)) / degree_;
    }
    for (int e = 0; e < degree_; ++e) slot_rate_[1 + kind * degree_ + e] = rate;
  }
  slot_width_.resize(slot_rate_.size());
  for (std::size_t s = 0; s < slot_rate_.size(); ++s) {
    slot_width_[s] = slot_rate_[s] > 0 ? kArrivalsPerWindow / slot_rate_[s] : 0.0;
  }
  clocks_.resize(geometry_->size() * static_cast<std::size_t>(slots_));
}

EventRecord EventScheduler::describe(std::size_t clock, double time) const noexcept {
  const SiteIndex x = clock / static_cast<std::size_t>(slots_);
  const int slot = static_cast<int>(clock % static_cast<std::size_t>(slots_));
  if (slot == 0) return {time, EventKind::death, x, x};
  const int kind = (slot - 1) / degree_;
  const int edge = (slot - 1) % degree_;
  return {time, static_cast<EventKind>(kind), x, geometry_->neighbor(x, edge)};
}

void EventScheduler::advance(std::size_t clock, Clock& c, double after) const {
  const std::size_t slot = clock % static_cast<std::size_t>(slots_);
  const double rate = slot_rate_[slot];
  const double width = slot_width_[slot];
  for (;;) {
    CounterRng rng(seed_, stream_key(StreamDomain::clock, clock, static_cast<std::uint64_t>(c.window)),
                   c.counter);
    ++c.counter;
    const double t = c.next + rng.exponential(rate);
    const double end = static_cast<double>(c.window + 1) * width;
    if (t < end) {
      c.next = t;
      if (t > after) return;
    } else {
      // A window start is not an arrival.
      ++c.window;
      c.counter = 0;
      c.next = static_cast<double>(c.window) * width;
    }
  }
}

void EventScheduler::activate(std::size_t clock, double now) {
  Clock& c = clocks_[clock];
  const double width = slot_width_[clock % static_cast<std::size_t>(slots_)];
  c.window = static_cast<std::int64_t>(std::floor(now / width));
  c.counter = 0;
  c.next = static_cast<double>(c.window) * width;
  advance(clock, c, now);
  c.heap_pos = static_cast<std::int32_t>(heap_.size());
  heap_.push_back(clock);
  sift_up(heap_.size() - 1);
}

void EventScheduler::deactivate(std::size_t clock) {
  heap_remove(static_cast<std::size_t>(clocks_[clock].heap_pos));
}

void EventScheduler::set_activity(SiteIndex x, Activity a, double now) {
  const std::size_t base = x * static_cast<std::size_t>(slots_);
  for (int slot = 0; slot < slots_; ++slot) {
    const std::size_t clock = base + static_cast<std::size_t>(slot);
    if (slot_rate_[slot] <= 0) continue;
    bool want = false;
    if (slot == 0) {
      want = a.occupied;
    } else {
      const int type = (slot - 1) / degree_ / 2 + 1;
      want = type == 1 ? a.fertile1 : a.fertile2;
    }
    const bool active = clocks_[clock].heap_pos >= 0;
    if (want && !active) {
      activate(clock, now);
    } else if (!want && active) {
      deactivate(clock);
    }
  }
}

double EventScheduler::peek_time() const noexcept {
  return heap_.empty() ? std::numeric_limits<double>::infinity() : clocks_[heap_.front()].next;
}

std::optional<EventRecord> EventScheduler::pop(double horizon) {
  if (heap_.empty()) return std::nullopt;
  const std::size_t clock = heap_.front();
  Clock& c = clocks_[clock];
  if (c.next > horizon) return std::nullopt;
  const EventRecord ev = describe(clock, c.next);
  advance(clock, c, c.next);
  sift_down(0);
  ++rings_;
  return ev;
}

std::vector<double> EventScheduler::arrivals(std::size_t clock, double t0, double t1) const {
  std::vector<double> out;
  const std::size_t slot = clock % static_cast<std::size_t>(slots_);
  if (slot_rate_[slot] <= 0) return out;
  Clock c;
  c.window = static_cast<std::int64_t>(std::floor(t0 / slot_width_[slot]));
  c.next = static_cast<double>(c.window) * slot_width_[slot];
  // Include an arrival that lands exactly on t0.
  advance(clock, c, std::nextafter(t0, -std::numeric_limits<double>::infinity()));
  while (c.next < t1) {
    out.push_back(c.next);
    advance(clock, c, c.next);
  }
  return out;
}

void EventScheduler::sift_up(std::size_t pos) {
  const std::size_t clock = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!less(clock, heap_[parent])) break;
    heap_[pos] = heap_[parent];
    clocks_[heap_[pos]].heap_pos = static_cast<std::int32_t>(pos);
    pos = parent;
  }
  heap_[pos] = clock;
  clocks_[clock].heap_pos = static_cast<std::int32_t>(pos);
}

void EventScheduler::sift_down(std::size_t pos) {
  const std::size_t n = heap_.size();
  const std::size_t clock = heap_[pos];
  while (true) {
    std::size_t child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
    if (!less(heap_[child], clock)) break;
    heap_[pos] = heap_[child];
    clocks_[heap_[pos]].heap_pos = static_cast<std::int32_t>(pos);
    pos = child;
  }
  heap_[pos] = clock;
  clocks_[clock].heap_pos = static_cast<std::int32_t>(pos);
}

void EventScheduler::heap_remove(std::size_t pos) {
  const std::size_t removed = heap_[pos];
  clocks_[removed].heap_pos = -1;
  const std::size_t last = heap_.back();
  heap_.pop_back();
  if (pos == heap_.size()) return;
  heap_[pos] = last;
  clocks_[last].heap_pos = static_cast<std::int32_t>(pos);
  if (pos > 0 && less(last, heap_[(pos - 1) / 2])) {
    sift_up(pos);
  } else {
    sift_down(pos);
  }
}

}  // namespace scp
