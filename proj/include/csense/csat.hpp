#pragma once

// Online duty-cycle controller. Streaming samples fill a width-w buffer;
// completed chunks are classified and a class transition is committed only
// after the same novel class is returned by two consecutive inferences.
// Online chunks never overlap, so the two debounce votes come from disjoint
// windows.

#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace csense::csat {

// 0 APs -> full occupancy, 1 AP -> 50%, 2 or more -> 33%.
inline double duty_map(int ap_count) {
  if (ap_count < 0) throw std::invalid_argument("duty_map: negative ap count");
  if (ap_count == 0) return 1.00;
  if (ap_count == 1) return 0.50;
  return 0.33;
}

// latency = chunk collection time + model inference + pipeline overhead
inline double detection_latency(std::size_t width, double sample_rate,
                                double inference_s, double overhead_s = 0.0) {
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("detection_latency: sample rate must be > 0");
  return static_cast<double>(width) / sample_rate + inference_s + overhead_s;
}

struct CsatState {
  std::vector<double> buffer;      // most recent raw samples, capacity w
  int confirmed = 1;               // current AP-count estimate
  int pending_class = -1;          // last differing prediction
  int pending_count = 0;           // consecutive agreement counter, 0 or 1
  double duty_cycle = 0.50;
  std::uint64_t samples_seen = 0;
  std::uint64_t samples_dropped = 0;
  std::uint64_t chunks_emitted = 0;
};

struct TransitionEvent {
  std::uint64_t chunk_index = 0;
  int from = 0;
  int to = 0;
  double duty_cycle = 0.0;
};

class CsatController {
 public:
  CsatController(std::size_t width, double sample_rate, int initial_ap_count = 1)
      : width_(width), sample_rate_(sample_rate) {
    if (width < 1) throw std::invalid_argument("csat: width must be >= 1");
    if (!(sample_rate > 0.0))
      throw std::invalid_argument("csat: sample rate must be positive");
    state_.confirmed = initial_ap_count;
    state_.duty_cycle = duty_map(initial_ap_count);
    state_.buffer.reserve(width);
  }

  // Appends one sample; returns the completed chunk once w samples arrived.
  // Non-finite samples are dropped and counted, never fatal.
  std::optional<std::vector<double>> ingest_sample(double sample) {
    if (!std::isfinite(sample)) {
      ++state_.samples_dropped;
      return std::nullopt;
    }
    state_.buffer.push_back(sample);
    ++state_.samples_seen;
    if (state_.buffer.size() < width_) return std::nullopt;
    std::vector<double> chunk;
    chunk.swap(state_.buffer);
    state_.buffer.reserve(width_);
    ++state_.chunks_emitted;
    return chunk;
  }

  // Applies the two-consecutive-inferences debounce to one prediction.
  std::optional<TransitionEvent> step_inference(int predicted_ap_count) {
    auto& s = state_;
    if (predicted_ap_count == s.confirmed) {
      s.pending_class = -1;
      s.pending_count = 0;
      return std::nullopt;
    }
    if (s.pending_count == 1 && predicted_ap_count == s.pending_class) {
      TransitionEvent ev;
      ev.chunk_index = s.chunks_emitted;
      ev.from = s.confirmed;
      ev.to = predicted_ap_count;
      s.confirmed = predicted_ap_count;
      s.duty_cycle = duty_map(s.confirmed);
      ev.duty_cycle = s.duty_cycle;
      s.pending_class = -1;
      s.pending_count = 0;
      return ev;
    }
    s.pending_class = predicted_ap_count;
    s.pending_count = 1;
    return std::nullopt;
  }

  const CsatState& state() const { return state_; }
  std::size_t width() const { return width_; }
  double sample_rate() const { return sample_rate_; }
  double time_s() const {
    return static_cast<double>(state_.samples_seen) / sample_rate_;
  }

 private:
  std::size_t width_;
  double sample_rate_;
  CsatState state_;
};

// Ordered, bounded, blocking queue connecting the ingest and inference
// contexts; a full queue back-pressures the producer instead of dropping.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("queue: capacity >= 1");
  }

  void push(T item) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
    if (closed_) throw std::runtime_error("queue: push after close");
    items_.push_back(std::move(item));
    not_empty_.notify_one();
  }

  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;  // closed and drained
    T item = std::move(items_.front());
    items_.pop_front();
    not_full_.notify_one();
    return item;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_full_, not_empty_;
  std::deque<T> items_;
  bool closed_ = false;
};

}  // namespace csense::csat
