#pragma once

#include <cstddef>
#include <deque>
#include <stdexcept>

namespace fhigs {

/// Finite-memory signal history, newest sample last. Single-owner.
class HistoryBuffer {
public:
    explicit HistoryBuffer(double dt, std::size_t capacity = kDefaultCapacity)
        : dt_(dt), capacity_(capacity) {
        if (dt <= 0.0) throw std::invalid_argument("HistoryBuffer: dt must be > 0");
        if (capacity == 0) throw std::invalid_argument("HistoryBuffer: capacity must be > 0");
    }

    static constexpr std::size_t kDefaultCapacity = 1u << 16;

    void push(double v) {
        if (samples_.size() == capacity_) samples_.pop_front();
        samples_.push_back(v);
    }

    void clear() { samples_.clear(); }

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double dt() const { return dt_; }
    std::size_t capacity() const { return capacity_; }
    double newest() const { return samples_.back(); }

    /// j samples back from the newest (j=0 is the newest).
    double back(std::size_t j) const { return samples_[samples_.size() - 1 - j]; }

private:
    double dt_;
    std::size_t capacity_;
    std::deque<double> samples_;
};

}  // namespace fhigs
