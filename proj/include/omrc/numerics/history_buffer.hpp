#pragma once

#include <cmath>

#include "omrc/numerics/types.hpp"

namespace omrc {

/// Fixed-step ring buffer of past vector samples.
///
/// Sample k sits at start_time + k * step. Lookups round to the nearest grid
/// point. Times before start_time resolve to the configured initial value as
/// long as they fall inside the initial-history window; anything older than
/// the retained samples is an OutOfRange error.
template <typename Scalar>
class HistoryBuffer {
 public:
  HistoryBuffer(Scalar step, Eigen::Index dim, Eigen::Index capacity, Scalar start_time,
                Scalar initial_span, VectorX<Scalar> initial_value)
      : step_(step),
        start_time_(start_time),
        initial_span_(initial_span),
        initial_(std::move(initial_value)),
        data_(dim, capacity) {
    if (!(step > Scalar(0))) throw_error(ErrorKind::kInvalidBounds, "history step must be > 0");
    if (capacity < 1 || dim < 1) throw_error(ErrorKind::kInvalidBounds, "empty history buffer");
    if (initial_span < Scalar(0)) throw_error(ErrorKind::kInvalidBounds, "negative initial span");
    require_shape(initial_, dim, 1, "history initial value");
    data_.setZero();
  }

  /// Buffer able to serve lookups up to `max_delay` in the past, with a zero
  /// initial history covering [start_time - max_delay, start_time).
  static HistoryBuffer for_delay(Scalar step, Eigen::Index dim, Scalar max_delay,
                                 Scalar start_time = Scalar(0)) {
    const auto lag = static_cast<Eigen::Index>(std::ceil(max_delay / step - Scalar(1e-9)));
    return HistoryBuffer(step, dim, lag + 2, start_time, max_delay, VectorX<Scalar>::Zero(dim));
  }

  void push(const VectorX<Scalar>& value) {
    require_shape(value, dim(), 1, "history sample");
    data_.col(count_ % capacity()) = value;
    ++count_;
  }

  VectorX<Scalar> sample(Scalar t) const { return sample_index(index_of(t)); }

  /// Lookup by grid index; negative indices address the initial history.
  VectorX<Scalar> sample_index(Eigen::Index k) const {
    if (k < 0) {
      if (static_cast<Scalar>(-k) * step_ > initial_span_ + step_ / Scalar(2)) {
        throw_error(ErrorKind::kOutOfRange, "lookup precedes the initial-history window");
      }
      return initial_;
    }
    if (k >= count_) throw_error(ErrorKind::kOutOfRange, "lookup is newer than the stored history");
    if (k < count_ - capacity()) {
      throw_error(ErrorKind::kOutOfRange, "lookup is older than the retained history");
    }
    return data_.col(k % capacity());
  }

  Eigen::Index index_of(Scalar t) const {
    return static_cast<Eigen::Index>(std::llround((t - start_time_) / step_));
  }

  Scalar step() const { return step_; }
  Scalar start_time() const { return start_time_; }
  Eigen::Index dim() const { return data_.rows(); }
  Eigen::Index capacity() const { return data_.cols(); }
  Eigen::Index count() const { return count_; }
  Scalar newest_time() const { return start_time_ + static_cast<Scalar>(count_ - 1) * step_; }

 private:
  Scalar step_;
  Scalar start_time_;
  Scalar initial_span_;
  VectorX<Scalar> initial_;
  MatrixX<Scalar> data_;
  Eigen::Index count_ = 0;
};

}  // namespace omrc
