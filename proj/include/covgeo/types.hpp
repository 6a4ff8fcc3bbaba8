#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace covgeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// N observations by n coordinates. `seed` is the RNG seed that produced
/// the rows, or 0 for external data.
struct SampleMatrix {
  Matrix values;
  std::uint64_t seed = 0;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index dim() const noexcept { return values.cols(); }
  Vector row(Eigen::Index k) const { return values.row(k).transpose(); }
};

/// Checks finiteness and shape; throws InvalidArgument.
void validate(const SampleMatrix& samples);

/// Fixed-order chunked summation. Terms are summed in blocks of `kChunk`
/// and the block sums are then combined pairwise, so the result depends only
/// on the order of the terms. Works for doubles and Eigen matrices.
template <typename T>
class ChunkedSum {
 public:
  static constexpr std::size_t kChunk = 4096;

  explicit ChunkedSum(T zero) : zero_(zero), current_(zero) {}

  void add(const T& value) {
    current_ += value;
    if (++in_chunk_ == kChunk) flush();
  }

  T total() const {
    std::vector<T> level = partials_;
    if (in_chunk_ > 0) level.push_back(current_);
    if (level.empty()) return zero_;
    while (level.size() > 1) {
      std::vector<T> next;
      next.reserve((level.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
      if (level.size() % 2 == 1) next.push_back(level.back());
      level = std::move(next);
    }
    return level.front();
  }

 private:
  void flush() {
    partials_.push_back(current_);
    current_ = zero_;
    in_chunk_ = 0;
  }

  T zero_;
  T current_;
  std::vector<T> partials_;
  std::size_t in_chunk_ = 0;
};

}  // namespace covgeo
