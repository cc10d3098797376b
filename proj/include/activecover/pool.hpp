#pragma once

// Label-free view of a dataset handed to learners. Coordinates are always
// readable; labels are not reachable at all (they arrive one by one through
// observe). Ground-truth support flags are readable only when fully known,
// and every read is counted so tests can prove that non-oracle learners
// never touch them. The viewed Dataset must outlive the Pool.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "activecover/distribution.hpp"
#include "activecover/errors.hpp"

namespace activecover {

class Pool {
 public:
  explicit Pool(const Dataset& data)
      : points_(data.points.data()),
        flags_(data.in_support.data()),
        n_(data.size()),
        dim_(data.dim),
        support_known_(data.support_known()) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {points_ + i * dim_, dim_};
  }

  double distance(std::size_t i, std::size_t j) const noexcept {
    const double* a = points_ + i * dim_;
    const double* b = points_ + j * dim_;
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double diff = a[d] - b[d];
      d2 += diff * diff;
    }
    return std::sqrt(d2);
  }

  bool support_known() const noexcept { return support_known_; }

  bool in_support(std::size_t i) const {
    if (!support_known_) {
      throw CapabilityError("Pool: in_support flags are not known for this dataset");
    }
    ++support_reads_;
    return flags_[i] == SupportFlag::kYes;
  }

  // Number of in_support reads so far; isolation tests assert this stays 0
  // for every non-oracle learner.
  std::uint64_t support_reads() const noexcept { return support_reads_; }

 private:
  const double* points_;
  const SupportFlag* flags_;
  std::size_t n_;
  std::size_t dim_;
  bool support_known_;
  mutable std::uint64_t support_reads_ = 0;
};

}  // namespace activecover
