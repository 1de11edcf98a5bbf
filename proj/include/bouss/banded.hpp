#ifndef BOUSS_BANDED_HPP
#define BOUSS_BANDED_HPP

#include <vector>

#include "bouss/errors.hpp"

namespace bouss {

/// General banded matrix with kl subdiagonals and ku superdiagonals, stored
/// row-wise: entry (i, j) lives at data[i * (kl + ku + 1) + (j - i + kl)].
class BandedMatrix {
public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku),
        data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(kl + ku + 1),
              0.0) {}

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const {
    return j >= i - kl_ && j <= i + ku_ && j >= 0 && j < n_;
  }

  double get(int i, int j) const {
    return in_band(i, j) ? data_[index(i, j)] : 0.0;
  }

  void set(int i, int j, double v) { data_[index(i, j)] = v; }
  void add(int i, int j, double v) { data_[index(i, j)] += v; }
  void clear() { std::fill(data_.begin(), data_.end(), 0.0); }

  /// y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  /// y = A^T x
  void multiply_transpose(const std::vector<double>& x,
                          std::vector<double>& y) const;

  BandedMatrix transpose() const;

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(kl_ + ku_ + 1) +
           static_cast<std::size_t>(j - i + kl_);
  }

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting of a banded matrix (the usual
/// band-storage scheme with kl extra rows of fill). Reusable across solves.
class BandedLU {
public:
  BandedLU() = default;
  explicit BandedLU(const BandedMatrix& a) { factor(a); }

  /// Throws SingularMatrixError on a zero pivot.
  void factor(const BandedMatrix& a);

  /// Solve A x = b in place.
  void solve(std::vector<double>& b) const;

private:
  double& at(int i, int j) { return work_[index(i, j)]; }
  double at(int i, int j) const { return work_[index(i, j)]; }
  std::size_t index(int i, int j) const {
    // Column-major band layout with room for fill: entry (i, j) at
    // work_[j * ldab + kl + ku + i - j].
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_) +
           static_cast<std::size_t>(kl_ + ku_ + i - j);
  }

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  int ldab_ = 0;
  std::vector<double> work_;
  std::vector<int> pivots_;
};

}  // namespace bouss

#endif  // BOUSS_BANDED_HPP
