#include "bouss/banded.hpp"

#include <algorithm>
#include <cmath>

namespace bouss {

void BandedMatrix::multiply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  y.assign(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kl_);
    const int hi = std::min(n_ - 1, i + ku_);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += data_[index(i, j)] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void BandedMatrix::multiply_transpose(const std::vector<double>& x,
                                      std::vector<double>& y) const {
  y.assign(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kl_);
    const int hi = std::min(n_ - 1, i + ku_);
    const double xi = x[static_cast<std::size_t>(i)];
    if (xi == 0.0) continue;
    for (int j = lo; j <= hi; ++j) y[static_cast<std::size_t>(j)] += data_[index(i, j)] * xi;
  }
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix t(n_, ku_, kl_);
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kl_);
    const int hi = std::min(n_ - 1, i + ku_);
    for (int j = lo; j <= hi; ++j) t.set(j, i, data_[index(i, j)]);
  }
  return t;
}

void BandedLU::factor(const BandedMatrix& a) {
  n_ = a.size();
  kl_ = a.kl();
  ku_ = a.ku();
  ldab_ = 2 * kl_ + ku_ + 1;
  work_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(ldab_), 0.0);
  pivots_.assign(static_cast<std::size_t>(n_), 0);

  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kl_);
    const int hi = std::min(n_ - 1, i + ku_);
    for (int j = lo; j <= hi; ++j) at(i, j) = a.get(i, j);
  }

  const int ku_fill = ku_ + kl_;
  for (int j = 0; j < n_; ++j) {
    const int last_row = std::min(n_ - 1, j + kl_);
    int piv = j;
    double piv_val = std::abs(at(j, j));
    for (int i = j + 1; i <= last_row; ++i) {
      const double v = std::abs(at(i, j));
      if (v > piv_val) {
        piv_val = v;
        piv = i;
      }
    }
    pivots_[static_cast<std::size_t>(j)] = piv;
    if (piv_val == 0.0)
      throw SingularMatrixError("BandedLU: zero pivot during factorization");
    if (piv != j) {
      const int last_col = std::min(n_ - 1, j + ku_fill);
      for (int k = j; k <= last_col; ++k) std::swap(at(j, k), at(piv, k));
    }
    const double d = at(j, j);
    for (int i = j + 1; i <= last_row; ++i) {
      const double l = at(i, j) / d;
      at(i, j) = l;
      if (l == 0.0) continue;
      const int last_col = std::min(n_ - 1, j + ku_fill);
      for (int k = j + 1; k <= last_col; ++k) at(i, k) -= l * at(j, k);
    }
  }
}

void BandedLU::solve(std::vector<double>& b) const {
  const int ku_fill = ku_ + kl_;
  for (int j = 0; j < n_; ++j) {
    const int piv = pivots_[static_cast<std::size_t>(j)];
    if (piv != j) std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(piv)]);
    const double bj = b[static_cast<std::size_t>(j)];
    if (bj == 0.0) continue;
    const int last_row = std::min(n_ - 1, j + kl_);
    for (int i = j + 1; i <= last_row; ++i) b[static_cast<std::size_t>(i)] -= at(i, j) * bj;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    const int last_col = std::min(n_ - 1, i + ku_fill);
    double acc = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k <= last_col; ++k) acc -= at(i, k) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = acc / at(i, i);
  }
}

}  // namespace bouss
