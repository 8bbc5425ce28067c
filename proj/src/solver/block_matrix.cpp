#include "gvtraj/solver/block_matrix.hpp"

#include <algorithm>
#include <set>

#include "gvtraj/core/error.hpp"

namespace gvtraj::solver {

BlockSparseSym::BlockSparseSym(int nblocks, int bdim)
    : nblocks_(nblocks), bdim_(bdim), rows_(nblocks), vals_(nblocks) {}

void BlockSparseSym::reserve(int i, int j) {
  if (i < j || j < 0 || i >= nblocks_) {
    throw FactorizationFailure("BlockSparseSym::reserve: bad block index");
  }
  rows_[j].push_back(i);
}

void BlockSparseSym::finalize() {
  for (int j = 0; j < nblocks_; ++j) {
    auto& r = rows_[j];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    vals_[j].assign(r.size(), Eigen::MatrixXd::Zero(bdim_, bdim_));
  }
  finalized_ = true;
}

void BlockSparseSym::set_zero() {
  for (auto& col : vals_) {
    for (auto& m : col) m.setZero();
  }
}

int BlockSparseSym::find(int i, int j) const {
  const auto& r = rows_[j];
  auto it = std::lower_bound(r.begin(), r.end(), i);
  if (it == r.end() || *it != i) return -1;
  return static_cast<int>(it - r.begin());
}

bool BlockSparseSym::has(int i, int j) const {
  if (i < j) std::swap(i, j);
  return find(i, j) >= 0;
}

Eigen::MatrixXd& BlockSparseSym::block(int i, int j) {
  const int k = find(i, j);
  if (k < 0) throw FactorizationFailure("BlockSparseSym::block: not present");
  return vals_[j][k];
}

const Eigen::MatrixXd& BlockSparseSym::block(int i, int j) const {
  const int k = find(i, j);
  if (k < 0) throw FactorizationFailure("BlockSparseSym::block: not present");
  return vals_[j][k];
}

void BlockSparseSym::add(int i, int j, const Eigen::MatrixXd& m) {
  block(i, j) += m;
}

Eigen::MatrixXd BlockSparseSym::to_dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nblocks_ * bdim_, nblocks_ * bdim_);
  for (int j = 0; j < nblocks_; ++j) {
    for (size_t k = 0; k < rows_[j].size(); ++k) {
      const int i = rows_[j][k];
      D.block(i * bdim_, j * bdim_, bdim_, bdim_) = vals_[j][k];
      if (i != j) {
        D.block(j * bdim_, i * bdim_, bdim_, bdim_) = vals_[j][k].transpose();
      }
    }
  }
  return D;
}

BlockCholesky::BlockCholesky(const BlockSparseSym& A)
    : n_(A.nblocks()), bd_(A.bdim()), struct_(n_), L_(n_, bd_) {
  // strictly-below-diagonal structure of A
  std::vector<std::set<int>> s(n_);
  for (int j = 0; j < n_; ++j) {
    for (int i : A.col_rows(j)) {
      if (i > j) s[j].insert(i);
    }
  }
  // fill: eliminating column j joins its remaining structure at the parent
  // (smallest below-diagonal row), which inherits everything else
  for (int j = 0; j < n_; ++j) {
    if (s[j].empty()) continue;
    const int parent = *s[j].begin();
    for (auto it = std::next(s[j].begin()); it != s[j].end(); ++it) {
      s[parent].insert(*it);
    }
  }
  for (int j = 0; j < n_; ++j) {
    struct_[j].assign(s[j].begin(), s[j].end());
    L_.reserve(j, j);
    for (int i : struct_[j]) L_.reserve(i, j);
  }
  L_.finalize();
}

void BlockCholesky::factorize(const BlockSparseSym& A) {
  numeric_ok_ = false;
  // scatter A onto the filled pattern (fill blocks start at zero)
  L_.set_zero();
  for (int j = 0; j < n_; ++j) {
    for (int i : A.col_rows(j)) L_.block(i, j) = A.block(i, j);
  }
  // right-looking block factorization
  for (int j = 0; j < n_; ++j) {
    Eigen::LLT<Eigen::MatrixXd> llt(L_.block(j, j));
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("block Cholesky pivot " + std::to_string(j) +
                                " is not positive definite");
    }
    const Eigen::MatrixXd Ljj = llt.matrixL();
    L_.block(j, j) = Ljj;
    for (int i : struct_[j]) {
      // L_ij = A_ij L_jj^-T
      const Eigen::MatrixXd rhs = L_.block(i, j).transpose();
      L_.block(i, j) =
          Ljj.triangularView<Eigen::Lower>().solve(rhs).transpose();
    }
    for (size_t a = 0; a < struct_[j].size(); ++a) {
      const int r = struct_[j][a];
      const Eigen::MatrixXd& Lrj = L_.block(r, j);
      for (size_t b = 0; b <= a; ++b) {
        const int c = struct_[j][b];
        L_.block(r, c).noalias() -= Lrj * L_.block(c, j).transpose();
      }
    }
  }
  numeric_ok_ = true;
}

Eigen::VectorXd BlockCholesky::solve(const Eigen::VectorXd& rhs) const {
  if (!numeric_ok_) throw FactorizationFailure("solve before factorize");
  Eigen::VectorXd x = rhs;
  // forward: L y = b
  for (int j = 0; j < n_; ++j) {
    auto xj = x.segment(j * bd_, bd_);
    xj = L_.block(j, j)
             .triangularView<Eigen::Lower>()
             .solve(xj.eval());
    for (int i : struct_[j]) {
      x.segment(i * bd_, bd_).noalias() -= L_.block(i, j) * xj;
    }
  }
  // backward: L^T x = y
  for (int j = n_ - 1; j >= 0; --j) {
    auto xj = x.segment(j * bd_, bd_);
    for (int i : struct_[j]) {
      xj.noalias() -= L_.block(i, j).transpose() * x.segment(i * bd_, bd_);
    }
    xj = L_.block(j, j)
             .transpose()
             .triangularView<Eigen::Upper>()
             .solve(xj.eval());
  }
  return x;
}

double BlockCholesky::logdet() const {
  if (!numeric_ok_) throw FactorizationFailure("logdet before factorize");
  double acc = 0.0;
  for (int j = 0; j < n_; ++j) {
    acc += L_.block(j, j).diagonal().array().log().sum();
  }
  return 2.0 * acc;
}

BlockSparseSym BlockCholesky::partial_inverse() const {
  if (!numeric_ok_) {
    throw FactorizationFailure("partial_inverse before factorize");
  }
  BlockSparseSym S(n_, bd_);
  for (int j = 0; j < n_; ++j) {
    S.reserve(j, j);
    for (int i : struct_[j]) S.reserve(i, j);
  }
  S.finalize();

  // S(i,k) fetch helper over the filled (symmetric) pattern
  auto sblock = [&](int i, int k) -> Eigen::MatrixXd {
    if (i >= k) return S.block(i, k);
    return S.block(k, i).transpose();
  };

  for (int j = n_ - 1; j >= 0; --j) {
    const Eigen::MatrixXd Ljj = L_.block(j, j);
    auto lower = Ljj.triangularView<Eigen::Lower>();
    // off-diagonals: S_ij = -(sum_k S_ik L_kj) L_jj^-1, k over struct(j)
    for (auto it = struct_[j].rbegin(); it != struct_[j].rend(); ++it) {
      const int i = *it;
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(bd_, bd_);
      for (int k : struct_[j]) {
        acc.noalias() += sblock(i, k) * L_.block(k, j);
      }
      // right-divide by L_jj: X = -acc L_jj^-1  <=>  L_jj^T X^T = -acc^T
      S.block(i, j) =
          lower.transpose().solve(Eigen::MatrixXd(-acc.transpose()))
              .transpose();
    }
    // diagonal: S_jj = (L_jj^-T - sum_k S_jk L_kj) L_jj^-1
    Eigen::MatrixXd acc =
        lower.transpose().solve(Eigen::MatrixXd::Identity(bd_, bd_));
    for (int k : struct_[j]) {
      acc.noalias() -= S.block(k, j).transpose() * L_.block(k, j);
    }
    Eigen::MatrixXd Sjj =
        lower.transpose().solve(Eigen::MatrixXd(acc.transpose())).transpose();
    S.block(j, j) = 0.5 * (Sjj + Sjj.transpose());
  }
  return S;
}

}  // namespace gvtraj::solver
