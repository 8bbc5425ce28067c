#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <vector>

namespace gvtraj::solver {

// Symmetric block matrix with uniform square blocks; only the lower
// triangle (block-wise, i >= j) is stored. The sparsity pattern is declared
// up front (reserve + finalize) so numeric refills never allocate.
class BlockSparseSym {
 public:
  BlockSparseSym(int nblocks, int bdim);

  int nblocks() const { return nblocks_; }
  int bdim() const { return bdim_; }

  // declare that lower-triangular block (i, j) exists; i >= j
  void reserve(int i, int j);
  void finalize();  // sort/dedupe patterns and allocate block storage

  void set_zero();
  bool has(int i, int j) const;
  Eigen::MatrixXd& block(int i, int j);
  const Eigen::MatrixXd& block(int i, int j) const;
  void add(int i, int j, const Eigen::MatrixXd& m);

  // rows i >= j present in column j (sorted ascending, includes diagonal)
  const std::vector<int>& col_rows(int j) const { return rows_[j]; }

  Eigen::MatrixXd to_dense() const;  // for tests / small problems

 private:
  int find(int i, int j) const;  // index into vals_[j], -1 if absent

  int nblocks_, bdim_;
  bool finalized_ = false;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<Eigen::MatrixXd>> vals_;
};

// Block Cholesky A = L L^T on the fill-extended pattern of A, with
// triangular solves, log-determinant, and the Takahashi-style partial
// inverse (blocks of A^-1 on the filled pattern -- exactly the marginal
// covariance blocks the smoother needs).
class BlockCholesky {
 public:
  // symbolic phase: fill pattern from the block structure of A
  explicit BlockCholesky(const BlockSparseSym& A);

  // numeric phase; reusable for any matrix with the same pattern.
  // Throws NotPositiveDefinite if a pivot block fails.
  void factorize(const BlockSparseSym& A);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double logdet() const;

  // A^-1 restricted to the filled pattern (lower blocks + diagonal)
  BlockSparseSym partial_inverse() const;

  // rows strictly below the diagonal in filled column j
  const std::vector<int>& fill_rows(int j) const { return struct_[j]; }

 private:
  int n_, bd_;
  std::vector<std::vector<int>> struct_;
  BlockSparseSym L_;
  bool numeric_ok_ = false;
};

}  // namespace gvtraj::solver
