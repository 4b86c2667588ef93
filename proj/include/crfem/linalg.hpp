#pragma once

/// \file linalg.hpp
/// \brief Compressed sparse row matrices, ILU(0) and restarted GMRES.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace crfem {

/// Compressed sparse row matrix with sorted, unique column indices per row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  /// Entry (i,j), zero if outside the pattern.
  double at(std::size_t i, std::size_t j) const;
  /// Index into values/col_idx of (i,j), or -1 if not stored.
  std::ptrdiff_t find(std::size_t i, std::size_t j) const;

  static CsrMatrix identity(std::size_t n);
};

/// Coordinate-format accumulator. Duplicates are summed in insertion order
/// after a stable sort, so the result does not depend on how entries were
/// interleaved between rows.
class TripletBuilder {
 public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(std::size_t i, std::size_t j, double v);
  /// Reserves (i,j) in the pattern without changing its value.
  void add_pattern(std::size_t i, std::size_t j) { add(i, j, 0.0); }
  CsrMatrix build() const;

 private:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> entries_;
};

/// y = A x. Throws std::invalid_argument on dimension mismatch.
std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);
CsrMatrix transpose(const CsrMatrix& A);
/// alpha A + beta B on the union pattern.
CsrMatrix add(const CsrMatrix& A, const CsrMatrix& B, double alpha = 1.0, double beta = 1.0);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Applies an approximate inverse: out = M^{-1} in.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(std::span<const double> in, std::span<double> out) const override;
};

/// Incomplete LU factorisation with zero fill. L (unit diagonal, not stored)
/// and U share the sparsity pattern of the input matrix.
class Ilu0Factors final : public Preconditioner {
 public:
  /// Throws std::runtime_error naming the row if a pivot is zero, tiny or
  /// missing from the pattern.
  explicit Ilu0Factors(const CsrMatrix& A);

  void apply(std::span<const double> in, std::span<double> out) const override;

  /// Strict lower part of L (unit diagonal implied) and upper part U, both as
  /// CSR on the original pattern.
  CsrMatrix lower() const;
  CsrMatrix upper() const;

 private:
  CsrMatrix lu_;
  std::vector<std::size_t> diag_;
};

inline Ilu0Factors ilu0_factorize(const CsrMatrix& A) { return Ilu0Factors(A); }

/// Arnoldi process on A M^{-1} with modified Gram-Schmidt. Used by gmres and
/// exposed for inspection of the Krylov basis.
class ArnoldiProcess {
 public:
  /// Starts from v0 / |v0|; `max_steps` bounds the basis size.
  ArnoldiProcess(const CsrMatrix& A, const Preconditioner& M, std::span<const double> v0, std::size_t max_steps);

  /// Extends the basis by one vector. Returns false on happy breakdown (the
  /// new vector vanished); the Hessenberg column is still recorded.
  bool step();

  std::size_t size() const { return steps_; }
  const std::vector<std::vector<double>>& basis() const { return V_; }
  /// Column j of the (k+1) x k Hessenberg matrix.
  const std::vector<double>& hessenberg_column(std::size_t j) const { return H_[j]; }
  double initial_norm() const { return beta_; }

 private:
  const CsrMatrix& A_;
  const Preconditioner& M_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  double beta_ = 0.0;
  std::vector<std::vector<double>> V_;
  std::vector<std::vector<double>> H_;
  std::vector<double> z_;
  std::vector<double> w_;
};

struct GmresOptions {
  std::size_t restart = 500;
  double rtol = 1e-12;
  std::size_t max_iters = 50000;
};

struct GmresReport {
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// Residual estimates (relative to |b|) after each inner iteration.
  std::vector<double> history;
};

struct GmresResult {
  std::vector<double> x;
  GmresReport report;
};

/// Right-preconditioned restarted GMRES. Convergence means
/// |b - A x| <= rtol |b| for the true residual, checked at every restart; each
/// cycle runs until its residual estimate falls to rtol |b| / 2. A cycle that
/// does not reduce the true residual ends the solve. Non-convergence is
/// reported, not thrown.
GmresResult gmres(const CsrMatrix& A, std::span<const double> b, const Preconditioner& M,
                  const GmresOptions& options = {}, std::span<const double> x0 = {});

/// Matrix Market coordinate/real/general I/O.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);
CsrMatrix read_matrix_market(std::istream& in);

}  // namespace crfem
