#include <array>
#include "crfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crfem {

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto k = find(i, j);
  return k < 0 ? 0.0 : values[k];
}

std::ptrdiff_t CsrMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = col_idx.begin() + row_ptr[i];
  const auto last = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return -1;
  return it - col_idx.begin();
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix I;
  I.rows = I.cols = n;
  I.row_ptr.resize(n + 1);
  I.col_idx.resize(n);
  I.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) I.row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) I.col_idx[i] = static_cast<int>(i);
  return I;
}

void TripletBuilder::add(std::size_t i, std::size_t j, double v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("TripletBuilder: entry outside matrix");
  entries_.push_back({i, j, v});
}

CsrMatrix TripletBuilder::build() const {
  std::vector<Entry> sorted = entries_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix A;
  A.rows = rows_;
  A.cols = cols_;
  A.row_ptr.assign(rows_ + 1, 0);
  for (std::size_t k = 0; k < sorted.size();) {
    const auto& e = sorted[k];
    double sum = 0.0;
    std::size_t m = k;
    for (; m < sorted.size() && sorted[m].row == e.row && sorted[m].col == e.col; ++m) sum += sorted[m].value;
    A.col_idx.push_back(static_cast<int>(e.col));
    A.values.push_back(sum);
    ++A.row_ptr[e.row + 1];
    k = m;
  }
  for (std::size_t i = 0; i < rows_; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
  return A;
}

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  if (x.size() != A.cols || y.size() != A.rows) throw std::invalid_argument("spmv: dimension mismatch");
  for (std::size_t i = 0; i < A.rows; ++i) {
    double sum = 0.0;
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) sum += A.values[k] * x[A.col_idx[k]];
    y[i] = sum;
  }
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) {
  std::vector<double> y(A.rows);
  spmv(A, x, y);
  return y;
}

CsrMatrix transpose(const CsrMatrix& A) {
  CsrMatrix T;
  T.rows = A.cols;
  T.cols = A.rows;
  T.row_ptr.assign(T.rows + 1, 0);
  for (int c : A.col_idx) ++T.row_ptr[c + 1];
  for (std::size_t i = 0; i < T.rows; ++i) T.row_ptr[i + 1] += T.row_ptr[i];
  T.col_idx.resize(A.nnz());
  T.values.resize(A.nnz());
  std::vector<std::size_t> next(T.row_ptr.begin(), T.row_ptr.end() - 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      const auto dst = next[A.col_idx[k]]++;
      T.col_idx[dst] = static_cast<int>(i);
      T.values[dst] = A.values[k];
    }
  }
  return T;
}

CsrMatrix add(const CsrMatrix& A, const CsrMatrix& B, double alpha, double beta) {
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("add: dimension mismatch");
  CsrMatrix C;
  C.rows = A.rows;
  C.cols = A.cols;
  C.row_ptr.assign(C.rows + 1, 0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    std::size_t a = A.row_ptr[i], b = B.row_ptr[i];
    const std::size_t ae = A.row_ptr[i + 1], be = B.row_ptr[i + 1];
    while (a < ae || b < be) {
      if (b == be || (a < ae && A.col_idx[a] < B.col_idx[b])) {
        C.col_idx.push_back(A.col_idx[a]);
        C.values.push_back(alpha * A.values[a++]);
      } else if (a == ae || B.col_idx[b] < A.col_idx[a]) {
        C.col_idx.push_back(B.col_idx[b]);
        C.values.push_back(beta * B.values[b++]);
      } else {
        C.col_idx.push_back(A.col_idx[a]);
        C.values.push_back(alpha * A.values[a++] + beta * B.values[b++]);
      }
    }
    C.row_ptr[i + 1] = C.col_idx.size();
  }
  return C;
}

double dot(std::span<const double> a, std::span<const double> b) {
  // Independent partial sums let the compiler vectorise the reduction.
  constexpr std::size_t kLanes = 8;
  std::array<double, kLanes> partial{};
  const std::size_t n = a.size();
  const std::size_t blocked = n - n % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) partial[l] += a[i + l] * b[i + l];
  }
  double s = 0.0;
  for (std::size_t i = blocked; i < n; ++i) s += a[i] * b[i];
  for (double p : partial) s += p;
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void IdentityPreconditioner::apply(std::span<const double> in, std::span<double> out) const {
  std::copy(in.begin(), in.end(), out.begin());
}

Ilu0Factors::Ilu0Factors(const CsrMatrix& A) : lu_(A), diag_(A.rows) {
  if (A.rows != A.cols) throw std::invalid_argument("ilu0_factorize: matrix must be square");
  const std::size_t n = A.rows;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = lu_.find(i, i);
    if (d < 0) throw std::runtime_error("ilu0_factorize: row " + std::to_string(i) + " has no diagonal entry");
    diag_[i] = static_cast<std::size_t>(d);
  }

  std::vector<std::ptrdiff_t> position(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = lu_.row_ptr[i], end = lu_.row_ptr[i + 1];
    double row_scale = 0.0;
    for (std::size_t p = begin; p < end; ++p) {
      position[lu_.col_idx[p]] = static_cast<std::ptrdiff_t>(p);
      row_scale = std::max(row_scale, std::abs(lu_.values[p]));
    }
    for (std::size_t p = begin; p < end && static_cast<std::size_t>(lu_.col_idx[p]) < i; ++p) {
      const std::size_t k = lu_.col_idx[p];
      lu_.values[p] /= lu_.values[diag_[k]];
      const double lik = lu_.values[p];
      for (std::size_t q = diag_[k] + 1; q < lu_.row_ptr[k + 1]; ++q) {
        const auto target = position[lu_.col_idx[q]];
        if (target >= 0) lu_.values[target] -= lik * lu_.values[q];
      }
    }
    for (std::size_t p = begin; p < end; ++p) position[lu_.col_idx[p]] = -1;

    const double pivot = lu_.values[diag_[i]];
    if (!(std::abs(pivot) > 1e-14 * row_scale) || !std::isfinite(pivot)) {
      throw std::runtime_error("ilu0_factorize: zero or near-zero pivot in row " + std::to_string(i));
    }
  }
}

void Ilu0Factors::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = lu_.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double s = in[i];
    for (std::size_t p = lu_.row_ptr[i]; p < diag_[i]; ++p) s -= lu_.values[p] * out[lu_.col_idx[p]];
    out[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = out[i];
    for (std::size_t p = diag_[i] + 1; p < lu_.row_ptr[i + 1]; ++p) s -= lu_.values[p] * out[lu_.col_idx[p]];
    out[i] = s / lu_.values[diag_[i]];
  }
}

CsrMatrix Ilu0Factors::lower() const {
  TripletBuilder t(lu_.rows, lu_.cols);
  for (std::size_t i = 0; i < lu_.rows; ++i) {
    for (std::size_t p = lu_.row_ptr[i]; p < diag_[i]; ++p) t.add(i, lu_.col_idx[p], lu_.values[p]);
  }
  return t.build();
}

CsrMatrix Ilu0Factors::upper() const {
  TripletBuilder t(lu_.rows, lu_.cols);
  for (std::size_t i = 0; i < lu_.rows; ++i) {
    for (std::size_t p = diag_[i]; p < lu_.row_ptr[i + 1]; ++p) t.add(i, lu_.col_idx[p], lu_.values[p]);
  }
  return t.build();
}

ArnoldiProcess::ArnoldiProcess(const CsrMatrix& A, const Preconditioner& M, std::span<const double> v0,
                               std::size_t max_steps)
    : A_(A), M_(M), max_steps_(max_steps), z_(A.rows), w_(A.rows) {
  if (A.rows != A.cols || v0.size() != A.rows) throw std::invalid_argument("ArnoldiProcess: dimension mismatch");
  beta_ = norm2(v0);
  if (!(beta_ > 0.0)) throw std::invalid_argument("ArnoldiProcess: zero start vector");
  V_.reserve(max_steps + 1);
  H_.reserve(max_steps);
  V_.emplace_back(v0.begin(), v0.end());
  for (double& x : V_.back()) x /= beta_;
}

bool ArnoldiProcess::step() {
  if (steps_ >= max_steps_) throw std::logic_error("ArnoldiProcess: basis is full");
  const std::size_t j = steps_;
  M_.apply(V_[j], z_);
  spmv(A_, z_, w_);
  std::vector<double> h(j + 2, 0.0);
  for (std::size_t i = 0; i <= j; ++i) {
    const double hij = dot(w_, V_[i]);
    h[i] = hij;
    const auto& vi = V_[i];
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] -= hij * vi[k];
  }
  const double hnext = norm2(w_);
  h[j + 1] = hnext;
  H_.push_back(std::move(h));
  ++steps_;
  if (!(hnext > 0.0)) return false;
  V_.emplace_back(w_);
  for (double& x : V_.back()) x /= hnext;
  return true;
}

namespace {

/// r = b - A x with extended-precision accumulation, so that the restart
/// residual is not dominated by cancellation between large terms.
void true_residual(const CsrMatrix& A, std::span<const double> b, std::span<const double> x, std::span<double> r) {
  for (std::size_t i = 0; i < A.rows; ++i) {
    long double s = b[i];
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      s -= static_cast<long double>(A.values[k]) * x[A.col_idx[k]];
    r[i] = static_cast<double>(s);
  }
}

}  // namespace

GmresResult gmres(const CsrMatrix& A, std::span<const double> b, const Preconditioner& M,
                  const GmresOptions& options, std::span<const double> x0) {
  if (A.rows != A.cols || b.size() != A.rows) throw std::invalid_argument("gmres: dimension mismatch");
  if (!x0.empty() && x0.size() != A.rows) throw std::invalid_argument("gmres: initial guess has wrong size");
  if (options.restart == 0) throw std::invalid_argument("gmres: restart must be positive");

  const std::size_t n = A.rows;
  GmresResult result;
  result.x = x0.empty() ? std::vector<double>(n, 0.0) : std::vector<double>(x0.begin(), x0.end());
  auto& rep = result.report;

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(result.x.begin(), result.x.end(), 0.0);
    rep.converged = true;
    return result;
  }

  std::vector<double> r(n), z(n), correction(n);
  double previous = std::numeric_limits<double>::infinity();
  for (;;) {
    true_residual(A, b, result.x, r);
    const double rnorm = norm2(r);
    rep.relative_residual = rnorm / bnorm;
    if (rep.relative_residual <= options.rtol) {
      rep.converged = true;
      break;
    }
    // Stop when a whole cycle failed to make progress or the budget is spent.
    if (rep.iterations >= options.max_iters || !(rnorm < previous)) break;
    previous = rnorm;

    const std::size_t m = std::min(options.restart, options.max_iters - rep.iterations);
    ArnoldiProcess arnoldi(A, M, r, m);
    std::vector<double> g(m + 1, 0.0), cs(m, 0.0), sn(m, 0.0);
    std::vector<std::vector<double>> R;
    R.reserve(m);
    g[0] = rnorm;
    // Inner cycles stop at half the tolerance on the Arnoldi residual estimate.
    const double inner_target = 0.5 * options.rtol * bnorm;
    std::size_t k = 0;
    while (k < m) {
      const bool more = arnoldi.step();
      ++rep.iterations;
      std::vector<double> h = arnoldi.hessenberg_column(k);
      for (std::size_t i = 0; i < k; ++i) {
        const double t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      const double denom = std::hypot(h[k], h[k + 1]);
      cs[k] = denom > 0.0 ? h[k] / denom : 1.0;
      sn[k] = denom > 0.0 ? h[k + 1] / denom : 0.0;
      h[k] = denom;
      h[k + 1] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      R.push_back(std::move(h));
      ++k;
      rep.history.push_back(std::abs(g[k]) / bnorm);
      if (!more || std::abs(g[k]) <= inner_target) break;
    }

    // Back substitution for y, then x += M^{-1} V y.
    std::vector<double> y(k, 0.0);
    for (std::size_t i = k; i-- > 0;) {
      double s = g[i];
      for (std::size_t j = i + 1; j < k; ++j) s -= R[j][i] * y[j];
      y[i] = R[i][i] != 0.0 ? s / R[i][i] : 0.0;
    }
    std::fill(correction.begin(), correction.end(), 0.0);
    const auto& V = arnoldi.basis();
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) correction[i] += y[j] * V[j][i];
    }
    M.apply(correction, z);
    for (std::size_t i = 0; i < n; ++i) result.x[i] += z[i];
    ++rep.restarts;
  }
  return result;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
  const auto old_precision = out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows << ' ' << A.cols << ' ' << A.nnz() << '\n';
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      out << i + 1 << ' ' << A.col_idx[k] + 1 << ' ' << A.values[k] << '\n';
    }
  }
  out.precision(old_precision);
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("read_matrix_market: missing banner");
  }
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || (field != "real" && field != "integer")) {
    throw std::runtime_error("read_matrix_market: only real coordinate matrices are supported");
  }
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general") {
    throw std::runtime_error("read_matrix_market: unsupported symmetry '" + symmetry + "'");
  }
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(std::istringstream(line) >> rows >> cols >> nnz)) throw std::runtime_error("read_matrix_market: bad size line");
  TripletBuilder t(rows, cols);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v) || i == 0 || j == 0) throw std::runtime_error("read_matrix_market: bad entry");
    t.add(i - 1, j - 1, v);
    if ((symmetric || skew) && i != j) t.add(j - 1, i - 1, skew ? -v : v);
  }
  return t.build();
}

}  // namespace crfem
