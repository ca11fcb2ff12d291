#include "psmds/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "psmds/errors.hpp"
#include "psmds/parallel.hpp"

namespace psmds {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

namespace {

void require_finite(const Matrix& m, const char* what) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

PointMatrix::PointMatrix(std::size_t n_points, std::size_t dim) : values_(n_points, dim) {
  if (n_points == 0 || dim == 0) throw InvalidArgument("PointMatrix needs N >= 1 and L >= 1");
}

PointMatrix::PointMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0)
    throw InvalidArgument("PointMatrix needs N >= 1 and L >= 1");
  require_finite(values_, "PointMatrix");
}

PointMatrix::PointMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : PointMatrix(Matrix(rows)) {}

DissimilarityMatrix::DissimilarityMatrix(std::size_t n) : values_(n, n) {
  if (n == 0) throw InvalidArgument("DissimilarityMatrix needs N >= 1");
}

DissimilarityMatrix::DissimilarityMatrix(Matrix values) : values_(std::move(values)) {
  const std::size_t n = values_.rows();
  if (n == 0 || values_.cols() != n)
    throw InvalidArgument("DissimilarityMatrix must be square with N >= 1");
  require_finite(values_, "DissimilarityMatrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (values_(i, i) != 0.0) throw InvalidArgument("DissimilarityMatrix: non-zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (values_(i, j) != values_(j, i))
        throw InvalidArgument("DissimilarityMatrix: not symmetric");
      if (values_(i, j) < 0.0) throw InvalidArgument("DissimilarityMatrix: negative entry");
    }
  }
}

DissimilarityMatrix::DissimilarityMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : DissimilarityMatrix(Matrix(rows)) {}

DissimilarityMatrix DissimilarityMatrix::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor))
    throw InvalidArgument("scale factor must be finite and non-negative");
  DissimilarityMatrix out(*this);
  for (double& v : out.values_.data()) v *= factor;
  return out;
}

GramMatrix::GramMatrix(Matrix values) : values_(std::move(values)) {
  const std::size_t n = values_.rows();
  if (n == 0 || values_.cols() != n) throw InvalidArgument("GramMatrix must be square");
  require_finite(values_, "GramMatrix");
  double scale = 0.0;
  for (double v : values_.data()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values_(i, j) - values_(j, i)) > tol)
        throw InvalidArgument("GramMatrix: not symmetric");
}

DissimilarityMatrix pairwise_distances(const PointMatrix& points) {
  const std::size_t n = points.n_points();
  const std::size_t dim = points.dim();
  Matrix d(n, n);
  PSMDS_OMP_PARALLEL_FOR_DYNAMIC(n * n * dim > 200000)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto xi = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = points.row(j);
      double sq = 0.0;
      for (std::size_t l = 0; l < dim; ++l) {
        const double diff = xi[l] - xj[l];
        sq += diff * diff;
      }
      d(i, j) = std::sqrt(sq);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d(i, j) = d(j, i);
  return DissimilarityMatrix(std::move(d));
}

GramMatrix double_center(const DissimilarityMatrix& dissimilarities) {
  const std::size_t n = dissimilarities.size();
  Matrix sq(n, n);
  std::vector<double> row_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dissimilarities(i, j);
      sq(i, j) = v * v;
      row_mean[i] += v * v;
    }
    row_mean[i] /= static_cast<double>(n);
  }
  const double grand = std::accumulate(row_mean.begin(), row_mean.end(), 0.0) /
                       static_cast<double>(n);
  // Symmetric input: column means equal row means, and rm[i] + rm[j] keeps B exactly symmetric.
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = -0.5 * (sq(i, j) - (row_mean[i] + row_mean[j]) + grand);
  return GramMatrix(std::move(b));
}

namespace {

// Householder reduction to tridiagonal form. On return `v` holds the
// accumulated orthogonal transform, `d` the diagonal and `e` the
// sub-diagonal (e[0] = 0).
void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k < i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k < i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). `zt` holds eigenvectors as rows so
// each Givens rotation touches two contiguous rows.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix& zt,
                    int max_iterations) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iterations) {
          std::ostringstream msg;
          msg << "symmetric eigensolver did not converge for eigenvalue " << l << " within "
              << max_iterations << " iterations";
          throw EigenSolverError(msg.str());
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          auto zi = zt.row(ii);
          auto zi1 = zt.row(ii + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double t = zi1[k];
            zi1[k] = s * zi[k] + c * t;
            zi[k] = c * zi[k] - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& symmetric, EigenOptions options) {
  const std::size_t n = symmetric.rows();
  if (n == 0 || symmetric.cols() != n) throw InvalidArgument("symmetric_eigen: square input required");
  require_finite(symmetric, "symmetric_eigen");

  EigenDecomposition out;
  if (n == 1) {
    out.values = {symmetric(0, 0)};
    out.vectors = Matrix(1, 1, 1.0);
    return out;
  }

  Matrix v = symmetric;
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);
  Matrix zt = v.transposed();
  tridiagonal_ql(d, e, zt, options.max_iterations_per_value);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    const auto src = zt.row(order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = src[i];
  }
  return out;
}

EigenDecomposition top_eigenpairs(const GramMatrix& gram, std::size_t count,
                                  EigenOptions options) {
  const std::size_t n = gram.size();
  if (count < 1 || count > n) throw InvalidArgument("top_eigenpairs: need 1 <= L <= N");
  EigenDecomposition full = symmetric_eigen(gram.matrix(), options);
  EigenDecomposition out;
  out.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(count));
  out.vectors = Matrix(n, count);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < count; ++k) out.vectors(i, k) = full.vectors(i, k);
  return out;
}

ClassicalMdsResult classical_mds_embed(const DissimilarityMatrix& dissimilarities,
                                       std::size_t dim, EigenOptions options) {
  const std::size_t n = dissimilarities.size();
  if (dim < 1) throw InvalidArgument("classical_mds_embed: L must be >= 1");

  const GramMatrix b = double_center(dissimilarities);
  const std::size_t available = std::min(dim, n);
  EigenDecomposition eig = top_eigenpairs(b, available, options);

  ClassicalMdsResult result{PointMatrix(n, dim), eig.values, {}};
  for (std::size_t k = 0; k < available; ++k) {
    double lambda = eig.values[k];
    if (lambda < 0.0) {
      std::ostringstream msg;
      msg << "eigenvalue " << k << " = " << lambda << " is negative; coordinate clamped to zero";
      result.warnings.push_back(msg.str());
      lambda = 0.0;
    }
    const double s = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) result.embedding(i, k) = s * eig.vectors(i, k);
  }
  for (std::size_t k = available; k < dim; ++k) {
    result.eigenvalues.push_back(0.0);
    result.warnings.push_back("dimension " + std::to_string(k) +
                              " exceeds the number of points; coordinate set to zero");
  }
  return result;
}

double procrustes_error(const PointMatrix& source, const PointMatrix& target) {
  if (source.n_points() != target.n_points() || source.dim() != target.dim())
    throw InvalidArgument("procrustes_error: configurations differ in shape");
  const std::size_t n = source.n_points();
  const std::size_t dim = source.dim();

  std::vector<double> mean_x(dim, 0.0), mean_y(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < dim; ++l) {
      mean_x[l] += source(i, l);
      mean_y[l] += target(i, l);
    }
  for (std::size_t l = 0; l < dim; ++l) {
    mean_x[l] /= static_cast<double>(n);
    mean_y[l] /= static_cast<double>(n);
  }

  Matrix xc(n, dim), yc(n, dim);
  double norm_x = 0.0, norm_y = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < dim; ++l) {
      xc(i, l) = source(i, l) - mean_x[l];
      yc(i, l) = target(i, l) - mean_y[l];
      norm_x += xc(i, l) * xc(i, l);
      norm_y += yc(i, l) * yc(i, l);
    }

  if (norm_x == 0.0) return std::sqrt(norm_y / static_cast<double>(n));

  // Optimal orthogonal map Q = U V^T from the SVD of M = Xc^T Yc, obtained via
  // the eigendecomposition of M^T M; left vectors of null singular values are
  // completed by Gram-Schmidt so Q stays orthogonal.
  const Matrix m = xc.transposed() * yc;
  const EigenDecomposition eig = symmetric_eigen(m.transposed() * m);
  std::vector<double> sigma(dim);
  for (std::size_t k = 0; k < dim; ++k) sigma[k] = std::sqrt(std::max(eig.values[k], 0.0));
  const double sigma_tol = 1e-12 * std::max(sigma[0], std::numeric_limits<double>::min());

  Matrix u(dim, dim);
  std::vector<bool> filled(dim, false);
  for (std::size_t k = 0; k < dim; ++k) {
    if (sigma[k] <= sigma_tol) continue;
    for (std::size_t a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < dim; ++b) acc += m(a, b) * eig.vectors(b, k);
      u(a, k) = acc / sigma[k];
    }
    filled[k] = true;
  }
  std::size_t basis = 0;
  for (std::size_t k = 0; k < dim; ++k) {
    if (filled[k]) continue;
    while (basis < dim) {
      std::vector<double> cand(dim, 0.0);
      cand[basis++] = 1.0;
      for (std::size_t q = 0; q < dim; ++q) {
        if (!filled[q]) continue;
        double proj = 0.0;
        for (std::size_t a = 0; a < dim; ++a) proj += u(a, q) * cand[a];
        for (std::size_t a = 0; a < dim; ++a) cand[a] -= proj * u(a, q);
      }
      double norm = 0.0;
      for (double c : cand) norm += c * c;
      norm = std::sqrt(norm);
      if (norm > 1e-6) {
        for (std::size_t a = 0; a < dim; ++a) u(a, k) = cand[a] / norm;
        filled[k] = true;
        break;
      }
    }
  }

  Matrix q(dim, dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < dim; ++b)
      for (std::size_t k = 0; k < dim; ++k) q(a, b) += u(a, k) * eig.vectors(b, k);

  double nuclear = 0.0;
  for (double s : sigma) nuclear += s;
  const double scale = nuclear / norm_x;

  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < dim; ++b) {
      double mapped = 0.0;
      for (std::size_t a = 0; a < dim; ++a) mapped += xc(i, a) * q(a, b);
      const double diff = scale * mapped - yc(i, b);
      residual += diff * diff;
    }
  return std::sqrt(residual / static_cast<double>(n));
}

}  // namespace psmds
