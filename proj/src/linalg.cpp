#include "prohecke/linalg.hpp"

#include "prohecke/error.hpp"

namespace prohecke::la {

namespace {
void check_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}
}  // namespace

Matrix Matrix::identity(const FieldCtx* ctx, std::size_t n) {
  Matrix m(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m.code(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const FieldCtx* ctx, const std::vector<std::vector<FieldElt>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(ctx, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    check_dims(rows[i].size() == c, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_ints(const FieldCtx* ctx, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  Matrix m(ctx, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    check_dims(rows[i].size() == c, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.code(i, j) = ctx->from_int(rows[i][j]).code();
  }
  return m;
}

Matrix Matrix::column(const std::vector<FieldElt>& v) {
  const FieldCtx* ctx = v.empty() ? nullptr : v[0].ctx();
  Matrix m(ctx, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, const FieldElt& v) {
  if (v.ctx() != ctx_) throw Error(ErrorKind::CtxMismatch, "matrix entry from another field");
  data_[i * cols_ + j] = v.code();
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_dims(cols_ == o.rows_, "matrix product dimension mismatch");
  Matrix r(ctx_ ? ctx_ : o.ctx_, rows_, o.cols_);
  const FieldCtx* f = r.ctx_;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint32_t a = data_[i * cols_ + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        std::uint32_t b = o.data_[k * o.cols_ + j];
        if (b == 0) continue;
        auto& t = r.data_[i * o.cols_ + j];
        t = f->add(t, f->mul(a, b));
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_dims(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum dimension mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = ctx_->add(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_dims(rows_ == o.rows_ && cols_ == o.cols_, "matrix difference dimension mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = ctx_->sub(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::scaled(const FieldElt& c) const {
  Matrix r = *this;
  for (auto& v : r.data_) v = ctx_->mul(v, c.code());
  return r;
}

bool Matrix::is_zero() const {
  for (auto v : data_)
    if (v) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix r(ctx_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.data_[j * rows_ + i] = data_[i * cols_ + j];
  return r;
}

Matrix Matrix::col(std::size_t j) const { return cols_range(j, j + 1); }

Matrix Matrix::cols_range(std::size_t begin, std::size_t end) const {
  Matrix r(ctx_, rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) r.data_[i * (end - begin) + j - begin] = data_[i * cols_ + j];
  return r;
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (cols_ == 0 && rows_ == 0) return o;
  check_dims(rows_ == o.rows_, "hstack row mismatch");
  Matrix r(ctx_ ? ctx_ : o.ctx_, rows_, cols_ + o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r.data_[i * r.cols_ + j] = data_[i * cols_ + j];
    for (std::size_t j = 0; j < o.cols_; ++j) r.data_[i * r.cols_ + cols_ + j] = o.data_[i * o.cols_ + j];
  }
  return r;
}

Matrix Matrix::vstack(const Matrix& o) const {
  if (cols_ == 0 && rows_ == 0) return o;
  check_dims(cols_ == o.cols_, "vstack column mismatch");
  Matrix r(ctx_ ? ctx_ : o.ctx_, rows_ + o.rows_, cols_);
  std::copy(data_.begin(), data_.end(), r.data_.begin());
  std::copy(o.data_.begin(), o.data_.end(), r.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
  return r;
}

std::vector<FieldElt> Matrix::column_vector(std::size_t j) const {
  std::vector<FieldElt> v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
  return v;
}

Echelon rref(Matrix a) {
  Echelon out;
  const FieldCtx* f = a.ctx();
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a.code(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.code(piv, j), a.code(r, j));
    std::uint32_t s = f->inv(a.code(r, c));
    for (std::size_t j = c; j < a.cols(); ++j) a.code(r, j) = f->mul(a.code(r, j), s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      std::uint32_t factor = a.code(i, c);
      if (factor == 0) continue;
      std::uint32_t nf = f->neg(factor);
      for (std::size_t j = c; j < a.cols(); ++j) {
        std::uint32_t v = a.code(r, j);
        if (v) a.code(i, j) = f->add(a.code(i, j), f->mul(nf, v));
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

std::size_t rank(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  return rref(a).pivots.size();
}

Matrix kernel(const Matrix& a) {
  const FieldCtx* f = a.ctx();
  auto e = rref(a);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto c : e.pivots) is_piv[c] = true;
  std::size_t nfree = a.cols() - e.pivots.size();
  Matrix k(f, a.cols(), nfree);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (is_piv[c]) continue;
    k.code(c, idx) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k.code(e.pivots[r], idx) = f->neg(e.reduced.code(r, c));
    ++idx;
  }
  return k;
}

Matrix column_basis(const Matrix& a) {
  auto e = rref(a);
  Matrix out(a.ctx(), a.rows(), 0);
  for (auto c : e.pivots) out = out.hstack(a.col(c));
  return out;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  check_dims(a.rows() == b.rows(), "solve dimension mismatch");
  const FieldCtx* f = a.ctx() ? a.ctx() : b.ctx();
  if (a.cols() == 0) {
    if (b.is_zero()) return Matrix(f, 0, b.cols());
    return std::nullopt;
  }
  auto e = rref(a.hstack(b));
  Matrix x(f, a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    std::size_t c = e.pivots[r];
    if (c >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x.code(c, j) = e.reduced.code(r, a.cols() + j);
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  if (a.rows() == 0) return a;
  auto e = rref(a.hstack(Matrix::identity(a.ctx(), a.rows())));
  if (e.pivots.size() < a.rows() || e.pivots[a.rows() - 1] >= a.cols()) return std::nullopt;
  return e.reduced.cols_range(a.cols(), 2 * a.cols());
}

}  // namespace prohecke::la
