#include "prohecke/gf.hpp"

#include <algorithm>
#include <sstream>

#include "prohecke/error.hpp"

namespace prohecke::gf {

namespace {

using Poly = std::vector<std::uint32_t>;  // low degree first, p-reduced

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  trim(a);
  std::size_t df = f.size() - 1;
  std::uint32_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > df) {
    std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * f[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  trim(r);
  return r;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  return poly_mod(poly_mul(a, b, p), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly r{1};
  base = poly_mod(base, f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree m is irreducible iff gcd(f, X^{p^i} - X) = 1 for i <= m/2.
bool irreducible(const Poly& f, std::uint32_t p) {
  std::size_t m = f.size() - 1;
  if (m <= 1) return m == 1;
  Poly x{0, 1};
  Poly xp = x;
  for (std::size_t i = 1; i <= m / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    Poly d = xp;
    d.resize(std::max<std::size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    trim(d);
    Poly g = poly_gcd(f, d, p);
    if (g.size() != 1) return false;
  }
  return true;
}

Poly code_to_poly(std::uint32_t code, std::uint32_t p, std::uint32_t m) {
  Poly r(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    r[i] = code % p;
    code /= p;
  }
  trim(r);
  return r;
}

std::uint32_t poly_to_code(const Poly& a, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

FieldPtr FieldCtx::create(std::uint32_t p, std::uint32_t m,
                          std::optional<std::vector<std::uint32_t>> modulus) {
  if (!is_prime(p)) throw Error(ErrorKind::CompositeCharacteristic, std::to_string(p) + " is not prime");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    q *= p;
    if (q > (1u << 24)) throw Error(ErrorKind::InvalidArgument, "field order exceeds 2^24");
  }

  Poly f;
  if (modulus) {
    f = *modulus;
    if (f.size() != m + 1 || f.back() != 1)
      throw Error(ErrorKind::InvalidArgument, "modulus must be monic of degree m");
    for (auto c : f)
      if (c >= p) throw Error(ErrorKind::InvalidArgument, "modulus coefficients must be reduced mod p");
    if (!irreducible(f, p)) throw Error(ErrorKind::ReducibleModulus, "supplied modulus factors over F_p");
  } else {
    for (std::uint64_t low = 0; low < q; ++low) {
      Poly cand(m + 1, 0);
      std::uint64_t v = low;
      for (std::uint32_t i = 0; i < m; ++i) {
        cand[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      cand[m] = 1;
      if (irreducible(cand, p)) {
        f = cand;
        break;
      }
    }
  }

  std::shared_ptr<FieldCtx> ctx(new FieldCtx());
  ctx->p_ = p;
  ctx->m_ = m;
  ctx->q_ = static_cast<std::uint32_t>(q);
  ctx->modulus_ = f;

  // Smallest code of full multiplicative order.
  std::uint32_t gen = 1;
  if (q > 2) {
    auto primes = prime_factors(q - 1);
    for (std::uint32_t c = 2; c < q; ++c) {
      Poly g = code_to_poly(c, p, m);
      bool ok = true;
      for (auto r : primes) {
        Poly h = poly_powmod(g, (q - 1) / r, f, p);
        if (h.size() == 1 && h[0] == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen = c;
        break;
      }
    }
  }
  ctx->build_tables(gen);
  return ctx;
}

void FieldCtx::build_tables(std::uint32_t gen_code) {
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  Poly g = code_to_poly(gen_code, p_, m_);
  Poly cur{1};
  for (std::uint32_t k = 0; k + 1 < q_; ++k) {
    std::uint32_t c = poly_to_code(cur, p_);
    exp_[k] = c;
    log_[c] = k;
    cur = poly_mulmod(cur, g, modulus_, p_);
  }
  neg_.assign(q_, 0);
  for (std::uint32_t c = 0; c < q_; ++c) {
    std::uint32_t r = 0, mult = 1, v = c;
    for (std::uint32_t i = 0; i < m_; ++i) {
      std::uint32_t d = v % p_;
      v /= p_;
      r += ((p_ - d) % p_) * mult;
      mult *= p_;
    }
    neg_[c] = r;
  }
  if (q_ <= 256) {
    add_table_.assign(std::size_t(q_) * q_, 0);
    add_table_.shrink_to_fit();
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        std::uint32_t r = 0, mult = 1, x = a, y = b;
        for (std::uint32_t i = 0; i < m_; ++i) {
          r += ((x % p_ + y % p_) % p_) * mult;
          x /= p_;
          y /= p_;
          mult *= p_;
        }
        add_table_[std::size_t(a) * q_ + b] = static_cast<std::uint16_t>(r);
      }
  }
}

std::uint32_t FieldCtx::add(std::uint32_t a, std::uint32_t b) const {
  if (!add_table_.empty()) return add_table_[std::size_t(a) * q_ + b];
  if (m_ == 1) return (a + b) % p_;
  std::uint32_t r = 0, mult = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((a % p_ + b % p_) % p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

std::uint32_t FieldCtx::neg(std::uint32_t a) const { return neg_[a]; }

std::uint32_t FieldCtx::inv(std::uint32_t a) const {
  if (a == 0) throw Error(ErrorKind::ZeroInverse, "inverse of zero");
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

std::uint32_t FieldCtx::pow(std::uint32_t a, std::int64_t e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw Error(ErrorKind::ZeroInverse, "negative power of zero");
    return 0;
  }
  std::int64_t n = q_ - 1;
  std::int64_t k = (static_cast<std::int64_t>(log_[a]) * (((e % n) + n) % n)) % n;
  return exp_[static_cast<std::size_t>(k)];
}

FieldElt FieldCtx::elt(std::uint32_t code) const {
  if (code >= q_) throw Error(ErrorKind::InvalidArgument, "element code out of range");
  return {this, code};
}

FieldElt FieldCtx::from_int(std::int64_t v) const {
  std::int64_t r = ((v % std::int64_t(p_)) + p_) % p_;
  return {this, static_cast<std::uint32_t>(r)};
}

FieldElt FieldCtx::from_coords(const std::vector<std::uint32_t>& coords) const {
  if (coords.size() > m_) throw Error(ErrorKind::InvalidArgument, "too many coordinates");
  std::uint32_t code = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    if (coords[i] >= p_) throw Error(ErrorKind::InvalidArgument, "coordinate not reduced mod p");
    code = code * p_ + coords[i];
  }
  return {this, code};
}

FieldElt FieldCtx::gen_pow(std::int64_t k) const {
  std::int64_t n = q_ - 1;
  return {this, exp_[static_cast<std::size_t>(((k % n) + n) % n)]};
}

std::uint32_t FieldCtx::log(const FieldElt& x) const {
  check_same(x, zero());
  if (x.is_zero()) throw Error(ErrorKind::ZeroInverse, "log of zero");
  return log_[x.code()];
}

std::vector<FieldElt> FieldCtx::elements() const {
  std::vector<FieldElt> out;
  out.reserve(q_);
  for (std::uint32_t c = 0; c < q_; ++c) out.emplace_back(this, c);
  return out;
}

std::vector<FieldElt> FieldCtx::units() const {
  std::vector<FieldElt> out;
  out.reserve(q_ - 1);
  for (std::uint32_t c = 1; c < q_; ++c) out.emplace_back(this, c);
  return out;
}

void FieldCtx::check_same(const FieldElt& a, const FieldElt& b) const {
  if (a.ctx() != this || b.ctx() != this)
    throw Error(ErrorKind::CtxMismatch, "elements belong to different fields");
}

bool FieldElt::is_one() const { return code_ == 1; }

std::vector<std::uint32_t> FieldElt::coords() const {
  std::vector<std::uint32_t> out(ctx_->degree(), 0);
  std::uint32_t v = code_;
  for (auto& c : out) {
    c = v % ctx_->p();
    v /= ctx_->p();
  }
  return out;
}

static const FieldCtx* common(const FieldElt& a, const FieldElt& b) {
  if (a.ctx() == nullptr || a.ctx() != b.ctx())
    throw Error(ErrorKind::CtxMismatch, "elements belong to different fields");
  return a.ctx();
}

FieldElt FieldElt::operator+(const FieldElt& o) const {
  auto* c = common(*this, o);
  return {c, c->add(code_, o.code_)};
}
FieldElt FieldElt::operator-(const FieldElt& o) const {
  auto* c = common(*this, o);
  return {c, c->sub(code_, o.code_)};
}
FieldElt FieldElt::operator*(const FieldElt& o) const {
  auto* c = common(*this, o);
  return {c, c->mul(code_, o.code_)};
}
FieldElt FieldElt::operator/(const FieldElt& o) const {
  auto* c = common(*this, o);
  return {c, c->mul(code_, c->inv(o.code_))};
}
FieldElt FieldElt::operator-() const { return {ctx_, ctx_->neg(code_)}; }
FieldElt FieldElt::inv() const { return {ctx_, ctx_->inv(code_)}; }
FieldElt FieldElt::pow(std::int64_t e) const { return {ctx_, ctx_->pow(code_, e)}; }

std::string FieldElt::to_string() const {
  if (!ctx_) return "<null>";
  if (ctx_->degree() == 1) return std::to_string(code_);
  auto c = coords();
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "]";
  return os.str();
}

}  // namespace prohecke::gf
