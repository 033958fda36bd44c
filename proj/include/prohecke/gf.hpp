#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace prohecke::gf {

class FieldCtx;
using FieldPtr = std::shared_ptr<const FieldCtx>;

// Element of F_{p^m}. The code is the base-p integer sum coords[i] * p^i.
// An element refers to its context by raw pointer; the context must outlive it.
class FieldElt {
 public:
  FieldElt() = default;
  FieldElt(const FieldCtx* ctx, std::uint32_t code) : ctx_(ctx), code_(code) {}

  const FieldCtx* ctx() const { return ctx_; }
  std::uint32_t code() const { return code_; }
  bool valid() const { return ctx_ != nullptr; }
  bool is_zero() const { return code_ == 0; }
  bool is_one() const;
  std::vector<std::uint32_t> coords() const;

  FieldElt operator+(const FieldElt& o) const;
  FieldElt operator-(const FieldElt& o) const;
  FieldElt operator*(const FieldElt& o) const;
  FieldElt operator/(const FieldElt& o) const;
  FieldElt operator-() const;
  FieldElt& operator+=(const FieldElt& o) { return *this = *this + o; }
  FieldElt& operator-=(const FieldElt& o) { return *this = *this - o; }
  FieldElt& operator*=(const FieldElt& o) { return *this = *this * o; }
  FieldElt inv() const;
  FieldElt pow(std::int64_t e) const;

  bool operator==(const FieldElt& o) const { return ctx_ == o.ctx_ && code_ == o.code_; }
  bool operator!=(const FieldElt& o) const { return !(*this == o); }
  bool operator<(const FieldElt& o) const { return code_ < o.code_; }

  std::string to_string() const;

 private:
  const FieldCtx* ctx_ = nullptr;
  std::uint32_t code_ = 0;
};

class FieldCtx {
 public:
  // modulus is [c0, ..., cm], monic. Absent: smallest irreducible monic
  // polynomial of degree m in the order of its code (c0 + c1 p + ...).
  static FieldPtr create(std::uint32_t p, std::uint32_t m,
                         std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  std::uint32_t p() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FieldElt zero() const { return {this, 0}; }
  FieldElt one() const { return {this, 1}; }
  FieldElt elt(std::uint32_t code) const;
  FieldElt from_int(std::int64_t v) const;
  FieldElt from_coords(const std::vector<std::uint32_t>& coords) const;
  // Smallest code of multiplicative order q - 1.
  FieldElt generator() const { return {this, exp_[1 % (q_ - 1)]}; }
  // generator()^k for any integer k.
  FieldElt gen_pow(std::int64_t k) const;
  // Discrete log base generator(); x nonzero.
  std::uint32_t log(const FieldElt& x) const;
  std::vector<FieldElt> elements() const;
  std::vector<FieldElt> units() const;

  // Raw arithmetic on codes.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::int64_t e) const;

  // Tag used to reject mixing elements of different contexts.
  void check_same(const FieldElt& a, const FieldElt& b) const;

 private:
  FieldCtx() = default;
  void build_tables(std::uint32_t gen_code);

  std::uint32_t p_ = 0, m_ = 0, q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;  // exp_[k] = code of g^k, k in [0, q-2]
  std::vector<std::uint32_t> log_;  // log_[code], code != 0
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint16_t> add_table_;  // only for q <= 256
};

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace prohecke::gf
