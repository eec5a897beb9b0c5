#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace dgforge {

// Thrown when input data violates a structural invariant. The message names
// the first violated identity.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal-consistency trap: two routes that must agree disagreed.
// This is an implementation fault, never a user error.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// Coefficient field: the rationals (p == 0) or a prime field F_p.
struct Field {
    unsigned long p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const Field&) const = default;
    std::string describe() const;
};

Field rationals();
Field prime_field(unsigned long p);  // throws ValidationError if p is not prime

// Exact field element. Over Q the value is a canonical reduced fraction
// (positive denominator); over F_p it is the residue in [0, p).
class Scalar {
  public:
    Scalar() : mod_(0) {}
    explicit Scalar(const Field& f) : mod_(f.p) {}
    Scalar(const Field& f, long v);
    Scalar(const Field& f, const mpq_class& v);

    static Scalar zero(const Field& f) { return Scalar(f); }
    static Scalar one(const Field& f) { return Scalar(f, 1); }
    // Parses "p", "-p" or "p/q"; over F_p the quotient is computed mod p.
    static Scalar parse(const Field& f, const std::string& text);

    const Field field() const { return Field{mod_}; }
    bool is_zero() const { return q_ == 0; }
    const mpq_class& value() const { return q_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;  // throws ValidationError on zero
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;  // "p" or "p/q", bit-exact round trip with parse

  private:
    void reduce();
    mpq_class q_;
    unsigned long mod_;
};

}  // namespace dgforge
