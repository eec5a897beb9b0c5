#include "dgforge/scalar.hpp"

namespace dgforge {

std::string Field::describe() const {
    return p == 0 ? "Q" : "F_" + std::to_string(p);
}

Field rationals() { return Field{0}; }

Field prime_field(unsigned long p) {
    mpz_class m(static_cast<unsigned long>(p));
    if (p < 2 || mpz_probab_prime_p(m.get_mpz_t(), 40) == 0)
        throw ValidationError("prime-field modulus " + std::to_string(p) + " is not prime");
    return Field{p};
}

Scalar::Scalar(const Field& f, long v) : q_(v), mod_(f.p) { reduce(); }

Scalar::Scalar(const Field& f, const mpq_class& v) : q_(v), mod_(f.p) {
    q_.canonicalize();
    reduce();
}

void Scalar::reduce() {
    if (mod_ == 0) return;
    mpz_class p(mod_);
    mpz_class num = q_.get_num(), den = q_.get_den();
    num %= p;
    if (num < 0) num += p;
    if (den != 1) {
        mpz_class deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            throw ValidationError("denominator not invertible mod " + std::to_string(mod_));
        num = (num * deninv) % p;
    }
    q_ = mpq_class(num);
}

Scalar Scalar::parse(const Field& f, const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw ValidationError("malformed rational literal '" + text + "'");
    q.canonicalize();
    if (q.get_den() == 0)
        throw ValidationError("zero denominator in '" + text + "'");
    return Scalar(f, q);
}

static void check_same_field(unsigned long a, unsigned long b) {
    if (a != b)
        throw ValidationError("mixed-field arithmetic (" + Field{a}.describe() + " vs " +
                              Field{b}.describe() + ")");
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(mod_, o.mod_);
    Scalar r(Field{mod_});
    r.q_ = q_ + o.q_;
    r.reduce();
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_field(mod_, o.mod_);
    Scalar r(Field{mod_});
    r.q_ = q_ - o.q_;
    r.reduce();
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(mod_, o.mod_);
    Scalar r(Field{mod_});
    r.q_ = q_ * o.q_;
    r.reduce();
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r(Field{mod_});
    r.q_ = -q_;
    r.reduce();
    return r;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw ValidationError("inverse of zero");
    Scalar r(Field{mod_});
    if (mod_ == 0) {
        r.q_ = 1 / q_;
    } else {
        mpz_class p(mod_), inv;
        mpz_class num = q_.get_num();
        if (mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()) == 0)
            throw ValidationError("non-invertible residue");
        r.q_ = mpq_class(inv);
        r.reduce();
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    check_same_field(mod_, o.mod_);
    return q_ == o.q_;
}

std::string Scalar::str() const { return q_.get_str(); }

}  // namespace dgforge
