#include "morita/field.hpp"

#include <charconv>

namespace morita {

std::string FieldSpec::str() const {
    if (kind == FieldKind::Rationals) return "Q";
    return "F_" + std::to_string(p);
}

FieldSpec rationals() { return FieldSpec{FieldKind::Rationals, 0}; }

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

FieldSpec prime_field(std::uint64_t p) {
    if (p >= (std::uint64_t{1} << 32))
        throw MalformedInput("prime modulus too large: " + std::to_string(p));
    if (!is_prime(p)) throw MalformedInput("modulus is not prime: " + std::to_string(p));
    return FieldSpec{FieldKind::PrimeField, p};
}

namespace {

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on (a, p), a in [1, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw MoritaError("non-invertible residue");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

Scalar Scalar::zero(const FieldSpec& f) {
    if (f.kind == FieldKind::Rationals) return Scalar(f, Rational(0));
    return Scalar(f, std::uint64_t{0});
}

Scalar Scalar::one(const FieldSpec& f) {
    if (f.kind == FieldKind::Rationals) return Scalar(f, Rational(1));
    return Scalar(f, std::uint64_t{1} % f.p);
}

Scalar Scalar::from_int(const FieldSpec& f, long long v) {
    if (f.kind == FieldKind::Rationals) return Scalar(f, Rational(v));
    long long m = v % static_cast<long long>(f.p);
    if (m < 0) m += static_cast<long long>(f.p);
    return Scalar(f, static_cast<std::uint64_t>(m));
}

Scalar Scalar::from_rational(Rational q) { return Scalar(rationals(), std::move(q)); }

Scalar Scalar::parse(const FieldSpec& f, std::string_view text) {
    if (text.empty()) throw ParseError("empty scalar");
    try {
        const std::string s(text);
        if (f.kind == FieldKind::Rationals) {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return Scalar(f, Rational(Integer(s)));
            Integer num(s.substr(0, slash));
            Integer den(s.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator");
            // division canonicalizes sign and gcd
            return Scalar(f, Rational(num) / Rational(den));
        }
        Integer z(s);
        Integer m = z % Integer(f.p);
        if (m < 0) m += Integer(f.p);
        return Scalar(f, static_cast<std::uint64_t>(m));
    } catch (const std::exception&) {
        throw ParseError("cannot parse scalar '" + std::string(text) + "' over " + f.str());
    }
}

bool Scalar::is_zero() const {
    if (field_.kind == FieldKind::Rationals) return std::get<Rational>(value_).is_zero();
    return std::get<std::uint64_t>(value_) == 0;
}

bool Scalar::is_one() const {
    if (field_.kind == FieldKind::Rationals) return std::get<Rational>(value_) == 1;
    return std::get<std::uint64_t>(value_) == 1 % field_.p;
}

void Scalar::check_same_field(const Scalar& o) const {
    if (field_ != o.field_)
        throw FieldMismatch("scalar over " + field_.str() + " mixed with scalar over " + o.field_.str());
}

Scalar Scalar::operator-() const {
    if (field_.kind == FieldKind::Rationals) return Scalar(field_, Rational(-std::get<Rational>(value_)));
    std::uint64_t r = std::get<std::uint64_t>(value_);
    return Scalar(field_, r == 0 ? 0 : field_.p - r);
}

Scalar Scalar::inv() const {
    if (is_zero()) throw MoritaError("inverse of zero");
    if (field_.kind == FieldKind::Rationals)
        return Scalar(field_, Rational(1) / std::get<Rational>(value_));
    return Scalar(field_, mod_inverse(std::get<std::uint64_t>(value_), field_.p));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same_field(o);
    if (field_.kind == FieldKind::Rationals) {
        std::get<Rational>(value_) += std::get<Rational>(o.value_);
    } else {
        std::uint64_t& r = std::get<std::uint64_t>(value_);
        r += std::get<std::uint64_t>(o.value_);
        if (r >= field_.p) r -= field_.p;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same_field(o);
    if (field_.kind == FieldKind::Rationals) {
        std::get<Rational>(value_) -= std::get<Rational>(o.value_);
    } else {
        std::uint64_t& r = std::get<std::uint64_t>(value_);
        std::uint64_t s = std::get<std::uint64_t>(o.value_);
        r = (r >= s) ? r - s : r + field_.p - s;
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same_field(o);
    if (field_.kind == FieldKind::Rationals) {
        std::get<Rational>(value_) *= std::get<Rational>(o.value_);
    } else {
        std::uint64_t& r = std::get<std::uint64_t>(value_);
        r = (r * std::get<std::uint64_t>(o.value_)) % field_.p;
    }
    return *this;
}

void Scalar::add_mul(const Scalar& a, const Scalar& b) {
    a.check_same_field(b);
    check_same_field(a);
    if (field_.kind == FieldKind::Rationals) {
        const Rational& x = std::get<Rational>(a.value_);
        const Rational& y = std::get<Rational>(b.value_);
        if (x.is_zero() || y.is_zero()) return;
        std::get<Rational>(value_) += x * y;
    } else {
        std::uint64_t& r = std::get<std::uint64_t>(value_);
        r = (r + std::get<std::uint64_t>(a.value_) * std::get<std::uint64_t>(b.value_)) % field_.p;
    }
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    return value_ == o.value_;
}

std::string Scalar::str() const {
    if (field_.kind == FieldKind::Rationals) return std::get<Rational>(value_).str();
    return std::to_string(std::get<std::uint64_t>(value_));
}

const Rational& Scalar::rational() const {
    if (field_.kind != FieldKind::Rationals) throw FieldMismatch("not a rational scalar");
    return std::get<Rational>(value_);
}

std::uint64_t Scalar::residue() const {
    if (field_.kind != FieldKind::PrimeField) throw FieldMismatch("not a prime-field scalar");
    return std::get<std::uint64_t>(value_);
}

}  // namespace morita
