#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "morita/errors.hpp"

namespace morita {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

enum class FieldKind { Rationals, PrimeField };

/// An exact coefficient field: the rationals, or a prime field F_p.
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    std::uint64_t p = 0;  // modulus, PrimeField only

    bool operator==(const FieldSpec&) const = default;

    std::string str() const;
};

FieldSpec rationals();

/// Validates primality (p >= 2, p < 2^32 so products fit in 64 bits).
FieldSpec prime_field(std::uint64_t p);

bool is_prime(std::uint64_t p);

/// An exact field element. Arithmetic never rounds: rationals are kept in
/// lowest terms with normalized sign, residues in [0, p).
class Scalar {
public:
    Scalar() : field_{FieldKind::Rationals, 0}, value_(std::uint64_t{0}) {}

    static Scalar zero(const FieldSpec& f);
    static Scalar one(const FieldSpec& f);
    static Scalar from_int(const FieldSpec& f, long long v);
    static Scalar from_rational(Rational q);

    /// Parses "a" or "a/b" over the rationals, an integer (normalized mod p)
    /// over a prime field.
    static Scalar parse(const FieldSpec& f, std::string_view text);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar inv() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);

    /// *this += a*b without intermediate temporaries where possible.
    void add_mul(const Scalar& a, const Scalar& b);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a *= b.inv(); }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Canonical form: "n/d" or "n" over Q, decimal residue over F_p.
    std::string str() const;

    const Rational& rational() const;
    std::uint64_t residue() const;

private:
    Scalar(FieldSpec f, std::uint64_t r) : field_(f), value_(r) {}
    Scalar(FieldSpec f, Rational q) : field_(f), value_(std::move(q)) {}

    void check_same_field(const Scalar& o) const;

    FieldSpec field_;
    std::variant<std::uint64_t, Rational> value_;
};

}  // namespace morita
