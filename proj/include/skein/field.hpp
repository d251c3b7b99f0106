#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace skein {

// Exact rationals. All default computations run over this field.
using Rational = boost::multiprecision::cpp_rational;

// Prime field for small compile-time primes (the CLI exposes a fixed menu).
// P is assumed prime; inverses use Fermat's little theorem.
template <unsigned P>
struct Fp {
    static_assert(P >= 2, "prime modulus required");
    std::uint32_t v = 0;

    constexpr Fp() = default;
    constexpr Fp(long long x) {
        long long m = x % static_cast<long long>(P);
        if (m < 0) m += P;
        v = static_cast<std::uint32_t>(m);
    }

    friend constexpr Fp operator+(Fp a, Fp b) { return Fp(static_cast<long long>(a.v) + b.v); }
    friend constexpr Fp operator-(Fp a, Fp b) { return Fp(static_cast<long long>(a.v) - b.v); }
    friend constexpr Fp operator*(Fp a, Fp b) { return Fp(static_cast<long long>(a.v) * b.v); }
    constexpr Fp operator-() const { return Fp(-static_cast<long long>(v)); }
    friend constexpr bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend constexpr bool operator!=(Fp a, Fp b) { return a.v != b.v; }

    constexpr Fp inverse() const {
        if (v == 0) throw std::domain_error("division by zero in F_p");
        // v^(P-2) mod P
        std::uint64_t base = v, acc = 1;
        unsigned e = P - 2;
        while (e) {
            if (e & 1) acc = acc * base % P;
            base = base * base % P;
            e >>= 1;
        }
        Fp r;
        r.v = static_cast<std::uint32_t>(acc);
        return r;
    }
    friend constexpr Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }
};

// Uniform helpers so templated code never branches on the field type.

template <class F>
struct FieldInfo;

template <>
struct FieldInfo<Rational> {
    static constexpr unsigned characteristic = 0;
    static std::string name() { return "q"; }
    static std::string to_string(const Rational& x) { return x.str(); }
    static Rational from_string(const std::string& s) { return Rational(s); }
};

template <unsigned P>
struct FieldInfo<Fp<P>> {
    static constexpr unsigned characteristic = P;
    static std::string name() { return std::to_string(P); }
    static std::string to_string(Fp<P> x) { return std::to_string(x.v); }
    static Fp<P> from_string(const std::string& s) { return Fp<P>(std::stoll(s)); }
};

template <class F>
inline F field_inverse(const F& x) { return x.inverse(); }

inline Rational field_inverse(const Rational& x) {
    if (x == 0) throw std::domain_error("division by zero in Q");
    return Rational(1) / x;
}

template <class F>
inline bool is_zero(const F& x) { return x == F(0); }

} // namespace skein
