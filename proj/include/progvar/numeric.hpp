#pragma once

#include "progvar/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace progvar {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

/// Neumaier-compensated accumulator. The result does not depend on the
/// order of summation beyond the last few ulps.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum &operator+=(double v)
    {
        add(v);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    void add(cplx v)
    {
        re_.add(v.real());
        im_.add(v.imag());
    }
    CompensatedComplexSum &operator+=(cplx v)
    {
        add(v);
        return *this;
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_, im_;
};

/// Shortest round-trip decimal form of v ("1000", "0.5", "1e-09").
inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline u64 checked_mul(u64 a, u64 b)
{
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw CapacityError("64-bit overflow in " + std::to_string(a) + " * " + std::to_string(b));
    return r;
}

inline u64 checked_add(u64 a, u64 b)
{
    u64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw CapacityError("64-bit overflow in " + std::to_string(a) + " + " + std::to_string(b));
    return r;
}

inline u64 isqrt(u64 n)
{
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r)
        --r;
    while ((r + 1) <= n / (r + 1))
        ++r;
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m)
{
    if (m == 1)
        return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Least nonnegative residue of n modulo q.
inline u64 reduce(i64 n, u64 q)
{
    const i64 r = n % static_cast<i64>(q);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

/// Exact rational with int64 numerator/denominator, kept reduced.
class Rational {
public:
    Rational() = default;
    Rational(i64 num, i64 den = 1) : num_(num), den_(den)
    {
        if (den_ == 0)
            throw DomainError("rational with zero denominator");
        normalize();
    }

    i64 num() const { return num_; }
    i64 den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational &a, const Rational &b)
    {
        const i64 g = std::gcd(a.den_, b.den_);
        i64 lhs, rhs, num, den;
        if (__builtin_mul_overflow(a.num_, b.den_ / g, &lhs) ||
            __builtin_mul_overflow(b.num_, a.den_ / g, &rhs) ||
            __builtin_add_overflow(lhs, rhs, &num) ||
            __builtin_mul_overflow(a.den_ / g, b.den_, &den))
            throw CapacityError("rational overflow");
        return Rational(num, den);
    }
    friend bool operator==(const Rational &a, const Rational &b) = default;

private:
    void normalize()
    {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const i64 g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    i64 num_ = 0;
    i64 den_ = 1;
};

/// Runs fn(i) for i in [0, n) over up to `workers` threads. Each index is
/// written by exactly one worker, so per-index outputs stay deterministic.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn &&fn)
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers)
                        fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace progvar
