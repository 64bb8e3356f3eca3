#pragma once

#include "progvar/arith.hpp"

#include <optional>
#include <span>
#include <vector>

namespace progvar {

/// Dickman rho on a uniform grid. On (1, 2] the table integrates
/// rho(u) = 1 - int_1^u rho(t-1)/t dt with the exact weight 1/t; beyond 2 it
/// solves the trapezoid form of u rho(u) = int_{u-1}^u rho(t) dt.
class DickmanTable {
public:
    static constexpr double kDefaultStep = 1e-3;
    static constexpr double kDefaultUMax = 20.0;

    explicit DickmanTable(double u_max = kDefaultUMax, double step = kDefaultStep);

    double operator()(double u) const;
    double step() const { return step_; }
    double u_max() const { return u_max_; }
    std::span<const double> values() const { return values_; }

private:
    double step_;
    double u_max_;
    std::size_t per_unit_;
    std::vector<double> values_;
};

/// rho(u) with the default-resolution table.
double dickman(double u);

/// #{n <= X : P^+(n) <= Y, (n, q) = 1}.
u64 psi_q(double X, double Y, u64 q, const PrimeTable &table);
/// Same count restricted to X1 < n <= X2.
u64 psi_q_between(double X1, double X2, double Y, u64 q, const PrimeTable &table);

/// sum over X1 < n <= X2, P^+(n) <= Y, (n, q) = 1 of 1/n.
double smooth_recip_sum(double X1, double X2, double Y, u64 q, const PrimeTable &table);

struct CanonicalSplit {
    u64 d;
    u64 m;
    friend bool operator==(const CanonicalSplit &, const CanonicalSplit &) = default;
};

/// n = d m with d in [x^{1/2}/P^-(m), x^{1/2}) and P^+(d) <= P^-(m):
/// d is the longest prefix of the ascending prime list whose product stays
/// below x^{1/2}.
CanonicalSplit canonical_factorization(u64 n, double x, const PrimeTable &table);

struct ThetaLadder {
    double eta;
    double eps;
    u64 J;
    /// theta_0 .. theta_{J+1}, theta_j = eta (1 - eps^2)^j
    std::vector<double> thetas;
    /// floor(eps^{-1.1})
    u64 H;
};

ThetaLadder theta_ladder(double eta, double eps);

/// Level j <= J with P^-(m) in (x^{theta_{j+1}}, x^{theta_j}], P^+(d) <= x^{theta_{j+1}}
/// and d > x^{1/2 - theta_{j+1}}, where (d, m) is the canonical split of n.
std::optional<u64> sj_membership(u64 n, double x, const ThetaLadder &ladder, const PrimeTable &table);

} // namespace progvar
