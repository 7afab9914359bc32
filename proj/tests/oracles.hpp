#pragma once

// Reference computations used only by tests. Each one takes a different
// route from the library code it checks.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

// Student t density.
inline double t_density(double x, double nu) {
    const double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * M_PI);
    return c * std::pow(1 + x * x / nu, -(nu + 1) / 2);
}

// P(0 <= T <= x) by composite Simpson's rule.
inline double t_half_mass(double x, double nu, int steps = 20000) {
    const double h = x / steps;
    double s = t_density(0, nu) + t_density(x, nu);
    for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * t_density(i * h, nu);
    return s * h / 3;
}

// Two-tailed critical value: the x with P(|T| <= x) = ci, by bisection.
inline double t_critical(double ci, int dof) {
    double lo = 0, hi = 1;
    while (2 * t_half_mass(hi, dof) < ci) hi *= 2;
    for (int i = 0; i < 60; ++i) {
        const double mid = (lo + hi) / 2;
        (2 * t_half_mass(mid, dof) < ci ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

// Unpooled t statistic in 50-digit arithmetic.
inline double t_value(std::span<const double> a, std::span<const double> b) {
    using F = boost::multiprecision::cpp_bin_float_50;
    auto moments = [](std::span<const double> v) {
        F sum = 0;
        for (double x : v) sum += x;
        const F mean = sum / v.size();
        F ss = 0;
        for (double x : v) ss += (F(x) - mean) * (F(x) - mean);
        return std::make_pair(mean, ss / (v.size() - 1));
    };
    const auto [ma, va] = moments(a);
    const auto [mb, vb] = moments(b);
    const F t = (ma - mb) / boost::multiprecision::sqrt(va / a.size() + vb / b.size());
    return static_cast<double>(t);
}

struct Obs {
    int x;
    std::string z;
    double y;
};

// sum_y y * sum_z P(y | x, z) P(z), enumerating the empirical joint of
// (x, z, y) outcome by outcome.
inline double backdoor(const std::vector<Obs>& obs, int x) {
    std::map<std::tuple<int, std::string, double>, long> joint;
    std::map<std::pair<int, std::string>, long> xz;
    std::map<std::string, long> z_count;
    for (const auto& o : obs) {
        ++joint[{o.x, o.z, o.y}];
        ++xz[{o.x, o.z}];
        ++z_count[o.z];
    }
    long double e = 0;
    const long double n = obs.size();
    for (const auto& [key, count] : joint) {
        const auto& [jx, jz, jy] = key;
        if (jx != x) continue;
        const long double p_y_given_xz = static_cast<long double>(count) / xz.at({jx, jz});
        const long double p_z = z_count.at(jz) / n;
        e += jy * p_y_given_xz * p_z;
    }
    return static_cast<double>(e);
}

} // namespace oracle
