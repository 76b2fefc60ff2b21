#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sobmom/matrix.hpp"

namespace sobmom {

/// Finitely supported function on N^2, i.e. a bivariate polynomial in the
/// convolution algebra; only nonzero entries are stored.
template <class S>
struct FinSupportPoly {
    std::map<std::pair<int, int>, S> support;

    static FinSupportPoly delta(int m, int n, S coeff = field<S>::one()) {
        FinSupportPoly p;
        p.add(m, n, std::move(coeff));
        return p;
    }

    void add(int m, int n, const S& v) {
        if (field<S>::is_zero(v)) return;
        auto key = std::make_pair(m, n);
        auto it = support.find(key);
        if (it == support.end()) {
            support.emplace(key, v);
        } else {
            it->second += v;
            if (field<S>::is_zero(it->second)) support.erase(it);
        }
    }

    bool zero() const { return support.empty(); }
    int degree() const {
        int d = -1;
        for (const auto& [mn, c] : support) d = std::max(d, mn.first + mn.second);
        return d;
    }

    bool operator==(const FinSupportPoly& o) const { return support == o.support; }
};

template <class S>
FinSupportPoly<S> operator+(const FinSupportPoly<S>& a, const FinSupportPoly<S>& b) {
    FinSupportPoly<S> out = a;
    for (const auto& [mn, c] : b.support) out.add(mn.first, mn.second, c);
    return out;
}

template <class S>
FinSupportPoly<S> operator-(const FinSupportPoly<S>& a, const FinSupportPoly<S>& b) {
    FinSupportPoly<S> out = a;
    for (const auto& [mn, c] : b.support) out.add(mn.first, mn.second, field<S>::zero() - c);
    return out;
}

/// Convolution on N^2: (a*b)(m,n) = sum a(p,q) b(m-p, n-q).
template <class S>
FinSupportPoly<S> convolve(const FinSupportPoly<S>& a, const FinSupportPoly<S>& b) {
    FinSupportPoly<S> out;
    for (const auto& [mn1, c1] : a.support)
        for (const auto& [mn2, c2] : b.support)
            out.add(mn1.first + mn2.first, mn1.second + mn2.second, c1 * c2);
    return out;
}

template <class S>
FinSupportPoly<S> poly_p0() {
    auto p = FinSupportPoly<S>::delta(1, 0);
    p.add(0, 1, field<S>::from_int(-1));
    return p;
}

/// p1 = delta_{3,0} - 3 delta_{2,1} + 3 delta_{1,2} - delta_{0,3} = p0^3.
template <class S>
FinSupportPoly<S> poly_p1() {
    return convolve(convolve(poly_p0<S>(), poly_p0<S>()), poly_p0<S>());
}

/// Image of the Gamma map: four finitely supported functions on N.
template <class S>
struct GammaImage {
    std::array<std::map<int, S>, 4> entry;  // index 2*i+j

    void add(int i, int j, int k, const S& v) {
        if (k < 0 || field<S>::is_zero(v)) return;  // delta at negative index is 0
        auto& e = entry[static_cast<std::size_t>(2 * i + j)];
        auto it = e.find(k);
        if (it == e.end()) {
            e.emplace(k, v);
        } else {
            it->second += v;
            if (field<S>::is_zero(it->second)) e.erase(it);
        }
    }

    bool zero() const {
        for (const auto& e : entry)
            if (!e.empty()) return false;
        return true;
    }

    bool operator==(const GammaImage& o) const { return entry == o.entry; }
};

/// Gamma(delta_{m,n}) = [[d_{m+n}, m d_{m+n-1}], [n d_{m+n-1}, mn d_{m+n-2}]],
/// extended linearly.
template <class S>
GammaImage<S> gamma_apply(const FinSupportPoly<S>& a) {
    GammaImage<S> g;
    for (const auto& [mn, c] : a.support) {
        const int m = mn.first, n = mn.second;
        g.add(0, 0, m + n, c);
        g.add(0, 1, m + n - 1, field<S>::from_int(m) * c);
        g.add(1, 0, m + n - 1, field<S>::from_int(n) * c);
        g.add(1, 1, m + n - 2, field<S>::from_int(static_cast<long>(m) * n) * c);
    }
    return g;
}

template <class S>
struct IdealVerdict {
    bool member = false;
    std::optional<FinSupportPoly<S>> quotient;  // convolve(p1, quotient) == input
};

namespace detail {

// Row n of Pascal's triangle as exact integers. Degrees stay tiny here, so
// recomputing per call is cheaper than sharing a cache across threads.
inline std::vector<mpz_class> binomial_row(int n) {
    std::vector<mpz_class> row = {mpz_class(1)};
    for (int k = 1; k <= n; ++k) {
        std::vector<mpz_class> next(row.size() + 1, mpz_class(1));
        for (std::size_t i = 1; i < row.size(); ++i) next[i] = row[i - 1] + row[i];
        row = std::move(next);
    }
    return row;
}

}  // namespace detail

/// Membership in the ideal generated by p1. Under delta_{m,n} <-> x^m y^n the
/// ideal is ((x-y)^3); substituting x = u+v, y = v turns it into u-adic order
/// >= 3, which is a direct coefficient test and yields an exact quotient.
template <class S>
IdealVerdict<S> ideal_membership(const FinSupportPoly<S>& a) {
    IdealVerdict<S> out;
    // A(u,v) = sum a(m,n) (u+v)^m v^n, stored as (u-power, v-power) -> coeff.
    FinSupportPoly<S> subst;
    for (const auto& [mn, c] : a.support) {
        const int m = mn.first, n = mn.second;
        const auto& row = detail::binomial_row(m);
        for (int p = 0; p <= m; ++p)
            subst.add(p, m - p + n, field<S>::from_mpz(row[static_cast<std::size_t>(p)]) * c);
    }
    for (const auto& [pq, c] : subst.support)
        if (pq.first < 3) return out;  // u-order below 3: not a member
    out.member = true;

    // Quotient: divide by u^3, then substitute back u = x-y, v = y.
    FinSupportPoly<S> quot;
    for (const auto& [pq, c] : subst.support) {
        const int p = pq.first - 3, v = pq.second;
        const auto& row = detail::binomial_row(p);
        for (int i = 0; i <= p; ++i) {
            S coeff = field<S>::from_mpz(row[static_cast<std::size_t>(i)]) * c;
            if ((p - i) % 2 == 1) coeff = field<S>::zero() - coeff;
            quot.add(i, p - i + v, coeff);
        }
    }
    out.quotient = std::move(quot);
    return out;
}

/// X_n: rows (1,...,1), (n, n-1, ..., 0), (0*n, 1*(n-1), ..., n*0).
template <class S>
Matrix<S> build_xn(int n) {
    if (n < 0) throw std::invalid_argument("build_xn: negative index");
    Matrix<S> x(3, static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        x(0, static_cast<std::size_t>(i)) = field<S>::one();
        x(1, static_cast<std::size_t>(i)) = field<S>::from_int(n - i);
        x(2, static_cast<std::size_t>(i)) = field<S>::from_int(static_cast<long>(i) * (n - i));
    }
    return x;
}

}  // namespace sobmom
