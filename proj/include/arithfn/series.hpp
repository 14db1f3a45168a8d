#pragma once

/**
 * @file series.hpp
 * @brief Truncated multivariate power series and the coefficient
 *        correspondence with arithmetic functions.
 *
 * An arithmetic function supported on a prime window maps to the series
 * whose X^(n(a)) coefficient is f(a); that map is linear, sends convolution
 * to the series product and e to 1.  Truncation keeps monomials of total
 * degree at most D, which is exactly the data of f on U(window, D).
 */

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "arithfn/dirichlet.hpp"
#include "arithfn/field.hpp"
#include "arithfn/monoid.hpp"

namespace arithfn {

class TruncatedSeries {
public:
    TruncatedSeries(MonoidPtr m, FieldId k, std::vector<PrimeId> window,
                    std::uint32_t degree_bound)
        : monoid_(std::move(m)), field_(k), window_(std::move(window)), degree_(degree_bound) {
        std::sort(window_.begin(), window_.end());
        if (std::adjacent_find(window_.begin(), window_.end()) != window_.end())
            throw std::invalid_argument("TruncatedSeries: duplicate window prime");
    }

    static TruncatedSeries zero(MonoidPtr m, FieldId k, std::vector<PrimeId> w,
                                std::uint32_t D) {
        return TruncatedSeries(std::move(m), k, std::move(w), D);
    }
    static TruncatedSeries constant(MonoidPtr m, FieldId k, std::vector<PrimeId> w,
                                    std::uint32_t D, const Scalar& c) {
        TruncatedSeries s(std::move(m), k, std::move(w), D);
        s.set_coeff({}, c);
        return s;
    }
    /// The variable X_p; p must lie in the window.
    static TruncatedSeries variable(MonoidPtr m, FieldId k, std::vector<PrimeId> w,
                                    std::uint32_t D, PrimeId p) {
        TruncatedSeries s(std::move(m), k, std::move(w), D);
        s.require_in_window(p);
        if (D >= 1) s.set_coeff({{p, 1}}, Scalar::one(k));
        return s;
    }

    const MonoidPtr& monoid() const { return monoid_; }
    FieldId field() const { return field_; }
    const std::vector<PrimeId>& window() const { return window_; }
    std::uint32_t degree_bound() const { return degree_; }
    const std::map<ExpVec, Scalar, ExpGradedLess>& coefficients() const { return coeffs_; }

    Scalar coeff(const ExpVec& mono) const {
        auto it = coeffs_.find(mono);
        return it == coeffs_.end() ? Scalar::zero(field_) : it->second;
    }

    /// Stores c as the coefficient of the monomial; zeros are not kept.
    void set_coeff(ExpVec mono, const Scalar& c) {
        std::sort(mono.begin(), mono.end());
        std::uint32_t deg = 0;
        for (auto& [p, e] : mono) {
            require_in_window(p);
            if (e == 0) throw std::invalid_argument("TruncatedSeries: zero exponent entry");
            deg += e;
        }
        if (deg > degree_)
            throw std::invalid_argument("TruncatedSeries: monomial degree " +
                                        std::to_string(deg) + " exceeds bound " +
                                        std::to_string(degree_));
        if (!(c.field() == field_))
            throw std::invalid_argument("TruncatedSeries: coefficient field mismatch");
        if (c.is_zero())
            coeffs_.erase(mono);
        else
            coeffs_.insert_or_assign(std::move(mono), c);
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.require_compatible(b);
        TruncatedSeries out = a;
        for (auto& [m, c] : b.coeffs_) out.set_coeff(m, out.coeff(m) + c);
        return out;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.require_compatible(b);
        TruncatedSeries out = a;
        for (auto& [m, c] : b.coeffs_) out.set_coeff(m, out.coeff(m) - c);
        return out;
    }

    TruncatedSeries scaled(const Scalar& c) const {
        TruncatedSeries out(monoid_, field_, window_, degree_);
        for (auto& [m, v] : coeffs_) out.set_coeff(m, c * v);
        return out;
    }

    /// Cauchy product, truncated at the shared degree bound.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.require_compatible(b);
        TruncatedSeries out(a.monoid_, a.field_, a.window_, a.degree_);
        for (auto& [ma, ca] : a.coeffs_)
            for (auto& [mb, cb] : b.coeffs_) {
                std::uint32_t deg = 0;
                ExpVec m = merge(ma, mb, deg);
                if (deg > a.degree_) continue;
                out.set_coeff(m, out.coeff(m) + ca * cb);
            }
        return out;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.require_compatible(b);
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) {
        return !(a == b);
    }

    /// Least total degree carrying a nonzero coefficient; nullopt means +infinity
    /// (the zero truncation).
    std::optional<std::uint32_t> w() const {
        if (coeffs_.empty()) return std::nullopt;
        // graded map order: the first key has minimal degree
        std::uint32_t deg = 0;
        for (auto& [p, e] : coeffs_.begin()->first) deg += e;
        return deg;
    }

    /// "1 - X_2 - X_3 + X_2*X_3" in graded monomial order; "0" when empty.
    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (auto& [m, c] : coeffs_) {
            bool negative = !field_.is_rationals() ? false : c.value() < 0;
            Scalar mag = negative ? -c : c;
            if (out.empty())
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            std::string mono = monomial_str(m);
            if (mono.empty())
                out += mag.str();
            else if (mag.is_one())
                out += mono;
            else
                out += mag.str() + "*" + mono;
        }
        return out;
    }

private:
    static ExpVec merge(const ExpVec& a, const ExpVec& b, std::uint32_t& deg) {
        ExpVec out;
        auto i = a.begin(), j = b.begin();
        while (i != a.end() || j != b.end()) {
            if (j == b.end() || (i != a.end() && i->first < j->first))
                out.push_back(*i++);
            else if (i == a.end() || j->first < i->first)
                out.push_back(*j++);
            else {
                out.emplace_back(i->first, i->second + j->second);
                ++i, ++j;
            }
        }
        deg = 0;
        for (auto& [p, e] : out) deg += e;
        return out;
    }

    std::string monomial_str(const ExpVec& m) const {
        std::string out;
        for (auto& [p, e] : m) {
            if (!out.empty()) out += "*";
            out += "X_" + monoid_->prime(p).label;
            if (e != 1) out += "^" + std::to_string(e);
        }
        return out;
    }

    void require_in_window(PrimeId p) const {
        if (!std::binary_search(window_.begin(), window_.end(), p))
            throw std::invalid_argument("TruncatedSeries: prime " + monoid_->prime(p).label +
                                        " is outside the window");
    }

    void require_compatible(const TruncatedSeries& b) const {
        require_same_monoid(monoid_, b.monoid_);
        if (!(field_ == b.field_) || window_ != b.window_ || degree_ != b.degree_)
            throw std::invalid_argument(
                "TruncatedSeries: mixed windows, degree bounds or fields");
    }

    MonoidPtr monoid_;
    FieldId field_;
    std::vector<PrimeId> window_;
    std::uint32_t degree_;
    std::map<ExpVec, Scalar, ExpGradedLess> coeffs_;
};

/// Coefficient transform: (phi f) has X^(n(a)) coefficient f(a) for a in
/// U(window, D).
inline TruncatedSeries phi(const ArithFn& f, std::vector<PrimeId> window, std::uint32_t D) {
    TruncatedSeries out(f.monoid(), f.field(), std::move(window), D);
    for (auto& a : enumerate_universe(f.monoid(), out.window(), D))
        out.set_coeff(a.exponents(), f(a));
    return out;
}

/// Inverse direction: the arithmetic function reading coefficients off F.
/// Elements outside the window universe evaluate to 0.
inline ArithFn phi_inverse(const TruncatedSeries& F) {
    auto window = F.window();
    auto D = F.degree_bound();
    auto k = F.field();
    auto rule = [F, window, D, k](const MonoidElement& a) {
        if (a.lambda() > D) return Scalar::zero(k);
        for (auto& [p, e] : a.exponents())
            if (!std::binary_search(window.begin(), window.end(), p))
                return Scalar::zero(k);
        return F.coeff(a.exponents());
    };
    return ArithFn::from_rule(F.monoid(), k, std::move(rule), "phi_inv");
}

/**
 * Partial sum of the series expansion of f: the first t elements a_1..a_t of
 * the window universe in graded order contribute f(a_k) * prod_p pi_p^(n_p),
 * where pi_p is the point mass at p.  Built literally from convolution
 * powers, so it exercises the same product structure the series does.
 */
inline ArithFn partial_sum(const ArithFn& f, const std::vector<PrimeId>& window,
                           std::size_t t) {
    std::uint32_t D = 0;
    auto universe = enumerate_universe(f.monoid(), window, D);
    while (universe.size() < t) universe = enumerate_universe(f.monoid(), window, ++D);
    auto k = f.field();
    ArithFn acc = ArithFn::zero(f.monoid(), k);
    for (std::size_t i = 0; i < t; ++i) {
        const auto& a = universe[i];
        ArithFn mono = ArithFn::identity_e(f.monoid(), k);
        for (auto& [p, e] : a.exponents())
            mono = convolve(mono, convolve_pow(ArithFn::pi_prime(f.monoid(), k, p), e));
        acc = add(acc, scale(f(a), mono));
    }
    return acc;
}

/**
 * Variable renaming along a prime bijection (the series side of a monoid
 * isomorphism): coefficients move to the target monoid's primes via var_map,
 * which must cover every window prime injectively.
 */
inline TruncatedSeries rename_variables(const TruncatedSeries& F, const MonoidPtr& target,
                                        const std::map<PrimeId, PrimeId>& var_map) {
    std::vector<PrimeId> window;
    for (PrimeId p : F.window()) {
        auto it = var_map.find(p);
        if (it == var_map.end())
            throw std::invalid_argument("rename_variables: window prime not mapped");
        window.push_back(it->second);
    }
    std::sort(window.begin(), window.end());
    if (std::adjacent_find(window.begin(), window.end()) != window.end())
        throw std::invalid_argument("rename_variables: map is not injective on the window");
    TruncatedSeries out(target, F.field(), std::move(window), F.degree_bound());
    for (auto& [m, c] : F.coefficients()) {
        ExpVec renamed;
        for (auto& [p, e] : m) renamed.emplace_back(var_map.at(p), e);
        std::sort(renamed.begin(), renamed.end());
        out.set_coeff(std::move(renamed), c);
    }
    return out;
}

}  // namespace arithfn
