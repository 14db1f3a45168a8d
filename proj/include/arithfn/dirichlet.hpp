#pragma once

/**
 * @file dirichlet.hpp
 * @brief The convolution ring of K-valued arithmetic functions on a free
 *        commutative monoid.
 *
 * An ArithFn is an immutable evaluation DAG; every node memoizes values it
 * has computed.  Convolution is (f*g)(a) = sum over d|a of f(d) g(a/d), the
 * identity is e (1 at the monoid identity, 0 elsewhere), and f is invertible
 * exactly when f(1) != 0.  Evaluation of a shared ArithFn from several
 * threads is safe and returns identical values: memo tables are mutex
 * guarded and recomputation is deterministic.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arithfn/field.hpp"
#include "arithfn/monoid.hpp"

namespace arithfn {

namespace detail {

class FnNode {
public:
    FnNode(MonoidPtr m, FieldId k, std::string name)
        : monoid_(std::move(m)), field_(k), name_(std::move(name)) {
        if (!monoid_) throw std::invalid_argument("ArithFn: null monoid");
    }
    virtual ~FnNode() = default;

    Scalar eval(const MonoidElement& a) const {
        require_same_monoid(monoid_, a.monoid());
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(a);
            if (it != memo_.end()) return it->second;
        }
        // Compute outside the lock: recursive nodes re-enter eval, and a
        // duplicated computation is deterministic anyway.
        Scalar v = compute(a);
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(a, std::move(v)).first->second;
    }

    virtual Scalar compute(const MonoidElement& a) const = 0;
    virtual bool literal_zero() const { return false; }

    const MonoidPtr& monoid() const { return monoid_; }
    FieldId field() const { return field_; }
    const std::string& name() const { return name_; }

private:
    MonoidPtr monoid_;
    FieldId field_;
    std::string name_;
    mutable std::mutex mu_;
    mutable std::unordered_map<MonoidElement, Scalar, MonoidElementHash> memo_;
};

using NodePtr = std::shared_ptr<const FnNode>;

}  // namespace detail

/// Exception data for the finitely-listed totally multiplicative functions.
struct TotallyMultData {
    std::map<PrimeId, Scalar> values;
    Scalar default_value;  // value at every unlisted prime
};

class ArithFn;
ArithFn convolve(const ArithFn& f, const ArithFn& g);

class ArithFn {
public:
    explicit ArithFn(detail::NodePtr node) : node_(std::move(node)) {
        if (!node_) throw std::invalid_argument("ArithFn: null node");
    }

    const MonoidPtr& monoid() const { return node_->monoid(); }
    FieldId field() const { return node_->field(); }
    const std::string& name() const { return node_->name(); }

    Scalar operator()(const MonoidElement& a) const { return node_->eval(a); }

    /// Convention for the zero ideal: every arithmetic function sends it to 0.
    Scalar at_zero_ideal() const { return Scalar::zero(field()); }

    /// True only for the syntactic zero function (needed to certify v = infinity).
    bool literal_zero() const { return node_->literal_zero(); }

    bool same_node(const ArithFn& other) const { return node_ == other.node_; }

    /// Exposes the exception list when this is a TotallyMultFromPrimes node.
    const TotallyMultData* totally_mult_data() const;

    const detail::NodePtr& node() const { return node_; }

    // -- constructors for the named functions ------------------------------

    static ArithFn zero(MonoidPtr m, FieldId k);
    static ArithFn identity_e(MonoidPtr m, FieldId k);
    static ArithFn unit_u(MonoidPtr m, FieldId k);
    static ArithFn moebius(MonoidPtr m, FieldId k);
    static ArithFn divisor_count(MonoidPtr m, FieldId k);
    static ArithFn sigma(MonoidPtr m, FieldId k, unsigned long alpha);
    static ArithFn euler_phi(MonoidPtr m, FieldId k);
    static ArithFn ideal_norm(MonoidPtr m, FieldId k);
    static ArithFn totally_mult(MonoidPtr m, FieldId k, TotallyMultData data,
                                std::string name = "");
    static ArithFn from_rule(MonoidPtr m, FieldId k,
                             std::function<Scalar(const MonoidElement&)> rule, std::string name);
    static ArithFn from_table(MonoidPtr m, FieldId k,
                              std::map<MonoidElement, Scalar, GradedLess> table,
                              std::string name);
    /// Multiplicative function from values on prime powers: f(p^k) = table[{p,k}].
    /// Unlisted prime powers evaluate to 0, f(1) = 1.
    static ArithFn multiplicative_from_prime_powers(
        MonoidPtr m, FieldId k, std::map<std::pair<PrimeId, std::uint32_t>, Scalar> table,
        std::string name = "");
    /// The point mass at prime p: preimage of the series variable X_p.
    static ArithFn pi_prime(MonoidPtr m, FieldId k, PrimeId p);

private:
    detail::NodePtr node_;
};

namespace detail {

inline void require_compatible(const ArithFn& f, const ArithFn& g) {
    require_same_monoid(f.monoid(), g.monoid());
    if (!(f.field() == g.field()))
        throw std::invalid_argument("ArithFn: mixed fields " + f.field().str() + " and " +
                                    g.field().str());
}

class ZeroNode final : public FnNode {
public:
    ZeroNode(MonoidPtr m, FieldId k) : FnNode(std::move(m), k, "0") {}
    Scalar compute(const MonoidElement&) const override { return Scalar::zero(field()); }
    bool literal_zero() const override { return true; }
};

class IdentityENode final : public FnNode {
public:
    IdentityENode(MonoidPtr m, FieldId k) : FnNode(std::move(m), k, "e") {}
    Scalar compute(const MonoidElement& a) const override {
        return a.is_identity() ? Scalar::one(field()) : Scalar::zero(field());
    }
};

class UnitUNode final : public FnNode {
public:
    UnitUNode(MonoidPtr m, FieldId k) : FnNode(std::move(m), k, "u") {}
    Scalar compute(const MonoidElement&) const override { return Scalar::one(field()); }
};

class MoebiusNode final : public FnNode {
public:
    MoebiusNode(MonoidPtr m, FieldId k) : FnNode(std::move(m), k, "mu") {}
    Scalar compute(const MonoidElement& a) const override {
        for (auto& [p, e] : a.exponents())
            if (e >= 2) return Scalar::zero(field());
        Scalar v = Scalar::one(field());
        if (a.exponents().size() % 2) v = -v;
        return v;
    }
};

class TotallyMultNode final : public FnNode {
public:
    TotallyMultNode(MonoidPtr m, FieldId k, TotallyMultData data, std::string name)
        : FnNode(std::move(m), k, std::move(name)), data_(std::move(data)) {}
    Scalar compute(const MonoidElement& a) const override {
        Scalar v = Scalar::one(field());
        for (auto& [p, e] : a.exponents()) v *= value_at(p).pow(e);
        return v;
    }
    Scalar value_at(PrimeId p) const {
        auto it = data_.values.find(p);
        return it == data_.values.end() ? data_.default_value : it->second;
    }
    const TotallyMultData& data() const { return data_; }

private:
    TotallyMultData data_;
};

/// d, sigma_alpha, phi and the ideal norm share one shape: a multiplicative
/// function given by a closed form on prime powers (using prime norms).
class PrimePowerFormulaNode final : public FnNode {
public:
    enum class Kind { DivisorCount, Sigma, EulerPhi, Norm };

    PrimePowerFormulaNode(MonoidPtr m, FieldId k, Kind kind, unsigned long alpha,
                          std::string name)
        : FnNode(std::move(m), k, std::move(name)), kind_(kind), alpha_(alpha) {
        if (kind_ != Kind::DivisorCount && !monoid()->has_norms())
            throw std::domain_error("ArithFn: " + this->name() + " needs a normed monoid, " +
                                    monoid()->signature() + " has none");
    }

    Scalar compute(const MonoidElement& a) const override {
        mpz_class acc = 1;
        for (auto& [p, e] : a.exponents()) acc *= local_factor(p, e);
        return Scalar::of_int(field(), acc);
    }

private:
    mpz_class local_factor(PrimeId p, std::uint32_t e) const {
        switch (kind_) {
            case Kind::DivisorCount:
                return mpz_class(e + 1);
            case Kind::Sigma: {
                // sum of N(p)^(j*alpha) for j = 0..e
                mpz_class npa, sum = 0;
                mpz_pow_ui(npa.get_mpz_t(), monoid()->prime(p).norm.get_mpz_t(), alpha_);
                mpz_class term = 1;
                for (std::uint32_t j = 0; j <= e; ++j) {
                    sum += term;
                    term *= npa;
                }
                return sum;
            }
            case Kind::EulerPhi: {
                mpz_class np = monoid()->prime(p).norm, pe;
                mpz_pow_ui(pe.get_mpz_t(), np.get_mpz_t(), e - 1);
                return pe * (np - 1);
            }
            case Kind::Norm: {
                mpz_class pe;
                mpz_pow_ui(pe.get_mpz_t(), monoid()->prime(p).norm.get_mpz_t(), e);
                return pe;
            }
        }
        throw std::logic_error("unreachable");
    }

    Kind kind_;
    unsigned long alpha_;
};

class RuleNode final : public FnNode {
public:
    RuleNode(MonoidPtr m, FieldId k, std::function<Scalar(const MonoidElement&)> rule,
             std::string name)
        : FnNode(std::move(m), k, std::move(name)), rule_(std::move(rule)) {}
    Scalar compute(const MonoidElement& a) const override {
        Scalar v = rule_(a);
        if (!(v.field() == field()))
            throw std::invalid_argument("ArithFn rule returned a value in " + v.field().str() +
                                        ", expected " + field().str());
        return v;
    }

private:
    std::function<Scalar(const MonoidElement&)> rule_;
};

class SumNode final : public FnNode {
public:
    SumNode(ArithFn f, ArithFn g)
        : FnNode(f.monoid(), f.field(), "add(" + f.name() + "," + g.name() + ")"),
          f_(std::move(f)),
          g_(std::move(g)) {}
    Scalar compute(const MonoidElement& a) const override { return f_(a) + g_(a); }

private:
    ArithFn f_, g_;
};

class ScaleNode final : public FnNode {
public:
    ScaleNode(Scalar c, ArithFn f)
        : FnNode(f.monoid(), f.field(), "scale(" + c.str() + "," + f.name() + ")"),
          c_(std::move(c)),
          f_(std::move(f)) {}
    Scalar compute(const MonoidElement& a) const override { return c_ * f_(a); }

private:
    Scalar c_;
    ArithFn f_;
};

class ConvolveNode final : public FnNode {
public:
    ConvolveNode(ArithFn f, ArithFn g)
        : FnNode(f.monoid(), f.field(), "conv(" + f.name() + "," + g.name() + ")"),
          f_(std::move(f)),
          g_(std::move(g)) {}
    Scalar compute(const MonoidElement& a) const override {
        Scalar acc = Scalar::zero(field());
        for (auto& d : a.divisors()) acc += f_(d) * g_(d.quotient_of(a));
        return acc;
    }

private:
    ArithFn f_, g_;
};

class InverseNode final : public FnNode {
public:
    InverseNode(ArithFn f, Scalar f1_inv)
        : FnNode(f.monoid(), f.field(), "inv(" + f.name() + ")"),
          f_(std::move(f)),
          f1_inv_(std::move(f1_inv)) {}

    // g(1) = 1/f(1);  g(a) = -(1/f(1)) * sum over proper divisors d of a
    // of g(d) f(a d^{-1}).
    Scalar compute(const MonoidElement& a) const override {
        if (a.is_identity()) return f1_inv_;
        Scalar acc = Scalar::zero(field());
        for (auto& d : a.divisors()) {
            if (d == a) continue;
            acc += eval(d) * f_(d.quotient_of(a));
        }
        return -(f1_inv_ * acc);
    }

private:
    ArithFn f_;
    Scalar f1_inv_;
};

}  // namespace detail

inline ArithFn ArithFn::zero(MonoidPtr m, FieldId k) {
    return ArithFn(std::make_shared<detail::ZeroNode>(std::move(m), k));
}
inline ArithFn ArithFn::identity_e(MonoidPtr m, FieldId k) {
    return ArithFn(std::make_shared<detail::IdentityENode>(std::move(m), k));
}
inline ArithFn ArithFn::unit_u(MonoidPtr m, FieldId k) {
    return ArithFn(std::make_shared<detail::UnitUNode>(std::move(m), k));
}
inline ArithFn ArithFn::moebius(MonoidPtr m, FieldId k) {
    return ArithFn(std::make_shared<detail::MoebiusNode>(std::move(m), k));
}
inline ArithFn ArithFn::divisor_count(MonoidPtr m, FieldId k) {
    using N = detail::PrimePowerFormulaNode;
    return ArithFn(std::make_shared<N>(std::move(m), k, N::Kind::DivisorCount, 0, "d"));
}
inline ArithFn ArithFn::sigma(MonoidPtr m, FieldId k, unsigned long alpha) {
    using N = detail::PrimePowerFormulaNode;
    return ArithFn(std::make_shared<N>(std::move(m), k, N::Kind::Sigma, alpha,
                                       "sigma_" + std::to_string(alpha)));
}
inline ArithFn ArithFn::euler_phi(MonoidPtr m, FieldId k) {
    using N = detail::PrimePowerFormulaNode;
    return ArithFn(std::make_shared<N>(std::move(m), k, N::Kind::EulerPhi, 0, "phi"));
}
inline ArithFn ArithFn::ideal_norm(MonoidPtr m, FieldId k) {
    using N = detail::PrimePowerFormulaNode;
    return ArithFn(std::make_shared<N>(std::move(m), k, N::Kind::Norm, 0, "norm"));
}
inline ArithFn ArithFn::totally_mult(MonoidPtr m, FieldId k, TotallyMultData data,
                                     std::string name) {
    for (auto& [p, v] : data.values)
        if (!(v.field() == k)) throw std::invalid_argument("totally_mult: value field mismatch");
    if (!(data.default_value.field() == k))
        throw std::invalid_argument("totally_mult: default value field mismatch");
    if (name.empty()) {
        name = "tm{";
        for (auto& [p, v] : data.values) name += m->prime(p).label + ":" + v.str() + ",";
        name += "}";
    }
    return ArithFn(
        std::make_shared<detail::TotallyMultNode>(std::move(m), k, std::move(data), name));
}
inline ArithFn ArithFn::from_rule(MonoidPtr m, FieldId k,
                                  std::function<Scalar(const MonoidElement&)> rule,
                                  std::string name) {
    return ArithFn(std::make_shared<detail::RuleNode>(std::move(m), k, std::move(rule),
                                                      std::move(name)));
}
inline ArithFn ArithFn::from_table(MonoidPtr m, FieldId k,
                                   std::map<MonoidElement, Scalar, GradedLess> table,
                                   std::string name) {
    auto shared = std::make_shared<const std::map<MonoidElement, Scalar, GradedLess>>(
        std::move(table));
    auto rule = [shared, k](const MonoidElement& a) {
        auto it = shared->find(a);
        return it == shared->end() ? Scalar::zero(k) : it->second;
    };
    return ArithFn(std::make_shared<detail::RuleNode>(std::move(m), k, std::move(rule),
                                                      std::move(name)));
}
inline ArithFn ArithFn::multiplicative_from_prime_powers(
    MonoidPtr m, FieldId k, std::map<std::pair<PrimeId, std::uint32_t>, Scalar> table,
    std::string name) {
    auto shared =
        std::make_shared<const std::map<std::pair<PrimeId, std::uint32_t>, Scalar>>(
            std::move(table));
    auto rule = [shared, k](const MonoidElement& a) {
        Scalar v = Scalar::one(k);
        for (auto& [p, e] : a.exponents()) {
            auto it = shared->find({p, e});
            if (it == shared->end()) return Scalar::zero(k);
            v *= it->second;
        }
        return v;
    };
    if (name.empty()) name = "mult-table";
    return ArithFn(std::make_shared<detail::RuleNode>(std::move(m), k, std::move(rule),
                                                      std::move(name)));
}
inline ArithFn ArithFn::pi_prime(MonoidPtr m, FieldId k, PrimeId p) {
    std::string name = "pi_" + m->prime(p).label;
    auto rule = [p, k](const MonoidElement& a) {
        auto& ex = a.exponents();
        bool hit = ex.size() == 1 && ex[0].first == p && ex[0].second == 1;
        return hit ? Scalar::one(k) : Scalar::zero(k);
    };
    return ArithFn(std::make_shared<detail::RuleNode>(std::move(m), k, std::move(rule),
                                                      std::move(name)));
}

inline const TotallyMultData* ArithFn::totally_mult_data() const {
    auto* n = dynamic_cast<const detail::TotallyMultNode*>(node_.get());
    return n ? &n->data() : nullptr;
}

// ---------------------------------------------------------------------------
// Ring operations
// ---------------------------------------------------------------------------

inline ArithFn add(const ArithFn& f, const ArithFn& g) {
    detail::require_compatible(f, g);
    return ArithFn(std::make_shared<detail::SumNode>(f, g));
}

inline ArithFn scale(const Scalar& c, const ArithFn& f) {
    if (!(c.field() == f.field()))
        throw std::invalid_argument("scale: scalar field " + c.field().str() +
                                    " does not match function field " + f.field().str());
    return ArithFn(std::make_shared<detail::ScaleNode>(c, f));
}

inline ArithFn neg(const ArithFn& f) { return scale(-Scalar::one(f.field()), f); }

inline ArithFn sub(const ArithFn& f, const ArithFn& g) { return add(f, neg(g)); }

inline ArithFn convolve(const ArithFn& f, const ArithFn& g) {
    detail::require_compatible(f, g);
    return ArithFn(std::make_shared<detail::ConvolveNode>(f, g));
}

/// n-fold convolution power; n = 0 gives e.
inline ArithFn convolve_pow(const ArithFn& f, unsigned n) {
    ArithFn acc = ArithFn::identity_e(f.monoid(), f.field());
    for (unsigned i = 0; i < n; ++i) acc = convolve(acc, f);
    return acc;
}

/// Dirichlet inverse; rejects non-units (f(1) = 0) up front.
inline ArithFn dirichlet_inverse(const ArithFn& f) {
    Scalar f1 = f(MonoidElement::identity(f.monoid()));
    if (f1.is_zero())
        throw std::domain_error("dirichlet_inverse: " + f.name() +
                                " is not a unit (value 0 at the identity)");
    return ArithFn(std::make_shared<detail::InverseNode>(f, f1.inverse()));
}

/// Recover f from g = f * u:  f = g * mu.
inline ArithFn moebius_invert(const ArithFn& g) {
    return convolve(g, ArithFn::moebius(g.monoid(), g.field()));
}

// ---------------------------------------------------------------------------
// Multiplicativity probes (exhaustive on a finite window universe)
// ---------------------------------------------------------------------------

/// f(1) = 1 and f(ab) = f(a) f(b) for all coprime a, b with ab in U(W, D).
inline bool is_multiplicative(const ArithFn& f, std::span<const PrimeId> window,
                              std::uint32_t max_lambda) {
    if (!f(MonoidElement::identity(f.monoid())).is_one()) return false;
    for (auto& u : enumerate_universe(f.monoid(), window, max_lambda)) {
        auto supp = u.support();
        std::size_t r = supp.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
            ExpVec ea, eb;
            for (std::size_t i = 0; i < r; ++i) {
                auto e = u.exponent_of(supp[i]);
                if (mask & (std::size_t{1} << i))
                    ea.emplace_back(supp[i], e);
                else
                    eb.emplace_back(supp[i], e);
            }
            auto a = MonoidElement::from_exponents(f.monoid(), ea);
            auto b = MonoidElement::from_exponents(f.monoid(), eb);
            if (f(u) != f(a) * f(b)) return false;
        }
    }
    return true;
}

/// f(1) = 1 and f(ab) = f(a) f(b) for all a, b with ab in U(W, D).
inline bool is_totally_multiplicative(const ArithFn& f, std::span<const PrimeId> window,
                                      std::uint32_t max_lambda) {
    if (!f(MonoidElement::identity(f.monoid())).is_one()) return false;
    for (auto& u : enumerate_universe(f.monoid(), window, max_lambda))
        for (auto& d : u.divisors())
            if (f(u) != f(d) * f(d.quotient_of(u))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Monoid homomorphisms and pullback
// ---------------------------------------------------------------------------

/**
 * A multiplicative map M -> N given by prime images.  An image of nullopt
 * means the prime is sent to the zero ideal; the zero absorbs products.
 * Injective maps never produce it, but the convention slot is kept.
 */
class MonoidHom {
public:
    MonoidHom(MonoidPtr source, MonoidPtr target,
              std::function<std::optional<MonoidElement>(PrimeId)> prime_image,
              std::string name)
        : source_(std::move(source)),
          target_(std::move(target)),
          prime_image_(std::move(prime_image)),
          name_(std::move(name)) {}

    /// Bijection of primes between two finite monoids: i -> perm[i].
    static MonoidHom prime_permutation(MonoidPtr source, MonoidPtr target,
                                       std::vector<PrimeId> perm) {
        if (!source->finite_primes() || !target->finite_primes() ||
            source->prime_count() != perm.size() || target->prime_count() != perm.size())
            throw std::invalid_argument("prime_permutation: size mismatch");
        std::vector<bool> seen(perm.size(), false);
        for (auto p : perm) {
            if (p >= perm.size() || seen[p])
                throw std::invalid_argument("prime_permutation: not a bijection");
            seen[p] = true;
        }
        auto tgt = target;
        auto fn = [perm, tgt](PrimeId p) -> std::optional<MonoidElement> {
            return MonoidElement::prime_power(tgt, perm[p]);
        };
        return MonoidHom(std::move(source), std::move(target), std::move(fn),
                         "perm");
    }

    const MonoidPtr& source() const { return source_; }
    const MonoidPtr& target() const { return target_; }
    const std::string& name() const { return name_; }

    std::optional<MonoidElement> prime_image(PrimeId p) const { return prime_image_(p); }

    /// Multiplicative extension; nullopt (the zero ideal) is absorbing.
    std::optional<MonoidElement> apply(const MonoidElement& a) const {
        require_same_monoid(source_, a.monoid());
        MonoidElement out = MonoidElement::identity(target_);
        for (auto& [p, e] : a.exponents()) {
            auto img = prime_image_(p);
            if (!img) return std::nullopt;
            for (std::uint32_t i = 0; i < e; ++i) out = out * *img;
        }
        return out;
    }

private:
    MonoidPtr source_;
    MonoidPtr target_;
    std::function<std::optional<MonoidElement>(PrimeId)> prime_image_;
    std::string name_;
};

/// (pullback(h, g))(a) = g(h(a)), with g(zero ideal) = 0.
inline ArithFn pullback(const MonoidHom& h, const ArithFn& g) {
    require_same_monoid(h.target(), g.monoid());
    auto k = g.field();
    auto hom = h;  // value copy shared by the closure
    auto rule = [hom, g, k](const MonoidElement& a) {
        auto img = hom.apply(a);
        return img ? g(*img) : Scalar::zero(k);
    };
    return ArithFn::from_rule(h.source(), k, std::move(rule),
                              "pullback(" + h.name() + "," + g.name() + ")");
}

}  // namespace arithfn
