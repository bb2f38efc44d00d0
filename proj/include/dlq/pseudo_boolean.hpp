#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlq {

using VarId = std::uint32_t;
inline constexpr VarId kNoVar = 0xffffffffu;

enum class VarRole : std::uint8_t { Exponent, Register, Product, Multiplicity, Plain };

struct VarInfo {
    std::string name;
    VarRole role = VarRole::Plain;
    int stage = -1;
    int position = -1;        // exponent index or register bit position
    VarId factor_a = kNoVar;  // product bits record both factors
    VarId factor_b = kNoVar;
    int owner = -1;           // multiplicity bits record their constraint
};

class VarRegistry {
public:
    VarId add(VarInfo info) {
        vars_.push_back(std::move(info));
        return static_cast<VarId>(vars_.size() - 1);
    }

    VarId add_plain(std::string name) {
        VarInfo info;
        info.name = std::move(name);
        return add(std::move(info));
    }

    const VarInfo& operator[](VarId v) const { return vars_.at(v); }
    const std::string& name(VarId v) const { return vars_.at(v).name; }
    std::size_t size() const { return vars_.size(); }

private:
    std::vector<VarInfo> vars_;
};

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

/// Integer-valued affine expression over named binary variables.
/// Terms are kept sorted by VarId with no zero coefficients, so
/// equality is structural.
class LinExpr {
public:
    LinExpr() = default;
    LinExpr(std::int64_t c) : constant_(c) {}

    static LinExpr variable(VarId v, std::int64_t coeff = 1) {
        LinExpr e;
        if (coeff != 0) e.terms_.emplace_back(v, coeff);
        return e;
    }

    std::int64_t constant() const { return constant_; }
    const std::vector<std::pair<VarId, std::int64_t>>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }

    std::int64_t coeff(VarId v) const {
        auto it = find(v);
        return it != terms_.end() && it->first == v ? it->second : 0;
    }

    /// The variable w when this expression is exactly 1*w, else nullopt.
    std::optional<VarId> as_bare_var() const {
        if (constant_ == 0 && terms_.size() == 1 && terms_[0].second == 1) return terms_[0].first;
        return std::nullopt;
    }

    LinExpr& add_term(VarId v, std::int64_t c) {
        auto it = find(v);
        if (it != terms_.end() && it->first == v) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        } else if (c != 0) {
            terms_.insert(it, {v, c});
        }
        return *this;
    }

    LinExpr& operator+=(const LinExpr& o) {
        constant_ += o.constant_;
        for (auto& [v, c] : o.terms_) add_term(v, c);
        return *this;
    }

    LinExpr& operator-=(const LinExpr& o) {
        constant_ -= o.constant_;
        for (auto& [v, c] : o.terms_) add_term(v, -c);
        return *this;
    }

    LinExpr& operator*=(std::int64_t k) {
        if (k == 0) return *this = LinExpr();
        constant_ *= k;
        for (auto& t : terms_) t.second *= k;
        return *this;
    }

    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, std::int64_t k) { return a *= k; }
    friend LinExpr operator*(std::int64_t k, LinExpr a) { return a *= k; }

    template <class F>
    std::int64_t eval(F&& value_of) const {
        std::int64_t acc = constant_;
        for (auto& [v, c] : terms_) acc += c * static_cast<std::int64_t>(value_of(v));
        return acc;
    }

    friend bool operator==(const LinExpr& a, const LinExpr& b) {
        return a.constant_ == b.constant_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LinExpr& a, const LinExpr& b) { return !(a == b); }
    friend bool operator<(const LinExpr& a, const LinExpr& b) {
        if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
        return a.terms_ < b.terms_;
    }

    std::string to_string(const VarRegistry& reg) const {
        std::string s;
        auto append = [&s](std::int64_t c, const std::string& body) {
            if (c >= 0 && !s.empty()) s += "+";
            if (body.empty()) {
                s += std::to_string(c);
                return;
            }
            if (c == -1) s += "-";
            else if (c != 1) s += std::to_string(c) + "*";
            s += body;
        };
        if (constant_ != 0 || terms_.empty()) append(constant_, "");
        for (auto& [v, c] : terms_) append(c, reg.name(v));
        return s;
    }

private:
    std::int64_t constant_ = 0;
    std::vector<std::pair<VarId, std::int64_t>> terms_;

    std::vector<std::pair<VarId, std::int64_t>>::const_iterator find(VarId v) const {
        return std::lower_bound(terms_.begin(), terms_.end(), v,
                                [](const auto& t, VarId x) { return t.first < x; });
    }
    std::vector<std::pair<VarId, std::int64_t>>::iterator find(VarId v) {
        return std::lower_bound(terms_.begin(), terms_.end(), v,
                                [](const auto& t, VarId x) { return t.first < x; });
    }
};

/// Raw affine bounds over all 0/1 assignments, ignoring correlations.
inline IntRange range(const LinExpr& e) {
    IntRange r{e.constant(), e.constant()};
    for (auto& [v, c] : e.terms()) (c < 0 ? r.lo : r.hi) += c;
    return r;
}

/// Product-aware bounds for a sum of 0/1-valued factored monomials plus an
/// affine tail. Tighter than raw bounds when the tail's expansion would
/// split a monomial such as a*(1-u) into correlated terms.
inline IntRange factored_range(std::size_t unit_monomials, const LinExpr& tail) {
    IntRange r = range(tail);
    r.hi += static_cast<std::int64_t>(unit_monomials);
    return r;
}

/// Bounds for monomials gated by a common condition bit: the u-gated and
/// (1-u)-gated groups are never simultaneously active, so only the larger
/// group contributes to the maximum.
inline IntRange gated_range(std::size_t gate_true_monomials, std::size_t gate_false_monomials,
                            std::size_t ungated_monomials, const LinExpr& tail) {
    IntRange r = range(tail);
    r.hi += static_cast<std::int64_t>(ungated_monomials +
                                      std::max(gate_true_monomials, gate_false_monomials));
    return r;
}

/// Multilinear integer polynomial over binary variables. Monomials are
/// sorted variable sets; x*x folds to x on construction. Degree is capped
/// at 2: products that would create a cubic monomial throw, since the
/// reduction linearizes before squaring.
class PbPoly {
public:
    using Monomial = std::vector<VarId>;

    PbPoly() = default;

    static PbPoly constant(std::int64_t c) {
        PbPoly p;
        p.add({}, c);
        return p;
    }

    static PbPoly variable(VarId v, std::int64_t coeff = 1) {
        PbPoly p;
        p.add({v}, coeff);
        return p;
    }

    static PbPoly from(const LinExpr& e) {
        PbPoly p;
        p.add({}, e.constant());
        for (auto& [v, c] : e.terms()) p.add({v}, c);
        return p;
    }

    void add(Monomial m, std::int64_t c) {
        if (c == 0) return;
        normalize(m);
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<Monomial, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::int64_t coeff(Monomial m) const {
        normalize(m);
        auto it = terms_.find(m);
        return it == terms_.end() ? 0 : it->second;
    }

    int degree() const {
        std::size_t d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.size());
        return static_cast<int>(d);
    }

    PbPoly& operator+=(const PbPoly& o) {
        for (auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }

    PbPoly& operator-=(const PbPoly& o) {
        for (auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }

    friend PbPoly operator+(PbPoly a, const PbPoly& b) { return a += b; }
    friend PbPoly operator-(PbPoly a, const PbPoly& b) { return a -= b; }

    friend PbPoly operator*(const PbPoly& a, const PbPoly& b) {
        PbPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                m.insert(m.end(), mb.begin(), mb.end());
                normalize(m);
                if (m.size() > 2)
                    throw std::domain_error("monomial of degree >= 3; linearize before multiplying");
                r.add(std::move(m), ca * cb);
            }
        return r;
    }

    template <class F>
    std::int64_t eval(F&& value_of) const {
        std::int64_t acc = 0;
        for (auto& [m, c] : terms_) {
            std::int64_t prod = c;
            for (VarId v : m)
                if (!value_of(v)) {
                    prod = 0;
                    break;
                }
            acc += prod;
        }
        return acc;
    }

    /// Monomial-wise bounds (each monomial treated as an independent 0/1 value).
    IntRange raw_range() const {
        IntRange r{0, 0};
        for (auto& [m, c] : terms_) {
            if (m.empty()) {
                r.lo += c;
                r.hi += c;
            } else {
                (c < 0 ? r.lo : r.hi) += c;
            }
        }
        return r;
    }

    std::vector<VarId> variables() const {
        std::vector<VarId> out;
        for (auto& [m, c] : terms_)
            for (VarId v : m) out.push_back(v);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Substitutes an affine expression for a variable, refolding repeats.
    PbPoly substituted(VarId v, const LinExpr& replacement) const {
        PbPoly r;
        for (auto& [m, c] : terms_) {
            auto pos = std::find(m.begin(), m.end(), v);
            if (pos == m.end()) {
                r.add(m, c);
                continue;
            }
            Monomial rest = m;
            rest.erase(std::find(rest.begin(), rest.end(), v));
            r.add(rest, c * replacement.constant());
            for (auto& [w, cw] : replacement.terms()) {
                Monomial mm = rest;
                mm.push_back(w);
                normalize(mm);
                if (mm.size() > 2)
                    throw std::domain_error("substitution created a monomial of degree >= 3");
                r.add(std::move(mm), c * cw);
            }
        }
        return r;
    }

    /// The expression as an affine form, if it has no quadratic terms.
    std::optional<LinExpr> as_linear() const {
        LinExpr e;
        for (auto& [m, c] : terms_) {
            if (m.size() > 1) return std::nullopt;
            if (m.empty()) e += LinExpr(c);
            else e.add_term(m[0], c);
        }
        return e;
    }

    friend bool operator==(const PbPoly& a, const PbPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const PbPoly& a, const PbPoly& b) { return !(a == b); }
    friend bool operator<(const PbPoly& a, const PbPoly& b) { return a.terms_ < b.terms_; }

    std::string to_string(const VarRegistry& reg) const {
        if (terms_.empty()) return "0";
        std::vector<std::pair<Monomial, std::int64_t>> ordered(terms_.begin(), terms_.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            return a.first.size() < b.first.size();
        });
        std::string s;
        for (auto& [m, c] : ordered) {
            std::string body;
            for (VarId v : m) {
                if (!body.empty()) body += "*";
                body += reg.name(v);
            }
            if (c >= 0 && !s.empty()) s += "+";
            if (body.empty()) {
                s += std::to_string(c);
            } else {
                if (c == -1) s += "-";
                else if (c != 1) s += std::to_string(c) + "*";
                s += body;
            }
        }
        return s;
    }

private:
    std::map<Monomial, std::int64_t> terms_;

    static void normalize(Monomial& m) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
    }
};

/// Expands e^2 into a multilinear polynomial; nonnegative everywhere and
/// zero exactly on the zeros of e.
inline PbPoly square_to_pb(const LinExpr& e) {
    PbPoly p = PbPoly::from(e);
    return p * p;
}

/// Rosenberg penalty xy - 2xz - 2yz + 3z: zero iff z = x*y, else >= 1.
inline PbPoly rosenberg_penalty(VarId x, VarId y, VarId z) {
    PbPoly p;
    p.add({x, y}, 1);
    p.add({x, z}, -2);
    p.add({y, z}, -2);
    p.add({z}, 3);
    return p;
}

/// Per-transformation cache of product variables, keyed on the unordered
/// factor pair.
class ProductCache {
public:
    std::optional<VarId> find(VarId x, VarId y) const {
        auto it = map_.find(ordered(x, y));
        return it == map_.end() ? std::nullopt : std::optional<VarId>(it->second);
    }

    void insert(VarId x, VarId y, VarId z) { map_.emplace(ordered(x, y), z); }

    std::size_t size() const { return map_.size(); }

private:
    static std::pair<VarId, VarId> ordered(VarId x, VarId y) {
        return {std::min(x, y), std::max(x, y)};
    }
    std::map<std::pair<VarId, VarId>, VarId> map_;
};

struct LinearizeResult {
    VarId z;
    PbPoly penalty;  // empty when the product was already cached
    bool fresh;
};

/// Introduces (or reuses) the product variable z = x*y with its Rosenberg
/// penalty. Duplicate requests return the cached variable and no penalty.
inline LinearizeResult linearize(VarId x, VarId y, VarRegistry& reg, ProductCache& cache) {
    if (x == y) throw std::invalid_argument("linearize requires two distinct variables");
    if (auto z = cache.find(x, y)) return {*z, PbPoly(), false};
    VarInfo info;
    info.role = VarRole::Product;
    info.factor_a = std::min(x, y);
    info.factor_b = std::max(x, y);
    info.name = reg.name(info.factor_a) + "*" + reg.name(info.factor_b);
    VarId z = reg.add(std::move(info));
    cache.insert(x, y, z);
    return {z, rosenberg_penalty(x, y, z), true};
}

/// Multiplicity variables for the even slack of an integer-lifted parity
/// constraint with the given bounds: fresh variables with coefficients
/// -2, -4, ... such that subtracting them can cancel any even value up
/// to max. One bit suffices whenever max <= 3.
inline std::vector<std::pair<VarId, std::int64_t>> multiplicity_bits(IntRange r, VarRegistry& reg,
                                                                     int owner = -1) {
    if (r.lo < -1) throw std::invalid_argument("constraint not in reduced-sign form");
    std::vector<std::pair<VarId, std::int64_t>> bits;
    if (r.hi <= 1) return bits;
    auto max_multiplicity = static_cast<std::uint64_t>(r.hi / 2);
    unsigned nbits = static_cast<unsigned>(std::bit_width(max_multiplicity));
    for (unsigned j = 0; j < nbits; ++j) {
        VarInfo info;
        info.role = VarRole::Multiplicity;
        info.owner = owner;
        info.position = static_cast<int>(j);
        info.name = "k" + std::to_string(reg.size());
        bits.emplace_back(reg.add(std::move(info)), -(std::int64_t{2} << j));
    }
    return bits;
}

inline std::vector<std::pair<VarId, std::int64_t>> multiplicity_bits(const LinExpr& e,
                                                                     VarRegistry& reg,
                                                                     int owner = -1) {
    return multiplicity_bits(range(e), reg, owner);
}

// --- binding-system simplification ---------------------------------------

struct PbBinding {
    VarId target;
    PbPoly rhs;
};

struct Resolution {
    enum class Kind { Const, Alias, NegAlias };
    Kind kind;
    std::int64_t value = 0;  // for Const
    VarId other = kNoVar;    // for Alias / NegAlias
};

struct SimplifyResult {
    std::map<VarId, Resolution> eliminated;
    std::vector<PbBinding> kept;
};

/// Reduces a system of fresh-variable bindings to fixpoint: constants,
/// copies, and negations of other bound variables are propagated;
/// bindings with identical right-hand sides collapse onto the lowest
/// surviving target.
inline SimplifyResult simplify(std::vector<PbBinding> bindings, const VarRegistry&) {
    std::map<VarId, Resolution> resolved;
    std::vector<VarId> bound_targets;
    bound_targets.reserve(bindings.size());
    for (auto& b : bindings) bound_targets.push_back(b.target);
    std::sort(bound_targets.begin(), bound_targets.end());
    auto is_bound = [&](VarId v) {
        return std::binary_search(bound_targets.begin(), bound_targets.end(), v);
    };

    auto as_expr = [&](VarId v) -> std::optional<LinExpr> {
        auto it = resolved.find(v);
        if (it == resolved.end()) return std::nullopt;
        switch (it->second.kind) {
            case Resolution::Kind::Const: return LinExpr(it->second.value);
            case Resolution::Kind::Alias: return LinExpr::variable(it->second.other);
            case Resolution::Kind::NegAlias:
                return LinExpr(1) - LinExpr::variable(it->second.other);
        }
        return std::nullopt;
    };

    auto substitute_resolved = [&](PbPoly p) {
        bool again = true;
        while (again) {
            again = false;
            for (VarId v : p.variables()) {
                if (auto e = as_expr(v)) {
                    p = p.substituted(v, *e);
                    again = true;
                }
            }
        }
        return p;
    };

    auto record = [&](VarId target, Resolution res) {
        auto [it, inserted] = resolved.emplace(target, res);
        if (inserted) return;
        const Resolution& old = it->second;
        if (old.kind == res.kind && old.value == res.value && old.other == res.other) return;
        throw std::runtime_error("inconsistent instance");
    };

    bool changed = true;
    while (changed) {
        changed = false;
        std::map<PbPoly, VarId> seen;
        std::vector<PbBinding> next;
        for (auto& b : bindings) {
            PbPoly rhs = substitute_resolved(b.rhs);
            if (auto e = as_expr(b.target)) {
                // Target already eliminated: the binding must agree.
                PbPoly lhs = substitute_resolved(PbPoly::from(*e));
                if (lhs == rhs) continue;
                if (lhs.as_linear() && rhs.as_linear() && lhs.as_linear()->is_constant() &&
                    rhs.as_linear()->is_constant())
                    throw std::runtime_error("inconsistent instance");
                next.push_back({b.target, std::move(rhs)});
                continue;
            }
            if (auto lin = rhs.as_linear()) {
                if (lin->is_constant()) {
                    std::int64_t c = lin->constant();
                    if (c != 0 && c != 1) throw std::runtime_error("inconsistent instance");
                    record(b.target, {Resolution::Kind::Const, c, kNoVar});
                    changed = true;
                    continue;
                }
                if (auto w = lin->as_bare_var()) {
                    if (*w == b.target) continue;  // tautology
                    record(b.target, {Resolution::Kind::Alias, 0, *w});
                    changed = true;
                    continue;
                }
                if (lin->constant() == 1 && lin->terms().size() == 1 &&
                    lin->terms()[0].second == -1 && is_bound(lin->terms()[0].first)) {
                    VarId w = lin->terms()[0].first;
                    if (w == b.target) throw std::runtime_error("inconsistent instance");
                    record(b.target, {Resolution::Kind::NegAlias, 0, w});
                    changed = true;
                    continue;
                }
            }
            auto it = seen.find(rhs);
            if (it != seen.end()) {
                VarId keep = std::min(it->second, b.target);
                VarId drop = std::max(it->second, b.target);
                record(drop, {Resolution::Kind::Alias, 0, keep});
                it->second = keep;
                changed = true;
                continue;
            }
            seen.emplace(rhs, b.target);
            next.push_back({b.target, std::move(rhs)});
        }
        bindings = std::move(next);
    }

    return {std::move(resolved), std::move(bindings)};
}

}  // namespace dlq
