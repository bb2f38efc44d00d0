#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dlq/normal_basis.hpp"
#include "dlq/pseudo_boolean.hpp"
#include "dlq/qubo_solver.hpp"

namespace dlq {

struct DlpInstance {
    FieldParams fp;
    NbElement h;
};

inline DlpInstance make_instance(FieldParams fp, NbElement h) {
    if (h.size() != fp.n) throw std::invalid_argument("target element length does not match field");
    if (h.is_zero()) throw std::invalid_argument("target element must be nonzero");
    return {std::move(fp), h};
}

/// A register coordinate after materialization: a constant bit or a single
/// variable. Keeping coordinates this simple means every stage monomial is
/// a plain product of the stage's exponent bit with one variable.
struct RegEntry {
    enum class Kind : std::uint8_t { Zero, One, Var };
    Kind kind = Kind::Zero;
    VarId var = kNoVar;

    static RegEntry zero() { return {Kind::Zero, kNoVar}; }
    static RegEntry one() { return {Kind::One, kNoVar}; }
    static RegEntry of(VarId v) { return {Kind::Var, v}; }
};

/// One reduced GF(2) equation: XOR of the folded monomials (plus the
/// constant parity) equals the target bit. The integer lift, with its
/// multiplicity bits folded in, is squared into the objective.
struct Constraint {
    bool final = false;        // target is a constant h bit instead of a register var
    VarId target = kNoVar;     // bindings only
    int target_const = 0;      // finals only
    int stage = -1;
    int position = -1;
    std::int64_t const_parity = 0;
    std::vector<LinExpr> monomials;  // affine form of each folded monomial
    std::vector<std::pair<VarId, std::int64_t>> mult_bits;
    LinExpr lift;

    std::int64_t target_value_of(const std::vector<int>& values) const {
        return final ? target_const : values[target];
    }
};

struct TransformStats {
    std::size_t logical_variable_count = 0;
    std::size_t constraint_count = 0;
    std::size_t penalty_count = 0;
};

struct TransformResult {
    unsigned n = 0;
    NbElement h;
    bool optimal_basis = true;
    Qubo qubo;
    VarRegistry registry;
    std::vector<VarId> exponent_vars;
    std::vector<Constraint> constraints;
    std::vector<std::vector<RegEntry>> stage_registers;  // registers after stages 0..n-2
    std::vector<std::size_t> var_to_qubo;                // VarId -> QUBO index (npos if absent)
    std::vector<VarId> qubo_to_var;
    PbPoly objective;
    TransformStats stats;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t qubo_index(VarId v) const {
        std::size_t idx = var_to_qubo.at(v);
        if (idx == npos) throw std::runtime_error("variable absent from the QUBO");
        return idx;
    }
};

/// Asymptotic variable-count estimates for reporting next to
/// measured values: 4n^2 without the one-bit multiplicity arrangement,
/// 3n^2 with it.
inline std::size_t variable_count_estimate(unsigned n, bool optimized) {
    return static_cast<std::size_t>(optimized ? 3 : 4) * n * n;
}

namespace detail {

struct Gated {
    enum class Gate : std::uint8_t { None, Pos, Neg };
    Gate gate = Gate::None;
    bool payload_one = false;
    VarId payload = kNoVar;

    std::tuple<std::uint8_t, bool, VarId> key() const {
        return {static_cast<std::uint8_t>(gate), payload_one, payload};
    }
    bool operator<(const Gated& o) const { return key() < o.key(); }
    bool operator==(const Gated& o) const { return key() == o.key(); }
};

struct TransformCtx {
    const FieldParams& fp;
    VarRegistry reg;
    ProductCache products;
    PbPoly objective;
    std::vector<Constraint> constraints;
    using BindingKey =
        std::tuple<std::int64_t, VarId, std::vector<std::tuple<std::uint8_t, bool, VarId>>>;
    std::map<BindingKey, VarId> binding_cache;
    std::size_t penalty_count = 0;

    explicit TransformCtx(const FieldParams& f) : fp(f) {}

    LinExpr to_affine(const Gated& m, VarId gate_var) {
        switch (m.gate) {
            case Gated::Gate::None:
                return m.payload_one ? LinExpr(1) : LinExpr::variable(m.payload);
            case Gated::Gate::Pos:
                if (m.payload_one) return LinExpr::variable(gate_var);
                return LinExpr::variable(product(gate_var, m.payload));
            case Gated::Gate::Neg:
                if (m.payload_one) return LinExpr(1) - LinExpr::variable(gate_var);
                return LinExpr::variable(m.payload) -
                       LinExpr::variable(product(gate_var, m.payload));
        }
        throw std::logic_error("unreachable");
    }

    VarId product(VarId x, VarId y) {
        auto lin = linearize(x, y, reg, products);
        if (lin.fresh) {
            objective += lin.penalty;
            ++penalty_count;
        }
        return lin.z;
    }
};

/// XOR-cancels duplicate monomials, merges complementary-gate pairs with
/// equal payloads into ungated monomials, and folds constant monomials
/// into the parity bit. Returns the surviving monomials.
inline std::vector<Gated> fold_monomials(std::vector<Gated> mons, std::int64_t& parity) {
    std::sort(mons.begin(), mons.end());
    std::vector<Gated> kept;
    for (std::size_t i = 0; i < mons.size();) {
        if (i + 1 < mons.size() && mons[i] == mons[i + 1]) {
            i += 2;  // x XOR x = 0
        } else {
            kept.push_back(mons[i]);
            ++i;
        }
    }
    std::vector<bool> consumed(kept.size(), false);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i].gate != Gated::Gate::Pos || consumed[i]) continue;
        Gated neg = kept[i];
        neg.gate = Gated::Gate::Neg;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (consumed[j] || !(kept[j] == neg)) continue;
            kept[j].gate = Gated::Gate::None;  // u*a + (1-u)*a = a
            consumed[i] = true;
            break;
        }
    }
    std::vector<Gated> out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (consumed[i]) continue;
        if (kept[i].gate == Gated::Gate::None && kept[i].payload_one) {
            parity ^= 1;
            continue;
        }
        out.push_back(kept[i]);
    }
    return out;
}

/// Routes one stage-output bit: propagate a bare value, or bind a fresh
/// register variable with an exact or parity constraint.
inline RegEntry route_binding(TransformCtx& ctx, int stage, int position, VarId gate_var,
                              std::vector<Gated> mons, std::int64_t parity) {
    mons = fold_monomials(std::move(mons), parity);

    if (mons.empty()) return parity ? RegEntry::one() : RegEntry::zero();

    if (mons.size() == 1 && parity == 0) {
        LinExpr affine = ctx.to_affine(mons[0], gate_var);
        if (auto bare = affine.as_bare_var()) return RegEntry::of(*bare);
    }

    bool any_gated = std::any_of(mons.begin(), mons.end(), [](const Gated& m) {
        return m.gate != Gated::Gate::None;
    });
    TransformCtx::BindingKey cache_key{parity, any_gated ? gate_var : kNoVar, {}};
    for (auto& m : mons) std::get<2>(cache_key).push_back(m.key());
    if (auto it = ctx.binding_cache.find(cache_key); it != ctx.binding_cache.end())
        return RegEntry::of(it->second);

    Constraint c;
    c.stage = stage;
    c.position = position;
    c.const_parity = parity;
    std::size_t pos_gated = 0, neg_gated = 0, ungated = 0;
    for (auto& m : mons) {
        c.monomials.push_back(ctx.to_affine(m, gate_var));
        if (m.gate == Gated::Gate::Pos) ++pos_gated;
        else if (m.gate == Gated::Gate::Neg) ++neg_gated;
        else ++ungated;
    }

    VarInfo info;
    info.role = VarRole::Register;
    info.stage = stage;
    info.position = position;
    info.name = "v" + std::to_string(stage) + "_" + std::to_string(position);
    VarId v = ctx.reg.add(std::move(info));
    c.target = v;

    if (mons.size() == 1) {
        // v = parity XOR m: exact as integers.
        c.lift = parity == 0 ? c.monomials[0] - LinExpr::variable(v)
                             : LinExpr(1) - c.monomials[0] - LinExpr::variable(v);
    } else {
        // Parity binding: v enters negatively, multiplicity bits absorb the
        // even slack. The gated bound keeps this in the one-bit regime for
        // optimal bases.
        LinExpr lift(parity);
        for (auto& m : c.monomials) lift += m;
        lift -= LinExpr::variable(v);
        IntRange bound = gated_range(pos_gated, neg_gated, ungated,
                                     LinExpr(parity) - LinExpr::variable(v));
        c.mult_bits = multiplicity_bits(bound, ctx.reg, static_cast<int>(ctx.constraints.size()));
        for (auto& [kv, coeff] : c.mult_bits) lift.add_term(kv, coeff);
        c.lift = std::move(lift);
    }

    ctx.objective += square_to_pb(c.lift);
    ctx.constraints.push_back(std::move(c));
    ctx.binding_cache.emplace(std::move(cache_key), v);
    return RegEntry::of(v);
}

/// Routes one final-stage bit against the constant target h_k, using the
/// signed exact forms wherever the gate structure allows them.
inline void route_final(TransformCtx& ctx, int stage, int position, VarId gate_var,
                        std::vector<Gated> mons, std::int64_t parity, int h_bit) {
    mons = fold_monomials(std::move(mons), parity);
    int target = h_bit ^ static_cast<int>(parity);

    if (mons.empty()) {
        if (target != 0) throw std::runtime_error("inconsistent instance: target not reachable");
        return;
    }

    Constraint c;
    c.final = true;
    c.target_const = h_bit;
    c.stage = stage;
    c.position = position;
    c.const_parity = parity;
    std::size_t pos_gated = 0, neg_gated = 0, ungated = 0;
    for (auto& m : mons) {
        c.monomials.push_back(ctx.to_affine(m, gate_var));
        if (m.gate == Gated::Gate::Pos) ++pos_gated;
        else if (m.gate == Gated::Gate::Neg) ++neg_gated;
        else ++ungated;
    }

    const std::size_t r = mons.size();
    if (r == 1) {
        c.lift = LinExpr(target) - c.monomials[0];
    } else if (r == 2) {
        c.lift = target == 1 ? LinExpr(1) - c.monomials[0] - c.monomials[1]
                             : c.monomials[0] - c.monomials[1];
    } else if (r == 3 && pos_gated == 2 && neg_gated == 1) {
        // The two gate-true monomials never coincide with the gate-false
        // one, so signing one of them negatively is exact and avoids a
        // multiplicity bit.
        std::size_t first_pos = mons[0].gate == Gated::Gate::Pos ? 0 : 1;
        if (target == 0) {
            LinExpr lift;
            for (std::size_t i = 0; i < r; ++i)
                lift += i == first_pos ? LinExpr(0) - c.monomials[i] : c.monomials[i];
            c.lift = std::move(lift);
        } else {
            LinExpr lift(1);
            for (auto& m : c.monomials) lift -= m;
            c.lift = std::move(lift);
        }
    } else {
        // Non-optimal bases can leave wider parities; lift with the h bit
        // on the constant side and absorb the even slack.
        LinExpr lift(parity - h_bit);
        for (auto& m : c.monomials) lift += m;
        IntRange bound = gated_range(pos_gated, neg_gated, ungated, LinExpr(parity - h_bit));
        c.mult_bits = multiplicity_bits(bound, ctx.reg, static_cast<int>(ctx.constraints.size()));
        for (auto& [kv, coeff] : c.mult_bits) lift.add_term(kv, coeff);
        c.lift = std::move(lift);
    }

    ctx.objective += square_to_pb(c.lift);
    ctx.constraints.push_back(std::move(c));
}

/// Monomials of output bit k when multiplying the register by t^(2^l u_l):
/// the T(0) column picked out by the basis element t^(2^l), rotated by k,
/// gated on u_l, plus the pass-through entry gated on 1-u_l.
inline std::vector<Gated> stage_bit_monomials(const FieldParams& fp,
                                              const std::vector<RegEntry>& reg, unsigned l,
                                              unsigned k) {
    std::vector<Gated> mons;
    auto add = [&mons](Gated::Gate gate, const RegEntry& e) {
        if (e.kind == RegEntry::Kind::Zero) return;
        mons.push_back({gate, e.kind == RegEntry::Kind::One, e.var});
    };
    unsigned n = fp.n;
    for (unsigned p : fp.t0_column((l + n - k) % n)) add(Gated::Gate::Pos, reg[(p + k) % n]);
    add(Gated::Gate::Neg, reg[k]);
    return mons;
}

}  // namespace detail

/// Allocates the exponent bits u_0..u_{n-1}; the decode contract is
/// y = sum 2^i u_i.
inline std::vector<VarId> decompose_exponent(unsigned n, VarRegistry& reg) {
    std::vector<VarId> bits;
    bits.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        VarInfo info;
        info.role = VarRole::Exponent;
        info.position = static_cast<int>(i);
        info.name = "u" + std::to_string(i);
        bits.push_back(reg.add(std::move(info)));
    }
    return bits;
}

/// The register of t^(u_0): coordinate 0 is the constant 1, every other
/// coordinate is 1-u_0.
inline std::vector<LinExpr> initial_register(VarId u0, unsigned n) {
    std::vector<LinExpr> out(n);
    out[0] = LinExpr(1);
    for (unsigned k = 1; k < n; ++k) out[k] = LinExpr(1) - LinExpr::variable(u0);
    return out;
}

/// Converts a DLP instance t^y = h into a QUBO whose zero-energy
/// assignments decode exactly to the valid exponents.
inline TransformResult transform(const DlpInstance& inst) {
    const FieldParams& fp = inst.fp;
    const unsigned n = fp.n;
    if (n < 2) throw std::invalid_argument("transform requires n >= 2");

    detail::TransformCtx ctx(fp);
    TransformResult result;
    result.n = n;
    result.h = inst.h;
    result.optimal_basis = fp.optimal;
    result.exponent_vars = decompose_exponent(n, ctx.reg);

    // Register of t^(u_0), routed through the same binding machinery as the
    // stages: positions 1..n-1 share one materialized variable.
    std::vector<RegEntry> reg_entries(n);
    reg_entries[0] = RegEntry::one();
    for (unsigned k = 1; k < n; ++k) {
        std::vector<detail::Gated> mons{{detail::Gated::Gate::Neg, true, kNoVar}};
        reg_entries[k] =
            detail::route_binding(ctx, 0, static_cast<int>(k), result.exponent_vars[0],
                                  std::move(mons), 0);
    }
    result.stage_registers.push_back(reg_entries);

    // Middle stages materialize; the last stage feeds the h constraints.
    for (unsigned l = 1; l + 1 < n; ++l) {
        std::vector<RegEntry> next(n);
        for (unsigned k = 0; k < n; ++k) {
            auto mons = detail::stage_bit_monomials(fp, reg_entries, l, k);
            next[k] = detail::route_binding(ctx, static_cast<int>(l), static_cast<int>(k),
                                            result.exponent_vars[l], std::move(mons), 0);
        }
        reg_entries = std::move(next);
        result.stage_registers.push_back(reg_entries);
    }

    {
        unsigned l = n - 1;
        for (unsigned k = 0; k < n; ++k) {
            auto mons = detail::stage_bit_monomials(fp, reg_entries, l, k);
            detail::route_final(ctx, static_cast<int>(l), static_cast<int>(k),
                                result.exponent_vars[l], std::move(mons), 0,
                                inst.h.bit(k) ? 1 : 0);
        }
    }

    // Index the QUBO by every variable the objective touches, in creation
    // order. Exponent bits must all survive or decoding would be ambiguous.
    result.objective = std::move(ctx.objective);
    std::vector<VarId> live = result.objective.variables();
    result.var_to_qubo.assign(ctx.reg.size(), TransformResult::npos);
    for (VarId v : live) {
        result.var_to_qubo[v] = result.qubo_to_var.size();
        result.qubo_to_var.push_back(v);
    }
    for (VarId u : result.exponent_vars)
        if (result.var_to_qubo[u] == TransformResult::npos)
            throw std::runtime_error("exponent bit eliminated from the QUBO; instance degenerate");

    Qubo qubo(result.qubo_to_var.size());
    for (auto& [mono, coeff] : result.objective.terms()) {
        if (mono.empty()) qubo.add_offset(coeff);
        else if (mono.size() == 1) qubo.add_linear(result.var_to_qubo[mono[0]], coeff);
        else qubo.add_quadratic(result.var_to_qubo[mono[0]], result.var_to_qubo[mono[1]], coeff);
    }
    result.qubo = std::move(qubo);

    result.constraints = std::move(ctx.constraints);
    result.registry = std::move(ctx.reg);
    result.stats.logical_variable_count = result.qubo.num_vars();
    result.stats.constraint_count = result.constraints.size();
    result.stats.penalty_count = ctx.penalty_count;
    return result;
}

/// Text dump of the reduced system, one squared term or penalty per line,
/// in the F1=(...)^2 / Pen1=Penalty(x,y,z) style of the worked example.
inline std::string dump_constraints(const TransformResult& r) {
    std::string out;
    for (std::size_t i = 0; i < r.constraints.size(); ++i)
        out += "F" + std::to_string(i + 1) + "=(" + r.constraints[i].lift.to_string(r.registry) +
               ")^2\n";
    std::size_t pen = 0;
    for (VarId v = 0; v < r.registry.size(); ++v) {
        const VarInfo& info = r.registry[v];
        if (info.role != VarRole::Product) continue;
        out += "Pen" + std::to_string(++pen) + "=Penalty(" + r.registry.name(info.factor_a) +
               "," + r.registry.name(info.factor_b) + "," + r.registry.name(v) + ")\n";
    }
    return out;
}

/// Reads the exponent bits out of a full QUBO assignment.
inline std::uint64_t decode_solution(std::span<const std::uint8_t> assignment,
                                     const TransformResult& r) {
    if (assignment.size() != r.qubo.num_vars())
        throw std::invalid_argument("assignment does not cover all QUBO variables");
    std::uint64_t y = 0;
    for (unsigned i = 0; i < r.n; ++i)
        if (assignment[r.qubo_index(r.exponent_vars[i])]) y |= std::uint64_t{1} << i;
    return y;
}

/// The canonical full assignment induced by exponent bits y: products take
/// their consistent values, register bits their parities, multiplicity
/// bits the even slack. Its energy is zero exactly when t^y = h.
inline std::vector<std::uint8_t> extend_assignment(std::uint64_t y, const TransformResult& r) {
    std::vector<int> values(r.registry.size(), 0);
    std::map<VarId, const Constraint*> binding_of;
    std::map<VarId, std::pair<const Constraint*, int>> mult_of;
    for (auto& c : r.constraints) {
        if (!c.final) binding_of[c.target] = &c;
        for (std::size_t j = 0; j < c.mult_bits.size(); ++j)
            mult_of[c.mult_bits[j].first] = {&c, static_cast<int>(j)};
    }

    auto value_of = [&values](VarId v) { return values[v]; };
    for (VarId v = 0; v < r.registry.size(); ++v) {
        const VarInfo& info = r.registry[v];
        switch (info.role) {
            case VarRole::Exponent:
                values[v] = static_cast<int>((y >> info.position) & 1);
                break;
            case VarRole::Product:
                values[v] = values[info.factor_a] * values[info.factor_b];
                break;
            case VarRole::Register: {
                const Constraint* c = binding_of.at(v);
                std::int64_t sum = c->const_parity;
                for (auto& m : c->monomials) sum += m.eval(value_of);
                values[v] = static_cast<int>(sum & 1);
                break;
            }
            case VarRole::Multiplicity: {
                auto [c, j] = mult_of.at(v);
                std::int64_t sum = c->const_parity;
                for (auto& m : c->monomials) sum += m.eval(value_of);
                std::int64_t slack = sum - c->target_value_of(values);
                std::int64_t k = slack > 0 ? slack / 2 : 0;
                values[v] = static_cast<int>((k >> j) & 1);
                break;
            }
            case VarRole::Plain:
                break;
        }
    }

    std::vector<std::uint8_t> assignment(r.qubo.num_vars(), 0);
    for (std::size_t i = 0; i < r.qubo_to_var.size(); ++i)
        assignment[i] = static_cast<std::uint8_t>(values[r.qubo_to_var[i]]);
    return assignment;
}

}  // namespace dlq
