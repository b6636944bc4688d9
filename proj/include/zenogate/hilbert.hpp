// hilbert.hpp — Basis enumeration, elementary operators, reachable-state reduction
//
// The system is two five-level atoms in separate cavities joined by a fiber:
// product states |atomA, atomB> ⊗ |nA, nF, nB> with per-mode photon numbers
// capped at a configurable truncation.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace zenogate {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using Vec = Eigen::VectorXcd;
using DenseOp = Eigen::MatrixXcd;

// ------------------------------- basis states -------------------------------

// Level order fixes the lexicographic basis ordering; e is the unique excited level.
enum class AtomLevel : std::uint8_t { a = 0, g1 = 1, g2 = 2, g0 = 3, e = 4 };

enum class AtomSite : std::uint8_t { A = 0, B = 1 };

enum class Mode : std::uint8_t { cavA = 0, fiber = 1, cavB = 2 };

inline const char* level_name(AtomLevel l) {
    switch (l) {
        case AtomLevel::a:  return "a";
        case AtomLevel::g1: return "g1";
        case AtomLevel::g2: return "g2";
        case AtomLevel::g0: return "g0";
        case AtomLevel::e:  return "e";
    }
    return "?";
}

struct BasisState {
    AtomLevel atom_a{AtomLevel::a};
    AtomLevel atom_b{AtomLevel::a};
    int n_a{0};
    int n_f{0};
    int n_b{0};

    friend bool operator==(const BasisState&, const BasisState&) = default;

    // Radix-packed key, independent of truncation (photon counts < 8).
    std::uint32_t key() const {
        return ((((static_cast<std::uint32_t>(atom_a) * 5
                 + static_cast<std::uint32_t>(atom_b)) * 8
                 + static_cast<std::uint32_t>(n_a)) * 8
                 + static_cast<std::uint32_t>(n_f)) * 8
                 + static_cast<std::uint32_t>(n_b));
    }

    // Ket label, e.g. "g0g1|000".
    std::string label() const {
        std::string s = level_name(atom_a);
        s += level_name(atom_b);
        s += '|';
        s += std::to_string(n_a);
        s += std::to_string(n_f);
        s += std::to_string(n_b);
        return s;
    }
};

// Parse a label of the form "g0g1|000"; throws with the valid alphabet on failure.
inline BasisState parse_ket_label(const std::string& label) {
    auto bad = [&]() -> std::runtime_error {
        return std::runtime_error(
            "unknown ket label '" + label +
            "'; expected <levelA><levelB>|<nA><nF><nB> with levels in {a,g1,g2,g0,e}, "
            "e.g. g0g1|000");
    };
    const auto bar = label.find('|');
    if (bar == std::string::npos || label.size() != bar + 4) throw bad();
    auto parse_level = [&](std::size_t pos, std::size_t& len) {
        for (AtomLevel l : {AtomLevel::g1, AtomLevel::g2, AtomLevel::g0,
                            AtomLevel::a, AtomLevel::e}) {
            const std::string name = level_name(l);
            if (label.compare(pos, name.size(), name) == 0) {
                len = name.size();
                return l;
            }
        }
        throw bad();
    };
    std::size_t la_len = 0, lb_len = 0;
    BasisState s;
    s.atom_a = parse_level(0, la_len);
    s.atom_b = parse_level(la_len, lb_len);
    if (la_len + lb_len != bar) throw bad();
    for (int i = 0; i < 3; ++i) {
        const char c = label[bar + 1 + i];
        if (c < '0' || c > '9') throw bad();
        (i == 0 ? s.n_a : i == 1 ? s.n_f : s.n_b) = c - '0';
    }
    return s;
}

// ---------------------------------- BasisSet ---------------------------------

// Ordered list of basis states with a state<->index bijection. Immutable after
// construction; safe to share across threads.
class BasisSet {
public:
    BasisSet(std::vector<BasisState> states, int truncation)
        : states_(std::move(states)), truncation_(truncation) {
        index_.reserve(states_.size());
        for (std::size_t i = 0; i < states_.size(); ++i) {
            auto [it, inserted] = index_.emplace(states_[i].key(), i);
            if (!inserted) throw std::invalid_argument("BasisSet: duplicate state");
        }
    }

    Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
    int truncation() const { return truncation_; }

    const BasisState& state(Eigen::Index i) const { return states_.at(static_cast<std::size_t>(i)); }

    Eigen::Index index_of(const BasisState& s) const {
        const auto it = index_.find(s.key());
        if (it == index_.end()) {
            throw std::out_of_range("BasisSet: state " + s.label() + " not in basis");
        }
        return static_cast<Eigen::Index>(it->second);
    }

    bool contains(const BasisState& s) const { return index_.find(s.key()) != index_.end(); }

    Vec unit_vector(const BasisState& s) const {
        Vec v = Vec::Zero(size());
        v[index_of(s)] = Complex(1.0, 0.0);
        return v;
    }

    const std::vector<BasisState>& states() const { return states_; }

private:
    std::vector<BasisState> states_;
    int truncation_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
};

// Full product basis, lexicographic in (atomA, atomB, nA, nF, nB); size 25*(N+1)^3.
inline BasisSet build_full_basis(int n_max) {
    if (n_max < 1) throw std::invalid_argument("build_full_basis: N_max must be >= 1");
    std::vector<BasisState> states;
    states.reserve(static_cast<std::size_t>(25 * (n_max + 1) * (n_max + 1) * (n_max + 1)));
    for (int la = 0; la < 5; ++la)
        for (int lb = 0; lb < 5; ++lb)
            for (int na = 0; na <= n_max; ++na)
                for (int nf = 0; nf <= n_max; ++nf)
                    for (int nb = 0; nb <= n_max; ++nb)
                        states.push_back({static_cast<AtomLevel>(la),
                                          static_cast<AtomLevel>(lb), na, nf, nb});
    return BasisSet(std::move(states), n_max);
}

// ----------------------------- elementary operators --------------------------

// |upper><lower| on the given atom, identity elsewhere.
inline SparseOp build_atomic_op(AtomSite site, AtomLevel upper, AtomLevel lower,
                                const BasisSet& basis) {
    if (upper == lower) throw std::invalid_argument("build_atomic_op: upper == lower");
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index j = 0; j < basis.size(); ++j) {
        const BasisState& s = basis.state(j);
        const AtomLevel level = (site == AtomSite::A) ? s.atom_a : s.atom_b;
        if (level != lower) continue;
        BasisState t = s;
        (site == AtomSite::A ? t.atom_a : t.atom_b) = upper;
        if (!basis.contains(t)) continue;
        trips.emplace_back(basis.index_of(t), j, Complex(1.0, 0.0));
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

// Truncated annihilation operator of the designated mode: sqrt(n) between n and n-1.
inline SparseOp build_mode_op(Mode mode, const BasisSet& basis) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index j = 0; j < basis.size(); ++j) {
        const BasisState& s = basis.state(j);
        const int n = (mode == Mode::cavA) ? s.n_a : (mode == Mode::fiber) ? s.n_f : s.n_b;
        if (n == 0) continue;
        BasisState t = s;
        ((mode == Mode::cavA) ? t.n_a : (mode == Mode::fiber) ? t.n_f : t.n_b) = n - 1;
        if (!basis.contains(t)) continue;
        trips.emplace_back(basis.index_of(t), j, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

// ----------------------------- reachable closure -----------------------------

// Smallest generator-closed subset of `basis` containing `seeds` (generators act
// together with their adjoints). Ordering is breadth-first discovery order with
// ties broken by full-basis index.
inline BasisSet reachable_closure(const std::vector<BasisState>& seeds,
                                  const std::vector<SparseOp>& generators,
                                  const BasisSet& basis) {
    if (seeds.empty()) throw std::invalid_argument("reachable_closure: empty seed list");

    // Generators act as given: pass op + op^dag for Hermitian couplings, but
    // collapse operators one-way so decay sinks do not re-excite the frontier.
    const std::vector<SparseOp>& gens = generators;

    std::vector<bool> seen(static_cast<std::size_t>(basis.size()), false);
    std::vector<Eigen::Index> order;
    std::deque<Eigen::Index> frontier;
    for (const BasisState& s : seeds) {
        const Eigen::Index i = basis.index_of(s);
        if (!seen[static_cast<std::size_t>(i)]) {
            seen[static_cast<std::size_t>(i)] = true;
            order.push_back(i);
            frontier.push_back(i);
        }
    }
    // Column-major sparse storage makes "images of |j>" an inner-iterator walk.
    while (!frontier.empty()) {
        std::set<Eigen::Index> discovered;
        for (const Eigen::Index j : frontier) {
            for (const SparseOp& g : gens) {
                for (SparseOp::InnerIterator it(g, j); it; ++it) {
                    if (std::abs(it.value()) < 1e-14) continue;
                    if (!seen[static_cast<std::size_t>(it.row())]) discovered.insert(it.row());
                }
            }
        }
        frontier.clear();
        for (const Eigen::Index i : discovered) {
            seen[static_cast<std::size_t>(i)] = true;
            order.push_back(i);
            frontier.push_back(i);
        }
    }

    std::vector<BasisState> states;
    states.reserve(order.size());
    for (const Eigen::Index i : order) states.push_back(basis.state(i));
    return BasisSet(std::move(states), basis.truncation());
}

// Restrict an operator on `full` to the span of `sub` (sub must be a subset).
inline SparseOp restrict_op(const SparseOp& op, const BasisSet& sub, const BasisSet& full) {
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index j = 0; j < sub.size(); ++j) {
        const Eigen::Index fj = full.index_of(sub.state(j));
        for (SparseOp::InnerIterator it(op, fj); it; ++it) {
            const BasisState& row_state = full.state(it.row());
            if (!sub.contains(row_state)) continue;
            trips.emplace_back(sub.index_of(row_state), j, it.value());
        }
    }
    SparseOp out(sub.size(), sub.size());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

// ------------------------------ state containers -----------------------------

struct StateVector {
    const BasisSet* basis{nullptr};
    Vec amplitudes;

    double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
    const BasisSet* basis{nullptr};
    DenseOp matrix;

    double trace() const { return matrix.trace().real(); }
    double hermiticity_defect() const {
        return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<DenseOp> es(
            DenseOp(0.5 * (matrix + matrix.adjoint())));
        return es.eigenvalues().minCoeff();
    }
};

}  // namespace zenogate
