#include "liewn/liealg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "liewn/render.hpp"

namespace liewn::lie {

using sym::Coefficient;

std::size_t StructureTensor::offset(std::size_t i, std::size_t j, std::size_t l) const {
    if (i < 1 || j < 1 || l < 1 || i > order_ || j > order_ || l > order_) {
        throw IndexError("structure index (" + std::to_string(i) + "," + std::to_string(j) + "," +
                         std::to_string(l) + ") out of range 1.." + std::to_string(order_));
    }
    return ((i - 1) * order_ + (j - 1)) * order_ + (l - 1);
}

Expr& StructureTensor::operator()(std::size_t i, std::size_t j, std::size_t l) { return g_[offset(i, j, l)]; }

const Expr& StructureTensor::operator()(std::size_t i, std::size_t j, std::size_t l) const {
    return g_[offset(i, j, l)];
}

Algebra from_structure_constants(std::size_t order, const std::vector<StructureEntry>& upper,
                                 std::vector<std::string> parameters, std::string name) {
    if (order == 0) throw AlgebraError("algebra order must be positive");
    Algebra a;
    a.name = std::move(name);
    a.gamma = StructureTensor(order);
    a.parameters = std::move(parameters);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (const auto& e : upper) {
        for (std::size_t x : {e.i, e.j, e.l}) {
            if (x < 1 || x > order) {
                throw IndexError("index " + std::to_string(x) + " out of range 1.." + std::to_string(order));
            }
        }
        if (e.i >= e.j) {
            throw AlgebraError("structure entry (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                               ") must have i < j");
        }
        if (!seen.emplace(e.i, e.j, e.l).second) {
            throw AlgebraError("duplicate structure entry (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                               "," + std::to_string(e.l) + ")");
        }
        a.gamma(e.i, e.j, e.l) = e.coeff;
        a.gamma(e.j, e.i, e.l) = -e.coeff;
    }
    return a;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

namespace {

/// Reduced echelon basis of the vectorized generators, with each basis row
/// expressed as a combination of the original generators.
class SpanSolver {
public:
    explicit SpanSolver(std::size_t count) : count_(count) {}

    /// Returns false when v is dependent on the vectors added so far.
    bool add(std::vector<Coefficient> v, std::size_t index) {
        std::vector<Coefficient> comb(count_);
        comb[index] = Coefficient(1);
        reduce(v, comb);
        auto it = std::find_if(v.begin(), v.end(), [](const Coefficient& c) { return !c.is_zero(); });
        if (it == v.end()) return false;
        const std::size_t p = static_cast<std::size_t>(it - v.begin());
        const Coefficient inv = v[p].inverse();
        for (auto& x : v) x *= inv;
        for (auto& x : comb) x *= inv;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Coefficient f = rows_[k][p];
            if (f.is_zero()) continue;
            axpy(rows_[k], v, f);
            axpy(combs_[k], comb, f);
        }
        rows_.push_back(std::move(v));
        combs_.push_back(std::move(comb));
        pivots_.push_back(p);
        return true;
    }

    /// Coordinates of v in the original generators, or nullopt outside the span.
    std::optional<std::vector<Coefficient>> solve(std::vector<Coefficient> v) const {
        std::vector<Coefficient> coords(count_);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Coefficient f = v[pivots_[k]];
            if (f.is_zero()) continue;
            axpy(v, rows_[k], f);
            for (std::size_t l = 0; l < count_; ++l) coords[l] += f * combs_[k][l];
        }
        if (std::any_of(v.begin(), v.end(), [](const Coefficient& c) { return !c.is_zero(); })) return std::nullopt;
        return coords;
    }

private:
    // y -= f * x
    static void axpy(std::vector<Coefficient>& y, const std::vector<Coefficient>& x, const Coefficient& f) {
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (!x[k].is_zero()) y[k] -= f * x[k];
        }
    }
    void reduce(std::vector<Coefficient>& v, std::vector<Coefficient>& comb) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Coefficient f = v[pivots_[k]];
            if (f.is_zero()) continue;
            axpy(v, rows_[k], f);
            axpy(comb, combs_[k], f);
        }
    }

    std::size_t count_;
    std::vector<std::vector<Coefficient>> rows_;
    std::vector<std::vector<Coefficient>> combs_;
    std::vector<std::size_t> pivots_;
};

std::vector<Coefficient> vec(const CMatrix& m) { return m.data(); }

}  // namespace

Algebra from_matrix_generators(const std::vector<CMatrix>& mats, std::string name) {
    if (mats.empty()) throw AlgebraError("no generator matrices given");
    const std::size_t n = mats[0].rows();
    for (std::size_t k = 0; k < mats.size(); ++k) {
        if (!mats[k].square() || mats[k].rows() != n) {
            throw AlgebraError("generator " + std::to_string(k + 1) + " is not " + std::to_string(n) + "x" +
                               std::to_string(n));
        }
    }
    const std::size_t order = mats.size();
    SpanSolver span(order);
    for (std::size_t k = 0; k < order; ++k) {
        if (!span.add(vec(mats[k]), k)) {
            throw AlgebraError("generator " + std::to_string(k + 1) + " is linearly dependent on earlier generators");
        }
    }
    Algebra a;
    a.name = std::move(name);
    a.gamma = StructureTensor(order);
    a.generators = mats;
    for (std::size_t i = 1; i <= order; ++i) {
        for (std::size_t j = i + 1; j <= order; ++j) {
            auto coords = span.solve(vec(commutator(mats[i - 1], mats[j - 1])));
            if (!coords) {
                throw AlgebraError("closure failure: [g" + std::to_string(i) + ", g" + std::to_string(j) +
                                   "] lies outside the span of the generators");
            }
            for (std::size_t l = 1; l <= order; ++l) {
                const Coefficient& c = (*coords)[l - 1];
                if (c.is_zero()) continue;
                a.gamma(i, j, l) = Expr(c);
                a.gamma(j, i, l) = Expr(-c);
            }
        }
    }
    return a;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& v : antisymmetry) {
        os << "antisymmetry violation at (" << v.i << "," << v.j << "," << v.l << ")\n";
    }
    for (const auto& v : jacobi) {
        os << "jacobi violation at (" << v.i << "," << v.j << "," << v.k << "; " << v.l
           << "): " << sym::text(v.residual) << "\n";
    }
    for (const auto& v : representation) {
        os << "representation mismatch for [g" << v.i << ", g" << v.j << "]: " << v.detail << "\n";
    }
    return os.str();
}

ValidationReport validate(const Algebra& a, bool check_jacobi) {
    ValidationReport r;
    const std::size_t L = a.order();
    const auto& g = a.gamma;
    for (std::size_t i = 1; i <= L; ++i) {
        for (std::size_t j = i; j <= L; ++j) {
            for (std::size_t l = 1; l <= L; ++l) {
                if (!(g(i, j, l) + g(j, i, l)).is_zero()) r.antisymmetry.push_back({i, j, l});
            }
        }
    }
    if (check_jacobi) {
        // cyclic and antisymmetric in (i,j,k): i<j<k suffices
        for (std::size_t i = 1; i <= L; ++i) {
            for (std::size_t j = i + 1; j <= L; ++j) {
                for (std::size_t k = j + 1; k <= L; ++k) {
                    std::vector<Expr> acc(L);
                    for (std::size_t m = 1; m <= L; ++m) {
                        const Expr& a1 = g(i, j, m);
                        const Expr& a2 = g(j, k, m);
                        const Expr& a3 = g(k, i, m);
                        if (a1.is_zero() && a2.is_zero() && a3.is_zero()) continue;
                        for (std::size_t l = 1; l <= L; ++l) {
                            if (!a1.is_zero() && !g(m, k, l).is_zero()) acc[l - 1] += a1 * g(m, k, l);
                            if (!a2.is_zero() && !g(m, i, l).is_zero()) acc[l - 1] += a2 * g(m, i, l);
                            if (!a3.is_zero() && !g(m, j, l).is_zero()) acc[l - 1] += a3 * g(m, j, l);
                        }
                    }
                    for (std::size_t l = 1; l <= L; ++l) {
                        if (!acc[l - 1].is_zero()) r.jacobi.push_back({i, j, k, l, acc[l - 1]});
                    }
                }
            }
        }
    }
    if (a.has_generators()) {
        if (a.generators.size() != L) {
            r.representation.push_back({0, 0, "generator count differs from algebra order"});
            return r;
        }
        for (std::size_t i = 1; i <= L; ++i) {
            for (std::size_t j = i + 1; j <= L; ++j) {
                const CMatrix lhs = commutator(a.generators[i - 1], a.generators[j - 1]);
                CMatrix rhs(lhs.rows(), lhs.cols());
                bool symbolic = false;
                for (std::size_t l = 1; l <= L; ++l) {
                    const Expr& c = g(i, j, l);
                    if (c.is_zero()) continue;
                    if (!c.is_constant()) {
                        symbolic = true;
                        break;
                    }
                    const Coefficient cv = c.constant_value();
                    const CMatrix& gl = a.generators[l - 1];
                    for (std::size_t x = 0; x < gl.rows(); ++x) {
                        for (std::size_t y = 0; y < gl.cols(); ++y) {
                            if (!gl.at(x, y).is_zero()) rhs.at(x, y) += cv * gl.at(x, y);
                        }
                    }
                }
                if (symbolic) {
                    r.representation.push_back({i, j, "symbolic structure constant with matrix generators"});
                } else if (!(lhs == rhs)) {
                    r.representation.push_back({i, j, "commutator differs from sum_l gamma[i][j][l] g_l"});
                }
            }
        }
    }
    return r;
}

SymMatrix transverse_matrix(const Algebra& a, std::size_t i) {
    const std::size_t L = a.order();
    if (i < 1 || i > L) throw IndexError("index " + std::to_string(i) + " out of range 1.." + std::to_string(L));
    SymMatrix m(L, L);
    for (std::size_t j = 1; j <= L; ++j) {
        for (std::size_t l = 1; l <= L; ++l) m(j, l) = a.gamma(i, j, l);
    }
    return m;
}

std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) inv.at(perm[k] - 1) = k + 1;
    return inv;
}

Algebra reorder(const Algebra& a, const std::vector<std::size_t>& perm) {
    const std::size_t L = a.order();
    if (perm.size() != L) {
        throw AlgebraError("permutation has length " + std::to_string(perm.size()) + ", expected " + std::to_string(L));
    }
    std::vector<bool> hit(L, false);
    for (auto p : perm) {
        if (p < 1 || p > L || hit[p - 1]) throw AlgebraError("order is not a permutation of 1.." + std::to_string(L));
        hit[p - 1] = true;
    }
    Algebra b = a;
    for (std::size_t x = 1; x <= L; ++x) {
        for (std::size_t y = 1; y <= L; ++y) {
            for (std::size_t z = 1; z <= L; ++z) b.gamma(x, y, z) = a.gamma(perm[x - 1], perm[y - 1], perm[z - 1]);
        }
    }
    if (a.has_generators()) {
        for (std::size_t k = 0; k < L; ++k) b.generators[k] = a.generators[perm[k] - 1];
    }
    return b;
}

}  // namespace liewn::lie
