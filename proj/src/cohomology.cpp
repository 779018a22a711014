#include "procryst/cohomology.hpp"

#include "procryst/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace procryst {

GAction GAction::of(const PointGroup& g) {
    GAction a;
    a.rank = g.dim();
    a.gen_mats = g.generators();
    for (const IntMatrix& m : a.gen_mats) a.gen_invs.push_back(m.unimodular_inverse());
    return a;
}

IntMatrix relator_system(const GAction& action, const std::vector<Word>& relators) {
    int r = action.rank;
    int k = static_cast<int>(action.gen_mats.size());
    IntMatrix sys(static_cast<int>(relators.size()) * r, k * r);
    for (std::size_t ri = 0; ri < relators.size(); ++ri) {
        std::vector<IntMatrix> coeff(static_cast<std::size_t>(k), IntMatrix(r, r));
        IntMatrix prefix = IntMatrix::identity(r);
        for (auto [idx, exp] : relators[ri].letters) {
            if (exp > 0) {
                coeff[static_cast<std::size_t>(idx)] = coeff[static_cast<std::size_t>(idx)] + prefix;
                prefix = prefix * action.gen_mats[static_cast<std::size_t>(idx)];
            } else {
                prefix = prefix * action.gen_invs[static_cast<std::size_t>(idx)];
                coeff[static_cast<std::size_t>(idx)] = coeff[static_cast<std::size_t>(idx)] - prefix;
            }
        }
        for (int j = 0; j < k; ++j)
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b)
                    sys.at(static_cast<int>(ri) * r + a, j * r + b) = coeff[static_cast<std::size_t>(j)].at(a, b);
    }
    return sys;
}

namespace {

std::vector<std::vector<Int>> lift_vectors(const std::vector<std::vector<std::int64_t>>& vs) {
    std::vector<std::vector<Int>> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.emplace_back(v.begin(), v.end());
    return out;
}

// generators of Z^1(G, M/qM) from the relator system kernel
std::vector<std::vector<std::int64_t>> z1_generators(const IntMatrix& sys, std::int64_t q,
                                                     std::vector<std::int64_t>* orders) {
    std::vector<Int> zero(static_cast<std::size_t>(sys.rows()), 0);
    ModSolveResult sol = solve_mod(sys, zero, q);
    if (orders) *orders = sol.kernel_orders;
    return sol.kernel;
}

// coboundary generators (g_i - 1) e_j stacked over i, as mod-q vectors
std::vector<std::vector<std::int64_t>> b1_generators(const GAction& act, std::int64_t q) {
    int r = act.rank;
    int k = static_cast<int>(act.gen_mats.size());
    std::vector<std::vector<std::int64_t>> gens;
    for (int j = 0; j < r; ++j) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(k) * r, 0);
        for (int i = 0; i < k; ++i)
            for (int a = 0; a < r; ++a) {
                Int val = act.gen_mats[static_cast<std::size_t>(i)].at(a, j) - (a == j ? 1 : 0);
                v[static_cast<std::size_t>(i) * r + a] = mod_reduce(val, q);
            }
        gens.push_back(std::move(v));
    }
    return gens;
}

std::vector<std::vector<std::int64_t>> integral_kernel_mod(const IntMatrix& sys, std::int64_t q) {
    IntMatrix kb = integer_kernel_basis(sys);
    std::vector<std::vector<std::int64_t>> out;
    for (int j = 0; j < kb.cols(); ++j) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(kb.rows()));
        for (int i = 0; i < kb.rows(); ++i) v[static_cast<std::size_t>(i)] = mod_reduce(kb.at(i, j), q);
        out.push_back(std::move(v));
    }
    return out;
}

CohomologyGroup quotient_to_group(const std::vector<std::vector<std::int64_t>>& num,
                                  const std::vector<std::vector<std::int64_t>>& den, int ambient,
                                  std::int64_t q, int degree) {
    CohomologyGroup h;
    h.modulus = q;
    h.degree = degree;
    h.ambient = ambient;
    h.structure = LatticeQuotient::build(lift_vectors(num), lift_vectors(den), ambient, q);
    for (int i = 0; i < h.structure.dim(); ++i) {
        const Int& f = h.structure.factors()[static_cast<std::size_t>(i)];
        if (f > 1) {
            h.invariant_factors.push_back(f);
            std::vector<Int> g = h.structure.generator(i);
            std::vector<std::int64_t> rep(g.size());
            for (std::size_t j = 0; j < g.size(); ++j) rep[j] = mod_reduce(g[j], q);
            h.representatives.push_back(std::move(rep));
        }
    }
    h.order = 1;
    for (const Int& f : h.invariant_factors) h.order *= f;
    h.exponent = h.invariant_factors.empty() ? Int(1) : h.invariant_factors.back();
    return h;
}

// index [Z^dim : L] of the full-rank lattice spanned by gens and q Z^dim
Int lattice_index(const std::vector<std::vector<std::int64_t>>& gens, int dim, std::int64_t q) {
    IntMatrix m(dim, static_cast<int>(gens.size()) + dim);
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (int i = 0; i < dim; ++i) m.at(i, static_cast<int>(j)) = gens[j][static_cast<std::size_t>(i)];
    for (int i = 0; i < dim; ++i) m.at(i, static_cast<int>(gens.size()) + i) = q;
    std::vector<Int> d = snf_diagonal(m);
    if (static_cast<int>(d.size()) != dim) throw std::logic_error("lattice_index: not full rank");
    Int idx = 1;
    for (const Int& v : d) idx *= v;
    return idx;
}

CohomologyGroup trivial_group(std::int64_t q, int degree) {
    CohomologyGroup h;
    h.modulus = q;
    h.degree = degree;
    h.ambient = 0;
    return h;
}

} // namespace

LatticeQuotient LatticeQuotient::build(const std::vector<std::vector<Int>>& num_gens,
                                       const std::vector<std::vector<Int>>& den_gens, int dim,
                                       std::int64_t q) {
    LatticeQuotient lq;
    lq.dim_ = dim;
    if (dim == 0) return lq;

    auto basis_of = [dim, q](const std::vector<std::vector<Int>>& gens) {
        IntMatrix m(dim, static_cast<int>(gens.size()) + dim);
        for (std::size_t j = 0; j < gens.size(); ++j) {
            if (static_cast<int>(gens[j].size()) != dim)
                throw std::invalid_argument("LatticeQuotient: generator length mismatch");
            for (int i = 0; i < dim; ++i) m.at(i, static_cast<int>(j)) = gens[j][static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < dim; ++i) m.at(i, static_cast<int>(gens.size()) + i) = q; // q Z^dim
        SnfResult f = snf(m, /*track_p=*/true);
        if (f.rank != dim) throw std::logic_error("LatticeQuotient: lattice not full rank");
        // basis = nonzero columns of P*S = d_i * (i-th column of P)
        IntMatrix basis(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) basis.at(i, j) = f.P.at(i, j) * f.S.at(j, j);
        return basis;
    };

    IntMatrix u = basis_of(num_gens);
    IntMatrix v = basis_of(den_gens);

    // W with U W = V; integrality certifies L_den <= L_num
    SnfResult fu = snf(u, /*track_p=*/true);
    IntMatrix w(dim, dim);
    for (int j = 0; j < dim; ++j) {
        std::vector<Int> col(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) col[static_cast<std::size_t>(i)] = v.at(i, j);
        std::vector<Int> c = fu.Pinv.mul_vec(col);
        for (int i = 0; i < dim; ++i) {
            if (c[static_cast<std::size_t>(i)] % fu.S.at(i, i) != 0)
                throw std::logic_error("LatticeQuotient: denominator not inside numerator");
            c[static_cast<std::size_t>(i)] /= fu.S.at(i, i);
        }
        std::vector<Int> y = fu.Qinv.mul_vec(c);
        for (int i = 0; i < dim; ++i) w.at(i, j) = y[static_cast<std::size_t>(i)];
    }

    SnfResult fw = snf(w, /*track_p=*/true);
    lq.basis_change_ = u * fw.P;
    lq.basis_snf_ = snf(lq.basis_change_, /*track_p=*/true);
    lq.factors_.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) lq.factors_[static_cast<std::size_t>(i)] = fw.S.at(i, i);
    for (int i = 0; i < dim; ++i)
        if (lq.factors_[static_cast<std::size_t>(i)] > 1) lq.free_idx_.push_back(i);
    return lq;
}

Int LatticeQuotient::order() const {
    Int o = 1;
    for (int i : free_idx_) o *= factors_[static_cast<std::size_t>(i)];
    return o;
}

Int LatticeQuotient::exponent() const {
    return free_idx_.empty() ? Int(1) : factors_[static_cast<std::size_t>(free_idx_.back())];
}

std::vector<Int> LatticeQuotient::generator(int i) const {
    std::vector<Int> g(static_cast<std::size_t>(dim_));
    for (int r = 0; r < dim_; ++r) g[static_cast<std::size_t>(r)] = basis_change_.at(r, i);
    return g;
}

std::vector<std::int64_t> LatticeQuotient::coords(const std::vector<Int>& z) const {
    std::vector<Int> c = basis_snf_.Pinv.mul_vec(z);
    for (int i = 0; i < dim_; ++i) {
        if (c[static_cast<std::size_t>(i)] % basis_snf_.S.at(i, i) != 0)
            throw std::invalid_argument("LatticeQuotient: point not in the numerator lattice");
        c[static_cast<std::size_t>(i)] /= basis_snf_.S.at(i, i);
    }
    std::vector<Int> t = basis_snf_.Qinv.mul_vec(c);
    std::vector<std::int64_t> out;
    out.reserve(free_idx_.size());
    for (int i : free_idx_) {
        Int f = factors_[static_cast<std::size_t>(i)];
        Int r = t[static_cast<std::size_t>(i)] % f;
        if (r < 0) r += f;
        out.push_back(r.convert_to<std::int64_t>());
    }
    return out;
}

bool LatticeQuotient::in_denominator(const std::vector<Int>& z) const {
    for (std::int64_t c : coords(z))
        if (c != 0) return false;
    return true;
}

std::vector<Int> LatticeQuotient::from_coords(const std::vector<std::int64_t>& c) const {
    if (c.size() != free_idx_.size()) throw std::invalid_argument("LatticeQuotient: bad coordinate count");
    std::vector<Int> z(static_cast<std::size_t>(dim_), 0);
    for (std::size_t j = 0; j < free_idx_.size(); ++j) {
        int i = free_idx_[j];
        for (int r = 0; r < dim_; ++r)
            z[static_cast<std::size_t>(r)] += Int(c[j]) * basis_change_.at(r, i);
    }
    return z;
}

CocycleSpace z1_mod(const PointGroup& g, std::int64_t q) {
    CocycleSpace s;
    s.modulus = q;
    s.degree = 1;
    s.ambient = static_cast<int>(g.generators().size()) * g.dim();
    if (g.generators().empty()) return s;
    GAction act = GAction::of(g);
    IntMatrix sys = relator_system(act, g.relators());
    s.basis = z1_generators(sys, q, &s.basis_orders);
    return s;
}

CocycleSpace b1_mod(const PointGroup& g, std::int64_t q) {
    CocycleSpace s;
    s.modulus = q;
    s.degree = 1;
    s.ambient = static_cast<int>(g.generators().size()) * g.dim();
    if (g.generators().empty()) return s;
    GAction act = GAction::of(g);
    s.basis = b1_generators(act, q);
    s.basis_orders.assign(s.basis.size(), q);
    return s;
}

CocycleSpace z1_integral_reduced(const PointGroup& g, std::int64_t q) {
    CocycleSpace s;
    s.modulus = q;
    s.degree = 1;
    s.ambient = static_cast<int>(g.generators().size()) * g.dim();
    if (g.generators().empty()) return s;
    GAction act = GAction::of(g);
    IntMatrix sys = relator_system(act, g.relators());
    s.basis = integral_kernel_mod(sys, q);
    s.basis_orders.assign(s.basis.size(), q);
    return s;
}

CohomologyGroup h1_mod(const PointGroup& g, std::int64_t q) {
    if (q < 2) throw std::invalid_argument("h1_mod: q must be >= 2");
    if (g.generators().empty()) return trivial_group(q, 1);
    GAction act = GAction::of(g);
    IntMatrix sys = relator_system(act, g.relators());
    int ambient = static_cast<int>(act.gen_mats.size()) * act.rank;
    return quotient_to_group(z1_generators(sys, q, nullptr), b1_generators(act, q), ambient, q, 1);
}

std::int64_t h2_default_modulus(const PointGroup& g) {
    if (g.order() <= 2) return 4;
    return g.order();
}

namespace {

// H^2 for an arbitrary G-lattice action with the given relators:
// Z^1(M/qM) / (Z^1(M) + B^1(M/qM)).
CohomologyGroup h2_lattice_action(const GAction& act, const std::vector<Word>& relators,
                                  std::int64_t q) {
    IntMatrix sys = relator_system(act, relators);
    int ambient = static_cast<int>(act.gen_mats.size()) * act.rank;
    std::vector<std::vector<std::int64_t>> num = z1_generators(sys, q, nullptr);
    std::vector<std::vector<std::int64_t>> den = integral_kernel_mod(sys, q);
    for (auto& v : b1_generators(act, q)) den.push_back(std::move(v));
    return quotient_to_group(num, den, ambient, q, 1);
}

// order of the same quotient without representative bookkeeping; the shifted
// modules for H^3 have rank (|G|-1) d, where the full machinery is wasteful
Int h2_lattice_action_order(const GAction& act, const std::vector<Word>& relators,
                            std::int64_t q) {
    IntMatrix sys = relator_system(act, relators);
    int ambient = static_cast<int>(act.gen_mats.size()) * act.rank;
    std::vector<std::vector<std::int64_t>> num = z1_generators(sys, q, nullptr);
    std::vector<std::vector<std::int64_t>> den = integral_kernel_mod(sys, q);
    for (auto& v : b1_generators(act, q)) den.push_back(std::move(v));
    return lattice_index(den, ambient, q) / lattice_index(num, ambient, q);
}

} // namespace

CohomologyGroup h2_lattice(const PointGroup& g, std::int64_t q) {
    if (q < 3) throw std::invalid_argument("h2_lattice: q must be >= 3");
    if (g.generators().empty()) return trivial_group(q, 1);
    if (g.order() > 1 && !g.reduction_injective(q))
        throw std::invalid_argument("h2_lattice: reduction mod q not injective on G");
    return h2_lattice_action(GAction::of(g), g.relators(), q);
}

CohomologyGroup h2_lattice(const PointGroup& g) { return h2_lattice(g, h2_default_modulus(g)); }

Int h1_lattice_order(const PointGroup& g) {
    if (g.generators().empty()) return 1;
    GAction act = GAction::of(g);
    IntMatrix sys = relator_system(act, g.relators());
    int ambient = static_cast<int>(act.gen_mats.size()) * act.rank;
    // Z^1(G,M)/B^1(G,M): equal-rank sublattices of Z^ambient (the quotient is
    // killed by |G|), so the index is the determinant of the basis change.
    IntMatrix zk = integer_kernel_basis(sys);
    IntMatrix bmat(ambient, act.rank);
    for (int j = 0; j < act.rank; ++j)
        for (std::size_t i = 0; i < act.gen_mats.size(); ++i)
            for (int a = 0; a < act.rank; ++a)
                bmat.at(static_cast<int>(i) * act.rank + a, j) =
                    act.gen_mats[i].at(a, j) - (a == j ? 1 : 0);
    // express coboundaries inside the kernel basis: zk * W = bmat
    SnfResult fz = snf(zk, /*track_p=*/true);
    IntMatrix w(zk.cols(), bmat.cols());
    for (int j = 0; j < bmat.cols(); ++j) {
        std::vector<Int> col(static_cast<std::size_t>(ambient));
        for (int i = 0; i < ambient; ++i) col[static_cast<std::size_t>(i)] = bmat.at(i, j);
        std::vector<Int> c = fz.Pinv.mul_vec(col);
        for (int i = 0; i < zk.cols(); ++i) {
            if (c[static_cast<std::size_t>(i)] % fz.S.at(i, i) != 0)
                throw std::logic_error("h1_lattice_order: coboundary not a cocycle");
            c[static_cast<std::size_t>(i)] /= fz.S.at(i, i);
        }
        for (int i = zk.cols(); i < ambient; ++i)
            if (c[static_cast<std::size_t>(i)] != 0)
                throw std::logic_error("h1_lattice_order: coboundary not a cocycle");
        std::vector<Int> y = fz.Qinv.mul_vec(std::vector<Int>(c.begin(), c.begin() + zk.cols()));
        for (int i = 0; i < zk.cols(); ++i) w.at(i, j) = y[static_cast<std::size_t>(i)];
    }
    SnfResult fw = snf(w, /*track_p=*/false);
    if (fw.rank != zk.cols()) throw std::logic_error("h1_lattice_order: quotient not finite");
    Int o = 1;
    for (const Int& d : fw.diagonal()) o *= d;
    return o;
}

GAction dimension_shift_action(const PointGroup& g) {
    int n = g.order();
    int d = g.dim();
    int rank = (n - 1) * d;
    GAction act;
    act.rank = rank;
    // basis [x, j] for x the non-identity elements (indices 1..n-1), j < d;
    // the matrix of h sends delta_x to delta_{x h^-1}, with
    // [delta_{1,j}] = -sum_{z != 1} sum_l (A_z)_{l j} [delta_{z,l}]
    auto shift_matrix = [&](int hinv) {
        IntMatrix m(rank, rank);
        for (int x = 1; x < n; ++x) {
            int y = g.product_index(x, hinv);
            for (int j = 0; j < d; ++j) {
                int col = (x - 1) * d + j;
                if (y != 0) {
                    m.at((y - 1) * d + j, col) = 1;
                } else {
                    for (int z = 1; z < n; ++z)
                        for (int l = 0; l < d; ++l)
                            m.at((z - 1) * d + l, col) -= g.element(z).at(l, j);
                }
            }
        }
        return m;
    };
    for (const IntMatrix& gen : g.generators()) {
        int gi = g.index_of(gen);
        act.gen_mats.push_back(shift_matrix(g.inverse_index(gi)));
        act.gen_invs.push_back(shift_matrix(gi));
    }
    return act;
}

Int h3_lattice_order(const PointGroup& g) {
    if (g.generators().empty()) return 1;
    GAction shifted = dimension_shift_action(g);
    std::int64_t q = h2_default_modulus(g);
    return h2_lattice_action_order(shifted, g.relators(), q);
}

Int h2_finite_size(const PointGroup& g) {
    if (g.generators().empty()) return 1;
    return h2_lattice(g).order * h3_lattice_order(g);
}

CohomologyGroup h2_finite_coeffs(const PointGroup& g, std::int64_t q, std::int64_t budget) {
    if (q < 2) throw std::invalid_argument("h2_finite_coeffs: q must be >= 2");
    int n = g.order();
    int d = g.dim();
    if (n == 1) return trivial_group(q, 2);
    std::int64_t nn = n - 1;
    std::int64_t vars = nn * nn * d;
    std::int64_t rows = nn * nn * nn * d;
    if (rows * vars > budget)
        throw cap_exceeded("h2_finite_coeffs: bar-cochain system of " + std::to_string(rows) + "x" +
                           std::to_string(vars) + " exceeds budget");

    auto var_base = [&](int a, int b) { return ((a - 1) * nn + (b - 1)) * d; };

    // cocycle condition g f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0 on
    // normalized cochains, for non-identity g, h, k
    std::set<std::vector<Int>> row_set;
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b)
            for (int c = 1; c < n; ++c) {
                int ab = g.product_index(a, b);
                int bc = g.product_index(b, c);
                for (int r = 0; r < d; ++r) {
                    std::vector<Int> row(static_cast<std::size_t>(vars), 0);
                    for (int l = 0; l < d; ++l)
                        row[static_cast<std::size_t>(var_base(b, c) + l)] += g.element(a).at(r, l);
                    if (ab != 0) row[static_cast<std::size_t>(var_base(ab, c) + r)] -= 1;
                    if (bc != 0) row[static_cast<std::size_t>(var_base(a, bc) + r)] += 1;
                    row[static_cast<std::size_t>(var_base(a, b) + r)] -= 1;
                    bool zero = std::all_of(row.begin(), row.end(), [](const Int& v) { return v == 0; });
                    if (!zero) row_set.insert(std::move(row));
                }
            }
    IntMatrix sys(static_cast<int>(row_set.size()), static_cast<int>(vars));
    {
        int i = 0;
        for (const auto& row : row_set) {
            for (std::int64_t j = 0; j < vars; ++j) sys.at(i, static_cast<int>(j)) = row[static_cast<std::size_t>(j)];
            ++i;
        }
    }

    std::vector<std::vector<std::int64_t>> num = z1_generators(sys, q, nullptr);

    // coboundaries of normalized 1-cochains c = e_j at x:
    // (delta c)(g,h) = g c(h) - c(gh) + c(g)
    std::vector<std::vector<std::int64_t>> den;
    for (int x = 1; x < n; ++x)
        for (int j = 0; j < d; ++j) {
            std::vector<std::int64_t> v(static_cast<std::size_t>(vars), 0);
            for (int a = 1; a < n; ++a)
                for (int b = 1; b < n; ++b) {
                    int ab = g.product_index(a, b);
                    for (int r = 0; r < d; ++r) {
                        Int val = 0;
                        if (b == x) val += g.element(a).at(r, j);
                        if (ab == x) val -= (r == j ? 1 : 0);
                        if (a == x) val += (r == j ? 1 : 0);
                        if (val != 0) {
                            std::size_t idx = static_cast<std::size_t>(var_base(a, b) + r);
                            v[idx] = mod_reduce(Int(v[idx]) + val, q);
                        }
                    }
                }
            den.push_back(std::move(v));
        }

    return quotient_to_group(num, den, static_cast<int>(vars), q, 2);
}

std::int64_t exponent_modulus(const CohomologyGroup& h) {
    if (h.trivial()) throw std::invalid_argument("exponent_modulus: trivial cohomology group");
    Int e = h.exponent;
    if (e == 2) return 4;
    return e.convert_to<std::int64_t>();
}

CocycleActionContext::CocycleActionContext(const PointGroup& g, std::int64_t e) : g_(g), e_(e) {
    if (e < 3) throw std::invalid_argument("CocycleActionContext: modulus must be >= 3");
    for (int i = 0; i < g.order(); ++i) {
        ModMatrix m = ModMatrix::reduce(g.element(i), e);
        auto [it, fresh] = index_.emplace(m.key(), i);
        if (!fresh)
            throw std::invalid_argument("CocycleActionContext: reduction mod e not injective on G");
        elements_mod_.push_back(std::move(m));
    }
    for (const IntMatrix& gen : g.generators()) gens_mod_.push_back(ModMatrix::reduce(gen, e));
}

int CocycleActionContext::element_index(const ModMatrix& m) const {
    auto it = index_.find(m.key());
    return it == index_.end() ? -1 : it->second;
}

bool CocycleActionContext::normalizes(const ModMatrix& phi) const {
    if (phi.modulus() != e_) throw std::invalid_argument("CocycleActionContext: modulus mismatch");
    if (!phi.invertible()) return false;
    ModMatrix inv = phi.inverse();
    for (const ModMatrix& m : elements_mod_) {
        ModMatrix conj = inv * m * phi;
        if (!index_.count(conj.key())) return false;
    }
    return true;
}

std::vector<std::int64_t> CocycleActionContext::evaluate(const std::vector<std::int64_t>& zeta,
                                                         int index) const {
    int d = g_.dim();
    const Word& w = g_.word_of(index);
    std::vector<std::int64_t> val(static_cast<std::size_t>(d), 0);
    ModMatrix prefix = ModMatrix::identity(d, e_);
    for (auto [idx, exp] : w.letters) {
        const ModMatrix& gm = gens_mod_[static_cast<std::size_t>(idx)];
        if (exp > 0) {
            std::vector<std::int64_t> gv(zeta.begin() + idx * d, zeta.begin() + (idx + 1) * d);
            std::vector<std::int64_t> term = prefix.mul_vec(gv);
            for (int a = 0; a < d; ++a) val[static_cast<std::size_t>(a)] = (val[static_cast<std::size_t>(a)] + term[static_cast<std::size_t>(a)]) % e_;
            prefix = prefix * gm;
        } else {
            prefix = prefix * gm.inverse();
            std::vector<std::int64_t> gv(zeta.begin() + idx * d, zeta.begin() + (idx + 1) * d);
            std::vector<std::int64_t> term = prefix.mul_vec(gv);
            for (int a = 0; a < d; ++a)
                val[static_cast<std::size_t>(a)] = ((val[static_cast<std::size_t>(a)] - term[static_cast<std::size_t>(a)]) % e_ + e_) % e_;
        }
    }
    return val;
}

std::vector<std::int64_t> CocycleActionContext::act(const ModMatrix& phi,
                                                    const std::vector<std::int64_t>& zeta) const {
    int d = g_.dim();
    std::size_t k = g_.generators().size();
    if (zeta.size() != k * static_cast<std::size_t>(d))
        throw std::invalid_argument("cocycle_action: value tuple has wrong length");
    if (phi.modulus() != e_) throw std::invalid_argument("cocycle_action: modulus mismatch");
    ModMatrix inv = phi.inverse();
    std::vector<std::int64_t> out(zeta.size(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        ModMatrix conj = inv * gens_mod_[i] * phi;
        auto it = index_.find(conj.key());
        if (it == index_.end())
            throw std::invalid_argument("cocycle_action: phi does not normalize G mod e");
        std::vector<std::int64_t> val = evaluate(zeta, it->second);
        std::vector<std::int64_t> mapped = phi.mul_vec(val);
        for (int a = 0; a < d; ++a) out[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] = mapped[static_cast<std::size_t>(a)];
    }
    return out;
}

std::vector<std::int64_t> cocycle_action(const ModMatrix& phi, const std::vector<std::int64_t>& zeta,
                                         const PointGroup& g) {
    CocycleActionContext ctx(g, phi.modulus());
    return ctx.act(phi, zeta);
}

} // namespace procryst
