#include "procryst/normalizer.hpp"

#include "procryst/conjugacy.hpp"
#include "procryst/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace procryst {

Int gl_order(int d, std::int64_t m) {
    Int total = 1;
    for (std::int64_t p : prime_factors(m)) {
        int a = 0;
        std::int64_t mm = m;
        while (mm % p == 0) {
            mm /= p;
            ++a;
        }
        Int pd = 1;
        for (int i = 0; i < d; ++i) pd *= p;
        Int count = 1;
        Int pi = 1;
        for (int i = 0; i < d; ++i) {
            count *= (pd - pi);
            pi *= p;
        }
        // kernel of GL(d, Z/p^a) -> GL(d, Z/p) has order p^((a-1) d^2)
        for (int i = 0; i < (a - 1) * d * d; ++i) count *= p;
        total *= count;
    }
    return total;
}

namespace {

std::vector<std::int64_t> unit_group_generators(std::int64_t m) {
    std::vector<std::int64_t> gens;
    std::set<std::int64_t> have{1 % m};
    for (std::int64_t u = 2; u < m; ++u) {
        if (std::gcd(u, m) != 1 || have.count(u)) continue;
        gens.push_back(u);
        // extend the generated unit subgroup
        std::vector<std::int64_t> frontier(have.begin(), have.end());
        while (!frontier.empty()) {
            std::vector<std::int64_t> next;
            for (std::int64_t x : frontier)
                for (std::int64_t gg : gens) {
                    std::int64_t y = x * gg % m;
                    if (have.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
    }
    return gens;
}

std::string subgroup_key(std::vector<std::string> keys) {
    std::sort(keys.begin(), keys.end());
    std::string out;
    for (const std::string& k : keys) out += k;
    return out;
}

std::string conjugate_subgroup_key(const std::vector<ModMatrix>& elements, const ModMatrix& u,
                                   const ModMatrix& uinv) {
    std::vector<std::string> keys;
    keys.reserve(elements.size());
    for (const ModMatrix& g : elements) keys.push_back((uinv * g * u).key());
    return subgroup_key(std::move(keys));
}

} // namespace

ModGroupGenSet gl_generators(int d, std::int64_t m) {
    if (d < 1 || m < 2) throw std::invalid_argument("gl_generators: need d >= 1, m >= 2");
    ModGroupGenSet out;
    out.modulus = m;
    std::set<std::string> seen;
    auto push = [&](const ModMatrix& g) {
        if (g.is_identity()) return;
        if (seen.insert(g.key()).second) out.generators.push_back(g);
    };
    for (std::int64_t u : unit_group_generators(m)) {
        ModMatrix g = ModMatrix::identity(d, m);
        g.at(0, 0) = u;
        push(g);
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i == j) continue;
            ModMatrix g = ModMatrix::identity(d, m);
            g.at(i, j) = 1;
            push(g);
        }
    if (d >= 2) {
        ModMatrix g = ModMatrix::identity(d, m);
        g.at(0, 0) = 0;
        g.at(1, 1) = 0;
        g.at(0, 1) = 1;
        g.at(1, 0) = 1;
        push(g);
    }
    out.order = gl_order(d, m);
    return out;
}

std::vector<ModMatrix> close_mod_group(const std::vector<ModMatrix>& gens, std::size_t cap) {
    if (gens.empty()) throw std::invalid_argument("close_mod_group: no generators");
    std::int64_t m = gens[0].modulus();
    int d = gens[0].rows();
    for (const ModMatrix& g : gens) {
        if (g.modulus() != m || g.rows() != d || g.cols() != d)
            throw std::invalid_argument("close_mod_group: inconsistent generators");
        if (!g.invertible()) throw std::invalid_argument("close_mod_group: generator not invertible");
    }
    std::map<std::string, ModMatrix> seen;
    ModMatrix id = ModMatrix::identity(d, m);
    seen.emplace(id.key(), id);
    std::queue<const ModMatrix*> todo;
    todo.push(&seen.begin()->second);
    while (!todo.empty()) {
        const ModMatrix* cur = todo.front();
        todo.pop();
        for (const ModMatrix& g : gens) {
            ModMatrix p = *cur * g;
            std::string k = p.key();
            auto it = seen.find(k);
            if (it == seen.end()) {
                if (seen.size() >= cap)
                    throw cap_exceeded("close_mod_group: closure exceeded cap of " + std::to_string(cap));
                auto [ins, ok] = seen.emplace(std::move(k), std::move(p));
                (void)ok;
                todo.push(&ins->second);
            }
        }
    }
    std::vector<ModMatrix> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(std::move(v));
    return out;
}

namespace {

// grow a generating set one element at a time, keeping only generators that
// enlarge the group
struct GrowingSubgroup {
    std::vector<ModMatrix> gens;
    std::vector<ModMatrix> elements;
    std::set<std::string> keys;
    std::size_t cap;

    GrowingSubgroup(const std::vector<ModMatrix>& seed, std::size_t cap_) : cap(cap_) {
        gens = seed;
        rebuild();
    }

    void rebuild() {
        elements = close_mod_group(gens, cap);
        keys.clear();
        for (const ModMatrix& g : elements) keys.insert(g.key());
    }

    bool contains(const ModMatrix& g) const { return keys.count(g.key()) != 0; }

    bool add(const ModMatrix& g) {
        if (contains(g)) return false;
        gens.push_back(g);
        rebuild();
        return true;
    }
};

} // namespace

ModGroupGenSet normalizer_mod(const PointGroup& g, std::int64_t e, const Caps& caps) {
    if (!g.reduction_injective(e))
        throw std::invalid_argument("normalizer_mod: G does not embed mod e");
    int d = g.dim();
    std::vector<ModMatrix> subgroup;
    subgroup.reserve(static_cast<std::size_t>(g.order()));
    for (int i = 0; i < g.order(); ++i) subgroup.push_back(ModMatrix::reduce(g.element(i), e));

    ModGroupGenSet gl = gl_generators(d, e);
    std::vector<ModMatrix> gl_invs;
    gl_invs.reserve(gl.generators.size());
    for (const ModMatrix& t : gl.generators) gl_invs.push_back(t.inverse());

    // Schreier orbit on conjugates of the subgroup's canonical form
    ModMatrix id = ModMatrix::identity(d, e);
    std::map<std::string, int> state_of;
    std::vector<ModMatrix> transversal;
    std::vector<ModMatrix> transversal_inv;

    std::string start = conjugate_subgroup_key(subgroup, id, id);
    state_of.emplace(start, 0);
    transversal.push_back(id);
    transversal_inv.push_back(id);

    std::vector<ModMatrix> schreier;
    std::set<std::string> schreier_keys;

    std::size_t head = 0;
    while (head < transversal.size()) {
        ModMatrix u = transversal[head];
        for (std::size_t ti = 0; ti < gl.generators.size(); ++ti) {
            ModMatrix v = u * gl.generators[ti];
            ModMatrix vinv = gl_invs[ti] * transversal_inv[head];
            std::string k = conjugate_subgroup_key(subgroup, v, vinv);
            auto it = state_of.find(k);
            if (it == state_of.end()) {
                if (transversal.size() >= caps.orbit_states)
                    throw cap_exceeded("normalizer_mod: orbit exceeded cap of " +
                                       std::to_string(caps.orbit_states));
                state_of.emplace(std::move(k), static_cast<int>(transversal.size()));
                transversal.push_back(std::move(v));
                transversal_inv.push_back(std::move(vinv));
            } else {
                // Schreier generator u * t * w^{-1} for the stabilizer
                ModMatrix s = v * transversal_inv[static_cast<std::size_t>(it->second)];
                if (!s.is_identity() && schreier_keys.insert(s.key()).second)
                    schreier.push_back(std::move(s));
            }
        }
        ++head;
    }

    // seed with the image of G, then keep only Schreier generators that grow
    // the subgroup; this also certifies |N|
    std::vector<ModMatrix> seed;
    std::set<std::string> seed_keys;
    for (const IntMatrix& gen : g.generators()) {
        ModMatrix m = ModMatrix::reduce(gen, e);
        if (!m.is_identity() && seed_keys.insert(m.key()).second) seed.push_back(std::move(m));
    }
    if (seed.empty()) seed.push_back(id);
    GrowingSubgroup grown(seed, caps.mod_group_closure);
    std::vector<ModMatrix> kept = seed;
    for (const ModMatrix& s : schreier)
        if (grown.add(s)) kept.push_back(s);

    ModGroupGenSet out;
    out.modulus = e;
    out.generators = std::move(kept);
    out.order = Int(grown.elements.size());
    return out;
}

ModGroupGenSet normalizer_mod_bruteforce(const PointGroup& g, std::int64_t e, const Caps& caps) {
    if (!g.reduction_injective(e))
        throw std::invalid_argument("normalizer_mod_bruteforce: G does not embed mod e");
    int d = g.dim();
    std::set<std::string> subgroup_keys;
    std::vector<ModMatrix> subgroup;
    for (int i = 0; i < g.order(); ++i) {
        subgroup.push_back(ModMatrix::reduce(g.element(i), e));
        subgroup_keys.insert(subgroup.back().key());
    }
    ModGroupGenSet gl = gl_generators(d, e);
    std::vector<ModMatrix> all = close_mod_group(gl.generators, caps.mod_group_closure);
    ModGroupGenSet out;
    out.modulus = e;
    Int count = 0;
    for (const ModMatrix& x : all) {
        ModMatrix xinv = x.inverse();
        bool norm = true;
        for (const ModMatrix& s : subgroup)
            if (!subgroup_keys.count((xinv * s * x).key())) {
                norm = false;
                break;
            }
        if (norm) {
            out.generators.push_back(x);
            count += 1;
        }
    }
    out.order = count;
    return out;
}

OrbitReport orbit_count(const ModGroupGenSet& n, const CohomologyGroup& h, const PointGroup& g,
                        const Caps& caps) {
    if (h.modulus != n.modulus)
        throw std::invalid_argument("orbit_count: H and N moduli differ");
    if (h.degree != 1)
        throw std::invalid_argument("orbit_count: representatives must be degree-1 cocycles");
    OrbitReport rep;
    rep.acting = "<" + std::to_string(n.generators.size()) + " generators mod " +
                 std::to_string(n.modulus) + ">";
    if (h.trivial()) {
        rep.orbit_count = 1;
        rep.representatives.push_back(std::vector<std::int64_t>(static_cast<std::size_t>(h.ambient), 0));
        rep.orbit_sizes.push_back(1);
        return rep;
    }
    if (h.order > caps.h2_elements)
        throw cap_exceeded("orbit_count: |H| = " + h.order.str() + " exceeds cap");

    std::vector<std::int64_t> radix;
    for (const Int& f : h.invariant_factors) radix.push_back(f.convert_to<std::int64_t>());
    std::size_t total = static_cast<std::size_t>(h.order.convert_to<std::int64_t>());

    auto index_of = [&](const std::vector<std::int64_t>& c) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < radix.size(); ++i)
            idx = idx * static_cast<std::size_t>(radix[i]) + static_cast<std::size_t>(c[i]);
        return idx;
    };
    auto coords_at = [&](std::size_t idx) {
        std::vector<std::int64_t> c(radix.size(), 0);
        for (std::size_t i = radix.size(); i-- > 0;) {
            c[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(radix[i]));
            idx /= static_cast<std::size_t>(radix[i]);
        }
        return c;
    };

    CocycleActionContext ctx(g, h.modulus);

    // union-find over the elements of H
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };

    for (const ModMatrix& gen : n.generators) {
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::vector<Int> z = h.structure.from_coords(coords_at(idx));
            std::vector<std::int64_t> zmod(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) zmod[i] = mod_reduce(z[i], h.modulus);
            std::vector<std::int64_t> image = ctx.act(gen, zmod);
            std::vector<Int> lifted(image.begin(), image.end());
            std::size_t target = index_of(h.structure.coords(lifted));
            unite(static_cast<int>(idx), static_cast<int>(target));
        }
    }

    std::map<int, Int> sizes;
    for (std::size_t idx = 0; idx < total; ++idx) sizes[find(static_cast<int>(idx))] += 1;
    rep.orbit_count = static_cast<int>(sizes.size());
    for (const auto& [root, size] : sizes) {
        std::vector<Int> z = h.structure.from_coords(coords_at(static_cast<std::size_t>(root)));
        std::vector<std::int64_t> zmod(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) zmod[i] = mod_reduce(z[i], h.modulus);
        rep.representatives.push_back(std::move(zmod));
        rep.orbit_sizes.push_back(size);
    }
    return rep;
}

ModGroupGenSet liftable_subgroup(const ModGroupGenSet& n, const PointGroup& g, std::int64_t e,
                                 const std::vector<std::int64_t>& pi, const Caps& caps) {
    if (n.modulus != e) throw std::invalid_argument("liftable_subgroup: modulus mismatch");
    for (std::int64_t p : prime_factors(e))
        if (std::find(pi.begin(), pi.end(), p) == pi.end())
            throw std::invalid_argument("liftable_subgroup: primes of e must lie in pi");

    CocycleActionContext ctx(g, e);
    std::vector<ModMatrix> all = close_mod_group(n.generators, caps.mod_group_closure);

    int d = g.dim();
    ModMatrix id = ModMatrix::identity(d, e);
    std::vector<ModMatrix> seed;
    std::set<std::string> seed_keys;
    for (const IntMatrix& gen : g.generators()) {
        ModMatrix m = ModMatrix::reduce(gen, e);
        if (!m.is_identity() && seed_keys.insert(m.key()).second) seed.push_back(std::move(m));
    }
    if (seed.empty()) seed.push_back(id);
    GrowingSubgroup lift(seed, caps.mod_group_closure);
    std::vector<ModMatrix> kept = seed;

    for (const ModMatrix& cand : all) {
        if (lift.contains(cand)) continue;
        ModMatrix cinv = cand.inverse();
        // exact integer representatives of the conjugated generators
        std::vector<IntMatrix> target;
        target.reserve(g.generators().size());
        for (const IntMatrix& gen : g.generators()) {
            ModMatrix conj = cinv * ModMatrix::reduce(gen, e) * cand;
            int idx = ctx.element_index(conj);
            if (idx < 0)
                throw std::logic_error("liftable_subgroup: element of <N> does not normalize G");
            target.push_back(g.element(idx));
        }

        ConjugacyProblem problem{g.generators(), target, pi,
                                 CongruenceConstraint{e, cand}};
        ConjugacyVerdict v = conjugate_over_zpi(problem, caps);
        if (v.conjugate()) {
            if (lift.add(cand)) kept.push_back(cand);
        }
    }

    ModGroupGenSet out;
    out.modulus = e;
    out.generators = std::move(kept);
    out.order = Int(lift.elements.size());
    return out;
}

} // namespace procryst
