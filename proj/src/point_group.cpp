#include "procryst/point_group.hpp"

#include "procryst/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace procryst {

Word Word::inverse() const {
    Word w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        w.letters.emplace_back(it->first, -it->second);
    return w;
}

Word Word::power(const Word& w, int n) {
    Word base = n < 0 ? w.inverse() : w;
    Word out;
    for (int i = 0; i < std::abs(n); ++i)
        out.letters.insert(out.letters.end(), base.letters.begin(), base.letters.end());
    return out;
}

IntMatrix evaluate_word(const Word& w, const std::vector<IntMatrix>& gens,
                        const std::vector<IntMatrix>& gen_invs) {
    if (gens.empty()) throw std::invalid_argument("evaluate_word: no generators");
    IntMatrix acc = IntMatrix::identity(gens[0].rows());
    for (auto [idx, exp] : w.letters) {
        if (idx < 0 || idx >= static_cast<int>(gens.size()))
            throw std::invalid_argument("evaluate_word: generator index out of range");
        acc = acc * (exp > 0 ? gens[static_cast<std::size_t>(idx)] : gen_invs[static_cast<std::size_t>(idx)]);
    }
    return acc;
}

bool check_relators(const std::vector<IntMatrix>& gens, const std::vector<Word>& relators) {
    if (gens.empty()) return relators.empty();
    std::vector<IntMatrix> invs;
    invs.reserve(gens.size());
    for (const IntMatrix& g : gens) invs.push_back(g.unimodular_inverse());
    for (const Word& r : relators)
        if (!evaluate_word(r, gens, invs).is_identity()) return false;
    return true;
}

Closure close_group(const std::vector<IntMatrix>& gens, std::size_t cap) {
    int d = gens.empty() ? 0 : gens[0].rows();
    for (const IntMatrix& g : gens) {
        if (!g.is_square() || g.rows() != d)
            throw std::invalid_argument("close_group: generators must be square of equal dimension");
        Int det = g.det();
        if (det != 1 && det != -1)
            throw std::invalid_argument("close_group: generator not invertible over Z");
    }
    Closure out;
    if (d == 0) return out;

    std::map<IntMatrix, int> seen;
    out.elements.push_back(IntMatrix::identity(d));
    out.words.push_back(Word{});
    seen[out.elements[0]] = 0;

    std::size_t layer_begin = 0;
    while (layer_begin < out.elements.size()) {
        std::size_t layer_end = out.elements.size();
        std::map<IntMatrix, Word> next; // sorted, keeps first-found word
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (std::size_t j = 0; j < gens.size(); ++j) {
                IntMatrix p = out.elements[i] * gens[j];
                if (seen.count(p) || next.count(p)) continue;
                Word w = out.words[i];
                w.letters.emplace_back(static_cast<int>(j), 1);
                next.emplace(std::move(p), std::move(w));
            }
        }
        for (auto& [m, w] : next) {
            if (out.elements.size() >= cap)
                throw cap_exceeded("close_group: closure exceeded cap of " + std::to_string(cap));
            seen[m] = static_cast<int>(out.elements.size());
            out.elements.push_back(m);
            out.words.push_back(w);
        }
        layer_begin = layer_end;
    }
    return out;
}

PointGroup PointGroup::build(int dim, std::vector<IntMatrix> generators, std::vector<Word> relators,
                             std::size_t cap) {
    PointGroup g;
    g.dim_ = dim;
    g.generators_ = std::move(generators);
    g.relators_ = std::move(relators);
    for (const IntMatrix& m : g.generators_)
        if (m.rows() != dim || m.cols() != dim)
            throw std::invalid_argument("PointGroup: generator dimension mismatch");
    for (const Word& r : g.relators_)
        for (auto [idx, exp] : r.letters)
            if (idx < 0 || idx >= static_cast<int>(g.generators_.size()))
                throw std::invalid_argument("PointGroup: relator letter out of range");
    if (!check_relators(g.generators_, g.relators_))
        throw std::invalid_argument("PointGroup: generators do not satisfy the relators");

    if (g.generators_.empty()) {
        g.elements_.push_back(IntMatrix::identity(dim));
        g.words_.push_back(Word{});
    } else {
        Closure c = close_group(g.generators_, cap);
        g.elements_ = std::move(c.elements);
        g.words_ = std::move(c.words);
    }
    for (std::size_t i = 0; i < g.elements_.size(); ++i)
        g.index_[g.elements_[i]] = static_cast<int>(i);

    int n = g.order();
    g.orders_.assign(static_cast<std::size_t>(n), 0);
    g.inverses_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        IntMatrix p = g.elements_[static_cast<std::size_t>(i)];
        int o = 1;
        while (!p.is_identity()) {
            p = p * g.elements_[static_cast<std::size_t>(i)];
            ++o;
            if (o > n) throw std::logic_error("PointGroup: element order exceeds group order");
        }
        g.orders_[static_cast<std::size_t>(i)] = o;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if ((g.elements_[static_cast<std::size_t>(i)] * g.elements_[static_cast<std::size_t>(j)]).is_identity()) {
                g.inverses_[static_cast<std::size_t>(i)] = j;
                break;
            }
    }
    if (n <= 1024) {
        g.mult_table_.assign(static_cast<std::size_t>(n) * n, -1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g.mult_table_[static_cast<std::size_t>(i) * n + j] =
                    g.index_.at(g.elements_[static_cast<std::size_t>(i)] * g.elements_[static_cast<std::size_t>(j)]);
    }
    return g;
}

int PointGroup::index_of(const IntMatrix& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) throw std::invalid_argument("PointGroup: element not in group");
    return it->second;
}

bool PointGroup::contains(const IntMatrix& g) const { return index_.count(g) != 0; }

int PointGroup::element_order(int i) const { return orders_[static_cast<std::size_t>(i)]; }

int PointGroup::inverse_index(int i) const { return inverses_[static_cast<std::size_t>(i)]; }

int PointGroup::product_index(int i, int j) const {
    if (!mult_table_.empty()) return mult_table_[static_cast<std::size_t>(i) * order() + j];
    return index_of(elements_[static_cast<std::size_t>(i)] * elements_[static_cast<std::size_t>(j)]);
}

int PointGroup::index_of_mod(const ModMatrix& m) const {
    int found = -1;
    for (int i = 0; i < order(); ++i) {
        if (ModMatrix::reduce(elements_[static_cast<std::size_t>(i)], m.modulus()) == m) {
            if (found >= 0)
                throw std::invalid_argument("PointGroup: reduction not injective at this modulus");
            found = i;
        }
    }
    if (found < 0) throw std::invalid_argument("PointGroup: no element with this reduction");
    return found;
}

bool PointGroup::reduction_injective(std::int64_t modulus) const {
    std::map<std::string, int> seen;
    for (int i = 0; i < order(); ++i) {
        std::string k = ModMatrix::reduce(elements_[static_cast<std::size_t>(i)], modulus).key();
        if (!seen.emplace(std::move(k), i).second) return false;
    }
    return true;
}

Word element_to_word(const PointGroup& g, const IntMatrix& m) {
    return g.word_of(g.index_of(m));
}

namespace {

// Extends x_i -> images[i] along the word table and checks it is a bijective
// homomorphism from `from` onto `to`.
bool extends_to_isomorphism(const PointGroup& from, const PointGroup& to,
                            const std::vector<int>& images) {
    int n = from.order();
    std::vector<int> f(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int acc = 0; // identity index in `to`
        for (auto [idx, exp] : from.word_of(i).letters) {
            int im = images[static_cast<std::size_t>(idx)];
            acc = to.product_index(acc, exp > 0 ? im : to.inverse_index(im));
        }
        f[static_cast<std::size_t>(i)] = acc;
    }
    // homomorphism check: f(g x_j) = f(g) f(x_j) for all g, j suffices since
    // every element carries a word in the generators
    for (int i = 0; i < n; ++i)
        for (std::size_t j = 0; j < from.generators().size(); ++j) {
            int gi = from.index_of(from.element(i) * from.generators()[j]);
            if (f[static_cast<std::size_t>(gi)] !=
                to.product_index(f[static_cast<std::size_t>(i)], images[j]))
                return false;
        }
    std::vector<int> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
        if (sorted[static_cast<std::size_t>(i)] != i) return false; // not bijective
    return true;
}

} // namespace

std::vector<std::vector<int>> isomorphism_images(const PointGroup& from, const PointGroup& to) {
    std::vector<std::vector<int>> result;
    if (from.order() != to.order()) return result;
    std::size_t k = from.generators().size();
    if (k == 0) {
        result.push_back({});
        return result;
    }

    std::vector<int> gen_orders(k);
    for (std::size_t j = 0; j < k; ++j)
        gen_orders[j] = from.element_order(from.index_of(from.generators()[j]));

    // candidates per slot, pruned by element order
    std::vector<std::vector<int>> pool(k);
    for (std::size_t j = 0; j < k; ++j)
        for (int i = 0; i < to.order(); ++i)
            if (to.element_order(i) == gen_orders[j]) pool[j].push_back(i);

    // relators become applicable once their highest generator is chosen
    std::vector<std::vector<const Word*>> due(k);
    for (const Word& r : from.relators()) {
        int maxidx = -1;
        for (auto [idx, exp] : r.letters) maxidx = std::max(maxidx, idx);
        if (maxidx >= 0) due[static_cast<std::size_t>(maxidx)].push_back(&r);
    }

    auto word_index = [&to](const Word& w, const std::vector<int>& images) {
        int acc = 0;
        for (auto [idx, exp] : w.letters) {
            int im = images[static_cast<std::size_t>(idx)];
            acc = to.product_index(acc, exp > 0 ? im : to.inverse_index(im));
        }
        return acc;
    };

    std::vector<int> pick(k, -1);
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == k) {
            if (extends_to_isomorphism(from, to, pick)) result.push_back(pick);
            return;
        }
        for (int cand : pool[depth]) {
            pick[depth] = cand;
            bool ok = true;
            for (const Word* r : due[depth])
                if (word_index(*r, pick) != 0) { ok = false; break; }
            if (ok) self(self, depth + 1);
        }
    };
    rec(rec, 0);
    return result;
}

std::vector<std::vector<IntMatrix>> automorphism_images(const PointGroup& g) {
    std::vector<std::vector<IntMatrix>> out;
    for (const std::vector<int>& tup : isomorphism_images(g, g)) {
        std::vector<IntMatrix> mats;
        mats.reserve(tup.size());
        for (int i : tup) mats.push_back(g.element(i));
        out.push_back(std::move(mats));
    }
    return out;
}

} // namespace procryst
