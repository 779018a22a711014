#pragma once

#include "procryst/int_matrix.hpp"
#include "procryst/mod.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace procryst {

// Word in abstract generators x1..xk; each letter is (generator index,
// exponent +-1).
struct Word {
    std::vector<std::pair<int, int>> letters;

    bool operator==(const Word& o) const { return letters == o.letters; }
    Word inverse() const;
    static Word power(const Word& w, int n);
};

IntMatrix evaluate_word(const Word& w, const std::vector<IntMatrix>& gens,
                        const std::vector<IntMatrix>& gen_invs);

bool check_relators(const std::vector<IntMatrix>& gens, const std::vector<Word>& relators);

struct Closure {
    std::vector<IntMatrix> elements; // BFS layer order, lexicographic within a layer
    std::vector<Word> words;         // words[i] evaluates to elements[i]; words of identity is empty
};

// Breadth-first closure of <gens> under multiplication.  Throws cap_exceeded
// if more than cap elements appear (infinite or oversized group).
Closure close_group(const std::vector<IntMatrix>& gens, std::size_t cap);

// A finite subgroup of GL(d, Z) carrying its generating tuple, presentation
// relators, full element table and one word per element.
class PointGroup {
public:
    static PointGroup build(int dim, std::vector<IntMatrix> generators, std::vector<Word> relators,
                            std::size_t cap = 10000);

    int dim() const { return dim_; }
    int order() const { return static_cast<int>(elements_.size()); }
    const std::vector<IntMatrix>& generators() const { return generators_; }
    const std::vector<Word>& relators() const { return relators_; }
    const std::vector<IntMatrix>& elements() const { return elements_; }
    const IntMatrix& element(int i) const { return elements_[static_cast<std::size_t>(i)]; }
    const Word& word_of(int i) const { return words_[static_cast<std::size_t>(i)]; }

    int index_of(const IntMatrix& g) const; // throws if g is not in the group
    bool contains(const IntMatrix& g) const;
    int element_order(int i) const;
    int inverse_index(int i) const;
    int product_index(int i, int j) const;

    // Index of the unique element reducing to m modulo m.modulus(); requires
    // the reduction to be injective on the element list (Minkowski, q >= 3).
    int index_of_mod(const ModMatrix& m) const;
    bool reduction_injective(std::int64_t modulus) const;

private:
    int dim_ = 0;
    std::vector<IntMatrix> generators_;
    std::vector<Word> relators_;
    std::vector<IntMatrix> elements_;
    std::vector<Word> words_;
    std::map<IntMatrix, int> index_;
    std::vector<int> orders_;
    std::vector<int> inverses_;
    std::vector<int> mult_table_; // n*n when n <= 1024, else empty
};

Word element_to_word(const PointGroup& g, const IntMatrix& m);

// All generator tuples (f(x_1),...,f(x_k)) of isomorphisms f : from -> to,
// given as element indices in `to`.  Verified through the word table, so the
// result does not depend on the relators presenting either group completely.
std::vector<std::vector<int>> isomorphism_images(const PointGroup& from, const PointGroup& to);

// The tuples (s(x_1),...,s(x_k)) for s ranging over Aut(G), in deterministic
// order.
std::vector<std::vector<IntMatrix>> automorphism_images(const PointGroup& g);

} // namespace procryst
