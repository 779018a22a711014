#pragma once

#include "procryst/caps.hpp"
#include "procryst/int_matrix.hpp"
#include "procryst/point_group.hpp"

#include <string>
#include <vector>

namespace procryst {

// One arithmetic crystal class: a representative finite subgroup of GL(d,Z)
// with its presentation and the number of space-group types it carries.
struct ZClassEntry {
    int dimension = 0;
    int qclass = 0;
    int zclass = 0;
    std::string label;
    int spacegroups = 0;
    std::vector<IntMatrix> generators;
    std::vector<Word> relators; // shared across the Q-class

    std::string id() const { return std::to_string(qclass) + "." + std::to_string(zclass); }
};

struct Catalog {
    int dimension = 0;
    std::vector<std::vector<ZClassEntry>> qclasses;

    std::size_t zclass_count() const;
    int spacegroup_total() const;
    const ZClassEntry* find(int qclass, int zclass) const;
};

Catalog parse_catalog(const std::string& text); // throws catalog_error with line info
Catalog load_catalog_file(const std::string& path);
std::string serialize_catalog(const Catalog& c);

// One word in the catalog grammar, e.g. "(x1 x2)^2" or "x1^-1 x2".
Word parse_word(const std::string& text);
// A full relator list, ';'-separated.
std::vector<Word> parse_relator_list(const std::string& text);

struct ValidationIssue {
    std::string entry_id;
    std::string message;
};

// Every ZClassEntry and whole-catalog invariant; found violations are report
// content, not exceptions.
std::vector<ValidationIssue> validate_catalog(const Catalog& c, const Caps& caps = Caps{});

std::vector<std::pair<const ZClassEntry*, const ZClassEntry*>> zclass_pairs(const Catalog& c);

PointGroup point_group_of(const ZClassEntry& e, const Caps& caps = Caps{});

// Number of isomorphism types of profinite completions of the space groups
// in this arithmetic class (orbits of H^2 under the liftable subgroup).
int profinite_orbit_count(const ZClassEntry& e, const Caps& caps = Caps{});

} // namespace procryst
