#include "procryst/catalog.hpp"

#include "procryst/conjugacy.hpp"
#include "procryst/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace procryst {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// word := factor*; factor := ('x'<n> | '(' word ')') ['^' <int>]
struct WordParser {
    const std::string& s;
    std::size_t pos = 0;
    int line;
    int max_letter = -1;

    WordParser(const std::string& str, int ln) : s(str), line(ln) {}

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }

    int parse_int() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw catalog_error(line, "expected integer in word");
        return std::stoi(s.substr(start, pos - start));
    }

    Word parse_word(bool inside_group = false) {
        Word w;
        while (!at_end()) {
            if (s[pos] == ')') {
                if (!inside_group) throw catalog_error(line, "unmatched ')' in word");
                return w;
            }
            Word factor;
            if (s[pos] == '(') {
                ++pos;
                factor = parse_word(true);
                skip_ws();
                if (pos >= s.size() || s[pos] != ')') throw catalog_error(line, "unmatched '(' in word");
                ++pos;
            } else if (s[pos] == 'x') {
                ++pos;
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == start) throw catalog_error(line, "generator letter needs an index");
                int idx = std::stoi(s.substr(start, pos - start)) - 1;
                if (idx < 0) throw catalog_error(line, "generator indices start at x1");
                max_letter = std::max(max_letter, idx);
                factor.letters.emplace_back(idx, 1);
            } else {
                throw catalog_error(line, std::string("unexpected character '") + s[pos] + "' in word");
            }
            skip_ws();
            int power = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                power = parse_int();
            }
            Word expanded = Word::power(factor, power);
            w.letters.insert(w.letters.end(), expanded.letters.begin(), expanded.letters.end());
        }
        if (inside_group) throw catalog_error(line, "unmatched '(' in word");
        return w;
    }
};

std::vector<Word> parse_relators(const std::string& text, int line, int* max_letter) {
    std::vector<Word> out;
    *max_letter = -1;
    std::string part;
    std::stringstream ss(text);
    while (std::getline(ss, part, ';')) {
        std::string t = strip(part);
        if (t.empty()) {
            if (out.empty() && ss.eof() && strip(text).empty()) break;
            throw catalog_error(line, "empty relator");
        }
        WordParser p(t, line);
        Word w = p.parse_word();
        if (!p.at_end()) throw catalog_error(line, "trailing characters in relator");
        if (w.letters.empty()) throw catalog_error(line, "empty relator");
        *max_letter = std::max(*max_letter, p.max_letter);
        out.push_back(std::move(w));
    }
    return out;
}

IntMatrix parse_gen(const std::string& text, int line, int dimension) {
    std::vector<std::vector<Int>> rows;
    std::string rowpart;
    std::stringstream ss(text);
    while (std::getline(ss, rowpart, '/')) {
        std::vector<Int> row;
        std::stringstream rs(strip(rowpart));
        std::string tok;
        while (rs >> tok) {
            try {
                row.emplace_back(Int(tok));
            } catch (...) {
                throw catalog_error(line, "bad matrix entry '" + tok + "'");
            }
        }
        if (row.empty()) throw catalog_error(line, "empty matrix row");
        rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != dimension)
        throw catalog_error(line, "matrix must have " + std::to_string(dimension) + " rows");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != dimension)
            throw catalog_error(line, "matrix must be square of dimension " + std::to_string(dimension));
    return IntMatrix::from_rows(rows);
}

} // namespace

Word parse_word(const std::string& text) {
    WordParser p(text, 0);
    Word w = p.parse_word();
    if (!p.at_end()) throw catalog_error(0, "trailing characters in word");
    return w;
}

std::vector<Word> parse_relator_list(const std::string& text) {
    int max_letter = -1;
    return parse_relators(text, 0, &max_letter);
}

std::size_t Catalog::zclass_count() const {
    std::size_t n = 0;
    for (const auto& q : qclasses) n += q.size();
    return n;
}

int Catalog::spacegroup_total() const {
    int n = 0;
    for (const auto& q : qclasses)
        for (const ZClassEntry& z : q) n += z.spacegroups;
    return n;
}

const ZClassEntry* Catalog::find(int qclass, int zclass) const {
    for (const auto& q : qclasses)
        for (const ZClassEntry& z : q)
            if (z.qclass == qclass && z.zclass == zclass) return &z;
    return nullptr;
}

Catalog parse_catalog(const std::string& text) {
    Catalog cat;
    bool have_dimension = false;
    int qindex = 0;
    std::vector<Word> current_relators;
    int current_alphabet = 0;
    ZClassEntry* current_z = nullptr;
    int line_no = 0;

    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = strip(raw);
        if (line.empty()) continue;

        std::stringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "dimension") {
            if (have_dimension) throw catalog_error(line_no, "duplicate dimension line");
            if (!(ls >> cat.dimension) || cat.dimension < 1)
                throw catalog_error(line_no, "bad dimension");
            have_dimension = true;
        } else if (kw == "qclass") {
            if (!have_dimension) throw catalog_error(line_no, "qclass before dimension");
            int idx;
            if (!(ls >> idx)) throw catalog_error(line_no, "bad qclass index");
            if (idx != qindex + 1) throw catalog_error(line_no, "qclass indices must be sequential");
            qindex = idx;
            cat.qclasses.emplace_back();
            current_relators.clear();
            current_alphabet = -1;
            current_z = nullptr;
        } else if (kw == "relators:") {
            if (qindex == 0) throw catalog_error(line_no, "relators outside a qclass");
            if (current_alphabet >= 0) throw catalog_error(line_no, "duplicate relators line");
            std::string rest = strip(line.substr(std::string("relators:").size()));
            int max_letter = -1;
            current_relators = parse_relators(rest, line_no, &max_letter);
            current_alphabet = max_letter + 1;
        } else if (kw == "zclass") {
            if (current_alphabet < 0) throw catalog_error(line_no, "zclass before relators");
            ZClassEntry z;
            z.dimension = cat.dimension;
            z.qclass = qindex;
            if (!(ls >> z.zclass)) throw catalog_error(line_no, "bad zclass index");
            if (z.zclass != static_cast<int>(cat.qclasses.back().size()) + 1)
                throw catalog_error(line_no, "zclass indices must be sequential within the qclass");
            std::string labelkw;
            ls >> labelkw;
            if (labelkw != "label") throw catalog_error(line_no, "expected 'label'");
            std::string rest;
            std::getline(ls, rest);
            rest = strip(rest);
            if (rest.size() < 2 || rest[0] != '"') throw catalog_error(line_no, "label must be quoted");
            std::size_t endq = rest.find('"', 1);
            if (endq == std::string::npos) throw catalog_error(line_no, "unterminated label");
            z.label = rest.substr(1, endq - 1);
            std::stringstream ts(strip(rest.substr(endq + 1)));
            std::string sgkw;
            ts >> sgkw;
            if (sgkw != "spacegroups") throw catalog_error(line_no, "expected 'spacegroups'");
            if (!(ts >> z.spacegroups) || z.spacegroups < 1)
                throw catalog_error(line_no, "bad spacegroup count");
            z.relators = current_relators;
            cat.qclasses.back().push_back(std::move(z));
            current_z = &cat.qclasses.back().back();
        } else if (kw == "gen") {
            if (!current_z) throw catalog_error(line_no, "gen outside a zclass");
            std::string rest = strip(line.substr(3));
            current_z->generators.push_back(parse_gen(rest, line_no, cat.dimension));
            if (static_cast<int>(current_z->generators.size()) > current_alphabet)
                throw catalog_error(line_no, "more generators than the relator alphabet");
        } else {
            throw catalog_error(line_no, "unknown directive '" + kw + "'");
        }
    }
    if (!have_dimension && !cat.qclasses.empty())
        throw catalog_error(1, "missing dimension line");
    // generator counts must match the relator alphabet
    for (const auto& q : cat.qclasses)
        for (const ZClassEntry& z : q) {
            int alphabet = 0;
            for (const Word& w : z.relators)
                for (auto [idx, exp] : w.letters) alphabet = std::max(alphabet, idx + 1);
            if (static_cast<int>(z.generators.size()) != alphabet)
                throw catalog_error(line_no, "zclass " + z.id() + " has " +
                                                 std::to_string(z.generators.size()) +
                                                 " generators but the relators use " +
                                                 std::to_string(alphabet));
        }
    return cat;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

namespace {

std::string word_to_string(const Word& w) {
    std::ostringstream os;
    std::size_t i = 0;
    bool first = true;
    while (i < w.letters.size()) {
        std::size_t j = i;
        while (j < w.letters.size() && w.letters[j] == w.letters[i]) ++j;
        int count = static_cast<int>(j - i);
        if (!first) os << ' ';
        first = false;
        os << 'x' << (w.letters[i].first + 1);
        int exp = w.letters[i].second * count;
        if (exp != 1) os << '^' << exp;
        i = j;
    }
    return os.str();
}

} // namespace

std::string serialize_catalog(const Catalog& c) {
    std::ostringstream os;
    os << "dimension " << c.dimension << "\n";
    for (std::size_t qi = 0; qi < c.qclasses.size(); ++qi) {
        os << "qclass " << (qi + 1) << "\n";
        os << "  relators:";
        const auto& q = c.qclasses[qi];
        if (!q.empty()) {
            const std::vector<Word>& rel = q[0].relators;
            for (std::size_t ri = 0; ri < rel.size(); ++ri)
                os << (ri ? " ; " : " ") << word_to_string(rel[ri]);
        }
        os << "\n";
        for (const ZClassEntry& z : q) {
            os << "  zclass " << z.zclass << " label \"" << z.label << "\" spacegroups "
               << z.spacegroups << "\n";
            for (const IntMatrix& g : z.generators) os << "    gen " << g.str() << "\n";
        }
    }
    return os.str();
}

PointGroup point_group_of(const ZClassEntry& e, const Caps& caps) {
    return PointGroup::build(e.dimension, e.generators, e.relators, caps.group_closure);
}

std::vector<ValidationIssue> validate_catalog(const Catalog& c, const Caps& caps) {
    std::vector<ValidationIssue> issues;
    auto complain = [&issues](const std::string& id, const std::string& msg) {
        issues.push_back({id, msg});
    };

    for (const auto& q : c.qclasses) {
        std::vector<const ZClassEntry*> built;
        std::vector<PointGroup> groups;
        for (const ZClassEntry& z : q) {
            for (const IntMatrix& g : z.generators) {
                Int det = g.det();
                if (det != 1 && det != -1) {
                    complain(z.id(), "generator not invertible over Z");
                    goto next_entry;
                }
            }
            if (!check_relators(z.generators, z.relators)) {
                complain(z.id(), "relator not satisfied");
                goto next_entry;
            }
            try {
                groups.push_back(point_group_of(z, caps));
                built.push_back(&z);
            } catch (const cap_exceeded&) {
                complain(z.id(), "group not finite within cap");
            } catch (const std::exception& e) {
                complain(z.id(), std::string("group construction failed: ") + e.what());
            }
        next_entry:;
        }
        // within a Q-class: equal orders and Q-conjugate generator tuples
        for (std::size_t i = 1; i < groups.size(); ++i) {
            if (groups[i].order() != groups[0].order())
                complain(built[i]->id(), "group order differs from first zclass in qclass");
        }
        for (std::size_t i = 1; i < groups.size(); ++i) {
            if (groups[i].order() != groups[0].order()) continue;
            if (groups[0].generators().empty()) continue;
            bool conj = false;
            try {
                for (const std::vector<int>& im : isomorphism_images(groups[0], groups[i])) {
                    std::vector<IntMatrix> tup;
                    for (int idx : im) tup.push_back(groups[i].element(idx));
                    if (q_conjugacy_precheck(groups[0].generators(), tup)) {
                        conj = true;
                        break;
                    }
                }
            } catch (const std::exception& e) {
                complain(built[i]->id(), std::string("Q-conjugacy check failed: ") + e.what());
                continue;
            }
            if (!conj)
                complain(built[i]->id(), "not conjugate over Q to first zclass in qclass");
        }
    }
    return issues;
}

std::vector<std::pair<const ZClassEntry*, const ZClassEntry*>> zclass_pairs(const Catalog& c) {
    std::vector<std::pair<const ZClassEntry*, const ZClassEntry*>> pairs;
    for (const auto& q : c.qclasses)
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = i + 1; j < q.size(); ++j) pairs.emplace_back(&q[i], &q[j]);
    return pairs;
}

} // namespace procryst
