#include "procryst/pipeline.hpp"

#include "procryst/cohomology.hpp"
#include "procryst/errors.hpp"
#include "procryst/normalizer.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

namespace procryst {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::int64_t millis() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                     start)
            .count();
    }
};

// cohomology-size discriminator: (|H^1(G, M/|G|M)|, |H^2(G, M/|G|M)|)
std::pair<Int, Int> cohomology_sizes_uncached(const PointGroup& g, const RunOptions& opts) {
    if (g.order() == 1) return {1, 1};
    std::int64_t q = g.order();
    Int h1 = h1_mod(g, q).order;
    Int h2;
    if (opts.h2_bar_cochains) {
        try {
            h2 = h2_finite_coeffs(g, q, opts.caps.bar_budget).order;
        } catch (const cap_exceeded&) {
            h2 = h2_finite_size(g); // same group through the q-multiplication sequence
        }
    } else {
        h2 = h2_finite_size(g);
    }
    return {h1, h2};
}

// the same entry shows up in several pairs of its Q-class; memoize by its
// generator tuple
std::pair<Int, Int> cohomology_sizes(const PointGroup& g, const RunOptions& opts) {
    static std::mutex mu;
    static std::map<std::pair<std::string, bool>, std::pair<Int, Int>> cache;
    std::string key;
    for (const IntMatrix& m : g.generators()) key += m.str() + ";";
    for (const Word& w : g.relators())
        for (auto [idx, exp] : w.letters) key += std::to_string(idx * exp) + ",";
    std::pair<std::string, bool> full_key{std::move(key), opts.h2_bar_cochains};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(full_key);
        if (it != cache.end()) return it->second;
    }
    std::pair<Int, Int> value = cohomology_sizes_uncached(g, opts);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::move(full_key), value);
    return value;
}

std::vector<std::int64_t> group_primes(const PointGroup& g) {
    return prime_factors(g.order());
}

} // namespace

SeparationResult separate_pair(const ZClassEntry& a, const ZClassEntry& b, const RunOptions& opts) {
    if (a.qclass != b.qclass || a.dimension != b.dimension)
        throw std::invalid_argument("separate_pair: entries must share a Q-class");
    Timer timer;
    SeparationResult res;
    res.qclass = a.qclass;
    res.zclass_a = a.zclass;
    res.zclass_b = b.zclass;
    try {
        PointGroup g1 = point_group_of(a, opts.caps);
        PointGroup g2 = point_group_of(b, opts.caps);

        if (cohomology_sizes(g1, opts) != cohomology_sizes(g2, opts)) {
            res.separated = true;
            res.method = SeparationMethod::CohomologySize;
        } else {
            std::vector<std::int64_t> primes = group_primes(g1);
            PairEvidence ev = zclass_pair_profinite_conjugate(g1, g2, primes, opts.caps);
            if (!ev.conjugate) {
                res.separated = true;
                res.method = ev.separated_by;
            } else {
                res.separated = false;
                res.note = "profinitely conjugate: " +
                           (ev.witness_verdict ? ev.witness_verdict->describe() : std::string("trivial"));
            }
        }
    } catch (const cap_exceeded& e) {
        res.skipped = true;
        res.note = e.what();
    }
    res.millis = timer.millis();
    return res;
}

VerificationResult verify_zclass(const ZClassEntry& entry, const RunOptions& opts) {
    Timer timer;
    VerificationResult res;
    res.qclass = entry.qclass;
    res.zclass = entry.zclass;
    res.spacegroups = entry.spacegroups;
    try {
        if (entry.spacegroups <= 2) {
            // the zero class of H^2 is fixed by any action by homomorphisms,
            // so one or two space-group types always stay distinct
            res.stage = 1;
            res.orbit_count = entry.spacegroups;
        } else {
            PointGroup g = point_group_of(entry, opts.caps);
            CohomologyGroup h2 = h2_lattice(g);
            if (h2.trivial()) {
                res.stage = 0;
                res.orbit_count = 1;
                res.note = "H^2 trivial but spacegroup count exceeds 2";
            } else {
                std::int64_t e = exponent_modulus(h2);
                CohomologyGroup h2e = h2_lattice(g, e);
                ModGroupGenSet n = normalizer_mod(g, e, opts.caps);
                OrbitReport under_n = orbit_count(n, h2e, g, opts.caps);
                if (under_n.orbit_count == entry.spacegroups) {
                    res.stage = 4;
                    res.orbit_count = under_n.orbit_count;
                } else {
                    ModGroupGenSet lift = liftable_subgroup(n, g, e, group_primes(g), opts.caps);
                    OrbitReport under_lift = orbit_count(lift, h2e, g, opts.caps);
                    res.orbit_count = under_lift.orbit_count;
                    if (under_lift.orbit_count == entry.spacegroups) {
                        res.stage = 5;
                    } else if (under_lift.orbit_count < entry.spacegroups) {
                        res.stage = 0; // genuine profinite coincidence
                        res.note = "orbit deficit: " + std::to_string(under_lift.orbit_count) +
                                   " orbits for " + std::to_string(entry.spacegroups) + " space groups";
                    } else {
                        throw std::logic_error("verify_zclass: more orbits than space groups");
                    }
                }
            }
        }
    } catch (const cap_exceeded& e) {
        res.stage = -1;
        res.note = e.what();
    }
    res.millis = timer.millis();
    return res;
}

int profinite_orbit_count(const ZClassEntry& entry, const Caps& caps) {
    PointGroup g = point_group_of(entry, caps);
    CohomologyGroup h2 = h2_lattice(g);
    if (h2.trivial()) return 1;
    std::int64_t e = exponent_modulus(h2);
    CohomologyGroup h2e = h2_lattice(g, e);
    ModGroupGenSet n = normalizer_mod(g, e, caps);
    ModGroupGenSet lift = liftable_subgroup(n, g, e, prime_factors(g.order()), caps);
    return orbit_count(lift, h2e, g, caps).orbit_count;
}

std::vector<int> RunReport::separation_histogram() const {
    std::vector<int> h(8, 0);
    for (const SeparationResult& r : pairs) {
        if (!r.separated) continue;
        switch (r.method) {
        case SeparationMethod::CohomologySize: ++h[0]; break;
        case SeparationMethod::Mod2: ++h[1]; break;
        case SeparationMethod::Zp2: ++h[2]; break;
        case SeparationMethod::Mod3: ++h[3]; break;
        case SeparationMethod::Zp3: ++h[4]; break;
        case SeparationMethod::Mod5: ++h[5]; break;
        case SeparationMethod::Zp5: ++h[6]; break;
        case SeparationMethod::CombinedPi: ++h[7]; break;
        case SeparationMethod::None: break;
        }
    }
    return h;
}

std::vector<int> RunReport::stage_histogram() const {
    std::vector<int> h(5, 0);
    for (const VerificationResult& r : entries) {
        if (r.stage == 1) ++h[0];
        else if (r.stage == 4) ++h[1];
        else if (r.stage == 5) ++h[2];
        else if (r.stage == 0) ++h[3];
        else ++h[4];
    }
    return h;
}

int RunReport::exit_code() const {
    if (!validation.empty()) return 4;
    bool skipped = false;
    for (const SeparationResult& r : pairs) {
        if (r.skipped) skipped = true;
        else if (!r.separated) return 2;
    }
    for (const VerificationResult& r : entries) {
        if (r.stage == -1) skipped = true;
        else if (r.stage == 0) return 2;
    }
    return skipped ? 3 : 0;
}

std::string RunReport::summary() const {
    std::ostringstream os;
    os << "Dimension " << dimension << "\n\n";
    if (!validation.empty()) {
        os << "Catalog validation failed:\n";
        for (const ValidationIssue& v : validation)
            os << "  " << v.entry_id << ": " << v.message << "\n";
        return os.str();
    }
    std::vector<int> sh = separation_histogram();
    int separated = 0;
    for (int c : sh) separated += c;
    const char* names[8] = {
        "Size of cohomology", "Conjugacy modulo 2", "Conjugacy over Z[2]",
        "Conjugacy modulo 3", "Conjugacy over Z[3]", "Conjugacy modulo 5",
        "Conjugacy over Z[5]", "Combined primes",
    };
    os << "Test applied              Z-class pairs separated\n";
    for (int i = 0; i < 8; ++i)
        os << "  " << std::left << std::setw(26) << names[i] << sh[static_cast<std::size_t>(i)] << "\n";
    os << "  " << std::left << std::setw(26) << "Total pairs separated" << separated << "\n";
    os << "  " << std::left << std::setw(26) << "Total pairs to be tested" << pairs.size() << "\n";
    for (const SeparationResult& r : pairs)
        if (!r.separated)
            os << "  UNSEPARATED pair " << r.qclass << "." << r.zclass_a << " / " << r.qclass << "."
               << r.zclass_b << (r.skipped ? " (skipped: " + r.note + ")" : " (" + r.note + ")") << "\n";

    std::vector<int> th = stage_histogram();
    os << "\nStage of process          Z-classes verified\n";
    os << "  " << std::left << std::setw(26) << "Stage 1" << th[0] << "\n";
    os << "  " << std::left << std::setw(26) << "Stage 4" << th[1] << "\n";
    os << "  " << std::left << std::setw(26) << "Stage 5" << th[2] << "\n";
    if (th[3]) os << "  " << std::left << std::setw(26) << "Failed" << th[3] << "\n";
    if (th[4]) os << "  " << std::left << std::setw(26) << "Skipped" << th[4] << "\n";
    os << "  " << std::left << std::setw(26) << "Total Z-classes verified" << (th[0] + th[1] + th[2])
       << "\n";
    os << "  " << std::left << std::setw(26) << "Total Z-classes" << entries.size() << "\n";
    for (const VerificationResult& r : entries)
        if (r.stage <= 0)
            os << "  PROBLEM zclass " << r.qclass << "." << r.zclass << ": "
               << (r.stage == -1 ? "skipped: " : "") << r.note << "\n";
    return os.str();
}

std::string RunReport::csv() const {
    std::ostringstream os;
    os << "kind,dim,qclass,zclass_a,zclass_b,outcome,method_or_stage,orbit_count,spacegroup_count,millis\n";
    for (const SeparationResult& r : pairs) {
        os << "pair," << dimension << ',' << r.qclass << ',' << r.zclass_a << ',' << r.zclass_b << ','
           << (r.skipped ? "skipped" : (r.separated ? "separated" : "not-separated")) << ','
           << (r.separated ? method_name(r.method) : "") << ",,," << r.millis << "\n";
    }
    for (const VerificationResult& r : entries) {
        std::string outcome = r.stage > 0 ? "verified" : (r.stage == -1 ? "skipped" : "failed");
        os << "zclass," << dimension << ',' << r.qclass << ',' << r.zclass << ",," << outcome << ','
           << (r.stage > 0 ? "stage-" + std::to_string(r.stage) : "") << ',' << r.orbit_count.str()
           << ',' << r.spacegroups << ',' << r.millis << "\n";
    }
    return os.str();
}

RunReport run_dimension(const Catalog& c, const RunOptions& opts) {
    RunReport report;
    report.dimension = c.dimension;
    report.validation = validate_catalog(c, opts.caps);
    if (!report.validation.empty()) return report;

    std::vector<std::pair<const ZClassEntry*, const ZClassEntry*>> pairs = zclass_pairs(c);
    std::vector<const ZClassEntry*> entries;
    for (const auto& q : c.qclasses)
        for (const ZClassEntry& z : q) entries.push_back(&z);

    report.pairs.resize(pairs.size());
    report.entries.resize(entries.size());

    // independent work items on a bounded pool; results land in fixed slots
    std::atomic<std::size_t> next{0};
    std::size_t total = pairs.size() + entries.size();
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= total) break;
            if (i < pairs.size())
                report.pairs[i] = separate_pair(*pairs[i].first, *pairs[i].second, opts);
            else
                report.entries[i - pairs.size()] = verify_zclass(*entries[i - pairs.size()], opts);
        }
    };
    int nthreads = std::max(1, opts.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    return report;
}

} // namespace procryst
