#include "procryst/catalog.hpp"
#include "procryst/cohomology.hpp"
#include "procryst/conjugacy.hpp"
#include "procryst/errors.hpp"
#include "procryst/normalizer.hpp"
#include "procryst/pipeline.hpp"
#include "procryst/snf.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

namespace py = pybind11;
using namespace procryst;

namespace {

// arbitrary-precision bridging goes through decimal strings
py::object int_to_py(const Int& v) {
    static py::object pyint = py::module_::import("builtins").attr("int");
    return pyint(py::str(v.str()));
}

Int py_to_int(const py::handle& h) {
    return Int(py::str(h).cast<std::string>());
}

IntMatrix matrix_from_py(const py::sequence& rows) {
    std::vector<std::vector<Int>> data;
    for (const auto& row : rows) {
        std::vector<Int> r;
        for (const auto& v : py::cast<py::sequence>(row)) r.push_back(py_to_int(v));
        data.push_back(std::move(r));
    }
    return IntMatrix::from_rows(data);
}

py::list matrix_to_py(const IntMatrix& m) {
    py::list rows;
    for (int i = 0; i < m.rows(); ++i) {
        py::list row;
        for (int j = 0; j < m.cols(); ++j) row.append(int_to_py(m.at(i, j)));
        rows.append(row);
    }
    return rows;
}

std::vector<IntMatrix> matrices_from_py(const py::sequence& seq) {
    std::vector<IntMatrix> out;
    for (const auto& m : seq) out.push_back(matrix_from_py(py::cast<py::sequence>(m)));
    return out;
}

PointGroup group_from_py(const py::sequence& gens, const std::string& relators) {
    std::vector<IntMatrix> mats = matrices_from_py(gens);
    int d = mats.empty() ? 0 : mats[0].rows();
    return PointGroup::build(d, std::move(mats), parse_relator_list(relators));
}

py::dict verdict_to_py(const ConjugacyVerdict& v) {
    py::dict d;
    switch (v.outcome) {
    case ConjugacyVerdict::Outcome::Conjugate: d["outcome"] = "conjugate"; break;
    case ConjugacyVerdict::Outcome::NotConjugateMod: d["outcome"] = "not-conjugate-mod"; break;
    case ConjugacyVerdict::Outcome::NotConjugateOver: d["outcome"] = "not-conjugate-over"; break;
    }
    d["description"] = v.describe();
    if (v.refuted_modulus) d["refuted_modulus"] = v.refuted_modulus;
    if (v.certificate) {
        d["witness_mod"] = matrix_to_py(v.certificate->x0);
        d["modulus"] = v.certificate->modulus;
        if (v.certificate->exact_witness)
            d["witness"] = matrix_to_py(*v.certificate->exact_witness);
    }
    return d;
}

py::dict cohomology_to_py(const CohomologyGroup& h) {
    py::dict d;
    py::list factors;
    for (const Int& f : h.invariant_factors) factors.append(int_to_py(f));
    d["invariant_factors"] = factors;
    d["order"] = int_to_py(h.order);
    d["exponent"] = int_to_py(h.exponent);
    d["modulus"] = h.modulus;
    return d;
}

py::dict report_to_py(const RunReport& r) {
    py::dict d;
    d["dimension"] = r.dimension;
    d["summary"] = r.summary();
    d["csv"] = r.csv();
    d["exit_code"] = r.exit_code();
    d["separation_histogram"] = r.separation_histogram();
    d["stage_histogram"] = r.stage_histogram();
    py::list issues;
    for (const ValidationIssue& v : r.validation) issues.append(py::make_tuple(v.entry_id, v.message));
    d["validation"] = issues;
    return d;
}

} // namespace

PYBIND11_MODULE(_procryst, m) {
    m.doc() = "profinite rigidity of low-dimensional crystallographic groups";

    py::register_exception<cap_exceeded>(m, "CapExceeded");
    py::register_exception<catalog_error>(m, "CatalogError");

    m.def(
        "snf",
        [](const py::sequence& rows) {
            IntMatrix mt = matrix_from_py(rows);
            SnfResult f = snf(mt);
            py::dict d;
            d["P"] = matrix_to_py(f.P);
            d["S"] = matrix_to_py(f.S);
            d["Q"] = matrix_to_py(f.Q);
            d["rank"] = f.rank;
            py::list diag;
            for (const Int& v : f.diagonal()) diag.append(int_to_py(v));
            d["diagonal"] = diag;
            return d;
        },
        py::arg("matrix"), "Smith normal form M = P S Q with unimodular P, Q");

    m.def(
        "pi_part",
        [](const py::handle& n, const std::vector<std::int64_t>& primes) {
            return int_to_py(pi_part(py_to_int(n), primes));
        },
        py::arg("n"), py::arg("primes"));

    m.def(
        "solve_mod",
        [](const py::sequence& rows, const py::sequence& rhs, std::int64_t modulus) -> py::object {
            IntMatrix mt = matrix_from_py(rows);
            std::vector<Int> b;
            for (const auto& v : rhs) b.push_back(py_to_int(v));
            ModSolveResult r = solve_mod(mt, b, modulus);
            if (!r.solvable) return py::none();
            py::dict d;
            d["particular"] = r.particular;
            d["kernel"] = r.kernel;
            d["kernel_orders"] = r.kernel_orders;
            d["count"] = int_to_py(r.solution_count());
            return d;
        },
        py::arg("matrix"), py::arg("rhs"), py::arg("modulus"));

    m.def(
        "integral_membership",
        [](const py::sequence& rows, const py::sequence& x, const std::vector<std::int64_t>& primes) {
            IntMatrix mt = matrix_from_py(rows);
            std::vector<Int> xv;
            for (const auto& v : x) xv.push_back(py_to_int(v));
            MembershipWitness w = integral_membership(mt, xv, primes);
            py::list pre;
            for (const Int& v : w.preimage) pre.append(int_to_py(v));
            return py::make_tuple(w.member, pre);
        },
        py::arg("matrix"), py::arg("x"), py::arg("primes"),
        "is x an integral point of the image of the matrix over Z[pi]?");

    m.def(
        "close_group",
        [](const py::sequence& gens, std::size_t cap) {
            Closure c = close_group(matrices_from_py(gens), cap);
            py::list out;
            for (const IntMatrix& e : c.elements) out.append(matrix_to_py(e));
            return out;
        },
        py::arg("generators"), py::arg("cap") = std::size_t{10000});

    m.def(
        "automorphism_images",
        [](const py::sequence& gens, const std::string& relators) {
            PointGroup g = group_from_py(gens, relators);
            py::list out;
            for (const auto& tup : automorphism_images(g)) {
                py::list t;
                for (const IntMatrix& e : tup) t.append(matrix_to_py(e));
                out.append(t);
            }
            return out;
        },
        py::arg("generators"), py::arg("relators"));

    m.def(
        "q_conjugacy_precheck",
        [](const py::sequence& a, const py::sequence& b) {
            return q_conjugacy_precheck(matrices_from_py(a), matrices_from_py(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "conjugate_over_zpi",
        [](const py::sequence& a, const py::sequence& b, std::vector<std::int64_t> primes) {
            std::sort(primes.begin(), primes.end());
            primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
            ConjugacyProblem p{matrices_from_py(a), matrices_from_py(b), primes, std::nullopt};
            return verdict_to_py(conjugate_over_zpi(p));
        },
        py::arg("a"), py::arg("b"), py::arg("primes"));

    m.def(
        "h1_mod",
        [](const py::sequence& gens, const std::string& relators, std::int64_t q) {
            return cohomology_to_py(h1_mod(group_from_py(gens, relators), q));
        },
        py::arg("generators"), py::arg("relators"), py::arg("q"));

    m.def(
        "h2_lattice",
        [](const py::sequence& gens, const std::string& relators, std::int64_t q) {
            PointGroup g = group_from_py(gens, relators);
            return cohomology_to_py(q > 0 ? h2_lattice(g, q) : h2_lattice(g));
        },
        py::arg("generators"), py::arg("relators"), py::arg("q") = std::int64_t{0});

    m.def(
        "h2_finite_coeffs",
        [](const py::sequence& gens, const std::string& relators, std::int64_t q) {
            return cohomology_to_py(h2_finite_coeffs(group_from_py(gens, relators), q));
        },
        py::arg("generators"), py::arg("relators"), py::arg("q"));

    py::class_<Catalog>(m, "Catalog")
        .def_static("parse", &parse_catalog, py::arg("text"))
        .def_static("load", &load_catalog_file, py::arg("path"))
        .def_property_readonly("dimension", [](const Catalog& c) { return c.dimension; })
        .def("zclass_count", &Catalog::zclass_count)
        .def("spacegroup_total", &Catalog::spacegroup_total)
        .def("serialize", [](const Catalog& c) { return serialize_catalog(c); })
        .def("validate",
             [](const Catalog& c) {
                 py::list out;
                 for (const ValidationIssue& v : validate_catalog(c))
                     out.append(py::make_tuple(v.entry_id, v.message));
                 return out;
             })
        .def("entries",
             [](const Catalog& c) {
                 py::list out;
                 for (const auto& q : c.qclasses)
                     for (const ZClassEntry& z : q) {
                         py::dict d;
                         d["qclass"] = z.qclass;
                         d["zclass"] = z.zclass;
                         d["label"] = z.label;
                         d["spacegroups"] = z.spacegroups;
                         py::list gens;
                         for (const IntMatrix& g : z.generators) gens.append(matrix_to_py(g));
                         d["generators"] = gens;
                         out.append(d);
                     }
                 return out;
             })
        .def("separate_pair",
             [](const Catalog& c, int q1, int z1, int q2, int z2) {
                 const ZClassEntry* a = c.find(q1, z1);
                 const ZClassEntry* b = c.find(q2, z2);
                 if (!a || !b) throw std::invalid_argument("zclass ids not found");
                 SeparationResult r = separate_pair(*a, *b);
                 py::dict d;
                 d["separated"] = r.separated;
                 d["method"] = method_name(r.method);
                 d["skipped"] = r.skipped;
                 return d;
             })
        .def("verify_zclass",
             [](const Catalog& c, int q, int zidx) {
                 const ZClassEntry* e = c.find(q, zidx);
                 if (!e) throw std::invalid_argument("zclass id not found");
                 VerificationResult r = verify_zclass(*e);
                 py::dict d;
                 d["stage"] = r.stage;
                 d["orbit_count"] = int_to_py(r.orbit_count);
                 d["spacegroups"] = r.spacegroups;
                 return d;
             })
        .def("profinite_orbit_count",
             [](const Catalog& c, int q, int zidx) {
                 const ZClassEntry* e = c.find(q, zidx);
                 if (!e) throw std::invalid_argument("zclass id not found");
                 return profinite_orbit_count(*e);
             })
        .def(
            "run",
            [](const Catalog& c, int threads, bool h2_bar_cochains) {
                RunOptions opts;
                opts.threads = threads;
                opts.h2_bar_cochains = h2_bar_cochains;
                return report_to_py(run_dimension(c, opts));
            },
            py::arg("threads") = 1, py::arg("h2_bar_cochains") = false);
}
