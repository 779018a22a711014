#!/usr/bin/env python3
"""Build data/dim3.catalog: the 73 arithmetic crystal classes of dimension 3.

Point groups are constructed in the conventional axes (unique axis c for
monoclinic, hexagonal axes for trigonal/hexagonal P classes, rhombohedral
primitive axes for R classes) and conjugated into a primitive basis of the
centered lattice where needed, so every generator is an integer matrix.
Space-group counts are the affine space-group types per arithmetic class
(enantiomorphic pairs identified), totalling 219 across 32 geometric classes.
"""

from fractions import Fraction

# ---------------------------------------------------------------- matrices


def mat(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def inv3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    return tuple(tuple(x / det for x in row) for row in adj)


def conjugate(basis, m):
    out = mul(inv3(basis), mul(m, basis))
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise SystemExit(f"non-integral conjugate: {out}")
    return tuple(tuple(int(x) for x in row) for row in out)


NEG = mat([[-1, 0, 0], [0, -1, 0], [0, 0, -1]])

C2Z = mat([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])
C2X = mat([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
MZ = mat([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
MX = mat([[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
MY = mat([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
R4Z = mat([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
S4Z = mat([[0, 1, 0], [-1, 0, 0], [0, 0, -1]])
R3Z = mat([[0, -1, 0], [1, -1, 0], [0, 0, 1]])      # hexagonal axes
R6Z = mat([[1, -1, 0], [1, 0, 0], [0, 0, 1]])
S3Z = mat([[0, -1, 0], [1, -1, 0], [0, 0, -1]])     # -6 generator
C2_321 = mat([[1, -1, 0], [0, -1, 0], [0, 0, -1]])  # 2-fold along a
C2_312 = mat([[0, -1, 0], [-1, 0, 0], [0, 0, -1]])
M_3M1 = mat([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
M_31M = mat([[0, -1, 0], [-1, 0, 0], [0, 0, 1]])
R3D = mat([[0, 0, 1], [1, 0, 0], [0, 1, 0]])        # 3-fold along (1,1,1)
# rhombohedral primitive axes: the 3-fold is the cyclic permutation
P3R = mat([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
C2R = mat([[0, -1, 0], [-1, 0, 0], [0, 0, -1]])
MR = mul(NEG, C2R)
S6R = mul(NEG, P3R)
S3Z_NEG = mul(NEG, R3Z)

# centered-lattice bases (columns in conventional coordinates)
BASIS_A = mat([[1, 0, 0], [0, Fraction(1, 2), Fraction(-1, 2)], [0, Fraction(1, 2), Fraction(1, 2)]])
BASIS_C = mat([[Fraction(1, 2), Fraction(-1, 2), 0], [Fraction(1, 2), Fraction(1, 2), 0], [0, 0, 1]])
BASIS_F = mat([[0, Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), 0, Fraction(1, 2)],
               [Fraction(1, 2), Fraction(1, 2), 0]])
BASIS_I = mat([[1, 0, Fraction(1, 2)], [0, 1, Fraction(1, 2)], [0, 0, Fraction(1, 2)]])

PRES_TRIV = []
PRES_C2 = ["x1^2"]
PRES_C3 = ["x1^3"]
PRES_C4 = ["x1^4"]
PRES_C6 = ["x1^6"]
PRES_V4 = ["x1^2", "x2^2", "(x1 x2)^2"]
PRES_D4 = ["x1^4", "x2^2", "(x1 x2)^2"]
PRES_D3 = ["x1^3", "x2^2", "(x1 x2)^2"]
PRES_D6 = ["x1^6", "x2^2", "(x1 x2)^2"]
PRES_C4xC2 = ["x1^4", "x2^2", "x1 x2 x1^-1 x2^-1"]
PRES_C6xC2 = ["x1^6", "x2^2", "x1 x2 x1^-1 x2^-1"]
PRES_C2cube = ["x1^2", "x2^2", "x3^2", "(x1 x2)^2", "(x1 x3)^2", "(x2 x3)^2"]
PRES_D4xC2 = ["x1^4", "x2^2", "(x1 x2)^2", "x3^2", "x1 x3 x1^-1 x3^-1", "x2 x3 x2^-1 x3^-1"]
PRES_D3xC2 = ["x1^3", "x2^2", "(x1 x2)^2", "x3^2", "x1 x3 x1^-1 x3^-1", "x2 x3 x2^-1 x3^-1"]
PRES_D6xC2 = ["x1^6", "x2^2", "(x1 x2)^2", "x3^2", "x1 x3 x1^-1 x3^-1", "x2 x3 x2^-1 x3^-1"]
PRES_A4 = ["x1^3", "x2^2", "(x1 x2)^3"]
PRES_A4xC2 = ["x1^3", "x2^2", "(x1 x2)^3", "x3^2", "x1 x3 x1^-1 x3^-1", "x2 x3 x2^-1 x3^-1"]
PRES_S4 = ["x1^3", "x2^4", "(x1 x2)^2"]
PRES_S4xC2 = ["x1^3", "x2^4", "(x1 x2)^2", "x3^2", "x1 x3 x1^-1 x3^-1", "x2 x3 x2^-1 x3^-1"]


def z(label, gens, basis, count):
    return (label, gens, basis, count)


# (geometric class, presentation, [zclass...]); one Q-class per geometric class
QCLASSES = [
    ("1", PRES_TRIV, [z("P1", [], None, 1)]),
    ("-1", PRES_C2, [z("P-1", [NEG], None, 1)]),
    ("2", PRES_C2, [z("P2", [C2Z], None, 2), z("C2", [C2Z], BASIS_A, 1)]),
    ("m", PRES_C2, [z("Pm", [MZ], None, 2), z("Cm", [MZ], BASIS_A, 2)]),
    ("2/m", PRES_V4,
     [z("P2/m", [C2Z, NEG], None, 4), z("C2/m", [C2Z, NEG], BASIS_A, 2)]),
    ("222", PRES_V4,
     [z("P222", [C2Z, C2X], None, 4), z("C222", [C2Z, C2X], BASIS_C, 2),
      z("F222", [C2Z, C2X], BASIS_F, 1), z("I222", [C2Z, C2X], BASIS_I, 2)]),
    ("mm2", PRES_V4,
     [z("Pmm2", [MX, MY], None, 10), z("Cmm2", [MX, MY], BASIS_C, 3),
      z("Amm2", [MX, MY], BASIS_A, 4), z("Fmm2", [MX, MY], BASIS_F, 2),
      z("Imm2", [MX, MY], BASIS_I, 3)]),
    ("mmm", PRES_C2cube,
     [z("Pmmm", [MX, MY, MZ], None, 16), z("Cmmm", [MX, MY, MZ], BASIS_C, 6),
      z("Fmmm", [MX, MY, MZ], BASIS_F, 2), z("Immm", [MX, MY, MZ], BASIS_I, 4)]),
    ("4", PRES_C4, [z("P4", [R4Z], None, 3), z("I4", [R4Z], BASIS_I, 2)]),
    ("-4", PRES_C4, [z("P-4", [S4Z], None, 1), z("I-4", [S4Z], BASIS_I, 1)]),
    ("4/m", PRES_C4xC2,
     [z("P4/m", [R4Z, NEG], None, 4), z("I4/m", [R4Z, NEG], BASIS_I, 2)]),
    ("422", PRES_D4,
     [z("P422", [R4Z, C2X], None, 6), z("I422", [R4Z, C2X], BASIS_I, 2)]),
    ("4mm", PRES_D4,
     [z("P4mm", [R4Z, MX], None, 8), z("I4mm", [R4Z, MX], BASIS_I, 4)]),
    ("-42m", PRES_D4,
     [z("P-42m", [S4Z, C2X], None, 4), z("P-4m2", [S4Z, MX], None, 4),
      z("I-42m", [S4Z, C2X], BASIS_I, 2), z("I-4m2", [S4Z, MX], BASIS_I, 2)]),
    ("4/mmm", PRES_D4xC2,
     [z("P4/mmm", [R4Z, C2X, NEG], None, 16), z("I4/mmm", [R4Z, C2X, NEG], BASIS_I, 4)]),
    ("3", PRES_C3, [z("P3", [R3Z], None, 2), z("R3", [P3R], None, 1)]),
    ("-3", PRES_C6, [z("P-3", [S3Z_NEG], None, 1), z("R-3", [S6R], None, 1)]),
    ("32", PRES_D3,
     [z("P321", [R3Z, C2_321], None, 2), z("P312", [R3Z, C2_312], None, 2),
      z("R32", [P3R, C2R], None, 1)]),
    ("3m", PRES_D3,
     [z("P3m1", [R3Z, M_3M1], None, 2), z("P31m", [R3Z, M_31M], None, 2),
      z("R3m", [P3R, MR], None, 2)]),
    ("-3m", PRES_D3xC2,
     [z("P-3m1", [R3Z, C2_321, NEG], None, 2), z("P-31m", [R3Z, C2_312, NEG], None, 2),
      z("R-3m", [P3R, C2R, NEG], None, 2)]),
    ("6", PRES_C6, [z("P6", [R6Z], None, 4)]),
    ("-6", PRES_C6, [z("P-6", [S3Z], None, 1)]),
    ("6/m", PRES_C6xC2, [z("P6/m", [R6Z, NEG], None, 2)]),
    ("622", PRES_D6, [z("P622", [R6Z, C2_321], None, 4)]),
    ("6mm", PRES_D6, [z("P6mm", [R6Z, M_3M1], None, 4)]),
    ("-6m2", PRES_D6,
     [z("P-6m2", [S3Z, M_3M1], None, 2), z("P-62m", [S3Z, M_31M], None, 2)]),
    ("6/mmm", PRES_D6xC2, [z("P6/mmm", [R6Z, C2_321, NEG], None, 4)]),
    ("23", PRES_A4,
     [z("P23", [R3D, C2Z], None, 2), z("F23", [R3D, C2Z], BASIS_F, 1),
      z("I23", [R3D, C2Z], BASIS_I, 2)]),
    ("m-3", PRES_A4xC2,
     [z("Pm-3", [R3D, C2Z, NEG], None, 3), z("Fm-3", [R3D, C2Z, NEG], BASIS_F, 2),
      z("Im-3", [R3D, C2Z, NEG], BASIS_I, 2)]),
    ("432", PRES_S4,
     [z("P432", [R3D, R4Z], None, 3), z("F432", [R3D, R4Z], BASIS_F, 2),
      z("I432", [R3D, R4Z], BASIS_I, 2)]),
    ("-43m", PRES_S4,
     [z("P-43m", [R3D, S4Z], None, 2), z("F-43m", [R3D, S4Z], BASIS_F, 2),
      z("I-43m", [R3D, S4Z], BASIS_I, 2)]),
    ("m-3m", PRES_S4xC2,
     [z("Pm-3m", [R3D, R4Z, NEG], None, 4), z("Fm-3m", [R3D, R4Z, NEG], BASIS_F, 4),
      z("Im-3m", [R3D, R4Z, NEG], BASIS_I, 2)]),
]


def fmt_matrix(m):
    return " / ".join(" ".join(str(x) for x in row) for row in m)


def main():
    lines = [
        "# Arithmetic crystal classes of dimension 3: 73 Z-classes and 219 affine",
        "# space-group types across the 32 geometric classes.  Generated by",
        "# tools/make_dim3_catalog.py; centered classes are expressed in a",
        "# primitive basis of the centered lattice.",
        "dimension 3",
    ]
    zclasses = 0
    spacegroups = 0
    pairs = 0
    for qi, (name, pres, zlist) in enumerate(QCLASSES, start=1):
        lines.append(f"qclass {qi}  # {name}")
        lines.append(("  relators: " + " ; ".join(pres)) if pres else "  relators:")
        n = len(zlist)
        pairs += n * (n - 1) // 2
        for zi, (label, gens, basis, count) in enumerate(zlist, start=1):
            zclasses += 1
            spacegroups += count
            lines.append(f'  zclass {zi} label "{label}" spacegroups {count}')
            for g in gens:
                m = conjugate(basis, g) if basis is not None else tuple(
                    tuple(int(x) for x in row) for row in g)
                lines.append(f"    gen {fmt_matrix(m)}")
    assert len(QCLASSES) == 32, len(QCLASSES)
    assert zclasses == 73, zclasses
    assert spacegroups == 219, spacegroups
    assert pairs == 64, pairs
    print("\n".join(lines))


if __name__ == "__main__":
    main()
