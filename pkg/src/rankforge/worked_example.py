"""Reference values for the F_81 worked example (q = 3, n = 4) and a comparator.

Values are stored exactly as printed, typos included. :func:`compare`
recomputes everything in a given field and lists each disagreement.
Vector entries are element strings understood by ``FieldCtx.parse``;
``None`` marks an entry left blank in the printed display.
"""
from __future__ import annotations

from .constructions import gabidulin, twist_spec, twisted
from .field import FieldCtx, paper_field
from .representation import code_matrix_basis, companion_matrix, frobenius_matrix, generator_matrix

A = [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]
S = [[1, 0, 1, 0], [0, 0, 1, 2], [0, 0, 1, 1], [0, 1, 1, 1]]

_S_BLOCK = [
    [[1, 0, 1, 0], [0, 0, 1, 2], [0, 0, 1, 1], [0, 1, 1, 1]],
    [[0, 1, 1, 1], [1, 0, 1, 0], [0, 0, 1, 2], [0, 1, 2, 2]],
    [[0, 1, 2, 2], [0, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, 1]],
    [[0, 1, 0, 1], [0, 1, 2, 2], [0, 1, 1, 1], [1, 1, 1, 1]],
]

G2_MATRICES = [
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]],
    [[0, 0, 1, 1], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 1, 1]],
    [[0, 1, 1, 1], [0, 0, 1, 1], [0, 0, 0, 1], [1, 1, 1, 1]],
] + _S_BLOCK

H2_MATRICES = [
    [[1, 1, 0, 1], [1, 1, 2, 1], [0, 2, 1, 0], [0, 2, 2, 1]],
    [[1, 1, 1, 2], [1, 1, 2, 0], [0, 0, 2, 0], [1, 2, 2, 0]],
    [[2, 2, 1, 2], [1, 1, 0, 0], [2, 2, 1, 2], [2, 1, 1, 1]],
    [[1, 1, 2, 2], [0, 2, 2, 0], [2, 0, 0, 1], [0, 0, 1, 1]],
] + _S_BLOCK

G2_GENERATOR = [["1", "a", "a^2", "a^3"], ["1", "a^3", "a^6", "a^9"]]

H2_VECTOR_ROWS = [
    ["a^28", "a^13", "a^17", "a^5"],
    ["a^5", "a^61", "a^54", "2"],
    ["a^13", "a^55", "a^30", "a^50"],
    ["a^65", None, None, None],
    ["1", "a^3", "a^6", "a^9"],
    ["a", "a^4", "a^7", "a^10"],
    ["a^2", "a^5", "a^8", "a^11"],
    ["a^3", "a^6", "a^9", "a^12"],
]

H2_ETA0_GENERATOR = [["1", "a^3", "a^7", "a^9"], ["a^28", "a^13", "a^17", "a^5"]]


def _matrix_diffs(label, printed, computed):
    out = []
    for r, (pr, cr) in enumerate(zip(printed, computed)):
        if list(pr) != list(cr):
            out.append({"item": label, "row": r, "printed": list(pr), "computed": list(cr)})
    return out


def _vector_diffs(ctx: FieldCtx, label, printed, computed):
    out = []
    for r, (pr, cr) in enumerate(zip(printed, computed)):
        for c, (pe, ce) in enumerate(zip(pr, cr)):
            if pe is None:
                continue
            if ctx.parse(pe) != ce:
                out.append({"item": label, "row": r, "col": c, "printed": pe, "computed": ctx.format(ce)})
    return out


def computed_values(ctx: FieldCtx) -> dict:
    a = ctx.alpha
    pts = [a**i for i in range(4)]
    G2 = gabidulin(ctx, 2, verify=False)
    H2 = twisted(ctx, twist_spec(ctx, 2, a, 1), verify=False)
    H20 = twisted(ctx, twist_spec(ctx, 2, a, 0), verify=False)
    return {
        "A": companion_matrix(ctx).tolist(),
        "S": frobenius_matrix(ctx).tolist(),
        "G2_matrices": [M.tolist() for M in code_matrix_basis(G2)],
        "H2_matrices": [M.tolist() for M in code_matrix_basis(H2)],
        "G2_generator": generator_matrix(G2, pts).rows,
        "H2_vector_rows": generator_matrix(H2, pts).rows,
        "H2_eta0_generator": generator_matrix(H20, pts).rows,
    }


def compare(ctx: FieldCtx) -> dict:
    """Each printed item against its recomputation; returns per-item match flags and the diffs."""
    got = computed_values(ctx)
    diffs = {
        "A": _matrix_diffs("A", A, got["A"]),
        "S": _matrix_diffs("S", S, got["S"]),
        "G2_matrices": [d for i, (P, C) in enumerate(zip(G2_MATRICES, got["G2_matrices"]))
                        for d in _matrix_diffs(f"G2 matrix {i}", P, C)],
        "H2_matrices": [d for i, (P, C) in enumerate(zip(H2_MATRICES, got["H2_matrices"]))
                        for d in _matrix_diffs(f"H2 matrix {i}", P, C)],
        "G2_generator": _vector_diffs(ctx, "G2 generator", G2_GENERATOR, got["G2_generator"]),
        "H2_vector_rows": _vector_diffs(ctx, "H2 vector rows", H2_VECTOR_ROWS, got["H2_vector_rows"]),
    }
    # the eta = 0 display lists its two rows in the other order
    printed0 = [[ctx.parse(x) for x in r] for r in H2_ETA0_GENERATOR]
    rows0 = got["H2_eta0_generator"]
    if len(rows0) == 2 and printed0[0] != rows0[0]:
        rows0 = rows0[::-1]
    diffs["H2_eta0_generator"] = _vector_diffs(ctx, "H2(a,0) generator", H2_ETA0_GENERATOR, rows0)
    return {
        "match": {k: not v for k, v in diffs.items()},
        "diffs": diffs,
        "computed": {
            k: ([[ctx.format(x) for x in r] for r in v] if k.endswith(("generator", "rows")) else v)
            for k, v in got.items()
        },
    }


def report() -> dict:
    """Comparison under both candidate moduli of the example's alpha."""
    return {
        "stated (y^4 - y - 1)": compare(paper_field("stated")),
        "displayed (y^4 - y^3 - 1)": compare(paper_field("displayed")),
    }
