"""The Z/2 van Kampen obstruction, computed exactly.

Pipeline: build the configuration space of unordered disjoint simplex
pairs, realize the complex on the rational moment curve in R^n, count (mod
2) the intersections of every complementary disjoint pair, and decide
whether the resulting cocycle is a coboundary.  A nonzero pairing with an
explicit cycle certifies that the complex does not embed in R^n.

All geometry is ``fractions.Fraction``; genericity of the map is not
assumed but certified -- every at-most-(n+1)-point subset must be affinely
independent (automatic on the moment curve once parameters are distinct)
and every complementary pair must give a nonsingular incidence system.
Failing pairs trigger deterministic perturbation with a bounded budget.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, NamedTuple, Optional, Sequence

from .complexes import Simplex, SimplicialComplex, double_over
from .errors import GenericityError, ResourceLimitError, default_max_cells
from .gf2 import GF2Matrix, GF2Vector
from .homology import betti

__all__ = [
    "CellPair",
    "ConfigurationSpace",
    "GeneralPositionMap",
    "ObstructionCocycle",
    "ObstructionVerdict",
    "AdosReport",
    "configuration_space",
    "general_position_map",
    "pair_intersection_parity",
    "obstruction_cocycle",
    "is_trivial",
    "verify_ados",
]


class CellPair(NamedTuple):
    """Unordered pair of disjoint simplices; dimension = dim sigma + dim tau."""

    sigma: Simplex
    tau: Simplex

    @classmethod
    def make(cls, a: Simplex, b: Simplex) -> "CellPair":
        if set(a) & set(b):
            raise ValueError(f"simplices {a} and {b} share vertices")
        return cls(a, b) if a < b else cls(b, a)

    @property
    def cell_dim(self) -> int:
        return len(self.sigma) + len(self.tau) - 2


@dataclass(frozen=True)
class ConfigurationSpace:
    """Disjoint-pair cells of a complex, with GF(2) boundary matrices.

    ``cells[d]`` lists the d-cells in lexicographic order;
    ``boundary[d]`` maps d-chains to (d-1)-chains, and the boundary of
    {sigma, tau} is the sum of {sigma', tau} over facets sigma' of sigma
    plus {sigma, tau'} over facets tau' of tau.
    """

    source: SimplicialComplex
    cells: tuple[tuple[CellPair, ...], ...]
    boundary: tuple[GF2Matrix, ...]

    @property
    def top_dimension(self) -> int:
        return len(self.cells) - 1

    def index(self, d: int) -> dict[CellPair, int]:
        return {c: i for i, c in enumerate(self.cells[d])}

    def boundary_or_zero(self, d: int) -> GF2Matrix:
        if 0 <= d <= self.top_dimension:
            return self.boundary[d]
        if d == self.top_dimension + 1:
            return GF2Matrix.zero(len(self.cells[-1]), 0)
        return GF2Matrix.zero(0, 0)


def _disjoint_pairs(k: SimplicialComplex, cell_dim: int) -> Iterator[CellPair]:
    """All disjoint unordered pairs with dim sigma + dim tau = cell_dim."""
    masks: dict[Simplex, int] = {}

    def mask(s: Simplex) -> int:
        m = masks.get(s)
        if m is None:
            m = 0
            for v in s:
                m |= 1 << v
            masks[s] = m
        return m

    for a in range(cell_dim // 2 + 1):
        b = cell_dim - a
        if a > k.dimension or b > k.dimension:
            continue
        if a == b:
            for s, t in combinations(k.faces(a), 2):
                if not mask(s) & mask(t):
                    yield CellPair.make(s, t)
        else:
            for s in k.faces(a):
                ms = mask(s)
                for t in k.faces(b):
                    if not ms & mask(t):
                        yield CellPair.make(s, t)


def configuration_space(
    k: SimplicialComplex, up_to: int, max_cells: Optional[int] = None
) -> ConfigurationSpace:
    """Assemble all cells of dimension <= up_to and their boundary maps."""
    if up_to < 0:
        raise ValueError(f"negative dimension {up_to}")
    cap = default_max_cells() if max_cells is None else max_cells
    cells: list[tuple[CellPair, ...]] = []
    total = 0
    for d in range(up_to + 1):
        layer = tuple(sorted(_disjoint_pairs(k, d)))
        total += len(layer)
        if total > cap:
            raise ResourceLimitError(
                f"configuration space exceeds {cap} cells by dimension {d}"
            )
        cells.append(layer)
    boundary: list[GF2Matrix] = [GF2Matrix.zero(0, len(cells[0]))]
    for d in range(1, up_to + 1):
        below = {c: i for i, c in enumerate(cells[d - 1])}
        ones = []
        for col, cell in enumerate(cells[d]):
            for row_cell in _cell_facets(cell):
                ones.append((below[row_cell], col))
        boundary.append(GF2Matrix.from_entries(len(cells[d - 1]), len(cells[d]), ones))
    for d in range(1, up_to):
        assert (boundary[d] @ boundary[d + 1]).is_zero(), "boundary of boundary is nonzero"
    return ConfigurationSpace(k, tuple(cells), tuple(boundary))


def _cell_facets(cell: CellPair) -> Iterator[CellPair]:
    s, t = cell
    if len(s) > 1:
        for drop in range(len(s)):
            yield CellPair.make(s[:drop] + s[drop + 1 :], t)
    if len(t) > 1:
        for drop in range(len(t)):
            yield CellPair.make(s, t[:drop] + t[drop + 1 :])


# -- general position maps -------------------------------------------

_LCG_MUL = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


def _seeded_values(seed: int, count: int) -> list[int]:
    """Distinct 16-bit integers from a 64-bit LCG, reproducible per seed."""
    state = (seed ^ 0x9E3779B97F4A7C15) & _LCG_MASK
    out: list[int] = []
    used = set()
    while len(out) < count:
        state = (state * _LCG_MUL + _LCG_INC) & _LCG_MASK
        v = state >> 48
        if v not in used:
            used.add(v)
            out.append(v)
    return out


@dataclass(frozen=True)
class GeneralPositionMap:
    """Vertex coordinates on the rational moment curve, genericity certified."""

    target_dim: int
    params: tuple[Fraction, ...]
    coords: tuple[tuple[Fraction, ...], ...]
    certified: bool
    perturbations: int

    def point(self, vertex: int) -> tuple[Fraction, ...]:
        return self.coords[vertex]


def _moment_point(t: Fraction, n: int) -> tuple[Fraction, ...]:
    out = []
    p = Fraction(1)
    for _ in range(n):
        p *= t
        out.append(p)
    return tuple(out)


def general_position_map(
    k: SimplicialComplex,
    n: int,
    seed: int = 0,
    max_retries: int = 64,
) -> GeneralPositionMap:
    """Place vertices at (t, t^2, ..., t^n) for seeded distinct rationals t.

    Distinct parameters make any <= n+1 points affinely independent (the
    affine system below is then a scaled Vandermonde), so only the
    complementary-pair nonsingularity can fail; each failure perturbs the
    smallest vertex of the offending pair by a fresh inverse power of 3
    and re-verifies everything.
    """
    if n < 1:
        raise ValueError(f"target dimension must be >= 1, got {n}")
    params = [Fraction(v) for v in _seeded_values(seed, k.num_vertices)]
    pairs = tuple(sorted(_disjoint_pairs(k, n)))

    attempt = 0
    while True:
        problem = _genericity_problem(k, n, params, pairs)
        if problem is None:
            coords = tuple(_moment_point(t, n) for t in params)
            return GeneralPositionMap(n, tuple(params), coords, True, attempt)
        if attempt >= max_retries:
            kind, vertex = problem
            raise GenericityError(
                f"could not certify {kind} after {max_retries} perturbations "
                f"(last offender: vertex {vertex})"
            )
        kind, vertex = problem
        attempt += 1
        params[vertex] += Fraction(1, 3**attempt)


def _genericity_problem(
    k: SimplicialComplex,
    n: int,
    params: Sequence[Fraction],
    pairs: Sequence[CellPair],
) -> Optional[tuple[str, int]]:
    """None if both certificates hold, else (predicate, offending vertex)."""
    seen: dict[Fraction, int] = {}
    for v, t in enumerate(params):
        if t in seen:
            return ("affine independence (distinct parameters)", v)
        seen[t] = v
    coords = [_moment_point(t, n) for t in params]
    for cell in pairs:
        rows = _incidence_rows(cell, coords, n)
        if _rational_rank(rows) != n + 2:
            return ("complementary pair nonsingularity", min(cell.sigma + cell.tau))
    return None


def _incidence_rows(
    cell: CellPair, coords: Sequence[tuple[Fraction, ...]], n: int
) -> list[list[Fraction]]:
    """The square affine system for conv(sigma) meet conv(tau).

    Unknowns: barycentric weights on sigma then on tau.  Rows: n coordinate
    balance equations, then one normalization per simplex.
    """
    s, t = cell
    width = len(s) + len(t)
    rows = []
    for c in range(n):
        row = [coords[v][c] for v in s] + [-coords[v][c] for v in t]
        rows.append(row)
    rows.append([Fraction(1)] * len(s) + [Fraction(0)] * len(t))
    rows.append([Fraction(0)] * len(s) + [Fraction(1)] * len(t))
    assert all(len(r) == width for r in rows) and len(rows) == n + 2
    return rows


def _rational_rank(rows: list[list[Fraction]]) -> int:
    work = [list(r) for r in rows]
    cols = len(work[0]) if work else 0
    rank = 0
    for col in range(cols):
        sel = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                c = work[i][col]
                work[i] = [a - c * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact solution of a square system; raises if singular."""
    m = len(rows)
    work = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(m):
        sel = next((i for i in range(col, m) if work[i][col] != 0), None)
        if sel is None:
            raise RuntimeError("singular incidence system despite genericity certificate")
        work[col], work[sel] = work[sel], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(m):
            if i != col and work[i][col] != 0:
                c = work[i][col]
                work[i] = [a - c * b for a, b in zip(work[i], work[col])]
    return [work[i][m] for i in range(m)]


def pair_intersection_parity(gp_map: GeneralPositionMap, cell: CellPair) -> int:
    """1 iff the images of the two simplices cross, 0 otherwise.

    The convex hulls of two generic complementary-dimension simplices meet
    in at most one point: the unique solution of the incidence system,
    which lies in both open cells iff every barycentric weight is strictly
    positive.
    """
    n = gp_map.target_dim
    if cell.cell_dim != n:
        raise ValueError(f"cell dimension {cell.cell_dim} != target dimension {n}")
    rows = _incidence_rows(cell, gp_map.coords, n)
    rhs = [Fraction(0)] * n + [Fraction(1), Fraction(1)]
    solution = _solve_square(rows, rhs)
    assert all(x != 0 for x in solution), "zero barycentric weight contradicts independence"
    return 1 if all(x > 0 for x in solution) else 0


# -- the obstruction -------------------------------------------------


@dataclass(frozen=True)
class ObstructionCocycle:
    """Parity of crossings for every n-cell, as one GF(2) vector."""

    n: int
    values: GF2Vector


def obstruction_cocycle(
    k: SimplicialComplex,
    n: int,
    seed: int = 0,
    *,
    space: Optional[ConfigurationSpace] = None,
    gp_map: Optional[GeneralPositionMap] = None,
    threads: int = 1,
    max_cells: Optional[int] = None,
) -> ObstructionCocycle:
    """Evaluate all n-cell parities; the cocycle condition is asserted."""
    cfg = space if space is not None else configuration_space(k, n + 1, max_cells=max_cells)
    gp = gp_map if gp_map is not None else general_position_map(k, n, seed)
    n_cells = cfg.cells[n] if n <= cfg.top_dimension else ()
    if threads > 1 and len(n_cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parities = list(pool.map(lambda c: pair_intersection_parity(gp, c), n_cells))
    else:
        parities = [pair_intersection_parity(gp, c) for c in n_cells]
    values = GF2Vector.from_list(parities)
    coboundary_rows = cfg.boundary_or_zero(n + 1).transpose()
    for row in coboundary_rows.rows_iter():
        assert row.dot(values) == 0, "obstruction failed the cocycle condition"
    return ObstructionCocycle(n, values)


@dataclass(frozen=True)
class ObstructionVerdict:
    """Triviality decision with a substitution-checked certificate.

    Nontrivial: ``certificate`` is a cycle (kernel vector of the boundary)
    whose pairing with the cocycle is 1.  Trivial: ``certificate`` is a
    cochain on (n-1)-cells whose coboundary equals the cocycle.
    """

    n: int
    nontrivial: bool
    certificate: GF2Vector
    certificate_kind: str  # "cycle" | "cochain"
    cocycle: ObstructionCocycle
    seed: int

    @property
    def trivial(self) -> bool:
        return not self.nontrivial


def is_trivial(
    k: SimplicialComplex,
    n: int,
    seed: int = 0,
    *,
    threads: int = 1,
    max_cells: Optional[int] = None,
) -> ObstructionVerdict:
    """Decide whether the obstruction class vanishes in dimension n.

    The class is nonzero iff it pairs nonzero with some n-cycle of the
    configuration space; the witness cycle (or, when trivial, an explicit
    primitive for the cocycle) is re-verified by direct substitution before
    being returned.
    """
    cfg = configuration_space(k, n + 1, max_cells=max_cells)
    gp = general_position_map(k, n, seed)
    cocycle = obstruction_cocycle(
        k, n, seed, space=cfg, gp_map=gp, threads=threads
    )
    boundary_n = cfg.boundary_or_zero(n)
    for cycle in boundary_n.kernel_basis():
        if cycle.dot(cocycle.values) == 1:
            assert boundary_n.apply(cycle).is_zero(), "certificate is not a cycle"
            return ObstructionVerdict(n, True, cycle, "cycle", cocycle, seed)
    primitive = boundary_n.transpose().solve(cocycle.values)
    assert primitive is not None, "cocycle pairs to zero with all cycles yet has no primitive"
    check = boundary_n.transpose().apply(primitive)
    assert check.bits == cocycle.values.bits, "primitive substitution failed"
    return ObstructionVerdict(n, False, primitive, "cochain", cocycle, seed)


# -- doubled-complex criterion ---------------------------------------


@dataclass(frozen=True)
class AdosReport:
    """Two routes to the same verdict: obstruction vs middle homology."""

    lhs: bool  # obstruction of the doubled complex is nontrivial in R^{2k}
    rhs: bool  # the base complex has nonzero mod-2 homology in degree k
    agree: bool
    verdict: ObstructionVerdict


def verify_ados(
    l: SimplicialComplex,
    delta: Simplex,
    k: int,
    seed: int = 0,
    *,
    threads: int = 1,
    max_cells: Optional[int] = None,
) -> AdosReport:
    """Compare the doubled complex's obstruction with the homology of the base.

    ``l`` must be a flag complex of dimension ``k`` and ``delta`` one of
    its k-simplices; the doubled complex is tested in R^{2k} while the
    right-hand side just asks whether betti_k(l) is positive.  The two
    verdicts are computed independently -- neither shortcut feeds the
    other.
    """
    if not l.is_flag():
        raise ValueError("base complex is not flag; the equivalence needs flagness")
    if l.dimension != k:
        raise ValueError(f"k must equal the complex dimension {l.dimension}, got {k}")
    if len(tuple(delta)) != k + 1:
        # Doubling over a lower-dimensional simplex can leave an embeddable
        # complex even when the top homology is nonzero (double a 4-cycle
        # over a vertex: still planar), so the equivalence needs a top cell.
        raise ValueError(f"doubling simplex must be a {k}-simplex, got {tuple(delta)}")
    d = double_over(l, delta)  # validates that delta is a face
    verdict = is_trivial(d, 2 * k, seed, threads=threads, max_cells=max_cells)
    lhs = verdict.nontrivial
    rhs = betti(l, k) >= 1
    return AdosReport(lhs, rhs, lhs == rhs, verdict)
