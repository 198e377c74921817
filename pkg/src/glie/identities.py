"""Graded identity checking and bounded basis verification.

The pipeline compares, inside finite windows of the free graded Lie algebra,
the space of graded identities of a concrete algebra (an evaluation kernel,
exact) against the span of consequences of candidate generators (a certified
lower bound of the verbal ideal's window part, built from substitution
instances and left-normed bracket extensions).

Statuses are honest about one asymmetry: the identity space is computed
exactly, the consequence span is a lower bound, so "strict-inclusion" means
"not derived by this search", never "the theorem is refuted".
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, GradedLieAlgebra
from .errors import AmbientMismatch, BudgetExceeded, ExpansionTooLarge, ParityError
from .fields import FieldSpec
from .freelie import (
    LiePolynomial,
    MultiDegree,
    batch_evaluate,
    degree_bound,
    evaluate,
    expr_expand,
    expr_variables,
    lyndon_words,
    poly_batch_evaluate,
    poly_evaluate,
    substitute,
    word_key,
    word_tree_batch_evaluate,
    y,
    z,
)
from .linalg import MatrixGF, SubspaceBasis


# ---------------------------------------------------------------------------
# ambient windows
# ---------------------------------------------------------------------------


class AmbientSpace:
    """A finite-dimensional window of the free graded Lie algebra: the span
    of the Lyndon bases of a fixed list of multidegrees."""

    def __init__(self, label: str, variables, multidegrees):
        self.label = label
        self.variables = tuple(sorted(set(variables), key=lambda v: v.sort_key))
        mds = []
        monomials = []
        for md in sorted(set(multidegrees), key=lambda m: (m.total, str(m))):
            words = lyndon_words(md)
            if words:
                mds.append(md)
                monomials.extend(words)
        self.multidegrees = tuple(mds)
        self.monomials = tuple(monomials)
        self._index = {w: i for i, w in enumerate(self.monomials)}
        self.md_set = frozenset(self.multidegrees)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @property
    def max_total(self) -> int:
        return max((md.total for md in self.multidegrees), default=0)

    def caps(self) -> dict:
        out: dict = {}
        for md in self.multidegrees:
            for v, c in md.counts:
                out[v] = max(out.get(v, 0), c)
        for v in self.variables:
            out.setdefault(v, 0)
        return out

    def coords_of(self, poly: LiePolynomial):
        vec = [poly.spec.zero()] * self.dim
        for w, c in poly.terms:
            if w not in self._index:
                raise AmbientMismatch(f"monomial {w} outside window {self.label}")
            vec[self._index[w]] = c
        return tuple(vec)

    def poly_of(self, spec: FieldSpec, coords) -> LiePolynomial:
        terms = {}
        for w, c in zip(self.monomials, coords):
            if isinstance(c, int):
                c = spec.from_int(c)
            if not c.is_zero():
                terms[w] = c
        return LiePolynomial.from_dict(spec, terms)

    def contains_poly(self, poly: LiePolynomial) -> bool:
        return all(MultiDegree.of_word(w) in self.md_set for w, _ in poly.terms)

    def __repr__(self):
        return f"<window {self.label}: dim {self.dim}>"


def window_box(caps: dict, label: str | None = None) -> AmbientSpace:
    """All multidegrees with 0 <= deg_v <= caps[v] (total degree >= 1)."""
    variables = sorted(caps, key=lambda v: v.sort_key)
    ranges = [range(caps[v] + 1) for v in variables]
    mds = []
    for counts in itertools.product(*ranges):
        if sum(counts) == 0:
            continue
        mds.append(MultiDegree.of(dict(zip(variables, counts))))
    if label is None:
        label = "(" + ", ".join(f"{v}:{caps[v]}" for v in variables) + ")"
    return AmbientSpace(label, variables, mds)


def window_multilinear(variables, label: str | None = None) -> AmbientSpace:
    md = MultiDegree.of({v: 1 for v in variables})
    if label is None:
        label = "(" + ", ".join(str(v) for v in sorted(variables, key=lambda v: v.sort_key)) + " multilinear)"
    return AmbientSpace(label, variables, [md])


def window_exact(md: MultiDegree, label: str | None = None) -> AmbientSpace:
    return AmbientSpace(label or str(md), md.variables(), [md])


def default_sl2_windows(q: int):
    """The bounded completeness probes for the sl2 basis check."""
    return [
        window_box({y(1): 1, y(2): 1}, "(y:1,1)"),
        window_box({z(1): 1, z(2): 1}, "(z:1,1)"),
        window_box({z(1): 1, z(2): 1, z(3): 1}, "(z:1,1,1)"),
        window_box({y(1): 1, z(1): 1, z(2): 1}, "(y:1,z:1,1)"),
        window_box({z(1): 1, y(1): q}, f"(z:1,y:{q})"),
    ]


def _partitions(n: int, cap: int):
    """Non-increasing partitions of n with parts <= cap."""
    if n == 0:
        yield ()
        return

    def rec(remaining, maximum):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, maximum), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(n, cap)


def total_degree_windows(max_total: int, per_var_cap: int):
    """One exact-multidegree window per canonical multidegree shape with
    total degree <= max_total (variable names are canonical: y1..ya, z1..zb)."""
    windows = []
    for total in range(1, max_total + 1):
        for even_deg in range(total + 1):
            odd_deg = total - even_deg
            for even_parts in _partitions(even_deg, per_var_cap):
                for odd_parts in _partitions(odd_deg, per_var_cap):
                    counts: dict = {}
                    for i, c in enumerate(even_parts, start=1):
                        counts[y(i)] = c
                    for i, c in enumerate(odd_parts, start=1):
                        counts[z(i)] = c
                    if counts:
                        windows.append(window_exact(MultiDegree.of(counts)))
    return windows


# ---------------------------------------------------------------------------
# assignment enumeration
# ---------------------------------------------------------------------------


def homogeneous_batch(alg: GradedLieAlgebra, degree: int) -> np.ndarray:
    """All q^d elements of the degree-d part, as (q^d, dim) coordinate codes."""
    idx = alg.homogeneous_indices(degree)
    q = alg.spec.q
    count = q ** len(idx)
    out = np.zeros((count, alg.dim), dtype=np.int64)
    base = np.arange(count)
    for pos, i in enumerate(idx):
        out[:, i] = (base // (q ** pos)) % q
    return out


def full_batch(alg: GradedLieAlgebra) -> np.ndarray:
    q = alg.spec.q
    count = q ** alg.dim
    out = np.zeros((count, alg.dim), dtype=np.int64)
    base = np.arange(count)
    for i in range(alg.dim):
        out[:, i] = (base // (q ** i)) % q
    return out


def _domains(alg: GradedLieAlgebra, variables, graded: bool):
    domains = []
    for v in variables:
        if graded:
            if v.parity is None:
                raise ParityError(f"{v} has no parity; graded mode forbids x variables")
            domains.append(homogeneous_batch(alg, v.parity))
        else:
            domains.append(full_batch(alg))
    return domains


def _assignment_slice(variables, domains, start: int, stop: int):
    """Assignments number start..stop-1 of the cartesian product, with the
    first variable slowest (itertools.product order)."""
    sizes = [d.shape[0] for d in domains]
    strides = []
    acc = 1
    for s in reversed(sizes):
        strides.append(acc)
        acc *= s
    strides.reverse()
    idx = np.arange(start, stop)
    assignment = {}
    for v, dom, stride, size in zip(variables, domains, strides, sizes):
        assignment[v] = dom[(idx // stride) % size]
    return assignment


def _decode_assignment(alg, variables, domains, index: int):
    sizes = [d.shape[0] for d in domains]
    out = {}
    for v, dom, size in zip(reversed(variables), reversed(domains), reversed(sizes)):
        out[v] = alg.element([alg.spec.from_code(int(c)) for c in dom[index % size]])
        index //= size
    return out


# ---------------------------------------------------------------------------
# identity checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckSettings:
    budget: int = 4_000_000
    chunk: int = 1 << 16
    sample_size: int = 4096
    seed: int = 0


@dataclass(frozen=True)
class CheckReport:
    holds: bool
    mode: str
    evaluations: int
    counterexample: dict | None = None
    value: AlgebraElement | None = None

    def counterexample_str(self) -> str:
        if self.counterexample is None:
            return ""
        items = sorted(self.counterexample.items(), key=lambda kv: kv[0].sort_key)
        return ", ".join(f"{v} = {el}" for v, el in items)


def _run_check(alg, variables, domains, batch_fn, scalar_fn,
               mode: str, settings: CheckSettings):
    """Shared enumeration loop for expression and polynomial checks."""
    sizes = [d.shape[0] for d in domains]
    total = 1
    for s in sizes:
        total *= s
    if not variables:
        val = scalar_fn({})
        return CheckReport(val.is_zero(), "exhaustive", 1,
                           None if val.is_zero() else {}, None if val.is_zero() else val)
    if mode == "exhaustive":
        if total > settings.budget:
            raise BudgetExceeded(
                f"exhaustive check needs {total} evaluations (budget {settings.budget}); "
                "use sampled mode")
        done = 0
        while done < total:
            stop = min(done + settings.chunk, total)
            assignment = _assignment_slice(variables, domains, done, stop)
            values = batch_fn(assignment)
            bad = np.nonzero(values.any(axis=1))[0]
            if bad.size:
                index = done + int(bad[0])
                witness = _decode_assignment(alg, variables, domains, index)
                value = scalar_fn(witness)
                assert not value.is_zero(), "counterexample failed re-evaluation"
                return CheckReport(False, "exhaustive", stop, witness, value)
            done = stop
        return CheckReport(True, "exhaustive", total)
    # sampled
    rng = random.Random(settings.seed)
    n = min(settings.sample_size, settings.budget)
    indices = [tuple(rng.randrange(s) for s in sizes) for _ in range(n)]
    assignment = {
        v: dom[np.array([ix[i] for ix in indices], dtype=np.int64)]
        for i, (v, dom) in enumerate(zip(variables, domains))
    }
    values = batch_fn(assignment)
    bad = np.nonzero(values.any(axis=1))[0]
    mode_str = f"sampled({n}, seed={settings.seed})"
    if bad.size:
        row = int(bad[0])
        witness = {
            v: alg.element([alg.spec.from_code(int(c)) for c in assignment[v][row]])
            for v in variables
        }
        value = scalar_fn(witness)
        assert not value.is_zero(), "counterexample failed re-evaluation"
        return CheckReport(False, mode_str, n, witness, value)
    return CheckReport(True, mode_str, n)


def check_identity(e, alg: GradedLieAlgebra, graded: bool = True,
                   mode: str = "exhaustive",
                   settings: CheckSettings = CheckSettings()) -> CheckReport:
    """Does the expression vanish on the algebra?

    Graded mode substitutes homogeneous elements of matching parity only;
    ordinary mode ranges every variable over the whole algebra.
    """
    variables = expr_variables(e)
    domains = _domains(alg, variables, graded)
    return _run_check(
        alg, variables, domains,
        lambda assignment: batch_evaluate(e, alg, assignment),
        lambda assignment: evaluate(e, alg, assignment, graded=graded),
        mode, settings,
    )


def check_poly_identity(poly: LiePolynomial, alg: GradedLieAlgebra,
                        graded: bool = True, mode: str = "exhaustive",
                        settings: CheckSettings = CheckSettings()) -> CheckReport:
    variables = poly.variables()
    domains = _domains(alg, variables, graded)
    return _run_check(
        alg, variables, domains,
        lambda assignment: poly_batch_evaluate(
            poly, alg, assignment, next(iter(assignment.values())).shape[0]),
        lambda assignment: poly_evaluate(poly, alg, assignment),
        mode, settings,
    )


# ---------------------------------------------------------------------------
# identity spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentitySettings:
    assignment_budget: int = 200_000
    sample_rows: int = 2048
    seed: int = 0
    chunk: int = 1 << 14


def identity_space(alg: GradedLieAlgebra, ambient: AmbientSpace,
                   settings: IdentitySettings = IdentitySettings()) -> SubspaceBasis:
    """The window part of Id_G(alg): the kernel of evaluating the window's
    Lyndon basis on homogeneous assignments.

    Rows come from exhaustive enumeration when it fits the budget, otherwise
    from seeded samples; in both cases every kernel vector is certified by an
    exhaustive per-vector identity check before it is returned, so the result
    is exact either way.
    """
    spec = alg.spec
    if ambient.dim == 0:
        return SubspaceBasis.zero(spec, 0)
    variables = list(ambient.variables)
    domains = _domains(alg, variables, graded=True)
    sizes = [d.shape[0] for d in domains]
    total = 1
    for s in sizes:
        total *= s
    exhaustive = total <= settings.assignment_budget

    def monomial_rows(assignment, count):
        cols = [word_tree_batch_evaluate(w, alg, assignment) for w in ambient.monomials]
        stacked = np.stack(cols, axis=2)  # (N, dim, C)
        return stacked.reshape(count * alg.dim, len(ambient.monomials))

    row_set: set = set()

    def add_rows(rows):
        for r in rows:
            t = tuple(int(v) for v in r)
            if any(t):
                row_set.add(t)

    if exhaustive:
        done = 0
        while done < total:
            stop = min(done + settings.chunk, total)
            assignment = _assignment_slice(variables, domains, done, stop)
            add_rows(monomial_rows(assignment, stop - done))
            done = stop
    else:
        rng = random.Random(settings.seed)
        indices = [tuple(rng.randrange(s) for s in sizes) for _ in range(settings.sample_rows)]
        assignment = {
            v: dom[np.array([ix[i] for ix in indices], dtype=np.int64)]
            for i, (v, dom) in enumerate(zip(variables, domains))
        }
        add_rows(monomial_rows(assignment, settings.sample_rows))

    check_settings = CheckSettings(budget=max(total, 1), chunk=settings.chunk)
    while True:
        sorted_rows = sorted(row_set)
        if sorted_rows:
            matrix = MatrixGF.from_rows(
                spec, [[spec.from_code(c) for c in r] for r in sorted_rows])
            kernel = matrix.kernel()
        else:
            kernel = SubspaceBasis.full(spec, ambient.dim)
        new_rows = False
        for vec in kernel.rows:
            poly = ambient.poly_of(spec, vec)
            report = check_poly_identity(poly, alg, graded=True,
                                         mode="exhaustive", settings=check_settings)
            if not report.holds:
                witness = {v: el.codes() for v, el in report.counterexample.items()}
                assignment = {v: arr.reshape(1, -1) for v, arr in witness.items()}
                add_rows(monomial_rows(assignment, 1))
                new_rows = True
        if not new_rows:
            return kernel


# ---------------------------------------------------------------------------
# consequence spans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpanSettings:
    image_degree_cap: int = 3
    include_zero_image: bool = True
    two_term_samples: int = 8
    exhaustive_pool_limit: int = 200_000
    batch_size: int = 512
    rounds: int = 8
    seed: int = 0


class _SpanAccumulator:
    """Incremental row-reduced span of window coordinate vectors."""

    def __init__(self, spec: FieldSpec, dim: int):
        self.spec = spec
        self.ambient_dim = dim
        self.rows: list = []  # kept reduced, sorted by pivot

    def add(self, vec) -> bool:
        v = list(vec)
        for pivot, row in self.rows:
            if not v[pivot].is_zero():
                c = v[pivot]
                v = [a - c * b for a, b in zip(v, row)]
        pivot = next((i for i, a in enumerate(v) if not a.is_zero()), None)
        if pivot is None:
            return False
        inv = v[pivot].inverse()
        v = [inv * a for a in v]
        self.rows.append((pivot, v))
        self.rows.sort(key=lambda pr: pr[0])
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> SubspaceBasis:
        return SubspaceBasis.from_vectors(
            self.spec, self.ambient_dim, [row for _, row in self.rows])


def _image_pool(spec: FieldSpec, parity: int, ambient: AmbientSpace,
                settings: SpanSettings, rng: random.Random):
    """Candidate images for a generator variable of the given parity: scalar
    multiples of window-compatible Lyndon monomials of small degree, plus a
    few sampled two-term combinations."""
    caps = ambient.caps()
    monomials = []
    for md in window_box(caps).multidegrees:
        if md.total > settings.image_degree_cap:
            continue
        if md.parity != parity:
            continue
        monomials.extend(lyndon_words(md))
    monomials.sort(key=word_key)
    images = []
    if settings.include_zero_image:
        images.append(LiePolynomial.zero(spec))
    for w in monomials:
        for c in range(1, spec.q):
            images.append(LiePolynomial.monomial(spec, w, spec.from_code(c)))
    for _ in range(settings.two_term_samples):
        if len(monomials) < 2:
            break
        w1, w2 = rng.sample(monomials, 2)
        c1 = spec.from_code(rng.randrange(1, spec.q))
        c2 = spec.from_code(rng.randrange(1, spec.q))
        images.append(LiePolynomial.monomial(spec, w1, c1).add(
            LiePolynomial.monomial(spec, w2, c2)))
    return images


def _poly_bracket(spec: FieldSpec, p: LiePolynomial, q_poly: LiePolynomial) -> LiePolynomial:
    from .freelie import _bracketing_ncpoly, lyndon_decompose

    def to_assoc(poly):
        out: dict = {}
        for w, c in poly.terms:
            for w2, k in _bracketing_ncpoly(w).items():
                s = out.get(w2, spec.zero()) + c * spec.from_int(k)
                if s.is_zero():
                    out.pop(w2, None)
                else:
                    out[w2] = s
        return out

    a, b = to_assoc(p), to_assoc(q_poly)
    comm: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            for w, cc in (((w1 + w2), c1 * c2), ((w2 + w1), -(c1 * c2))):
                s = comm.get(w, spec.zero()) + cc
                if s.is_zero():
                    comm.pop(w, None)
                else:
                    comm[w] = s
    return lyndon_decompose(spec, comm)


def consequence_span(spec: FieldSpec, gens, ambient: AmbientSpace,
                     settings: SpanSettings = SpanSettings(),
                     check_algebra: GradedLieAlgebra | None = None) -> SubspaceBasis:
    """Certified lower bound of the verbal ideal of gens inside the window.

    Substitution instances whose full expansion stays inside the window are
    harvested directly; every instance is then extended by left-normed
    brackets with the window variables (which, by Jacobi, spans the same
    space as bracketing with arbitrary monomials) while the window's total
    degree allows, and fully-inside extensions are harvested too.

    With check_algebra supplied, every returned basis vector is verified to
    vanish identically on it (a soundness cross-check; the generators are
    expected to be identities of that algebra).
    """
    rng = random.Random(settings.seed)
    caps = ambient.caps()
    max_total = ambient.max_total
    acc = _SpanAccumulator(spec, ambient.dim)
    var_monos = {v: LiePolynomial.monomial(spec, (v,)) for v in ambient.variables}

    pools = {}

    def harvest(poly: LiePolynomial):
        """Add the poly when fully inside the window, then keep extending by
        single variables.  Degrees only grow along extensions, so any branch
        with a component already over a cap is dead and gets pruned."""
        if poly.is_zero():
            return
        mds = poly.multidegrees()
        if any(c > caps.get(v, 0) for md in mds for v, c in md.counts):
            return
        if ambient.contains_poly(poly):
            acc.add(ambient.coords_of(poly))
        if max(md.total for md in mds) + 1 > max_total:
            return
        for v in ambient.variables:
            if all(md.degree_of(v) + 1 <= caps.get(v, 0) for md in mds):
                harvest(_poly_bracket(spec, poly, var_monos[v]))

    def process(gen, mapping) -> None:
        try:
            inst = substitute(gen, mapping, graded=True)
        except ParityError:
            return
        per, total = degree_bound(inst)
        if total > max_total or any(d > caps.get(v, 0) for v, d in per.items()):
            return
        try:
            poly = expr_expand(inst, spec, caps=caps, total_cap=max_total)
        except ExpansionTooLarge:
            return
        harvest(poly)

    all_maps = []
    for gen in gens:
        gvars = expr_variables(gen)
        per_var_images = []
        for v in gvars:
            if v.parity is None:
                # ungraded generator variables accept either parity
                imgs = (_image_pool(spec, 0, ambient, settings, rng)
                        + _image_pool(spec, 1, ambient, settings, rng))
            else:
                key = v.parity
                if key not in pools:
                    pools[key] = _image_pool(spec, key, ambient, settings, rng)
                imgs = pools[key]
            per_var_images.append(imgs)
        count = 1
        for imgs in per_var_images:
            count *= max(len(imgs), 1)
        all_maps.append((gen, gvars, per_var_images, count))

    total_maps = sum(c for _, _, _, c in all_maps)
    if total_maps <= settings.exhaustive_pool_limit:
        for gen, gvars, per_var_images, _ in all_maps:
            for combo in itertools.product(*per_var_images):
                process(gen, dict(zip(gvars, combo)))
    else:
        stable_rounds = 0
        while stable_rounds < settings.rounds:
            before = acc.dim
            for _ in range(settings.batch_size):
                gen, gvars, per_var_images, _ = all_maps[rng.randrange(len(all_maps))]
                combo = [imgs[rng.randrange(len(imgs))] for imgs in per_var_images]
                process(gen, dict(zip(gvars, combo)))
            stable_rounds = stable_rounds + 1 if acc.dim == before else 0

    basis = acc.basis()
    if check_algebra is not None:
        for vec in basis.rows:
            poly = ambient.poly_of(spec, vec)
            report = check_poly_identity(poly, check_algebra, graded=True)
            assert report.holds, (
                f"consequence vector {poly} fails on {check_algebra.name}: "
                f"{report.counterexample_str()}")
    return basis


# ---------------------------------------------------------------------------
# basis check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindowRecord:
    label: str
    ambient_dim: int
    id_dim: int
    cons_dim: int
    status: str  # equal | strict-inclusion | inconclusive
    witness: str | None = None


@dataclass(frozen=True)
class BasisCheckReport:
    algebra_name: str
    soundness: tuple  # tuple[(str, CheckReport)]
    windows: tuple  # tuple[WindowRecord]
    verdict: str  # all-equal | refuted | strict-inclusion | inconclusive

    @property
    def ok(self) -> bool:
        return self.verdict == "all-equal"


def basis_check(alg: GradedLieAlgebra, gens, windows,
                gen_labels=None,
                check_settings: CheckSettings = CheckSettings(),
                id_settings: IdentitySettings = IdentitySettings(),
                span_settings: SpanSettings = SpanSettings()) -> BasisCheckReport:
    """Soundness first (every generator must hold exhaustively), then a
    window-by-window comparison of identity space and consequence span."""
    labels = gen_labels or [f"gen{i + 1}" for i in range(len(gens))]
    soundness = []
    refuted = False
    for label, gen in zip(labels, gens):
        report = check_identity(gen, alg, graded=True, mode="exhaustive",
                                settings=check_settings)
        soundness.append((label, report))
        if not report.holds:
            refuted = True
    records = []
    if not refuted:
        for window in windows:
            try:
                ids = identity_space(alg, window, id_settings)
                cons = consequence_span(alg.spec, gens, window, span_settings,
                                        check_algebra=alg)
            except BudgetExceeded as exc:
                records.append(WindowRecord(window.label, window.dim, -1, -1,
                                            "inconclusive", str(exc)))
                continue
            assert ids.contains_space(cons), (
                f"window {window.label}: a consequence vector is not an identity")
            if ids.rows == cons.rows:
                records.append(WindowRecord(window.label, window.dim,
                                            ids.dim, cons.dim, "equal"))
            else:
                missing = next(r for r in ids.rows if not cons.contains(r))
                poly = window.poly_of(alg.spec, missing)
                records.append(WindowRecord(
                    window.label, window.dim, ids.dim, cons.dim,
                    "strict-inclusion", str(poly)))
    if refuted:
        verdict = "refuted"
    elif any(r.status == "inconclusive" for r in records):
        verdict = "inconclusive"
    elif any(r.status == "strict-inclusion" for r in records):
        verdict = "strict-inclusion"
    else:
        verdict = "all-equal"
    return BasisCheckReport(alg.name, tuple(soundness), tuple(records), verdict)
