"""End-to-end analysis of one space and evaluation of catalog expectations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import catalog
from .core import as_gram
from .errors import WanderingDimNotOne
from .hypotheses import INE1_DELTA, TOL, check_hypotheses
from .shift import build_operator
from .structure import SEED, extract_generator, verify_contraction

EXIT_OK, EXIT_INPUT, EXIT_VERDICT = 0, 1, 2


@dataclass(frozen=True)
class Analysis:
    name: str | None
    kind: str
    ambient_dim: int
    dim: int
    n_max: int
    hypotheses: object
    structure: object = None
    contraction: object = None
    structure_error: str | None = None

    @property
    def exit_code(self):
        """0 when the theorem's hypotheses hold and every structural check passes."""
        if not self.hypotheses.theorem_hypotheses_hold or self.structure is None:
            return EXIT_VERDICT
        if not self.structure.ok() or self.contraction.margin > TOL:
            return EXIT_VERDICT
        return EXIT_OK


def analyze(space, n_max=8, delta=None, ine1_delta=INE1_DELTA, tol=TOL, seed=SEED, name=None):
    """Hypothesis checks, then (only if (i) and (ii) hold) the structure stage."""
    op = build_operator(space)
    hyp = check_hypotheses(op, n_max, delta, ine1_delta, tol)
    structure = contraction = err = None
    if hyp.theorem_hypotheses_hold:
        try:
            structure = extract_generator(op, hyp, n_max=n_max, delta=ine1_delta)
            contraction = verify_contraction(op, structure.b, seed=seed)
        except WanderingDimNotOne as e:
            err = str(e)
    gs = as_gram(space)
    return Analysis(
        name=name,
        kind="diagonal" if op.diagonal is not None else "gram",
        ambient_dim=gs.ambient_dim,
        dim=gs.dim,
        n_max=n_max,
        hypotheses=hyp,
        structure=structure,
        contraction=contraction,
        structure_error=err,
    )


def _lookup(obj, path):
    for part in path.split("."):
        if obj is None:
            return None
        obj = getattr(obj, part)
    return obj


def check_fact(analysis, fact):
    """Return (passed, observed) for one catalog Fact."""
    got = _lookup(analysis, fact.path)
    c = fact.check
    if c == "==":
        ok = got == fact.value if fact.value is not None else got is None
    elif c == "approx":
        ok = got is not None and abs(got - fact.value) <= fact.tol
    elif c == "<=":
        ok = got is not None and got <= fact.value + fact.tol
    elif c == ">=":
        ok = got is not None and got >= fact.value - fact.tol
    elif c == "all_approx":
        ok = got is not None and bool(np.all(np.abs(np.asarray(got) - fact.value) <= fact.tol))
    elif c == "all_le":
        ok = got is not None and bool(np.all(np.asarray(got) <= fact.value + fact.tol))
    elif c == "leading_zeros":
        if got is None:
            ok = False
        else:
            nz = np.flatnonzero(np.asarray(got))
            got = int(nz[0]) if nz.size else -1
            ok = got == fact.value
    else:
        raise ValueError(f"unknown check {c!r}")
    return bool(ok), got


def verify_entry(name, D=None):
    """Analyze a catalog entry at its defaults and check every expected fact."""
    e = catalog.entry(name)
    D = e.default_dim if D is None else D
    a = analyze(catalog.builtin(name, D), n_max=e.n_max, name=name)
    return a, [(f, *check_fact(a, f)) for f in e.expected]
