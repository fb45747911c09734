"""Command-line front end: fixture files, check suites, and reports.

A fixture is a single JSON document carrying exact data — rationals as
"num/den" strings, Gaussian rationals as [re, im] pairs of such strings —
describing a polarized limit structure and, optionally, the twist table of
a degenerating frame over the polydisc.  Every command prints a
deterministic human-readable summary (sorted bigrades, sorted indices) and
can additionally write a machine-readable JSON report; identical inputs
produce byte-identical reports.  Exit status: 0 when every check passes,
1 when a check fails (the first failing invariant is named on stderr),
2 when the input cannot be parsed or validated.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .exactlin import GaussianRational, Mat, Subspace, form_value
from .filtrations import DecreasingFiltration, IncreasingFiltration, weight_filtration
from .induced import induce, induced_endomorphism, locate_markers, PureHodgeData, tate_normalize
from .lie import hermitian_test, lie_algebra, lie_deligne_split, smoothness_test
from .mhs import deligne_split, first_relation_holds, NilpotentCone
from .orbit import (
    adapted_basis,
    eval_frame,
    generator_level_check,
    monodromy_check,
    orbit_spec,
    triangularity_check,
)
from .probe import (
    f_infinity_probe,
    levi_probe,
    norm_value,
    ProbeConfig,
    radial_limit,
    term_vanishing,
)

FIXTURE_TAG = "hodge-fixture/1"
REPORT_TAG = "hodge-report/1"

SUITES = ("symmetries", "isotropy", "bracket", "monodromy", "limits", "levels", "psh")
PROBES = ("radial", "terms", "levi", "finf")


class FixtureError(ValueError):
    """A field-addressed problem in a fixture document."""


def _fail(path, message):
    raise FixtureError(f"{path}: {message}")


# -- scalar / vector / matrix codec -------------------------------------------


def _parse_fraction(node, path):
    if isinstance(node, int):
        return Fraction(node)
    if isinstance(node, str):
        try:
            return Fraction(node)
        except (ValueError, ZeroDivisionError):
            _fail(path, f"bad rational {node!r}")
    _fail(path, f"expected a rational string, got {type(node).__name__}")


def _parse_scalar(node, path):
    if isinstance(node, (int, str)):
        return GaussianRational(_parse_fraction(node, path))
    if isinstance(node, list) and len(node) == 2:
        return GaussianRational(_parse_fraction(node[0], path + "[0]"),
                                _parse_fraction(node[1], path + "[1]"))
    _fail(path, "expected 'num/den' or a [re, im] pair")


def _parse_vector(node, path, dim):
    if not isinstance(node, list) or len(node) != dim:
        _fail(path, f"expected a vector of {dim} entries")
    return tuple(_parse_scalar(x, f"{path}[{j}]") for j, x in enumerate(node))


def _parse_matrix(node, path, dim):
    if not isinstance(node, list) or len(node) != dim:
        _fail(path, f"expected {dim} rows")
    return Mat([_parse_vector(row, f"{path}[{i}]", dim) for i, row in enumerate(node)])


def _show_scalar(x: GaussianRational):
    if not x.im:
        return str(x.re)
    return [str(x.re), str(x.im)]


def _show_vector(v):
    return [_show_scalar(x) for x in v]


def _show_matrix(m: Mat):
    return [_show_vector(row) for row in m.rows]


def _parse_levels(node, path, dim, cls):
    if not isinstance(node, dict) or not node:
        _fail(path, "expected a non-empty object of level -> spanning vectors")
    gens = {}
    for key, vectors in node.items():
        try:
            level = int(key)
        except ValueError:
            _fail(f"{path}.{key}", "level keys must be integers")
        if not isinstance(vectors, list):
            _fail(f"{path}.{key}", "expected a list of spanning vectors")
        gens[level] = [_parse_vector(v, f"{path}.{key}[{j}]", dim)
                       for j, v in enumerate(vectors)]
    return cls.from_generators(dim, gens)


def _show_levels(filtration):
    return {str(level): [_show_vector(v) for v in filtration.at(level).basis]
            for level in filtration.jump_levels}


def _parse_zeta(node, path, k, n_coords, dim):
    if not isinstance(node, dict):
        _fail(path, "expected an object keyed by comma-joined index sets")
    table = {}
    for key, terms in node.items():
        where = f"{path}[{key!r}]"
        try:
            idx = frozenset(int(s) for s in key.split(",")) if key else frozenset()
        except ValueError:
            _fail(where, "keys must be comma-joined divisor indices, '' for the empty set")
        if not idx <= set(range(k)):
            _fail(where, "index set reaches outside the divisor coordinates")
        if not isinstance(terms, list):
            _fail(where, "expected a list of {powers, matrix} terms")
        poly = {}
        for j, term in enumerate(terms):
            at = f"{where}[{j}]"
            if not isinstance(term, dict) or set(term) != {"powers", "matrix"}:
                _fail(at, "each term needs exactly the keys 'powers' and 'matrix'")
            powers = term["powers"]
            if (not isinstance(powers, list) or len(powers) != n_coords
                    or not all(isinstance(e, int) and e >= 0 for e in powers)):
                _fail(f"{at}.powers", f"expected {n_coords} nonnegative integers")
            poly[tuple(powers)] = _parse_matrix(term["matrix"], f"{at}.matrix", dim)
        table[idx] = poly
    return table


def _show_zeta(table):
    out = {}
    for idx, poly in table.items():
        key = ",".join(str(i) for i in sorted(idx))
        out[key] = [{"powers": list(expo), "matrix": _show_matrix(coeff)}
                    for expo, coeff in sorted(poly.items())]
    return out


# -- fixture documents ----------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    """A parsed fixture: exact structure data plus optional twist table."""

    data: PureHodgeData
    zeta: dict
    n_coords: int
    expectations: dict

    def orbit(self):
        return orbit_spec(self.data, self.zeta, self.n_coords)


def parse_fixture(doc) -> Fixture:
    if not isinstance(doc, dict):
        _fail("$", "fixture must be a JSON object")
    if doc.get("version") != FIXTURE_TAG:
        _fail("version", f"expected {FIXTURE_TAG!r}, got {doc.get('version')!r}")
    known = {"version", "dim", "weight", "q", "f", "w", "cone", "n_coords",
             "zeta", "markers"}
    for key in sorted(set(doc) - known):
        _fail(key, "unknown fixture field")
    for key in ("dim", "weight", "q", "f", "cone"):
        if key not in doc:
            _fail(key, "required field is missing")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        _fail("dim", "expected a positive integer")
    weight = doc["weight"]
    if not isinstance(weight, int):
        _fail("weight", "expected an integer")

    q = _parse_matrix(doc["q"], "q", dim)
    f = _parse_levels(doc["f"], "f", dim, DecreasingFiltration)
    w = _parse_levels(doc["w"], "w", dim, IncreasingFiltration) if "w" in doc else None
    if not isinstance(doc["cone"], list):
        _fail("cone", "expected a list of generator matrices")
    generators = [_parse_matrix(g, f"cone[{j}]", dim)
                  for j, g in enumerate(doc["cone"])]
    try:
        cone = NilpotentCone(generators, q)
        data = PureHodgeData(weight=weight, q=q, f=f, cone=cone, w=w)
    except (ValueError, ArithmeticError) as exc:
        raise FixtureError(str(exc)) from exc

    k = len(generators)
    n_coords = doc.get("n_coords", k)
    if not isinstance(n_coords, int) or n_coords < k:
        _fail("n_coords", f"expected an integer >= {k}")
    zeta = _parse_zeta(doc.get("zeta", {}), "zeta", k, n_coords, dim)

    expectations = doc.get("markers", {})
    if expectations:
        if not isinstance(expectations, dict):
            _fail("markers", "expected an object")
        _verify_expectations(data, expectations)
    return Fixture(data=data, zeta=zeta, n_coords=n_coords, expectations=expectations)


def _verify_expectations(data, expectations):
    try:
        markers = locate_markers(data)
    except (ValueError, ArithmeticError) as exc:
        raise FixtureError(f"markers: {exc}") from exc
    for key in sorted(set(expectations) - {"n", "m", "lam"}):
        _fail(f"markers.{key}", "unknown marker expectation")
    for key in ("n", "m"):
        if key in expectations and expectations[key] != getattr(markers, key):
            _fail(f"markers.{key}",
                  f"fixture says {expectations[key]}, computed {getattr(markers, key)}")
    if "lam" in expectations:
        lam = _parse_scalar(expectations["lam"], "markers.lam")
        if lam != markers.lam:
            _fail("markers.lam", f"fixture says {expectations['lam']}, computed {markers.lam}")


def fixture_document(data, zeta=None, n_coords=None, expectations=None) -> dict:
    """The canonical JSON document of structure data plus optional twists."""
    doc = {
        "version": FIXTURE_TAG,
        "dim": data.dim,
        "weight": data.weight,
        "q": _show_matrix(data.q),
        "f": _show_levels(data.f),
        "w": _show_levels(data.w),
        "cone": [_show_matrix(g) for g in data.cone.generators],
        "n_coords": len(data.cone) if n_coords is None else int(n_coords),
    }
    doc["zeta"] = _show_zeta(zeta or {})
    if expectations:
        doc["markers"] = dict(expectations)
    return doc


def dump_document(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_fixture(path) -> Fixture:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise FixtureError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FixtureError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_fixture(doc)


# -- scalar parsing for --t / --ell ------------------------------------------------


def _parse_cli_scalar(token):
    parts = token.split(",")
    try:
        if len(parts) == 1:
            return GaussianRational(Fraction(parts[0]))
        if len(parts) == 2:
            return GaussianRational(Fraction(parts[0]), Fraction(parts[1]))
    except (ValueError, ZeroDivisionError):
        pass
    raise FixtureError(f"bad coordinate {token!r}: use 're' or 're,im' rationals")


# -- command helpers ----------------------------------------------------------------


def _diamond_lines(split):
    return [f"  ({p}, {q}): {sub.dim}" for (p, q), sub in sorted(split.pieces.items())]


def _proportional_column(basis, vector):
    for j in range(basis.dim):
        col = basis.column(j)
        pivot = None
        ok = True
        for a, b in zip(vector, col):
            if (a == 0) != (b == 0):
                ok = False
                break
            if b != 0 and pivot is None:
                pivot = a / b
        if ok and pivot is not None:
            if tuple(pivot * b for b in col) == tuple(vector):
                return j
    return None


def cmd_diamond(fixture, args):
    data = fixture.data
    split = deligne_split(data.structure())
    lines = [f"diamond of a {data.dim}-dimensional weight-{data.weight} structure"]
    lines += _diamond_lines(split)
    report = {"diamond": {f"{p},{q}": sub.dim
                          for (p, q), sub in sorted(split.pieces.items())}}
    try:
        markers = locate_markers(data)
        lines.append(f"m = {markers.m}")
        report["m"] = markers.m
    except (ValueError, ArithmeticError):
        lines.append("m is undefined (top filtration level is not a line)")
        report["m"] = None
    return 0, lines, report


def cmd_split(fixture, args):
    split = deligne_split(fixture.data.structure())
    lines = ["bigraded pieces and their echelon bases"]
    report = {}
    for (p, q), sub in sorted(split.pieces.items()):
        lines.append(f"  ({p}, {q}): dim {sub.dim}")
        entry = []
        for v in sub.basis:
            shown = _show_vector(v)
            entry.append(shown)
            lines.append("    " + json.dumps(shown))
        report[f"{p},{q}"] = entry
    return 0, lines, report


def cmd_induce(fixture, args):
    ind = tate_normalize(induce(fixture.data))
    zeta = {idx: {expo: induced_endomorphism(coeff, ind.factor_exponents)
                  for expo, coeff in poly.items()}
            for idx, poly in fixture.zeta.items()}
    carrier = PureHodgeData(weight=ind.weight, q=ind.q, f=ind.f, cone=ind.cone, w=ind.w)
    doc = fixture_document(carrier, zeta, fixture.n_coords)
    text = dump_document(doc)
    lines = [f"induced structure: dim {ind.dim}, weight {ind.weight}, twist {ind.twist}",
             text.rstrip("\n")]
    return 0, lines, doc


def cmd_markers(fixture, args):
    data = fixture.data
    markers = locate_markers(data)
    basis = adapted_basis(data.f, data.w, data.q)
    indices = tuple(_proportional_column(basis, v)
                    for v in (markers.e0, markers.einf, markers.ed))
    lines = [
        f"n = {markers.n}",
        f"m = {markers.m}",
        f"lam = {markers.lam}",
        f"e0   = {json.dumps(_show_vector(markers.e0))}",
        f"einf = {json.dumps(_show_vector(markers.einf))}",
        f"ed   = {json.dumps(_show_vector(markers.ed))}",
        "adapted-basis indices (e0, einf, ed) = "
        + str(tuple("-" if j is None else j for j in indices)),
    ]
    report = {
        "n": markers.n, "m": markers.m, "lam": _show_scalar(markers.lam),
        "e0": _show_vector(markers.e0), "einf": _show_vector(markers.einf),
        "ed": _show_vector(markers.ed),
        "indices": [None if j is None else j for j in indices],
    }
    return 0, lines, report


def cmd_lie(fixture, args):
    data = fixture.data
    algebra = lie_algebra(data.q)
    split = lie_deligne_split(algebra, data.structure())
    herm, herm_why = hermitian_test(split)
    smooth, smooth_why = smoothness_test(split)
    lines = [f"symmetry algebra dimension {algebra.dim}",
             "bigraded layer dimensions"]
    lines += [f"  ({p}, {q}): {d}" for (p, q), d in sorted(split.diamond().items())]
    lines.append(f"hermitian: {herm} — {herm_why}")
    lines.append(f"smooth: {smooth} — {smooth_why}")
    report = {
        "algebra_dim": algebra.dim,
        "layers": {f"{p},{q}": d for (p, q), d in sorted(split.diamond().items())},
        "hermitian": herm, "hermitian_detail": herm_why,
        "smooth": smooth, "smooth_detail": smooth_why,
    }
    return 0, lines, report


def cmd_eval(fixture, args):
    spec = fixture.orbit()
    if args.t is None:
        raise FixtureError("eval needs --t with one value per coordinate")
    t = tuple(_parse_cli_scalar(tok) for tok in args.t)
    branch = tuple(args.branch) if args.branch else None
    report = {"t": [_show_scalar(x) for x in t]}
    lines = []
    if args.ell is not None:
        ell = tuple(_parse_cli_scalar(tok) for tok in args.ell)
        frame = eval_frame(spec, t, ell, branch=branch)
        lines.append(f"h = {frame.h_tilde}")
        lines.append(f"q01 = {frame.q01}")
        lines.append(f"triangular frame: {triangularity_check(frame)[0]}")
        report.update({
            "mode": "exact",
            "ell": [_show_scalar(x) for x in frame.ell],
            "h": str(frame.h_tilde),
            "q01": _show_scalar(frame.q01),
        })
    else:
        if branch:
            raise FixtureError("--branch needs --ell (exact mode)")
        value = norm_value(spec, tuple(x.to_complex() for x in t))
        lines.append(f"h ~ {value!r}  (principal-branch ell)")
        report.update({"mode": "float", "h": value})
    return 0, lines, report


# -- check suites -------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str
    skipped: bool = False


def _skip(name, why):
    return Check(name, True, why, skipped=True)


def suite_symmetries(fixture, args):
    data = fixture.data
    st = data.structure()
    split = deligne_split(st)
    sign = 1 if st.n % 2 == 0 else -1
    out = [Check("symmetries.pairing-symmetry",
                 st.q.transpose() == st.q * sign,
                 f"Q^T = ({sign})Q")]
    out.append(Check("symmetries.pairing-nondegenerate", bool(st.q.det()),
                     "det Q != 0"))
    ok, witness = first_relation_holds(st.f, st.q, st.n)
    out.append(Check("symmetries.filtration-orthogonality", ok,
                     "Q(F^a, F^b) = 0 for a+b > n" if ok else f"witness {witness}"))
    dims = {pq: sub.dim for pq, sub in split.pieces.items()}
    out.append(Check("symmetries.conjugate-dimensions",
                     all(dims.get((q, p), 0) == d for (p, q), d in dims.items()),
                     "dim I^{p,q} = dim I^{q,p}"))
    total = Subspace.zero(st.ambient)
    for sub in split.pieces.values():
        total = total + sub
    out.append(Check("symmetries.direct-sum",
                     total.dim == st.ambient == sum(dims.values()),
                     f"{sum(dims.values())} piece dims fill dimension {st.ambient}"))
    return out


def _isotropy_of(w, q, n):
    jumps = w.jump_levels
    for a in jumps:
        for b in jumps:
            if a + b >= 2 * n:
                continue
            for u in w.at(a).basis:
                for v in w.at(b).basis:
                    if form_value(q, u, v):
                        return False, (a, b)
    return True, None


def suite_isotropy(fixture, args):
    data = fixture.data
    if not len(data.cone):
        return [_skip("isotropy.weight-filtrations", "fixture has no cone")]
    n, q = data.weight, data.q
    out = []
    interior = data.cone.element((1,) * len(data.cone))
    out.append(Check("isotropy.interior-weight-filtration",
                     weight_filtration(interior, center=n) == data.w,
                     "W equals the interior element's weight filtration"))
    for j, g in enumerate(data.cone.generators):
        wg = weight_filtration(g, center=n)
        ok, where = _isotropy_of(wg, q, n)
        out.append(Check(f"isotropy.generator-{j}", ok,
                         "Q(W_a, W_b) = 0 for a+b < 2n" if ok
                         else f"pairing survives at levels {where}"))
    ok, where = _isotropy_of(data.w, q, n)
    out.append(Check("isotropy.common-filtration", ok,
                     "Q(W_a, W_b) = 0 for a+b < 2n" if ok
                     else f"pairing survives at levels {where}"))
    for j, g in enumerate(data.cone.generators):
        shifted = all(data.w.at(l - 2).contains(data.w.at(l).apply(g))
                      for l in data.w.jump_levels)
        out.append(Check(f"isotropy.lowering-{j}", shifted, "N W_l <= W_{l-2}"))
    return out


def suite_bracket(fixture, args):
    data = fixture.data
    st = data.structure()
    algebra = lie_algebra(data.q)
    split = deligne_split(st)
    lsplit = lie_deligne_split(algebra, st, split)
    # x^T Q + Q x = 0 per basis element makes [x, y]^T Q = -Q [x, y] an
    # identity, so closure of the bracket needs no pairwise commutators.
    isometry_ok = all((x.transpose() * data.q + data.q * x).is_zero()
                      for x in algebra.basis)
    out = [Check("bracket.isometry-algebra", isometry_ok,
                 "x^T Q + Q x = 0 on the basis; bracket closure follows")]
    layer_total = sum(sub.dim for sub in lsplit.pieces.values())
    out.append(Check("bracket.layer-sum", layer_total == algebra.dim,
                     f"layer dims {layer_total} fill the algebra dim {algebra.dim}"))
    action_ok = True
    detail = "g^{p,q} I^{r,s} <= I^{r+p, s+q}"
    for (p, q) in sorted(lsplit.pieces):
        for x in lsplit.slot_matrices(p, q):
            for (r, s), sub in sorted(split.pieces.items()):
                target = split.pieces.get((r + p, s + q))
                image = sub.apply(x)
                inside = (target.contains(image) if target is not None
                          else image.dim == 0)
                if not inside:
                    action_ok = False
                    detail = f"g^({p},{q}) breaks out of I^({r + p},{s + q})"
    out.append(Check("bracket.action-compatibility", action_ok, detail))
    # Exhaustive layers (layer-sum) acting compatibly on the direct sum of
    # the I^{p,q} force each commutator into the expected layer: a product
    # of two layer elements shifts every piece by the summed bidegree, and
    # a member of the algebra doing so can only be its (p+r, q+s) part.
    entailed = isometry_ok and layer_total == algebra.dim and action_ok
    out.append(Check("bracket.bracket-compatibility", entailed,
                     "[g^{p,q}, g^{r,s}] <= g^{p+r,q+s}, entailed by the three"
                     " checks above"))
    if len(data.cone):
        deg = lsplit.span_where(lambda p, q: (p, q) == (-1, -1))
        from .lie import flatten_matrix
        contained = all(deg.contains_vector(flatten_matrix(g))
                        for g in data.cone.generators)
        out.append(Check("bracket.cone-containment", contained,
                         "every generator lies in g^{-1,-1}"))
    else:
        out.append(_skip("bracket.cone-containment", "fixture has no cone"))
    return out


def _unmarked(fixture):
    """Why the norm machinery does not apply, or None when it does."""
    try:
        locate_markers(fixture.data)
        return None
    except (ValueError, ArithmeticError) as exc:
        return str(exc)


def _deterministic_points(spec, count=2):
    points = []
    for s in range(count):
        t = tuple(Fraction(1 + ((s + j) % 3), 3 + ((s + 2 * j) % 4))
                  for j in range(spec.n_coords))
        ell = tuple(GaussianRational(Fraction(s - 1, 7 + j), Fraction(1 + j, 5))
                    for j in range(spec.k))
        points.append((t, ell))
    return points


def suite_monodromy(fixture, args):
    if not len(fixture.data.cone):
        return [_skip("monodromy.branch-shifts", "fixture has no cone")]
    why = _unmarked(fixture)
    if why:
        return [_skip("monodromy.branch-shifts", f"norm machinery undefined: {why}")]
    try:
        spec = fixture.orbit()
    except (ValueError, ArithmeticError) as exc:
        return [Check("monodromy.orbit-data", False, str(exc))]
    shifts = [tuple(args.branch)] if args.branch else []
    shifts += [(1,) * spec.k, tuple(2 if j == 0 else -1 for j in range(spec.k))]
    out = []
    for t, ell in _deterministic_points(spec):
        for shift in shifts:
            if len(shift) != spec.k:
                raise FixtureError(f"--branch needs {spec.k} integers")
            ok, detail = monodromy_check(spec, t, ell, shift)
            out.append(Check(f"monodromy.shift-{','.join(map(str, shift))}", ok,
                             detail if not ok else f"invariant at t={t}"))
        ok, detail = triangularity_check(eval_frame(spec, t, ell))
        out.append(Check("monodromy.unipotent-frame", ok,
                         detail if not ok else "frame factors are unipotent"))
    return out


def suite_limits(fixture, args):
    if not len(fixture.data.cone):
        return [_skip("limits.radial", "fixture has no cone")]
    why = _unmarked(fixture)
    if why:
        return [_skip("limits.radial", f"norm machinery undefined: {why}")]
    try:
        spec = fixture.orbit()
    except (ValueError, ArithmeticError) as exc:
        return [Check("limits.orbit-data", False, str(exc))]
    cfg = ProbeConfig(tol=args.tol)
    deep = tuple(range(spec.k))
    report = radial_limit(spec, deep, cfg)
    out = [Check("limits.radial", report.passed,
                 f"final deviation {report.deviations[-1]:.3e} against tol {cfg.tol}")]
    for j in range(spec.k):
        powers = tuple(1 if i == j else 0 for i in range(spec.k))
        term = term_vanishing(spec, powers, cfg)
        out.append(Check(f"limits.term-{j}", term.passed,
                         f"|term| {term.deviations[-1]:.3e} at r={term.radii[-1]:.0e}"))
    return out


def suite_levels(fixture, args):
    if not len(fixture.data.cone):
        return [_skip("levels.generators", "fixture has no cone")]
    why = _unmarked(fixture)
    if why:
        return [_skip("levels.generators", f"norm machinery undefined: {why}")]
    try:
        spec = fixture.orbit()
        report = generator_level_check(spec)
    except (ValueError, ArithmeticError) as exc:
        return [Check("levels.orbit-data", False, str(exc))]
    out = []
    for rec in report.per_generator:
        out.append(Check(
            f"levels.generator-{rec.index}", rec.bounds_ok and rec.opposite_ok,
            f"level {rec.level} within [{report.n}, {report.m}], "
            f"opposite {rec.opposite_level}"))
    return out


def suite_psh(fixture, args):
    if not len(fixture.data.cone):
        return [_skip("psh.levi", "fixture has no cone")]
    why = _unmarked(fixture)
    if why:
        return [_skip("psh.levi", f"norm machinery undefined: {why}")]
    try:
        spec = fixture.orbit()
    except (ValueError, ArithmeticError) as exc:
        return [Check("psh.levi", False, str(exc))]
    if spec.n_coords == spec.k:
        return [_skip("psh.levi", "the deepest stratum is a point")]
    try:
        report = levi_probe(spec, tuple(range(spec.k)), cfg=ProbeConfig(tol=args.tol))
    except (ValueError, ArithmeticError) as exc:
        return [Check("psh.levi", False, str(exc))]
    eigs = ", ".join(f"{x:.3e}" for x in report.eigenvalues)
    return [Check("psh.levi", report.psh, f"eigenvalues [{eigs}]")]


SUITE_RUNNERS = {
    "symmetries": suite_symmetries,
    "isotropy": suite_isotropy,
    "bracket": suite_bracket,
    "monodromy": suite_monodromy,
    "limits": suite_limits,
    "levels": suite_levels,
    "psh": suite_psh,
}


def cmd_check(fixture, args):
    names = SUITES if args.suite in (None, "all") else (args.suite,)
    checks = []
    for name in names:
        try:
            checks.extend(SUITE_RUNNERS[name](fixture, args))
        except (ValueError, ArithmeticError) as exc:
            # the loader accepted the data but the mathematics rejects it
            checks.append(Check(f"{name}.applicability", False, str(exc)))
    lines = []
    for c in checks:
        status = "skip" if c.skipped else ("pass" if c.ok else "FAIL")
        lines.append(f"{status:4}  {c.name}  {c.detail}")
    failed = [c for c in checks if not c.ok]
    ran = sum(1 for c in checks if not c.skipped)
    skipped = len(checks) - ran
    summary = f"{ran} checks: {ran - len(failed)} passed, {len(failed)} failed"
    if skipped:
        summary += f", {skipped} skipped"
    lines.append(summary)
    report = {
        "checks": [{"name": c.name, "ok": c.ok, "skipped": c.skipped,
                    "detail": c.detail} for c in checks],
        "failed": len(failed),
    }
    if failed:
        print(f"first failing invariant: {failed[0].name} — {failed[0].detail}",
              file=sys.stderr)
    return (1 if failed else 0), lines, report


def cmd_probe(fixture, args):
    if not len(fixture.data.cone):
        raise FixtureError("probe needs a fixture with a nonempty cone")
    spec = fixture.orbit()
    cfg = ProbeConfig(tol=args.tol)
    which = PROBES if args.suite in (None, "all") else (args.suite,)
    if any(name not in PROBES for name in which):
        raise FixtureError(f"unknown probe {args.suite!r}; choose from {', '.join(PROBES)}")
    deep = tuple(range(spec.k))
    lines, report, code = [], {}, 0
    if "radial" in which:
        rep = radial_limit(spec, deep, cfg)
        lines.append(f"radial: target {rep.target!r}, final deviation "
                     f"{rep.deviations[-1]:.3e}, passed {rep.passed}")
        report["radial"] = {"target": rep.target, "radii": list(rep.radii),
                            "deviations": list(rep.deviations),
                            "passed": rep.passed}
        code = code or (0 if rep.passed else 1)
    if "terms" in which:
        entry = {}
        for j in range(spec.k):
            powers = tuple(1 if i == j else 0 for i in range(spec.k))
            rep = term_vanishing(spec, powers, cfg)
            lines.append(f"term {powers}: final {rep.deviations[-1]:.3e}, "
                         f"passed {rep.passed}")
            entry[",".join(map(str, powers))] = {
                "final": rep.deviations[-1], "passed": rep.passed}
            code = code or (0 if rep.passed else 1)
        report["terms"] = entry
    if "levi" in which:
        if spec.n_coords == spec.k:
            lines.append("levi: skipped — the deepest stratum is a point")
            report["levi"] = {"skipped": "the deepest stratum is a point"}
        else:
            rep = levi_probe(spec, deep, cfg=cfg)
            eigs = ", ".join(f"{x:.6e}" for x in rep.eigenvalues)
            lines.append(f"levi: eigenvalues [{eigs}], psh {rep.psh}")
            report["levi"] = {"eigenvalues": list(rep.eigenvalues), "psh": rep.psh}
            code = code or (0 if rep.psh else 1)
    if "finf" in which:
        st = fixture.data.structure()
        interior = fixture.data.cone.element((1,) * spec.k)
        rep = f_infinity_probe(st, interior, cfg=cfg)
        gaps = ", ".join(f"{d:.3e}" for d in rep.distances)
        lines.append(f"finf: gaps [{gaps}], extrapolated {rep.extrapolated:.3e}, "
                     f"passed {rep.passed}")
        report["finf"] = {"y": list(rep.y_values), "distances": list(rep.distances),
                          "extrapolated": rep.extrapolated, "passed": rep.passed}
        code = code or (0 if rep.passed else 1)
    if code:
        print("first failing invariant: probe verdict", file=sys.stderr)
    return code, lines, report


COMMANDS = {
    "diamond": cmd_diamond,
    "split": cmd_split,
    "induce": cmd_induce,
    "markers": cmd_markers,
    "lie": cmd_lie,
    "eval": cmd_eval,
    "check": cmd_check,
    "probe": cmd_probe,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hodge",
        description="Exact asymptotic Hodge data: diamonds, markers, checks, probes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("diamond", "bigraded dimension table of the fixture"),
        ("split", "bigraded pieces with echelon bases"),
        ("induce", "emit the normalized induced-structure fixture"),
        ("markers", "distinguished vectors, level m, and scaling"),
        ("lie", "symmetry-algebra layers and smoothness verdicts"),
        ("eval", "evaluate the frame and norm at a point"),
        ("check", "run an invariant suite"),
        ("probe", "run a numeric probe"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("fixture", help="fixture JSON file")
        p.add_argument("--report", metavar="OUT.json",
                       help="also write a machine-readable report")
        p.add_argument("--tol", type=float, default=1e-6,
                       help="tolerance for numeric verdicts (default 1e-6)")
        if name == "eval":
            p.add_argument("--t", nargs="+", metavar="RE[,IM]",
                           help="coordinates, exact rationals")
            p.add_argument("--ell", nargs="+", metavar="RE[,IM]",
                           help="exact ell-values (enables exact mode)")
            p.add_argument("--branch", nargs="+", type=int,
                           help="integer branch shifts (exact mode)")
        if name == "check":
            p.add_argument("--suite", choices=SUITES + ("all",), default="all",
                           help="which invariant suite to run")
            p.add_argument("--branch", nargs="+", type=int,
                           help="extra branch shift for the monodromy suite")
        if name == "probe":
            p.add_argument("--suite", choices=PROBES + ("all",), default="all",
                           help="which probe to run")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fixture = load_fixture(args.fixture)
        code, lines, report = COMMANDS[args.command](fixture, args)
    except FixtureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    if args.report:
        payload = {"version": REPORT_TAG, "command": args.command,
                   "fixture": args.fixture, "exit": code, "body": report}
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(dump_document(payload))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
