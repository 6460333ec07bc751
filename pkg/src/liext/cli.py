"""Command-line driver and the JSON document format.

Exit statuses: 0 success, 2 usage error, 3 parse error, 4 invalid algebra or
extension data, 5 a requested check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from . import heis
from .cechain import Cochain, Representation, coadjoint, phi_cochain
from .exactlin import Matrix, Subspace, format_rational, parse_rational
from .extension import COND_DLAM, COND_DMU, COND_DPHI, ExtensionData, InvalidExtension, build
from .liecore import (
    InvalidAlgebra,
    LieAlgebra,
    bracket_subspaces,
    canonical_ideals,
    has_abelian_descending_ideal,
    is_abelian_subspace,
    is_nilpotent,
    is_solvable,
    jacobi_defect,
    series,
)
from .quadratic import (
    BilinearForm,
    DoubleExtensionData,
    HypothesisError,
    double_extension,
    is_invariant,
    metric_check,
    orthogonal_split_central,
    perp,
    series_perp_defects,
    witt_complement,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_CHECK = 5

MACHINE_MARKER = "--- machine ---"


class ParseError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


# reading


def _rat(value: Any, field: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(field, 'expected a rational string such as "3" or "-1/2"')
    try:
        return parse_rational(str(value))
    except ValueError as exc:
        raise ParseError(field, str(exc)) from None


def _get(doc: dict, key: str, field: str, kind=None):
    if not isinstance(doc, dict):
        raise ParseError(field, "expected an object")
    if key not in doc:
        raise ParseError(f"{field}.{key}" if field else key, "missing")
    value = doc[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool) and kind is int):
        raise ParseError(f"{field}.{key}" if field else key, f"expected {kind.__name__}")
    return value


def _count(doc: dict, key: str, field: str) -> int:
    value = _get(doc, key, field, int)
    if value < 0:
        raise ParseError(f"{field}.{key}" if field else key, "must be nonnegative")
    return value


def _matrix(value: Any, rows: int, cols: int, field: str) -> Matrix:
    if not isinstance(value, list) or len(value) != rows:
        raise ParseError(field, f"expected {rows} rows")
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{field}[{i}]", f"expected {cols} entries")
        out.append([_rat(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    return Matrix(out, cols=cols)


def _vector(value: Any, n: int, field: str) -> tuple:
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(field, f"expected {n} entries")
    return tuple(_rat(x, f"{field}[{i}]") for i, x in enumerate(value))


@dataclass(frozen=True)
class AlgebraDocument:
    name: str
    algebra: LieAlgebra
    form: BilinearForm | None


def parse_algebra(doc: Any, field: str = "", *, check: bool = True) -> AlgebraDocument:
    prefix = f"{field}." if field else ""
    name = _get(doc, "name", field, str)
    n = _count(doc, "dim", field)
    basis = _get(doc, "basis", field, list)
    if len(basis) != n or not all(isinstance(b, str) for b in basis):
        raise ParseError(f"{prefix}basis", f"expected {n} identifier strings")
    if len(set(basis)) != n:
        raise ParseError(f"{prefix}basis", "identifiers must be distinct")
    index = {b: i for i, b in enumerate(basis)}
    seen: dict[tuple[int, int], tuple] = {}
    for t, entry in enumerate(_get(doc, "brackets", field, list)):
        f = f"{prefix}brackets[{t}]"
        left = _get(entry, "left", f, str)
        right = _get(entry, "right", f, str)
        for side, ident in (("left", left), ("right", right)):
            if ident not in index:
                raise ParseError(f"{f}.{side}", f"unknown identifier {ident!r}")
        result = _get(entry, "result", f, dict)
        vec = [0] * n
        for ident, coef in result.items():
            if ident not in index:
                raise ParseError(f"{f}.result.{ident}", "unknown identifier")
            vec[index[ident]] = _rat(coef, f"{f}.result.{ident}")
        i, j = index[left], index[right]
        if i == j:
            if any(vec):
                raise ParseError(f, "[x, x] must be zero")
            continue
        key, vec = ((i, j), tuple(vec)) if i < j else ((j, i), tuple(-v for v in vec))
        if key in seen and seen[key] != vec:
            raise ParseError(f, "conflicts with an earlier bracket of the same pair")
        seen[key] = vec
    algebra = LieAlgebra.from_brackets(n, seen, basis, check=check)
    form = None
    if "form" in doc and doc["form"] is not None:
        gram = _matrix(doc["form"], n, n, f"{prefix}form")
        try:
            form = BilinearForm(gram)
        except ValueError as exc:
            raise ParseError(f"{prefix}form", str(exc)) from None
    return AlgebraDocument(name, algebra, form)


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class ExtensionDocument:
    name: str
    data: ExtensionData
    b_a: BilinearForm | None


def parse_extension(doc: Any) -> ExtensionDocument:
    name = _get(doc, "name", "", str)
    h = parse_algebra(_get(doc, "h", ""), "h").algebra
    n = h.dim
    da = _count(doc, "dim_a", "")
    di = _count(doc, "dim_i", "")
    rho_doc = _get(doc, "rho", "")
    if rho_doc == "coadjoint":
        if di != n:
            raise ParseError("rho", '"coadjoint" requires dim_i = dim h')
        rho = coadjoint(h)
    else:
        if not isinstance(rho_doc, list) or len(rho_doc) != n:
            raise ParseError("rho", f'expected "coadjoint" or {n} matrices')
        rho = Representation(h, di, [_matrix(m, di, di, f"rho[{t}]") for t, m in enumerate(rho_doc)])
    phi_doc = _get(doc, "phi", "", list)
    if len(phi_doc) != n:
        raise ParseError("phi", f"expected {n} matrices")
    phi_mats = [_matrix(m, di, da, f"phi[{t}]") for t, m in enumerate(phi_doc)]
    phi = phi_cochain(n, phi_mats) if n else Cochain.zero(1, 0, di * da)
    pairs = _pairs(n)
    cochains = {}
    for key, dim in (("lambda", da), ("mu", di)):
        vals = _get(doc, key, "", list)
        if len(vals) != len(pairs):
            raise ParseError(key, f"expected {len(pairs)} vectors, one per increasing pair")
        cochains[key] = Cochain(
            2, n, dim, {p: _vector(v, dim, f"{key}[{t}]") for t, (p, v) in enumerate(zip(pairs, vals))}
        )
    b_a = None
    if doc.get("b_a") is not None:
        b_a = _form(doc["b_a"], da, "b_a")
    return ExtensionDocument(name, ExtensionData(h, da, di, rho, phi, cochains["lambda"], cochains["mu"]), b_a)


def _form(value: Any, n: int, field: str) -> BilinearForm:
    try:
        return BilinearForm(_matrix(value, n, n, field))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(field, str(exc)) from None


def parse_double_extension(doc: Any) -> tuple[str, DoubleExtensionData]:
    name = _get(doc, "name", "", str)
    nv = _count(doc, "dim_v", "")
    b_v = _form(_get(doc, "b_v", ""), nv, "b_v")
    d = _matrix(_get(doc, "d", ""), nv, nv, "d")
    return name, DoubleExtensionData(nv, b_v, d)


# writing


def _rats(vec) -> list[str]:
    return [format_rational(x) for x in vec]


def _matrix_doc(m: Matrix) -> list[list[str]]:
    return [_rats(row) for row in m]


def algebra_document(algebra: LieAlgebra, name: str, form: BilinearForm | None = None) -> dict:
    names = list(algebra.basis_names)
    brackets = []
    for i, j, vec in algebra.nonzero_brackets():
        brackets.append(
            {
                "left": names[i],
                "right": names[j],
                "result": {names[k]: format_rational(c) for k, c in enumerate(vec) if c},
            }
        )
    doc = {"name": name, "dim": algebra.dim, "basis": names, "brackets": brackets}
    if form is not None:
        doc["form"] = _matrix_doc(form.gram)
    return doc


def extension_document(data: ExtensionData, name: str, b_a: BilinearForm | None = None) -> dict:
    n = data.h.dim
    doc = {
        "name": name,
        "h": algebra_document(data.h, f"{name}/h"),
        "dim_a": data.dim_a,
        "dim_i": data.dim_i,
        "rho": "coadjoint"
        if data.dim_i == n and data.rho == coadjoint(data.h)
        else [_matrix_doc(m) for m in data.rho.matrices],
        "phi": [_matrix_doc(m) for m in data.phi_matrices()],
        "lambda": [_rats(data.lam.value(p)) for p in _pairs(n)],
        "mu": [_rats(data.mu.value(p)) for p in _pairs(n)],
    }
    if b_a is not None:
        doc["b_a"] = _matrix_doc(b_a.gram)
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# fixtures


def fixture_names() -> list[str]:
    return sorted(p.name for p in resources.files("liext.data").iterdir() if p.name.endswith(".json"))


def load_json(ref: str) -> Any:
    """Read a JSON document from a path or a bundled fixture name."""
    path = Path(ref)
    if path.exists():
        text = path.read_text()
    else:
        name = ref if ref.endswith(".json") else f"{ref}.json"
        res = resources.files("liext.data") / name
        if not res.is_file():
            raise ParseError("input", f"no such file or bundled fixture: {ref!r}")
        text = res.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("input", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# reports


def _basis_doc(s: Subspace, names) -> list[dict]:
    return [{names[k]: format_rational(c) for k, c in enumerate(v) if c} for v in s.vectors()]


def _combination(v, names) -> str:
    parts = []
    for k, c in enumerate(v):
        if c:
            coef = "" if c == 1 else "-" if c == -1 else f"{format_rational(c)}*"
            parts.append(f"{coef}{names[k]}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _span_text(s: Subspace, names) -> str:
    if s.dim == 0:
        return "{0}"
    return "span{" + ", ".join(_combination(v, names) for v in s.vectors()) + "}"


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.machine: dict = {}

    def say(self, text: str = ""):
        self.lines.append(text)

    def render(self, machine_only: bool) -> str:
        body = dumps(self.machine)
        if machine_only:
            return body
        return "\n".join(self.lines) + f"\n{MACHINE_MARKER}\n" + body


def analyze(doc: AlgebraDocument) -> tuple[Report, int]:
    g = doc.algebra
    names = list(g.basis_names)
    rep = Report()
    m = rep.machine
    m["name"] = doc.name
    m["dim"] = g.dim
    rep.say(f"algebra {doc.name} (dim {g.dim})")
    defects = jacobi_defect(g)
    m["jacobi"] = not defects
    if defects:
        m["jacobi_violations"] = [[names[i] for i in t] for t, _ in defects]
        rep.say("Jacobi identity fails on " + ", ".join("(" + ", ".join(names[i] for i in t) + ")" for t, _ in defects))
        return rep, EXIT_INVALID
    rep.say("Jacobi identity holds")
    s = series(g)
    m["descending"] = [x.dim for x in s.descending]
    m["derived"] = [x.dim for x in s.derived]
    m["derived_central"] = [x.dim for x in s.derived_central]
    m["m1"], m["m2"], m["m"] = s.m1, s.m2, s.m
    rep.say(f"descending central series dims {m['descending']}")
    rep.say(f"derived series dims {m['derived']}")
    rep.say(f"derived central series dims {m['derived_central']}")
    rep.say(f"m1 = {s.m1}, m2 = {s.m2}, m = {s.m}")
    m["center"] = _basis_doc(s.central(1), names)
    m["g1"] = _basis_doc(s.lower(1), names)
    rep.say(f"center {_span_text(s.central(1), names)}")
    rep.say(f"g^1 {_span_text(s.lower(1), names)}")
    i_id, j_id = canonical_ideals(g, s)
    m["i"] = _basis_doc(i_id, names)
    m["j"] = _basis_doc(j_id, names)
    rep.say(f"i(g) = {_span_text(i_id, names)}")
    rep.say(f"j(g) = {_span_text(j_id, names)}")
    m["nilpotent"] = is_nilpotent(g, s)
    m["solvable"] = is_solvable(g, s)
    rep.say(f"nilpotent: {m['nilpotent']}, solvable: {m['solvable']}")
    ell = has_abelian_descending_ideal(g, s)
    m["abelian_descending_ideal"] = ell
    rep.say("abelian descending central ideal: " + (f"g^{ell}" if ell else "none"))
    if doc.form is not None:
        b = doc.form
        inv = is_invariant(g, b)
        m["form_invariant"] = bool(inv)
        m["form_nondegenerate"] = b.nondegenerate
        rep.say(f"form invariant: {bool(inv)}, nondegenerate: {b.nondegenerate}")
        if not inv:
            m["form_violation"] = [names[k] for k in inv.violation]
            return rep, EXIT_CHECK
        if b.nondegenerate:
            fails = series_perp_defects(g, b)
            m["perp_series_identities"] = not fails
            m["perp_i_equals_j"] = perp(b, i_id) == j_id
            rep.say(f"perp(g^l) = C_l = C(g^(l-1)) for all l: {not fails}")
            rep.say(f"perp(i) = j: {m['perp_i_equals_j']}")
            if is_abelian_subspace(g, j_id):
                m["bracket_g_j_in_i"] = i_id.contains_space(bracket_subspaces(g, g.full(), j_id))
                rep.say(f"[g, j] in i: {m['bracket_g_j_in_i']}")
            split = orthogonal_split_central(g, b)
            m["central_split_dim"] = split[0].dim if split else 0
            if split:
                rep.say(f"nondegenerate central ideal {_span_text(split[0], names)} splits off orthogonally")
            try:
                h, a = witt_complement(g, b)
                m["witt"] = {"h": _basis_doc(h, names), "a": _basis_doc(a, names)}
                rep.say(f"isotropic complement h = {_span_text(h, names)}, a = {_span_text(a, names)}")
            except HypothesisError as exc:
                m["witt"] = {"unavailable": str(exc)}
                rep.say(f"no isotropic complement: {exc}")
    return rep, EXIT_OK


def extend(doc: ExtensionDocument) -> tuple[Report, int, dict | None]:
    rep = Report()
    res = doc.data.residuals()
    rep.machine["name"] = doc.name
    rep.machine["conditions"] = {k: not v for k, v in _all_conditions(res).items()}
    if res:
        for cond in res:
            rep.say(f"condition fails: {cond}")
        rep.machine["failed"] = sorted(res)
        return rep, EXIT_INVALID, None
    g = build(doc.data)
    out = algebra_document(g, f"{doc.name}/built")
    rep.say(f"built algebra of dimension {g.dim} with {len(out['brackets'])} nonzero brackets")
    names = list(g.basis_names)
    for i, j, vec in g.nonzero_brackets():
        rep.say(f"  [{names[i]}, {names[j]}] = {_combination(vec, names)}")
    rep.machine["algebra"] = out
    return rep, EXIT_OK, out


def _all_conditions(res: dict) -> dict:
    return {c: res.get(c) for c in (COND_DPHI, COND_DLAM, COND_DMU)}


def check_metric(doc: ExtensionDocument, b_a: BilinearForm | None) -> tuple[Report, int]:
    rep = Report()
    b_a = b_a or doc.b_a or BilinearForm.identity(doc.data.dim_a)
    result = metric_check(doc.data, b_a)
    m = rep.machine
    m["name"] = doc.name
    m["b_a"] = _matrix_doc(b_a.gram)
    if not result:
        m["metric"] = False
        m["condition"] = result.condition
        m["detail"] = result.detail
        rep.say(f"no invariant metric for this B_a: ({result.condition}) {result.detail}")
        return rep, EXIT_CHECK
    cert = result.certificate
    m["metric"] = True
    m["tau"] = _matrix_doc(cert.tau.matrix())
    m["pullback_metric"] = _matrix_doc(cert.pullback_metric.gram)
    m["modified_lambda"] = [_rats(cert.modified_data.lam.value(p)) for p in _pairs(doc.data.h.dim)]
    rep.say("invariant metric exists")
    rep.say(f"tau = {m['tau']}")
    rep.say("pullback metric is invariant and nondegenerate on the original algebra")
    return rep, EXIT_OK


def classify_report(r: int, he_doc: ExtensionDocument | None = None) -> tuple[Report, int]:
    rep = Report()
    m = rep.machine
    if he_doc is not None:
        he = heis.from_extension_data(he_doc.data)
        bad = he.failures()
        if bad:
            m["failures"] = bad
            rep.say("invalid data: " + "; ".join(bad))
            return rep, EXIT_INVALID
        c = heis.classify(he)
        m["name"] = he_doc.name
        m["tag"] = c.tag
        m["tag_is_invariant"] = c.tag_is_invariant
        m["note"] = c.note
        rep.say(f"{he_doc.name}: family {c.tag}" + (f" ({c.note})" if c.note else ""))
        if c.canonical is not None:
            m["canonical"] = extension_document(heis.to_extension_data(c.canonical), f"{he_doc.name}/canonical")
        return rep, EXIT_OK
    fams = heis.catalog()
    m["r"] = r
    m["families"] = [
        {
            "tag": f.tag,
            "lambda": f.lam_form,
            "parameters": list(f.parameter_conditions),
            "phi_constraints": f.describe_constraints(r),
        }
        for f in fams
    ]
    rep.say(f"{len(fams)} families for r = {r}")
    for f in fams:
        cons = "; ".join(f.describe_constraints(r)) or "phi arbitrary"
        extra = f" [{', '.join(f.parameter_conditions)}]" if f.parameter_conditions else ""
        rep.say(f"  {f.tag}: lambda {f.lam_form}{extra}; {cons}")
    entries = heis.metric_catalog(r)
    m["metric_families"] = [e.tag for e in entries]
    rep.say(f"{len(entries)} families carry an invariant metric: {', '.join(e.tag for e in entries)}")
    excluded = heis.excluded_diagnostics(r)
    m["excluded"] = {t: res.condition for t, res in excluded.items()}
    for t, res in excluded.items():
        rep.say(f"  {t}: no metric, ({res.condition}) {res.detail}")
    if r > 3:
        m["splits"] = {}
        for e in entries:
            s = heis.split_check(e.extension)
            m["splits"][e.tag] = {
                "trailing_dim": s.trailing_ideal.dim,
                "remainder_tag": s.remainder_tag,
                "maximal_split_dim": s.maximal_split_dim,
            }
            rep.say(f"  {e.tag}: F^{r - 3} splits off; remainder is family {s.remainder_tag} at r = 3")
    return rep, EXIT_OK


def run_double_extension(name: str, dd: DoubleExtensionData) -> tuple[Report, int, dict]:
    g, b = double_extension(dd)
    out = algebra_document(g, name, b)
    rep = Report()
    rep.say(f"double extension of dimension {g.dim}; form is invariant")
    rep.machine["algebra"] = out
    return rep, EXIT_OK, out


# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liext", description="Exact computations with abelian extensions of Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="print only the machine-readable section")
    common.add_argument("--output", help="write the produced document to this path")
    a = sub.add_parser("analyze", parents=[common], help="series, canonical ideals and metric checks")
    a.add_argument("--input", required=True)
    e = sub.add_parser("extend", parents=[common], help="build the algebra defined by extension data")
    e.add_argument("--input", required=True)
    c = sub.add_parser("check-metric", parents=[common], help="decide whether extension data carry an invariant metric")
    c.add_argument("--input", required=True)
    c.add_argument("--b-a", default=None, help="'identity' or a path to a JSON Gram matrix")
    k = sub.add_parser("classify", parents=[common], help="the nine Heisenberg families and their metric members")
    k.add_argument("--r", type=int, default=3)
    k.add_argument("--input", default=None, help="classify a Heisenberg extension document")
    d = sub.add_parser("double-extension", parents=[common], help="build a double extension with its metric")
    d.add_argument("--input", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out_doc = None
    try:
        if args.command == "analyze":
            rep, code = analyze(parse_algebra(load_json(args.input), check=False))
        elif args.command == "extend":
            rep, code, out_doc = extend(parse_extension(load_json(args.input)))
        elif args.command == "check-metric":
            doc = parse_extension(load_json(args.input))
            b_a = None
            if args.b_a and args.b_a != "identity":
                b_a = _form(load_json(args.b_a), doc.data.dim_a, "b_a")
            elif args.b_a == "identity":
                b_a = BilinearForm.identity(doc.data.dim_a)
            rep, code = check_metric(doc, b_a)
        elif args.command == "classify":
            if args.r < 3:
                print("r must be at least 3", file=sys.stderr)
                return EXIT_USAGE
            he_doc = parse_extension(load_json(args.input)) if args.input else None
            rep, code = classify_report(args.r, he_doc)
        else:
            name, dd = parse_double_extension(load_json(args.input))
            rep, code, out_doc = run_double_extension(name, dd)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidAlgebra as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InvalidExtension, HypothesisError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output and out_doc is not None:
        Path(args.output).write_text(dumps(out_doc))
    sys.stdout.write(rep.render(args.machine))
    return code


if __name__ == "__main__":
    sys.exit(main())
