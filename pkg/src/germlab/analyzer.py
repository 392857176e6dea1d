"""File ingestion, analysis orchestration and deterministic reports.

Germ definition files are line based:

    source = [x, y]
    target = [X1, X2, X3]
    components = ["x", "y^3", "y^5 + x*y"]
    params = [l1, l2]          # optional: marks an unfolding
    target_params = [L1, L2]   # optional: defaults to capitalized params

`components` lists the deformed part only; an unfolding's trailing
parameter components are implied.  Function files for mu-tau use `vars`
and `function` keys.  All numeric output is exact: rationals serialize
as "a/b" strings, never floats.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, is_dataclass, asdict
from fractions import Fraction
from typing import Any

from .decide import (
    analyze_unfolding,
    decide_qh_minimal,
    decide_qh_mult3,
)
from .fields import VectorField, analytic_stratum_dim, discriminant_equation, lift_module
from .germs import (
    HeuristicCodim,
    MapGerm,
    Unfolding,
    ae_codim,
    build_standard_unfolding,
    corank,
    ke_codim,
    minimal_unfolding_data,
    multiplicity,
)
from .jets import DEFAULT_DEGREE, CodimCertificate, ModuleSpan, MultiplierRing, NotFiniteUpTo
from .linalg import RationalMatrix, SpectrumReport
from .poly import Polynomial, PolyParseError, parse_polynomial
from .verdicts import UNKNOWN, Inapplicable, UnsupportedShape, Verdict
from .weights import good_weights_check, milnor_number, saito_check, tjurina_number, wh_detect

SCHEMA = "germlab-report/1"


class GermFileError(ValueError):
    pass


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def _parse_list(value: str, line_no: int, quoted: bool) -> list[str]:
    value = value.strip()
    if not (value.startswith("[") and value.endswith("]")):
        raise GermFileError(f"line {line_no}: expected a [...] list")
    inner = value[1:-1].strip()
    if not inner:
        return []
    items = []
    if quoted:
        for m in re.finditer(r'"([^"]*)"', inner):
            items.append(m.group(1))
        if not items:
            raise GermFileError(f"line {line_no}: expected quoted entries")
    else:
        for raw in inner.split(","):
            name = raw.strip().strip('"')
            if not _IDENT.match(name):
                raise GermFileError(f"line {line_no}: bad identifier {raw.strip()!r}")
            items.append(name)
    return items


def _read_keyvals(text: str) -> dict[str, tuple[str, int]]:
    out: dict[str, tuple[str, int]] = {}
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise GermFileError(f"line {i}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in out:
            raise GermFileError(f"line {i}: duplicate key {key!r}")
        out[key] = (value.strip(), i)
    return out


def parse_germ_text(text: str):
    """Parse germ-definition text into a MapGerm or Unfolding."""
    kv = _read_keyvals(text)
    for required in ("source", "target", "components"):
        if required not in kv:
            raise GermFileError(f"missing key {required!r}")
    source = _parse_list(*kv["source"], quoted=False)
    target = _parse_list(*kv["target"], quoted=False)
    comp_strs = _parse_list(*kv["components"], quoted=True)
    params = _parse_list(*kv["params"], quoted=False) if "params" in kv else []
    if "target_params" in kv:
        tparams = _parse_list(*kv["target_params"], quoted=False)
    else:
        tparams = [p[:1].upper() + p[1:] for p in params]
    if len(comp_strs) != len(target):
        raise GermFileError(
            f"{len(comp_strs)} components for {len(target)} target variables"
        )
    all_src = source + params
    all_names = all_src + target + tparams
    if len(set(all_names)) != len(all_names):
        raise GermFileError("variable collisions between source/target/params")
    comps = []
    for j, text_j in enumerate(comp_strs):
        try:
            p = parse_polynomial(text_j, tuple(all_src))
        except PolyParseError as exc:
            raise GermFileError(f"component {j + 1}: {exc}") from exc
        if p.constant_term():
            raise GermFileError(f"component {j + 1}: germ must fix the origin")
        comps.append(p)
    if not params:
        return MapGerm(tuple(source), tuple(target), tuple(comps))
    for lam in params:
        comps.append(Polynomial.var(tuple(all_src), lam))
    total = MapGerm(tuple(all_src), tuple(target) + tuple(tparams), tuple(comps))
    return Unfolding.from_total(total, len(params))


def parse_germ_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_germ_text(fh.read())


def parse_function_file(path: str) -> Polynomial:
    with open(path, "r", encoding="utf-8") as fh:
        kv = _read_keyvals(fh.read())
    for required in ("vars", "function"):
        if required not in kv:
            raise GermFileError(f"missing key {required!r}")
    vars = _parse_list(*kv["vars"], quoted=False)
    body = kv["function"][0].strip().strip('"')
    g = parse_polynomial(body, tuple(vars))
    if g.constant_term():
        raise GermFileError("function must vanish at the origin")
    return g


def parse_lift_file(path: str) -> ModuleSpan:
    """Externally supplied lift generators (JSON: vars, generators, degree)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    vars = tuple(data["vars"])
    gens = []
    for vecs in data["generators"]:
        gens.append(tuple(parse_polynomial(c, vars) for c in vecs))
    rank = len(vars)
    for g in gens:
        if len(g) != rank:
            raise GermFileError("lift generators must have one component per variable")
    return ModuleSpan(vars, rank, gens, MultiplierRing.FULL, trunc_degree=data.get("degree"))


# -- serialization -------------------------------------------------------------


def jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, VectorField):
        return [str(c) for c in value.components]
    if isinstance(value, SpectrumReport):
        return {
            "eigenvalues": [str(r) for r, k in value.roots for _ in range(k)],
            "residual": str(value.residual),
            "all_rational": value.all_rational,
            "all_nonzero": value.all_nonzero,
            "all_positive": value.all_positive,
        }
    if isinstance(value, RationalMatrix):
        return [[str(e) for e in row] for row in value.entries]
    if isinstance(value, ModuleSpan):
        return {
            "vars": list(value.ambient_vars),
            "rank": value.ambient_rank,
            "multipliers": value.multipliers.kind,
            "degree": value.trunc_degree,
            "generators": [[str(c) for c in g] for g in value.generators],
        }
    if isinstance(value, Verdict):
        return {
            "status": value.status,
            "degree": value.degree,
            "witness": jsonable(value.witness),
            "certificate": jsonable(value.certificate),
            "evidence": jsonable(value.evidence),
        }
    if isinstance(value, CodimCertificate):
        return {
            "codim": value.codim,
            "certified_at": value.certified_at,
            "computed_at": value.computed_at,
            "cobasis": [[c, list(m)] for c, m in value.cobasis],
        }
    if isinstance(value, NotFiniteUpTo):
        return {"not_finite_up_to": value.degree}
    if isinstance(value, HeuristicCodim):
        return {"codim": value.codim, "heuristic": True, "stabilized_from": value.stabilized_from}
    if is_dataclass(value) and not isinstance(value, type):
        return {k: jsonable(v) for k, v in vars(value).items()} if hasattr(value, "__dict__") else jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return str(value)


@dataclass
class AnalysisReport:
    command: str
    degree: int
    input: dict
    results: dict
    status: str  # ok | unsupported | unknown

    def to_json(self) -> str:
        payload = {
            "schema": SCHEMA,
            "command": self.command,
            "degree": self.degree,
            "input": jsonable(self.input),
            "results": jsonable(self.results),
            "status": self.status,
        }
        return json.dumps(payload, indent=2)

    def exit_code(self) -> int:
        return {"ok": 0, "unsupported": 2, "unknown": 3}[self.status]


def _echo_input(obj, path: str | None) -> dict:
    if isinstance(obj, Unfolding):
        germ = obj.total
        base = obj.base
        data = {
            "kind": "unfolding",
            "parameters": [list(p) for p in obj.param_pairs],
            "base_source": list(base.source_vars),
            "base_target": list(base.target_vars),
            "base_components": [str(c) for c in base.components],
        }
    else:
        germ = obj
        data = {"kind": "germ"}
    data.update(
        {
            "source": list(germ.source_vars),
            "target": list(germ.target_vars),
            "components": [str(c) for c in germ.components],
        }
    )
    if path:
        data["path"] = path
    return data


def _as_unfolding(obj, degree: int) -> tuple[Unfolding, dict]:
    """Use the given unfolding, or build the standard minimal one."""
    note: dict = {}
    if isinstance(obj, Unfolding):
        return obj, note
    basis = minimal_unfolding_data(obj, degree)
    unf = build_standard_unfolding(obj, basis)
    note["constructed_standard_unfolding"] = [str(c) for c in unf.total.components]
    note["unfolding_monomials"] = [
        {"component": q.component_index + 1, "monomial": list(q.monomial)} for q in basis
    ]
    return unf, note


def _staged_degrees(degree: int) -> list[int]:
    """Escalation schedule: YES verdicts are unconditional at any stage,
    so cheap degrees run first; the full requested degree is only paid
    when the decision stays negative or unknown."""
    stages = [d for d in (2, 3, 4, 6, 8) if d < degree]
    return stages + [degree]


def _staged_analysis(unf: Unfolding, degree: int, lift: ModuleSpan | None):
    """Run the substantiality pipeline with degree escalation."""
    if lift is not None:
        d = lift.trunc_degree or degree
        return analyze_unfolding(unf, min(degree, d) if lift.trunc_degree else degree, lift=lift), None
    last = None
    disc = discriminant_equation(unf.total)
    for d in _staged_degrees(degree):
        span = lift_module(unf.total, d, disc=disc)
        last = analyze_unfolding(unf, d, lift=span)
        if last.substantial.yes and last.weak.yes:
            break
    return last, disc


def run(
    command: str,
    path: str,
    degree: int = DEFAULT_DEGREE,
    *,
    construct_coords: bool = False,
    lift_path: str | None = None,
) -> AnalysisReport:
    """Execute one CLI command and assemble its deterministic report."""
    if command == "mu-tau":
        g = parse_function_file(path)
        mu = milnor_number(g, degree)
        tau = tjurina_number(g, degree)
        sv = saito_check(g, degree)
        status = "unknown" if sv.status == UNKNOWN else "ok"
        return AnalysisReport(
            command,
            degree,
            {"path": path, "vars": list(g.vars), "function": str(g)},
            {"mu": jsonable(mu), "tau": jsonable(tau), "saito": jsonable(sv)},
            status,
        )
    obj = parse_germ_file(path)
    germ = obj.total if isinstance(obj, Unfolding) else obj
    inp = _echo_input(obj, path)
    results: dict = {}
    status = "ok"
    try:
        if command == "analyze":
            results["corank"] = corank(germ)
            if germ.n == germ.p:
                results["multiplicity"] = jsonable(multiplicity(germ, degree))
            results["ke_codim"] = jsonable(ke_codim(germ, degree))
            results["ae_codim"] = jsonable(ae_codim(germ, degree))
            ws = wh_detect(germ)
            results["weight_system"] = (
                {"weights": list(ws.weights), "degrees": list(ws.degrees)} if ws else None
            )
            base = obj.base if isinstance(obj, Unfolding) else obj
            try:
                basis = minimal_unfolding_data(base, degree)
                results["unfolding_monomials"] = [
                    {"component": q.component_index + 1, "monomial": list(q.monomial)}
                    for q in basis
                ]
                ws_base = wh_detect(base)
                if ws_base:
                    results["good_weights"] = jsonable(good_weights_check(base, ws_base, basis))
            except UnsupportedShape as exc:
                results["unfolding_monomials"] = str(exc)
            try:
                unf, note = _as_unfolding(obj, degree)
                results.update(note)
                lift = parse_lift_file(lift_path) if lift_path else None
                analysis, _ = _staged_analysis(unf, degree, lift)
                results["lift_generators"] = jsonable(analysis.lift)
                results["stratum_dim"] = analytic_stratum_dim(analysis.lift)
                results["projectable_generators"] = jsonable(analysis.projectable)
                results["lambda_jets"] = [jsonable(b) for b in analysis.space.basis]
                results["substantial"] = jsonable(analysis.substantial)
                results["weakly_substantial"] = jsonable(analysis.weak)
                if analysis.substantial.yes:
                    from .fields import spectrum

                    results["witness_spectrum"] = jsonable(
                        spectrum(analysis.substantial.witness["field"])
                    )
            except UnsupportedShape as exc:
                results["substantial"] = {"unsupported": str(exc)}
        elif command == "lift":
            if lift_path:
                span = parse_lift_file(lift_path)
            else:
                d = discriminant_equation(germ)
                results["discriminant"] = {"H": str(d.H), "reduced": d.reduced, "smooth": d.smooth}
                span = lift_module(germ, degree, disc=d)
            results["lift_generators"] = jsonable(span)
            results["stratum_dim"] = analytic_stratum_dim(span)
        elif command in ("substantial", "weak"):
            unf, note = _as_unfolding(obj, degree)
            results.update(note)
            lift = parse_lift_file(lift_path) if lift_path else None
            analysis, disc = _staged_analysis(unf, degree, lift)
            if disc is not None:
                results["discriminant"] = {"H": str(disc.H), "reduced": disc.reduced, "smooth": disc.smooth}
            verdict = analysis.substantial if command == "substantial" else analysis.weak
            results["lift_generators"] = jsonable(analysis.lift)
            results["lambda_jets"] = [jsonable(b) for b in analysis.space.basis]
            results["verdict"] = jsonable(verdict)
            if verdict.status == UNKNOWN:
                status = "unknown"
        elif command == "qh":
            base = obj.base if isinstance(obj, Unfolding) else obj
            verdict = None
            try:
                for d in _staged_degrees(degree):
                    verdict = decide_qh_minimal(base, d, construct_coords=construct_coords)
                    if verdict.yes:
                        break
                results["pipeline"] = "minimal_stable_unfolding"
            except UnsupportedShape as exc:
                results["minimal_pipeline"] = str(exc)
                verdict = decide_qh_mult3(base, degree)
                results["pipeline"] = "multiplicity_3"
            results["verdict"] = jsonable(verdict)
            if verdict.status == UNKNOWN:
                status = "unknown"
        else:
            raise ValueError(f"unknown command {command!r}")
    except (UnsupportedShape, Inapplicable) as exc:
        results["unsupported"] = str(exc)
        status = "unsupported"
    return AnalysisReport(command, degree, inp, results, status)
