"""Degeneration scenarios and the end-to-end verification pipeline.

A scenario file bundles everything that is data rather than theory: the local
equation, the number of nodes, the two-strata presentations of the vanishing
and nearby cycles, the variation map, the vanishing lattice and the K0
realization.  :func:`run_verification` chains the Milnor count, the canonical
object, its structure check, Picard-Lefschetz unipotency and the K0
intertwining check into a single report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import k0 as k0mod
from . import milnor, monodromy, node
from . import qlinalg as ql
from .node import LinkData, NodeMap, NodePerv

__all__ = [
    "ParseError",
    "ValidationError",
    "K0Data",
    "Scenario",
    "VerificationReport",
    "SCENARIO_KEYS",
    "shipped_scenarios",
    "shipped_path",
    "load_scenario",
    "parse_scenario",
    "run_verification",
    "report_json",
]

SCENARIO_KEYS = frozenset(
    {"name", "polynomial", "nodes", "link", "phi", "psi", "var", "pl", "k0", "extension_param"}
)


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


@dataclass(frozen=True)
class K0Data:
    lattice: k0mod.K0Lattice
    spherical: k0mod.SphericalClass
    realization: k0mod.Realization
    st_convention: bool = False


@dataclass(frozen=True)
class Scenario:
    name: str
    polynomial: milnor.Poly
    nodes: int
    link: LinkData
    phi: NodePerv
    psi: NodePerv
    var: NodeMap
    pl: monodromy.VanishingSet
    k0: tuple[K0Data, ...]
    extension_param: ql.RatMatrix
    milnor_number: int


def shipped_scenarios() -> list[str]:
    root = resources.files("pervlab") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def shipped_path(name: str):
    if not name.endswith(".json"):
        name += ".json"
    return resources.files("pervlab") / "scenarios" / name


def _require(obj, key, kind, where):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def _matrix(obj, where, rows=None, cols=None):
    try:
        M = ql.parse_matrix(obj)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None
    # a well-formed literal of the wrong shape is a broken invariant
    if rows is None or cols is None or M.shape == (rows, cols):
        return M
    if not M.entries and rows * cols == 0 and M.rows in (0, rows):
        return ql.zeros(rows, cols)
    raise ValidationError(f"{where} shape", f"expected {rows}x{cols}, got {M.rows}x{M.cols}")


def _vector(obj, where):
    try:
        return ql.parse_vector(obj)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _node_perv(obj, link: LinkData, where: str) -> NodePerv:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if "link" in obj:
        try:
            own = LinkData.from_json(obj["link"])
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{where}.link: {exc}") from None
        if own != link:
            raise ValidationError(f"{where}.link matches scenario link")
    a = _require(obj, "a", int, where)
    V = _require(obj, "V", int, where)
    if a < 0 or V < 0:
        raise ValidationError(f"{where} dimensions non-negative")
    m = _matrix(_require(obj, "m", list, where), f"{where}.m", V, a * link.b_mid_minus)
    n = _matrix(_require(obj, "n", list, where), f"{where}.n", a * link.b_mid, V)
    try:
        return NodePerv(link, a, V, m, n)
    except ValueError as exc:
        raise ValidationError(f"{where} n·m = 0", str(exc)) from None


def _k0(obj, pl: monodromy.VanishingSet, where: str) -> K0Data:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    E = _matrix(_require(obj, "euler", list, where), f"{where}.euler")
    s = _vector(_require(obj, "s", None, where), f"{where}.s")
    rho = _matrix(_require(obj, "rho", list, where), f"{where}.rho")
    delta = _vector(_require(obj, "delta", None, where), f"{where}.delta")
    st = obj.get("st_convention", False)
    odd_cy = obj.get("odd_cy", False)
    if not isinstance(st, bool) or not isinstance(odd_cy, bool):
        raise ParseError(f"{where}: st_convention and odd_cy must be booleans")
    if "pairing" in obj:
        J = _matrix(obj["pairing"], f"{where}.pairing")
        if J != pl.lattice.pairing:
            raise ValidationError(f"{where}.pairing equals pl.pairing")
    if delta not in pl.deltas:
        raise ValidationError(f"{where}.delta is a vanishing class of pl")
    try:
        lat = k0mod.K0Lattice(E.rows, E, odd_cy)
        sc = k0mod.SphericalClass(lat, s)
        real = k0mod.Realization(rho, pl.lattice, delta)
    except ValueError as exc:
        raise ValidationError(f"{where} shapes", str(exc)) from None
    if rho.cols != lat.rank:
        raise ValidationError(f"{where}.rho defined on K0", "rho column count != K0 rank")
    return K0Data(lat, sc, real, st)


def parse_scenario(obj) -> Scenario:
    """Build and validate a scenario from decoded JSON."""
    if not isinstance(obj, dict):
        raise ParseError("scenario must be a JSON object")
    keys = set(obj)
    if keys != SCENARIO_KEYS:
        missing = sorted(SCENARIO_KEYS - keys)
        extra = sorted(keys - SCENARIO_KEYS)
        raise ParseError(f"scenario keys: missing {missing}, unexpected {extra}")
    name = _require(obj, "name", str, "scenario")
    nodes = _require(obj, "nodes", int, "scenario")
    if nodes < 1:
        raise ValidationError("nodes >= 1")
    try:
        poly = milnor.parse_poly(_require(obj, "polynomial", str, "scenario"))
    except milnor.PolyParseError as exc:
        raise ParseError(f"polynomial: {exc}") from None
    try:
        link = LinkData.from_json(obj["link"])
    except (ValueError, TypeError) as exc:
        raise ParseError(f"link: {exc}") from None

    phi = _node_perv(obj["phi"], link, "phi")
    psi = _node_perv(obj["psi"], link, "psi")
    if not phi.is_skyscraper():
        raise ValidationError("NotSkyscraper", f"phi has generic rank {phi.a}")

    var_obj = obj["var"]
    if not isinstance(var_obj, dict):
        raise ParseError("var: expected an object")
    g = _matrix(_require(var_obj, "on_generic", list, "var"), "var.on_generic", psi.a, phi.a)
    v = _matrix(_require(var_obj, "on_V", list, "var"), "var.on_V", psi.V, phi.V)
    try:
        var = NodeMap(phi, psi, g, v)
    except ValueError as exc:
        raise ValidationError("var commutes with structure maps", str(exc)) from None

    pl_obj = obj["pl"]
    if not isinstance(pl_obj, dict):
        raise ParseError("pl: expected an object")
    J = _matrix(_require(pl_obj, "pairing", list, "pl"), "pl.pairing")
    sym = pl_obj.get("symmetry", "skew")
    deltas = tuple(_vector(d, "pl.deltas") for d in _require(pl_obj, "deltas", list, "pl"))
    try:
        pl = monodromy.VanishingSet(monodromy.PLLattice(J.rows, J, sym), deltas)
    except (ValueError, AssertionError) as exc:
        raise ValidationError("pl lattice", str(exc)) from None

    k0_obj = obj["k0"]
    k0_list = k0_obj if isinstance(k0_obj, list) else [k0_obj]
    k0 = tuple(_k0(o, pl, f"k0[{i}]") for i, o in enumerate(k0_list))

    ext = _matrix(obj["extension_param"], "extension_param")

    mu = milnor.milnor_number(poly)
    if mu is None:
        raise ValidationError("isolated singularity", "Jacobian quotient is infinite-dimensional")
    if phi.V != nodes * mu:
        raise ValidationError("phi rank = nodes × μ", f"phi has rank {phi.V}, expected {nodes * mu}")
    if len(pl.deltas) != nodes * mu:
        raise ValidationError("one vanishing class per node", f"{len(pl.deltas)} classes for {nodes * mu}")
    return Scenario(name, poly, nodes, link, phi, psi, var, pl, k0, ext, mu)


def load_scenario(path) -> Scenario:
    """Read a scenario file; a bare shipped name (``odp`` or ``odp.json``) also resolves."""
    p = Path(path)
    if not p.exists() and p.name == str(path) and shipped_path(p.name).name in shipped_scenarios():
        text = shipped_path(p.name).read_text(encoding="utf-8")
    else:
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return parse_scenario(obj)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    milnor: dict
    theorem1: dict
    pl: dict
    k0: dict

    @property
    def milnor_ok(self) -> bool:
        return self.milnor["pass"]

    @property
    def thm1_ok(self) -> bool:
        return self.theorem1["pass"]

    @property
    def pl_ok(self) -> bool:
        return self.pl["pass"]

    @property
    def k0_ok(self) -> bool:
        return self.k0["pass"]

    @property
    def passed(self) -> bool:
        return self.milnor_ok and self.thm1_ok and self.pl_ok and self.k0_ok

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "milnor": self.milnor,
            "theorem1": self.theorem1,
            "pl": self.pl,
            "k0": self.k0,
        }


def _milnor_section(s: Scenario) -> dict:
    prof = milnor.vanishing_profile(s.polynomial)
    n = s.polynomial.nvars
    concentrated = prof is not None and all(
        r == (prof.milnor_number if d == n - 1 else 0) for d, r in prof.ranks
    )
    total = s.nodes * s.milnor_number
    return {
        "polynomial": str(s.polynomial),
        "milnor_number": s.milnor_number,
        "ranks": [[d, r] for d, r in prof.ranks] if prof else None,
        "vanishing_degree": n - 1,
        "total_vanishing_rank": total,
        "phi_rank": s.phi.V,
        "pass": concentrated and s.phi.V == total,
    }


def _theorem1_section(s: Scenario) -> dict:
    try:
        cp = node.canonical_P(s.phi, s.psi, s.var)
    except node.NotMono as exc:
        return {"pass": False, "error": "NotMono", "detail": str(exc)}
    except node.NotSkyscraper as exc:
        return {"pass": False, "error": "NotSkyscraper", "detail": str(exc)}
    rep = node.verify_theorem1(cp.P, s.nodes)
    out = rep.to_json()
    ext_ok = cp.P.n == s.extension_param
    out.update(
        {
            "P": cp.P.to_json(),
            "defining_sequence_exact": cp.exact,
            "extension_param": ql.matrix_to_json(cp.P.n),
            "extension_matches": ext_ok,
            "phi_is_skyscraper": s.phi.is_skyscraper(),
            "phi_rank": s.phi.V,
        }
    )
    out["pass"] = rep.passed and cp.exact and ext_ok
    if not ext_ok:
        out["failures"] = out["failures"] + ["extension parameter differs from the scenario"]
    return out


def _pl_section(s: Scenario) -> dict:
    L = s.pl.lattice
    per_class = []
    ok = True
    for d in s.pl.deltas:
        T = monodromy.reflection(L, d)
        idx = monodromy.check_unipotent(T)
        preserves = T.T @ L.pairing @ T == L.pairing
        integral = T.is_integral() if L.pairing.is_integral() and all(x.denominator == 1 for x in d) else None
        rk = ql.rank(T - ql.identity(L.rank))
        per_class.append(
            {
                "delta": ql.vector_to_json(d),
                "reflection": ql.matrix_to_json(T),
                "unipotency_index": idx,
                "rank_T_minus_I": rk,
                "preserves_pairing": preserves,
                "integral": integral,
            }
        )
        ok = ok and idx is not None and idx <= 2 and preserves and rk <= 1 and integral is not False
    composite = monodromy.compose_monodromy(s.pl)
    quiver = monodromy.intersection_quiver(s.pl)
    return {
        "symmetry": L.symmetry,
        "reflections": per_class,
        "composite": ql.matrix_to_json(composite),
        "composite_unipotency_index": monodromy.check_unipotent(composite),
        "quiver": monodromy.quiver_to_json(quiver),
        "pass": ok,
    }


def _k0_section(s: Scenario) -> dict:
    reports = []
    ok = True
    for d in s.k0:
        rep = k0mod.verify_intertwining(d.spherical, d.realization, d.st_convention)
        pres = k0mod.twist_preserves_euler(d.spherical, d.st_convention)
        entry = rep.to_json()
        entry["twist"] = ql.matrix_to_json(k0mod.twist_matrix(d.spherical, d.st_convention))
        entry["spherical"] = k0mod.is_spherical_numerically(d.spherical)
        entry["preserves_euler"] = pres
        entry["st_convention"] = d.st_convention
        reports.append(entry)
        ok = ok and rep.passed and rep.twist_rank <= 1 and pres is not False
    return {"realizations": reports, "pass": ok}


def run_verification(s: Scenario) -> VerificationReport:
    return VerificationReport(s.name, _milnor_section(s), _theorem1_section(s), _pl_section(s), _k0_section(s))


def report_json(report: VerificationReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
