"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 non-isolated singularity,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import disk, k0, milnor, monodromy, node
from . import qlinalg as ql
from .scenario import ParseError, ValidationError, load_scenario, report_json, run_verification

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not the domain-limit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _color_enabled() -> bool:
    env = os.environ.get("PERVLAB_COLOR", "").strip().lower()
    if env in ("0", "no", "off", "never", "false"):
        return False
    if env in ("1", "yes", "on", "always", "true"):
        return True
    return sys.stdout.isatty()


def _status(ok: bool) -> str:
    word = "PASS" if ok else "FAIL"
    if _color_enabled():
        return f"\033[{32 if ok else 31}m{word}\033[0m"
    return word


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _matrix_arg(text: str) -> ql.RatMatrix:
    try:
        return ql.parse_matrix(text)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad matrix literal {text!r}: {exc}") from None


def _vector_arg(text: str):
    try:
        return ql.parse_vector(text)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad vector literal {text!r}: {exc}") from None


# -- milnor ---------------------------------------------------------------------

def cmd_milnor(args) -> int:
    variables = [v.strip() for v in args.vars.split(",")] if args.vars else None
    try:
        f = milnor.parse_poly(args.polynomial, variables)
    except milnor.PolyParseError as exc:
        raise InputError(str(exc)) from None
    order = milnor.MonomialOrder(args.order)
    prof = milnor.vanishing_profile(f, order)
    if args.json:
        out = {
            "polynomial": str(f),
            "variables": list(f.variables),
            "order": args.order,
            "isolated": prof is not None,
            "profile": prof.to_json() if prof else None,
        }
        print(_dump(out))
    elif prof is None:
        print(f"f = {f}")
        print("non-isolated singularity: the Jacobian quotient is infinite-dimensional")
    else:
        d = f.nvars - 1
        print(f"μ = {prof.milnor_number}; H̃{str(d).translate(_SUPERSCRIPT)} rank {prof.rank(d)}")
        for deg, r in prof.ranks:
            print(f"  degree {deg}: rank {r}")
        print(milnor.GLOBAL_CAVEAT)
    return EXIT_OK if prof is not None else EXIT_DOMAIN


# -- verify ---------------------------------------------------------------------

def _print_report(rep) -> None:
    data = rep.to_json()
    print(f"scenario {rep.name}: {_status(rep.passed)}")
    m = data["milnor"]
    print(f"  milnor    {_status(m['pass'])}  μ = {m['milnor_number']}, total vanishing rank {m['total_vanishing_rank']} in degree {m['vanishing_degree']}")
    t = data["theorem1"]
    if "error" in t:
        print(f"  theorem1  {_status(False)}  {t['error']}: {t['detail']}")
    else:
        print(
            f"  theorem1  {_status(t['pass'])}  restriction rank {t['restriction_rank']}, "
            f"IC embeds {t['ic_embeds']}, skyscraper rank {t['skyscraper_rank']}, stalk dim {t['stalk_dim']}"
        )
        for f in t["failures"]:
            print(f"            - {f}")
    p = data["pl"]
    idx = [r["unipotency_index"] for r in p["reflections"]]
    print(f"  pl        {_status(p['pass'])}  unipotency indices {idx}, quiver edges {len(p['quiver']['edges'])}")
    k = data["k0"]
    print(f"  k0        {_status(k['pass'])}  {len(k['realizations'])} realization(s)")
    for r in k["realizations"]:
        for d in r["diagnostics"]:
            print(f"            - {d}")


def cmd_verify(args) -> int:
    try:
        s = load_scenario(args.scenario)
    except ValidationError as exc:
        raise InputError(f"validation failed [{exc.invariant}]: {exc}") from None
    except ParseError as exc:
        raise InputError(f"parse error: {exc}") from None
    rep = run_verification(s)
    if args.json:
        sys.stdout.write(report_json(rep))
    else:
        _print_report(rep)
    return EXIT_OK if rep.passed else EXIT_VERIFY


# -- pl -------------------------------------------------------------------------

def _pairing_arg(text: str, rank: int) -> ql.RatMatrix:
    if text.strip() == "J":
        return monodromy.standard_symplectic(rank)
    return _matrix_arg(text)


def cmd_pl(args) -> int:
    if args.input:
        try:
            V = monodromy.VanishingSet.from_json(_read_json(args.input))
        except (KeyError, TypeError, ValueError, AssertionError) as exc:
            raise InputError(f"bad vanishing set: {exc}") from None
    else:
        if not args.delta:
            raise InputError("give --delta (repeatable) or --input")
        deltas = tuple(_vector_arg(d) for d in args.delta)
        J = _pairing_arg(args.pairing, len(deltas[0]))
        try:
            V = monodromy.VanishingSet(monodromy.PLLattice(J.rows, J, args.symmetry), deltas)
        except (ValueError, AssertionError) as exc:
            raise InputError(str(exc)) from None
    L = V.lattice
    entries = []
    ok = True
    for d in V.deltas:
        T = monodromy.reflection(L, d)
        idx = monodromy.check_unipotent(T)
        preserves = T.T @ L.pairing @ T == L.pairing
        entries.append({"delta": ql.vector_to_json(d), "reflection": ql.matrix_to_json(T),
                        "unipotency_index": idx, "preserves_pairing": preserves})
        if L.symmetry == "skew" and any(d):
            ok = ok and idx == 2 and preserves
    Q = monodromy.intersection_quiver(V)
    comp = monodromy.compose_monodromy(V)
    if args.quiver == "dot":
        print(monodromy.quiver_to_dot(Q))
    elif args.quiver == "json":
        print(_dump(monodromy.quiver_to_json(Q)))
    elif args.json:
        print(_dump({"vanishing_set": V.to_json(), "reflections": entries,
                     "composite": ql.matrix_to_json(comp),
                     "composite_unipotency_index": monodromy.check_unipotent(comp),
                     "quiver": monodromy.quiver_to_json(Q)}))
    else:
        for e in entries:
            print(f"δ = {tuple(e['delta'])}")
            print(monodromy.reflection(L, ql.parse_vector(e["delta"])))
            print(f"unipotency index: {e['unipotency_index']}; preserves pairing: {e['preserves_pairing']}")
        if len(entries) > 1:
            print("composite monodromy:")
            print(comp)
            print(f"composite unipotency index: {monodromy.check_unipotent(comp)}")
    return EXIT_OK if ok else EXIT_VERIFY


# -- k0 -------------------------------------------------------------------------

def _k0_data(obj):
    try:
        E = ql.parse_matrix(obj["euler"])
        lat = k0.K0Lattice(E.rows, E, bool(obj.get("odd_cy", False)))
        sc = k0.SphericalClass(lat, ql.parse_vector(obj["s"]))
        real = None
        if "rho" in obj:
            J = ql.parse_matrix(obj["pairing"])
            target = monodromy.PLLattice(J.rows, J, obj.get("symmetry", "skew"))
            real = k0.Realization(ql.parse_matrix(obj["rho"]), target, ql.parse_vector(obj["delta"]))
        return sc, real, bool(obj.get("st_convention", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad K0 data: {exc}") from None


def cmd_k0(args) -> int:
    if args.action == "twist":
        if args.input:
            sc, _, st = _k0_data(_read_json(args.input))
            st = st or args.st_convention
        else:
            if not (args.euler and args.s):
                raise InputError("k0 twist needs --euler and --s (or --input)")
            E = _matrix_arg(args.euler)
            try:
                sc = k0.SphericalClass(k0.K0Lattice(E.rows, E), _vector_arg(args.s))
            except ValueError as exc:
                raise InputError(str(exc)) from None
            st = args.st_convention
        tw = k0.twist_matrix(sc, st)
        pres = k0.twist_preserves_euler(sc, st)
        if args.json:
            print(_dump({"twist": ql.matrix_to_json(tw), "spherical": k0.is_spherical_numerically(sc),
                         "preserves_euler": pres, "st_convention": st,
                         "rank_twist_minus_I": ql.rank(tw - ql.identity(tw.rows))}))
        else:
            print(tw)
            print(f"χ(s,s) = 0: {k0.is_spherical_numerically(sc)}; preserves Euler form: {pres}")
        return EXIT_OK
    # verify
    if not args.input:
        raise InputError("k0 verify needs --input")
    sc, real, st = _k0_data(_read_json(args.input))
    if real is None:
        raise InputError("k0 verify needs rho, delta and pairing")
    st = st or args.st_convention
    try:
        rep = k0.verify_intertwining(sc, real, st)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        print(_dump(rep.to_json()))
    else:
        print(f"intertwining: {_status(rep.passed)}")
        for d in rep.diagnostics:
            print(f"  - {d}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


# -- disk / node ----------------------------------------------------------------

def _disk_text(X: disk.DiskPerv) -> str:
    lines = [f"psi_dim {X.psi_dim}, phi_dim {X.phi_dim}", "can:", str(X.can), "var:", str(X.var),
             "monodromy on psi:", str(disk.monodromy_psi(X))]
    return "\n".join(lines)


def cmd_disk(args) -> int:
    try:
        if args.action == "from-ls":
            if not args.T:
                raise InputError("disk from-ls needs --T")
            X = disk.from_local_system(_matrix_arg(args.T), args.mode)
        elif args.action == "show":
            X = disk.DiskPerv.from_json(_read_json(args.input))
        else:
            f = disk.DiskMap.from_json(_read_json(args.input))
            X = {"kernel": disk.kernel, "cokernel": disk.cokernel, "image": disk.image}[args.action](f)[0]
    except disk.InvalidGlue as exc:
        raise InputError(f"InvalidGlue: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    print(_dump(X.to_json()) if args.json else _disk_text(X))
    return EXIT_OK


def cmd_node(args) -> int:
    obj = _read_json(args.input)
    try:
        if args.action == "show":
            X = node.NodePerv.from_json(obj)
            print(_dump(X.to_json()) if args.json else f"a {X.a}, V {X.V}, stalk dim {node.stalk_dim(X)}")
            return EXIT_OK
        if args.action == "verify":
            X = node.NodePerv.from_json(obj)
            rep = node.verify_theorem1(X, args.nodes)
        else:
            link = node.LinkData.from_json(obj.get("link", [1, 1]))
            phi = node.NodePerv.from_json(obj["phi"], link)
            psi = node.NodePerv.from_json(obj["psi"], link)
            var = node.NodeMap.from_json(obj["var"], phi, psi)
            try:
                cp = node.canonical_P(phi, psi, var)
            except (node.NotMono, node.NotSkyscraper) as exc:
                print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
                return EXIT_VERIFY
            X = cp.P
            if args.json:
                print(_dump(X.to_json()))
            else:
                print(f"P: a {X.a}, V {X.V}, stalk dim {node.stalk_dim(X)}; sequence exact: {cp.exact}")
            return EXIT_OK
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if args.json:
        print(_dump(rep.to_json()))
    else:
        print(f"theorem check: {_status(rep.passed)}")
        for f in rep.failures:
            print(f"  - {f}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pervlab", description="Exact perverse-sheaf and monodromy computations for nodal degenerations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit JSON")
        return sp

    m = common(sub.add_parser("milnor", help="Milnor number and vanishing profile"))
    m.add_argument("polynomial")
    m.add_argument("--vars", help="comma-separated variable order (default: order of appearance)")
    m.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
    m.set_defaults(func=cmd_milnor)

    v = common(sub.add_parser("verify", help="run the full verification on a scenario file"))
    v.add_argument("scenario", help="path, or the name of a shipped scenario")
    v.set_defaults(func=cmd_verify)

    pl = common(sub.add_parser("pl", help="Picard-Lefschetz reflections"))
    pl.add_argument("--delta", action="append", help="vanishing class, e.g. '(1,0)'; repeatable")
    pl.add_argument("--pairing", default="J", help="matrix literal, or J for the standard symplectic form")
    pl.add_argument("--symmetry", choices=["skew", "symmetric"], default="skew")
    pl.add_argument("--input", help="vanishing set JSON {pairing, symmetry, deltas}")
    pl.add_argument("--quiver", choices=["dot", "json"], help="print only the intersection quiver")
    pl.set_defaults(func=cmd_pl)

    k = common(sub.add_parser("k0", help="spherical twists on K0"))
    k.add_argument("action", choices=["twist", "verify"])
    k.add_argument("--euler")
    k.add_argument("--s")
    k.add_argument("--input", help="JSON {euler, s, rho, delta, pairing, st_convention}")
    k.add_argument("--st-convention", action="store_true", help="use x -> x - χ(s,x) s")
    k.set_defaults(func=cmd_k0)

    d = common(sub.add_parser("disk", help="perverse sheaves on a disk"))
    d.add_argument("action", choices=["from-ls", "show", "kernel", "cokernel", "image"])
    d.add_argument("--T", help="monodromy matrix literal (from-ls)")
    d.add_argument("--mode", choices=["shriek", "star", "intermediate"], default="intermediate")
    d.add_argument("--input", default="-", help="object or map JSON (default stdin)")
    d.set_defaults(func=cmd_disk)

    n = common(sub.add_parser("node", help="two-strata objects near a node"))
    n.add_argument("action", choices=["show", "verify", "canonical"])
    n.add_argument("--input", default="-", help="object JSON, or {link, phi, psi, var} for canonical")
    n.add_argument("--nodes", type=int, default=1)
    n.set_defaults(func=cmd_node)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
