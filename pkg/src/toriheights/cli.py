"""Command line interface.

Exit status is 0 on success, 1 when a domain error escapes (its class name
is printed) and 2 for malformed input or flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import conechar, counting, enumeration, galois, heightzeta, sr_ring
from .errors import ParseError, ToriHeightsError
from .fan import PLFunction, anticanonical_class, effective_cone_generators, picard_lattice
from .fanfile import load_fan_file


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# ---------------------------------------------------------------------------
# formatting helpers

def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def json_rational(x) -> dict:
    x = Fraction(x)
    return {"n": str(x.numerator), "d": str(x.denominator)}


def json_complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def fmt_univariate(coeffs: Sequence[int], var: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])


def parse_rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational list {text!r}") from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(float(t)) if "e" in t.lower() else int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"bad integer list {text!r}") from None


def _phi_from_values(ff, values: list[Fraction]) -> PLFunction:
    """Values per ray, per orbit of the group, or a single diagonal value."""
    n = ff.fan.n_rays
    orbits = galois.ray_orbits(ff.action)
    if len(values) == n:
        return PLFunction(tuple(values))
    if len(values) == 1:
        return PLFunction((values[0],) * n)
    if len(values) == len(orbits):
        return PLFunction(tuple(values[orbits.orbit_of[i]] for i in range(n)))
    raise ParseError(f"expected 1, {len(orbits)} or {n} values, got {len(values)}")


def _element(ff, index: int):
    if not 0 <= index < ff.action.order:
        raise ParseError(f"--element must be in [0, {ff.action.order})")
    return ff.action.elements[index]


# ---------------------------------------------------------------------------
# subcommands; each returns (human text, json payload)

def cmd_validate(args):
    ff = load_fan_file(args.fan)
    f = ff.fan
    payload = {
        "valid": True,
        "lattice_rank": f.rank,
        "n_rays": f.n_rays,
        "n_max_cones": len(f.max_cones),
        "n_cones": len(f.cones),
        "group_order": ff.action.order,
    }
    text = f"valid fan: rank {f.rank}, {f.n_rays} rays, {len(f.max_cones)} maximal cones, group of order {ff.action.order}"
    return text, payload


def cmd_orbits(args):
    ff = load_fan_file(args.fan)
    orb = galois.ray_orbits(ff.action)
    aniso = galois.is_anisotropic(ff.action)
    payload = {"orbits": [list(o) for o in orb.orbits], "anisotropic": aniso}
    lines = [f"orbits: {' '.join('{' + ','.join(map(str, o)) + '}' for o in orb.orbits)}", f"anisotropic: {aniso}"]
    try:
        h, beta = galois.beta_and_h(ff.fan, ff.action)
        payload.update(h=h, beta=beta)
        lines.append(f"h: {h}")
        lines.append(f"beta: {beta}")
    except ToriHeightsError as exc:
        lines.append(f"h, beta: not computed ({type(exc).__name__})")
    if aniso:
        r = galois.picard_rank_over_K(ff.fan, ff.action)
        payload["picard_rank_over_K"] = r
        lines.append(f"Picard rank over K: {r}")
    return "\n".join(lines), payload


def cmd_picard(args):
    ff = load_fan_file(args.fan)
    pic = picard_lattice(ff.fan)
    classes = [list(c) for c in effective_cone_generators(ff.fan, pic)]
    k = list(anticanonical_class(ff.fan, pic))
    payload = {"rank": pic.rank, "torsion": list(pic.torsion.torsion), "projection": [list(r) for r in pic.projection],
               "classes": classes, "anticanonical": k}
    lines = [f"Pic rank: {pic.rank}"]
    lines += [f"[D_{i}] = {tuple(c)}" for i, c in enumerate(classes)]
    lines.append(f"-K = {tuple(k)}")
    return "\n".join(lines), payload


def cmd_count(args):
    ff = load_fan_file(args.fan)
    g = _element(ff, args.element)
    datum = counting.FrobeniusDatum(g, args.q)
    n = counting.count_toric(ff.fan, datum)
    torus = counting.count_torus(datum, ff.fan.rank)
    return str(n), {"count": str(n), "torus_count": str(torus), "q": args.q}


def cmd_qpoly(args):
    ff = load_fan_file(args.fan)
    g = _element(ff, args.element)
    orbits = sr_ring.frobenius_cycles(ff.fan, g)
    q = sr_ring.q_polynomial(ff.fan, g, orbits)
    payload = {"cycles": [list(o) for o in orbits.orbits],
               "terms": [{"profile": list(k), "coefficient": c} for k, c in q.sorted_terms()]}
    return str(q), payload


def cmd_chowpoly(args):
    ff = load_fan_file(args.fan)
    g = _element(ff, args.element)
    coeffs = sr_ring.chow_trace_polynomial(ff.fan, g)
    return fmt_univariate(coeffs), {"coefficients": coeffs}


def cmd_euler(args):
    ff = load_fan_file(args.fan)
    if args.phi is None and args.s is None:
        raise ParseError("euler needs --phi or --s")
    phi = _phi_from_values(ff, parse_rationals(args.phi if args.phi is not None else args.s))
    if args.prime_bound is not None:
        split = _splitting(ff, args.splitting)
        val = heightzeta.truncated_global_product(ff.fan, split, phi, args.prime_bound)
        return f"{val.real:.12g}", {"global_product": float(val.real), "prime_bound": args.prime_bound}
    if args.q is None:
        raise ParseError("euler needs --q or --prime-bound")
    g = _element(ff, args.element)
    val = heightzeta.local_euler_factor(ff.fan, g, args.q, phi)
    payload = {"local_factor": json_complex(val), "q": args.q}
    text = f"{complex(val).real:.15g}"
    if len(set(phi.ray_values)) == 1:
        diag = heightzeta.local_factor_diagonal(ff.fan, g, args.q, float(phi.ray_values[0]))
        payload["diagonal_factor"] = diag
        text += f"\ndiagonal check: {diag:.15g}"
    return text, payload


def _splitting(ff, spec: str):
    if spec in (None, "split"):
        return heightzeta.split_everywhere(ff.fan)
    if spec.startswith("quadratic:"):
        return heightzeta.quadratic_splitting(ff.fan, int(spec.split(":", 1)[1]), ff.action)
    if spec.startswith("table:"):
        # table:p=element_index;p=element_index, other primes skipped
        table = {}
        for item in spec.split(":", 1)[1].split(";"):
            if item:
                p, i = item.split("=")
                table[int(p)] = _element(ff, int(i))
        return heightzeta.table_splitting(table)
    raise ParseError(f"unknown splitting {spec!r}")


def cmd_charfn(args):
    ff = load_fan_file(args.fan)
    ip = conechar.invariant_picard(ff.fan, ff.action)
    x = conechar.char_function(ip.effective)
    payload = x.to_dict()
    payload["anticanonical"] = [json_rational(v) for v in ip.anticanonical]
    lines = [f"effective cone generators: {[list(g) for g in ip.effective.generators]}"]
    for w, forms in x.terms:
        lines.append(f"{fmt_rational(w)} / " + "".join(f"<u,{list(f)}>" for f in forms))
    if args.u is not None:
        val = conechar.eval_char(x, parse_rationals(args.u))
        payload["value"] = json_rational(val)
        lines.append(f"X(u) = {fmt_rational(val)}")
    return "\n".join(lines), payload


def cmd_alpha(args):
    ff = load_fan_file(args.fan)
    a = conechar.alpha(ff.fan, ff.action)
    return fmt_rational(a), {"alpha": json_rational(a)}


def cmd_abl(args):
    ff = load_fan_file(args.fan)
    phi = PLFunction.anticanonical(ff.fan) if args.phi is None else _phi_from_values(ff, parse_rationals(args.phi))
    a, b = conechar.a_b_invariants(ff.fan, ff.action, phi)
    return f"a = {fmt_rational(a)}\nb = {b}", {"a": json_rational(a), "b": b}


def _bounds(args):
    if not args.bound_list:
        raise ParseError("--bound-list is required")
    return parse_ints(args.bound_list)


def cmd_enumerate(args):
    fam = enumeration.parse_family(args.family)
    series = enumeration.enumerate_counts(fam, _bounds(args))
    payload = {"family": str(fam), "bounds": list(series.bounds), "counts": list(series.counts)}
    return series.to_csv().rstrip("\n"), payload


def cmd_fit(args):
    if args.csv:
        rows = Path(args.csv).read_text().split()
        pairs = [r.split(",") for r in rows[1:]]
        try:
            series = enumeration.CountSeries(tuple(float(b) for b, _ in pairs), tuple(int(c) for _, c in pairs))
        except ValueError:
            raise ParseError("bad CSV") from None
    else:
        fam = enumeration.parse_family(args.family)
        series = enumeration.enumerate_counts(fam, _bounds(args))
    cands = parse_ints(args.b_candidates)
    res = enumeration.fit_asymptotic(series, cands)
    text = f"a = {res.a_hat:.6f}\nb = {res.b_hat}\nc = {res.c_hat:.6f}\nresidual = {res.residual:.3e}"
    return text, res.to_dict()


COMMANDS = {
    "validate": cmd_validate,
    "orbits": cmd_orbits,
    "picard": cmd_picard,
    "count": cmd_count,
    "qpoly": cmd_qpoly,
    "chowpoly": cmd_chowpoly,
    "euler": cmd_euler,
    "charfn": cmd_charfn,
    "alpha": cmd_alpha,
    "abl": cmd_abl,
    "enumerate": cmd_enumerate,
    "fit": cmd_fit,
}


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="toriheights", description="Heights on toric varieties: invariants and point counts.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add(name, help_, fan=True):
        sp = sub.add_parser(name, help=help_)
        if fan:
            sp.add_argument("--fan", required=True, help="fan JSON file, or the name of a shipped example")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    add("validate", "check a fan file")
    add("orbits", "ray orbits, anisotropy, h and beta")
    add("picard", "Picard lattice and divisor classes")
    sp = add("count", "points over F_q")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--element", type=int, default=0, help="index of the Frobenius element in the group")
    sp = add("qpoly", "numerator polynomial of the Frobenius trace series")
    sp.add_argument("--element", type=int, default=0)
    sp = add("chowpoly", "Chow-ring trace polynomial")
    sp.add_argument("--element", type=int, default=0)
    sp = add("euler", "local Euler factor or truncated global product")
    sp.add_argument("--q", type=int)
    sp.add_argument("--s", help="diagonal value, or values per ray/orbit")
    sp.add_argument("--phi", help="values per ray or per orbit")
    sp.add_argument("--element", type=int, default=0)
    sp.add_argument("--prime-bound", type=int)
    sp.add_argument("--splitting", default="split", help="split | quadratic:D | table:p=i;p=i")
    sp = add("charfn", "characteristic function of the effective cone")
    sp.add_argument("--u", help="evaluate at this point of Pic^G coordinates")
    add("alpha", "the constant alpha")
    sp = add("abl", "the invariants a(L) and b(L)")
    sp.add_argument("--phi", help="values of L per ray or per orbit (default: anticanonical)")
    sp = add("enumerate", "count points of bounded height", fan=False)
    sp.add_argument("--family", required=True, help="projective:d | conic:D | norm_cubic[:a3,a2,a1,a0]")
    sp.add_argument("--bound-list", required=True)
    sp = add("fit", "fit c B^a (log B)^(b-1)", fan=False)
    sp.add_argument("--family")
    sp.add_argument("--bound-list")
    sp.add_argument("--csv", help="read bound,count rows instead of enumerating")
    sp.add_argument("--b-candidates", default="1,2,3,4")
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.command == "fit" and not args.csv and not args.family:
            raise ParseError("fit needs --family or --csv")
        text, payload = COMMANDS[args.command](args)
    except ParseError as exc:
        _report_error(out, exc, want_json)
        return 2
    except ToriHeightsError as exc:
        _report_error(out, exc, want_json)
        return 1
    if want_json:
        print(json.dumps(payload), file=out)
    else:
        print(text, file=out)
    return 0


def _report_error(out, exc, want_json):
    name = type(exc).__name__
    if want_json:
        print(json.dumps({"error": name, "message": str(exc)}), file=out)
    else:
        print(f"{name}: {exc}", file=out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
