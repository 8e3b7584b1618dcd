"""Command-line front end.

Exit codes: 0 when everything passes, 1 on a verification failure, 2 on a usage
error (including a q-order too small for the requested computation).
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click

from .cancel import derive, normalize_case_id
from .charring import FAMILIES, TILDE_FAMILIES, RingSpec, phi_form
from .modforms import InsufficientOrderError, delta, epsilon
from .qseries import DENOM, QExpansion
from .suites import SUITE_IDS, default_q_order, run_suite
from .theta import COMBOS, THETA_FAMILIES, logderiv_combo, theta_expand
from .transgress import CS_KINDS, cs_form

FORMATS = ("json", "markdown", "csv")
MODFORMS = {f"{n}{i}": (fn, i) for n, fn in (("delta", delta), ("epsilon", epsilon))
            for i in (1, 2, 3)}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _exponent(n: int) -> str:
    return str(Fraction(n, DENOM))


def _q_rows(series: QExpansion, prefix: tuple = ()) -> list[tuple]:
    return [prefix + (_exponent(n), str(c)) for n, c in sorted(series.terms.items())]


def _monomial_label(m) -> str:
    xs, u, odd = m
    parts = [f"X{j + 1}^{e}" if e > 1 else f"X{j + 1}" for j, e in enumerate(xs) if e]
    if u:
        parts.append(f"U^{u}" if u > 1 else "U")
    if odd:
        parts.append(odd)
    return "*".join(parts) or "1"


def _render(fmt: str, header: tuple, rows: list[tuple], payload) -> str:
    if fmt == "json":
        return dumps(payload)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def _fail_usage(msg: str):
    raise click.UsageError(msg)


@click.group()
def main():
    """Exact expansions and identity checks for modular characteristic forms."""


@main.command()
@click.argument("kind", type=click.Choice(["theta", "modform", "phi", "cs"]))
@click.argument("name")
@click.option("--q-order", type=int, default=None, help="Truncate at q^ORDER.")
@click.option("--y-order", type=int, default=8, show_default=True,
              help="Number of y-coefficients for theta expansions.")
@click.option("--k", "k", type=int, default=1, show_default=True,
              help="Dimension index: 4k-1 for plain forms, 4k+1 for twisted ones.")
@click.option("--kind", "cs_kind", type=click.Choice(CS_KINDS), default="tm",
              show_default=True, help="Transgression variable for cs.")
@click.option("--route", type=click.Choice(["theta", "bundle"]), default="theta",
              show_default=True, help="Construction used for phi.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True)
def expand(kind, name, q_order, y_order, k, cs_kind, route, fmt):
    """Print the expansion NAME of the given KIND."""
    q = default_q_order() if q_order is None else q_order
    if q < 1 or y_order < 1 or k < 1:
        _fail_usage("orders and --k must be positive")
    meta = {"kind": kind, "name": name, "q_order": q}
    if kind == "theta":
        if name in THETA_FAMILIES:
            s = theta_expand(name, y_order, q)
        elif name in COMBOS:
            s = logderiv_combo(name, y_order, q)
        else:
            _fail_usage(f"unknown theta name {name!r}; choose from "
                        f"{list(THETA_FAMILIES) + list(COMBOS)}")
        meta["y_order"] = y_order
        rows = [r for d, c in sorted(s.coeffs.items()) for r in _q_rows(c, (str(d),))]
        payload = {**meta, "parity": s.parity, "series": s.to_json()}
        out = _render(fmt, ("y_degree", "q_exponent", "coefficient"), rows, payload)
    elif kind == "modform":
        if name not in MODFORMS:
            _fail_usage(f"unknown modular form {name!r}; choose from {sorted(MODFORMS)}")
        fn, i = MODFORMS[name]
        f = fn(i, q)
        payload = {**meta, **f.to_json()}
        out = _render(fmt, ("q_exponent", "coefficient"), _q_rows(f.series), payload)
    else:
        if kind == "phi":
            if name not in FAMILIES + TILDE_FAMILIES:
                _fail_usage(f"unknown family {name!r}; choose from {list(FAMILIES + TILDE_FAMILIES)}")
            D = 4 * k + 1 if name in TILDE_FAMILIES else 4 * k - 1
            spec = RingSpec.for_dimension(D, q)
            el = phi_form(name, spec, route)
            meta["route"] = route
        else:
            base = name[1:] if name.startswith("t") else name
            if base not in FAMILIES:
                _fail_usage(f"unknown family {name!r}; choose from {list(FAMILIES)}")
            D = 4 * k + 1 if cs_kind == "tilde" else 4 * k - 1
            spec = RingSpec.for_dimension(D, q)
            el = cs_form(cs_kind, base if cs_kind != "tilde" else "t" + base, spec).element
            meta["cs_kind"] = cs_kind
        meta.update(k=k, D=D)
        rows = [r for m, c in sorted(el.terms.items(), key=lambda t: repr(t[0]))
                for r in _q_rows(c, (_monomial_label(m),))]
        payload = {**meta, "ring": spec.to_json(), "terms": el.to_json()}
        out = _render(fmt, ("monomial", "q_exponent", "coefficient"), rows, payload)
    click.echo(out)


def _parse_tau(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise click.BadParameter(f"cannot parse tau sample {text!r}")


def _emit(payload: dict, out_path):
    text = dumps(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.argument("suite", type=click.Choice(SUITE_IDS))
@click.option("--q-order", type=int, default=None, help="Working q-order for exact suites.")
@click.option("--tol", type=float, default=None, help="Residual tolerance for numerical suites.")
@click.option("--tau", "taus", multiple=True, help="tau sample such as 0.3+1.2i (repeatable).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON report here instead of stdout.")
def verify(suite, q_order, tol, taus, out_path):
    """Run a verification SUITE and print its JSON report."""
    if q_order is not None and q_order < 1:
        _fail_usage("--q-order must be positive")
    tau_values = tuple(_parse_tau(t) for t in taus)
    try:
        payload = run_suite(suite, q_order, tol, tau_values).to_json()
    except InsufficientOrderError as exc:
        _fail_usage(f"insufficient order: {exc}")
    except ValueError as exc:
        _fail_usage(str(exc))
    _emit(payload, out_path)
    sys.exit(0 if payload["pass"] else 1)


@main.command(name="derive")
@click.argument("case")
@click.option("--q-order", type=int, default=4, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def derive_cmd(case, q_order, out_path):
    """Solve cancellation CASE (one of TM-11, XI-11, TILDE-9, optionally cancel-prefixed)."""
    try:
        cid = normalize_case_id(case)
    except ValueError as exc:
        _fail_usage(str(exc))
    try:
        report = derive(cid, q_order)
    except InsufficientOrderError as exc:
        _fail_usage(f"insufficient order: {exc}")
    _emit(report.to_json(), out_path)
    sys.exit(0 if report.residual_zero else 1)


if __name__ == "__main__":  # pragma: no cover
    main()
