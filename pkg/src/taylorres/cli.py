"""Command line interface: ``taylorres <subcommand> INPUT [flags]``.

Every subcommand prints a JSON envelope ``{version, input-hash, seed, payload}``
(or a text rendering with ``--emit text``).  Exit codes: 0 success, 2 input
error, 3 acyclicity check failed, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import io as tio
from .acyclicity import DepthOracle, avatar_comparison, check
from .errors import InputError, InvariantViolation, TaylorResError
from .fields import field_name, parse_field
from .lattice import DEFAULT_MAX_M, LcmLattice
from .minres import minimal_resolution, verify_resolution
from .scarf import scarf_report
from .taylor import betti_numbers, taylor_complex
from .tor import atomic_dga, leibniz_check, perturbation_check, tor_algebra

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_INTERNAL = 0, 2, 3, 4
SUBCOMMANDS = ("lattice", "betti", "taylor", "check", "minres", "scarf", "tor", "dga")


@dataclass
class RunConfig:
    command: str
    input: str | None
    field: object
    mode: str = "monomial"
    fast_paths: bool = True
    emit: str = "json"
    seed: int = 0
    max_m: int = DEFAULT_MAX_M
    table: str | None = None
    lattice_file: str | None = None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q or fp:<prime> (default q)")
    common.add_argument("--mode", default="monomial", choices=["monomial", "linear", "table"])
    common.add_argument("--table", help="depth table file for --mode table")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--emit", default="json", choices=["json", "text"])
    common.add_argument("--no-fast-paths", action="store_true")
    common.add_argument("--max-m", type=int, default=DEFAULT_MAX_M)

    parser = argparse.ArgumentParser(prog="taylorres", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "lattice": "lcm lattice elements, Hasse edges and fiber sizes",
        "betti": "Betti numbers from lattice homology",
        "taylor": "Taylor complex over the factor algebra",
        "check": "decide whether the Taylor complex is a resolution",
        "minres": "minimal free resolution inside the Taylor complex",
        "scarf": "Scarf complex and coincidence tests",
        "tor": "Tor algebra structure constants",
        "dga": "relative atomic DGA of a lattice",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "dga":
            p.add_argument("input", nargs="?", help="generator file (or use --lattice)")
            p.add_argument("--lattice", dest="lattice_file", help="graded lattice JSON file")
        else:
            p.add_argument("input", help="generator file")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input=ns.input,
        field=parse_field(ns.field),
        mode=ns.mode,
        fast_paths=not ns.no_fast_paths,
        emit=ns.emit,
        seed=ns.seed,
        max_m=ns.max_m,
        table=ns.table,
        lattice_file=getattr(ns, "lattice_file", None),
    )


# -- payloads ---------------------------------------------------------------------


def _lattice_payload(lat: LcmLattice) -> dict:
    alpha = lat.gens.alphabet
    fibers = lat.fibers()
    return {
        "elements": [list(e) for e in lat.elements],
        "monomials": [alpha.monomial(e) for e in lat.elements],
        "bottom": lat.bottom,
        "top": lat.top,
        "atoms": list(lat.atoms),
        "hasse": [list(e) for e in lat.hasse()],
        "fiber_sizes": [len(fibers[q]) for q in range(len(lat))],
    }


def _oracle(cfg: RunConfig, parsed) -> DepthOracle:
    table = None
    if cfg.mode == "table":
        if not cfg.table:
            raise InputError("--mode table needs --table <file>")
        table = tio.read_depth_table(cfg.table, parsed.gens.alphabet)
    return DepthOracle(cfg.mode, parsed.realization, table)


def _taylor_payload(lat: LcmLattice, field) -> dict:
    tc = taylor_complex(lat.gens, field)
    return {
        "m": lat.gens.m,
        "ranks": [len(b) for b in tc.bases],
        "bases": {str(p): [tio.members(s) for s in b] for p, b in enumerate(tc.bases)},
        "multidegrees": {str(p): [list(e) for e in md] for p, md in enumerate(tc.multidegrees)},
        "boundaries": {str(p): tio.combo_matrix(tc.boundaries[p]) for p in sorted(tc.boundaries)},
        "d_squared_zero": tc.check(),
    }


def _minres_payload(lat: LcmLattice, cfg: RunConfig, parsed) -> tuple[dict, int]:
    f = cfg.field
    cert = check(lat, _oracle(cfg, parsed), fast_paths=cfg.fast_paths, field=f)
    res = minimal_resolution(lat, f, certificate=cert)
    rep = verify_resolution(res, seed=cfg.seed)
    top = max(res.generators) if res.generators else 0
    payload = {
        "semantics": res.semantics,
        "betti": res.betti,
        "basis": {str(p): [tio.field_vector(v, f) for v in res.generators[p]] for p in range(top + 1)},
        "multidegrees": {str(p): [list(e) for e in res.multidegrees[p]] for p in range(top + 1)},
        "boundaries": {str(p): tio.combo_matrix(res.boundaries[p]) for p in sorted(res.boundaries)},
        "verification": rep.as_dict(),
    }
    return payload, EXIT_OK if rep.ok else EXIT_INTERNAL


def _dga_payload(gl, field) -> dict:
    from .homology import homology_dims

    dga = atomic_dga(gl, field)
    dims = homology_dims(dga.complex)
    d = [dims.get(p, 0) for p in sorted(dims)]
    while len(d) > 1 and d[-1] == 0:
        d.pop()
    return {"atoms": len(gl.atoms), "elements": len(gl), "homology_dims": d, "leibniz": leibniz_check(dga)}


def compute(cfg: RunConfig) -> tuple[dict, int, bytes]:
    """Payload, exit code and the raw input bytes (for hashing)."""
    f = cfg.field
    if cfg.command == "dga" and cfg.lattice_file:
        raw = Path(cfg.lattice_file).read_bytes()
        return _dga_payload(tio.read_lattice(cfg.lattice_file), f), EXIT_OK, raw
    if not cfg.input:
        raise InputError("an input file is required")
    raw = Path(cfg.input).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError("input file is not UTF-8") from None
    parsed = tio.parse_generators(text)
    lat = LcmLattice(parsed.gens, max_m=cfg.max_m)
    code = EXIT_OK
    if cfg.command == "lattice":
        payload = _lattice_payload(lat)
    elif cfg.command == "betti":
        routes = {r: betti_numbers(lat, f, r) for r in ("lattice", "fibers", "evaluation")}
        payload = {"betti": routes["lattice"], "routes": routes, "routes_agree": len({tuple(v) for v in routes.values()}) == 1}
        if not payload["routes_agree"]:
            code = EXIT_INTERNAL
    elif cfg.command == "taylor":
        payload = _taylor_payload(lat, f)
    elif cfg.command == "check":
        cert = check(lat, _oracle(cfg, parsed), fast_paths=cfg.fast_paths, field=f)
        payload = cert.as_dict()
        if parsed.realization is not None and cfg.mode == "linear":
            agrees, b = avatar_comparison(lat, parsed.realization.n, f)
            payload["avatar"] = {"betti": b, "vanishes_above_n": agrees}
        code = EXIT_OK if cert.verdict else EXIT_CHECK
    elif cfg.command == "minres":
        payload, code = _minres_payload(lat, cfg, parsed)
    elif cfg.command == "scarf":
        payload = scarf_report(lat, f).as_dict()
    elif cfg.command == "tor":
        t = tor_algebra(lat, f)
        payload = t.as_dict()
        payload["leibniz"] = leibniz_check(t.dga)
        payload["representative_independent"] = perturbation_check(t, seed=cfg.seed)
    elif cfg.command == "dga":
        from .tor import GradedLattice

        payload = _dga_payload(GradedLattice.from_lcm_lattice(lat), f)
    else:  # argparse prevents this
        raise InputError(f"unknown subcommand {cfg.command!r}")
    payload = {"command": cfg.command, "field": field_name(f), "alphabet": list(lat.gens.alphabet.labels), **payload}
    return payload, code, raw


def envelope(payload: dict, raw: bytes, seed: int) -> dict:
    return {
        "version": __version__,
        "input-hash": "sha256:" + hashlib.sha256(raw).hexdigest(),
        "seed": seed,
        "payload": payload,
    }


# -- text rendering ---------------------------------------------------------------


def _render_matrix(triplets: list, labels, nrows: int | None = None, ncols: int | None = None) -> list[str]:
    if not triplets:
        return ["    (zero)"]
    nrows = nrows if nrows is not None else 1 + max(t[0] for t in triplets)
    ncols = ncols if ncols is not None else 1 + max(t[1] for t in triplets)
    cells = {(i, j): v for i, j, v in triplets}
    text = [[_combo_text(cells.get((i, j), []), labels) for j in range(ncols)] for i in range(nrows)]
    width = max(len(c) for row in text for c in row)
    return ["    [ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in text]


def _combo_text(terms: list, labels=None) -> str:
    if not terms:
        return "0"
    out = []
    for coeff, exps in terms:
        names = labels or [f"y{i + 1}" for i in range(len(exps))]
        mono = "*".join(names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
        if not mono:
            out.append(coeff)
        elif coeff in ("1", "-1"):
            out.append(("-" if coeff == "-1" else "") + mono)
        else:
            out.append(f"{coeff}*{mono}")
    s = out[0]
    for t in out[1:]:
        s += t if t.startswith("-") else "+" + t
    return s


def render_text(env: dict) -> str:
    pl = env["payload"]
    lines = [f"taylorres {env['version']}  {pl['command']}  field={pl['field']}  {env['input-hash']}"]
    labels = pl.get("alphabet")
    for key, val in pl.items():
        if key in ("command", "field"):
            continue
        if key == "boundaries" and isinstance(val, dict):
            lines.append("boundaries:")
            for p, trip in val.items():
                lines.append(f"  d_{p}:")
                lines.extend(_render_matrix(trip, labels))
        elif isinstance(val, dict):
            lines.append(f"{key}:")
            for k, v in val.items():
                lines.append(f"  {k}: {v}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        payload, code, raw = compute(cfg)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=err)
        return EXIT_INPUT
    except TaylorResError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INTERNAL
    env = envelope(payload, raw, cfg.seed)
    out.write(tio.dumps(env) if cfg.emit == "json" else render_text(env))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
