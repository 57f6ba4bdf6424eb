"""Command-line front end.

Exit codes: 0 success / verification pass, 1 verification failure,
2 usage error, 3 unsupported configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import blocks as B
from .coinv import (
    cached_coinvariants,
    invariant_subalgebra,
    product_formula,
    structure_algebra_hilbert_series,
    truncated_coeffs,
)
from .hecke import cached_kl_table, poly_coeff_string
from .soergel import bott_samelson, hom_space, parse_word, predicted_summand_dims, split_idempotents
from .verify import DEFAULT_SEED, MODULES, TAMPERS, run_verify
from .weyl import (
    ConfigurationError,
    UsageError,
    Weight,
    WeylGroup,
    all_subsets,
    group_to_dict,
    parse_type,
    weyl_group,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3
FORMATS = ("table", "json", "csv")
RHO_LITERAL = "antidominant-fixed"


@dataclass
class RunConfig:
    command: str
    type_letter: str
    rank: int
    fmt: str = "table"
    lam: str | None = None
    mu: str | None = None
    show: str | None = None
    word: str | None = None
    degree: int | None = None
    scope: tuple[str, ...] = ()
    seed: int = DEFAULT_SEED
    tamper: str | None = None
    conventions: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def type_name(self) -> str:
        return f"{self.type_letter}{self.rank}"


@dataclass
class Table:
    header: list[str]
    rows: list[list]


# ---- emitters ---------------------------------------------------------

def _render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.header)
        w.writerows(table.rows)
        return buf.getvalue().rstrip("\n")
    cells = [table.header] + [[str(c) for c in r] for r in table.rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(table.header))]
    return "\n".join("  ".join(c.rjust(widths[k]) for k, c in enumerate(r)).rstrip() for r in cells)


def _emit(fmt: str, payload: dict, table: Table | None, out) -> None:
    if fmt == "json" or table is None:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(_render(table, fmt) + "\n")


def _matrix_table(row_labels: Sequence[str], col_labels: Sequence[str], M) -> Table:
    return Table(["row\\col", *col_labels], [[r, *(int(x) for x in M[k])] for k, r in enumerate(row_labels)])


def _matrix_payload(kind: str, row_labels, col_labels, M, **meta) -> dict:
    return {"kind": kind, **meta, "rows": list(row_labels), "cols": list(col_labels),
            "matrix": [[int(x) for x in row] for row in M]}


# ---- argument parsing -------------------------------------------------

def parse_weight(text: str, group: WeylGroup) -> Weight:
    """``"0"`` is the zero weight; ``antidominant-fixed`` is ``-rho``; else comma-separated integers."""
    text = text.strip()
    if text == RHO_LITERAL:
        return -group.datum.rho
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse weight {text!r}")
    if vals == [0]:
        vals = [0] * group.rank
    if len(vals) != group.rank:
        raise UsageError(f"weight {text!r} needs {group.rank} coordinates")
    return Weight(vals)


def _fmt_weight(lam: Weight) -> str:
    return ",".join(str(c) for c in lam.coords)


# ---- commands ---------------------------------------------------------

def cmd_weyl(cfg: RunConfig, group: WeylGroup, out) -> int:
    show = cfg.show or "order"
    if show == "json":
        _emit("json", group_to_dict(group), None, out)
        return EXIT_OK
    if show == "order":
        payload = {"type": group.datum.name, "order": len(group), "degrees": list(group.datum.degrees),
                   "poincare": group.poincare_polynomial(), "longest": list(group.longest.word)}
        table = Table(["type", "order", "degrees", "poincare", "longest"],
                      [[group.datum.name, len(group), " ".join(map(str, group.datum.degrees)),
                        " ".join(map(str, group.poincare_polynomial())), str(group.longest)]])
    elif show == "elements":
        payload = {"elements": [list(w.word) for w in group.elements], "lengths": [w.length for w in group.elements]}
        table = Table(["element", "word", "length"], [[str(w), w.word_string(), w.length] for w in group.elements])
    elif show == "bruhat":
        labels = [str(w) for w in group.elements]
        M = group.bruhat_matrix.astype(int)
        payload = _matrix_payload("bruhat", labels, labels, M, type=group.datum.name)
        table = _matrix_table(labels, labels, M)
    elif show in ("orbit", "stabilizer"):
        lam = parse_weight(cfg.lam or "0", group)
        flags = group.classify_weight(lam)
        stab = group.stabilizer_dot(lam)
        if show == "orbit":
            orbit = sorted({group.dot_action(w, lam) for w in group.elements}, key=lambda v: v.coords)
            payload = {"lambda": _fmt_weight(lam), "orbit": [_fmt_weight(v) for v in orbit],
                       "integral": flags.integral, "regular": flags.regular, "rho_dominant": flags.rho_dominant}
            table = Table(["weight"], [[_fmt_weight(v)] for v in orbit])
        else:
            payload = {"lambda": _fmt_weight(lam), "generators": [g + 1 for g in stab.generators],
                       "stabilizer": [list(w.word) for w in stab.subgroup_elements],
                       "integral": flags.integral, "regular": flags.regular, "rho_dominant": flags.rho_dominant}
            table = Table(["element", "length"], [[str(w), w.length] for w in stab.subgroup_elements])
    else:
        raise UsageError(f"unknown --show {show!r} for weyl")
    _emit(cfg.fmt, payload, table, out)
    return EXIT_OK


def cmd_kl(cfg: RunConfig, group: WeylGroup, out) -> int:
    K = cached_kl_table(group)
    rows = [[x.word_string(), y.word_string(), poly_coeff_string(p)] for x, y, p in K.rows()]
    payload = {"type": group.datum.name, "entries": [{"x_word": r[0], "y_word": r[1], "polynomial": r[2]} for r in rows]}
    _emit(cfg.fmt, payload, Table(["x_word", "y_word", "polynomial"], rows), out)
    return EXIT_OK


def cmd_coinv(cfg: RunConfig, group: WeylGroup, out) -> int:
    show = cfg.show or "hilbert"
    if show == "structure-algebra":
        deg = cfg.degree if cfg.degree is not None else 4
        coeffs = truncated_coeffs(structure_algebra_hilbert_series(group.datum, deg), deg)
        payload = {"type": group.datum.name, "max_degree": deg, "coefficients": coeffs}
        _emit(cfg.fmt, payload, Table(["degree", "dimension"], [[k, c] for k, c in enumerate(coeffs)]), out)
        return EXIT_OK
    C = cached_coinvariants(group)
    if show == "hilbert":
        coeffs = list(C.hilbert_series().coeffs)
        payload = {"type": group.datum.name, "coefficients": coeffs,
                   "product_formula": list(product_formula(group.datum.degrees).coeffs)}
        table = Table(["degree", "dimension"], [[k, c] for k, c in enumerate(coeffs)])
    elif show == "schubert":
        E = group.elements
        triples = sorted((u, v, w, c) for (u, v), entry in C.mult_table.items() for w, c in entry.items())
        rows = [[str(E[u]), str(E[v]), str(E[w]), str(c)] for u, v, w, c in triples]
        payload = {"type": group.datum.name,
                   "triples": [{"u": r[0], "v": r[1], "w": r[2], "coefficient": r[3]} for r in rows]}
        table = Table(["u", "v", "w", "coefficient"], rows)
    elif show == "invariants":
        rows = []
        for gens in all_subsets(group.rank):
            sub = invariant_subalgebra(C, group.standard_parabolic(gens))
            rows.append([" ".join(str(g + 1) for g in gens) or "-", sub.dimension, " ".join(map(str, sub.hilbert.coeffs))])
        payload = {"type": group.datum.name,
                   "subalgebras": [{"generators": r[0], "dimension": r[1], "hilbert": [int(x) for x in r[2].split()]} for r in rows]}
        table = Table(["generators", "dimension", "hilbert"], rows)
    else:
        raise UsageError(f"unknown --show {show!r} for coinv")
    _emit(cfg.fmt, payload, table, out)
    return EXIT_OK


_BLOCK_SHOWS = {"decomposition": "Simple", "projective-matrix": "Projective", "tilting": "Tilting",
                "simple-matrix": "Simple", "dual-verma": "DualVerma"}


def cmd_block(cfg: RunConfig, group: WeylGroup, out) -> int:
    block = B.make_block(group, parse_weight(cfg.lam or "0", group))
    show = cfg.show or "projective-matrix"
    if show == "decomposition":
        # [M_y : L_w], rows Vermas, columns simples
        M = B.decomposition_matrix(block)
        rows, cols = [f"M_{w}" for w in block.index_set], [f"L_{w}" for w in block.index_set]
    elif show in _BLOCK_SHOWS:
        # columns are basis classes expanded in Vermas
        M = B.basis_matrix(block, _BLOCK_SHOWS[show])
        prefix = {"Projective": "P", "Tilting": "Q", "Simple": "L", "DualVerma": "D"}[_BLOCK_SHOWS[show]]
        rows, cols = [f"M_{w}" for w in block.index_set], [f"{prefix}_{w}" for w in block.index_set]
    else:
        raise UsageError(f"unknown --show {show!r} for block")
    payload = _matrix_payload(show, rows, cols, M, type=group.datum.name, **{"lambda": _fmt_weight(block.lam)})
    _emit(cfg.fmt, payload, _matrix_table(rows, cols, M), out)
    return EXIT_OK


def cmd_translate(cfg: RunConfig, group: WeylGroup, out) -> int:
    if cfg.lam is None or cfg.mu is None:
        raise UsageError("translate needs --from and --to")
    src = B.make_block(group, parse_weight(cfg.lam, group))
    dst = B.make_block(group, parse_weight(cfg.mu, group))
    F = B.translate(src, dst)
    rows, cols = [f"M_{w}" for w in dst.index_set], [f"M_{w}" for w in src.index_set]
    payload = _matrix_payload("translation", rows, cols, F.matrix, type=group.datum.name,
                              source=_fmt_weight(src.lam), target=_fmt_weight(dst.lam))
    _emit(cfg.fmt, payload, _matrix_table(rows, cols, F.matrix), out)
    return EXIT_OK


def cmd_soergel(cfg: RunConfig, group: WeylGroup, out) -> int:
    word = parse_word(cfg.word or "", group.rank)
    C = cached_coinvariants(group)
    M = bott_samelson(C, word)
    show = cfg.show or "dims"
    label = ",".join(str(i + 1) for i in word)
    if show == "dims":
        gd = M.graded_dims
        payload = {"type": group.datum.name, "word": label, "dimension": M.dim, "graded_dims": gd}
        table = Table(["degree", "dimension"], [[k, c] for k, c in enumerate(gd)])
    elif show == "homs":
        H = hom_space(M, M, with_basis=False)
        by_deg = {int(k): int(v) for k, v in sorted(H.by_degree.items())}
        payload = {"type": group.datum.name, "word": label, "dimension": H.dimension,
                   "by_degree": {str(k): v for k, v in by_deg.items()}}
        table = Table(["degree", "dimension"], [[k, v] for k, v in by_deg.items()])
    elif show == "split":
        parts = split_idempotents(M)
        summands = sorted(([p.dim, p.graded_dims] for p in parts), key=lambda s: (-s[0], s[1]))
        payload = {"type": group.datum.name, "word": label,
                   "summands": [{"dimension": d, "graded_dims": g} for d, g in summands],
                   "predicted_dims": predicted_summand_dims(B.regular_block(group), word)}
        table = Table(["summand", "dimension", "graded_dims"],
                      [[k, d, " ".join(map(str, g))] for k, (d, g) in enumerate(summands)])
    else:
        raise UsageError(f"unknown --show {show!r} for soergel")
    _emit(cfg.fmt, payload, table, out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, group: WeylGroup, out) -> int:
    report = run_verify(group.datum.name, tamper=cfg.tamper, scope=cfg.scope or None, seed=cfg.seed)
    if cfg.fmt == "json":
        payload = report.to_dict()
        if cfg.conventions:
            payload["battery"] = B.battery_report().summary()
        _emit("json", payload, None, out)
    else:
        rows = [[c.name, "PASS" if c.passed else "FAIL", c.statement, c.witness] for c in report.sorted()]
        _emit(cfg.fmt, {}, Table(["check", "status", "statement", "witness"], rows), out)
        if cfg.fmt == "table":
            if cfg.conventions:
                out.write("conventions: " + json.dumps(report.conventions, sort_keys=True) + "\n")
                out.write("battery: " + json.dumps(B.battery_report().summary(), sort_keys=True) + "\n")
            n_fail = sum(not c.passed for c in report.checks)
            out.write(f"overall: {'PASS' if report.passed else 'FAIL'} "
                      f"({len(report.checks) - n_fail}/{len(report.checks)} checks)\n")
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "weyl": cmd_weyl,
    "kl": cmd_kl,
    "coinv": cmd_coinv,
    "block": cmd_block,
    "translate": cmd_translate,
    "soergel": cmd_soergel,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catoshadow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--type", required=True, help="Cartan type, e.g. A2, B3, G2")
        sp.add_argument("--format", choices=FORMATS, default="table")
        return sp

    sp = common(sub.add_parser("weyl", help="group order, elements, Bruhat order, dot orbits"))
    sp.add_argument("--show", choices=("order", "elements", "bruhat", "orbit", "stabilizer", "json"), default="order")
    sp.add_argument("--lambda", dest="lam")
    sp = common(sub.add_parser("kl", help="Kazhdan-Lusztig polynomial table"))
    sp = common(sub.add_parser("coinv", help="coinvariant algebra data"))
    sp.add_argument("--show", choices=("hilbert", "schubert", "invariants", "structure-algebra"), default="hilbert")
    sp.add_argument("--degree", type=int, help="truncation degree for structure-algebra")
    sp = common(sub.add_parser("block", help="decomposition, projective and tilting matrices of a block"))
    sp.add_argument("--lambda", dest="lam", default="0")
    sp.add_argument("--show", choices=tuple(_BLOCK_SHOWS), default="projective-matrix")
    sp = common(sub.add_parser("translate", help="translation matrix between two blocks"))
    sp.add_argument("--from", dest="lam", required=True)
    sp.add_argument("--to", dest="mu", required=True)
    sp = common(sub.add_parser("soergel", help="Bott-Samelson modules over the coinvariant algebra"))
    sp.add_argument("--word", required=True, help="1-based comma separated word, e.g. 1,2,1")
    sp.add_argument("--show", choices=("dims", "homs", "split"), default="dims")
    sp = common(sub.add_parser("verify", help="run the verification battery"))
    sp.add_argument("--conventions", action="store_true", help="also print the frozen convention assignment")
    sp.add_argument("--tamper", choices=TAMPERS, help="inject a fault; the battery must fail")
    sp.add_argument("--scope", help=f"comma separated subset of {','.join(MODULES)}")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    letter, rank = parse_type(ns.type)
    scope: tuple[str, ...] = ()
    if getattr(ns, "scope", None):
        scope = tuple(s.strip() for s in ns.scope.split(","))
        bad = [s for s in scope if s not in MODULES]
        if bad:
            raise UsageError(f"unknown verify scope {bad}")
    return RunConfig(
        command=ns.command, type_letter=letter, rank=rank, fmt=ns.format,
        lam=getattr(ns, "lam", None), mu=getattr(ns, "mu", None), show=getattr(ns, "show", None),
        word=getattr(ns, "word", None), degree=getattr(ns, "degree", None), scope=scope,
        seed=getattr(ns, "seed", DEFAULT_SEED), tamper=getattr(ns, "tamper", None),
        conventions=getattr(ns, "conventions", False),
    )


_WEIGHT_FLAGS = ("--lambda", "--from", "--to")


def _glue_weights(argv: Sequence[str]) -> list[str]:
    """Let ``--from -1,0`` through argparse by rewriting it as ``--from=-1,0``."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _WEIGHT_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = _glue_weights(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        group = weyl_group(cfg.type_name)
        return COMMANDS[cfg.command](cfg, group, out)
    except ConfigurationError as exc:
        print(f"unsupported configuration: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (B.InternalConsistencyError, B.ConventionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


def entry() -> None:
    sys.exit(main())
