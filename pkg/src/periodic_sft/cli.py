"""Command-line front end.

Reports are TSV by default (``--format json`` mirrors the same cells).  Every
report over a basic set starts with ``#`` header lines carrying the tool
version, the SHA-256 of the input and the caps in force.  Exit codes: 0 on
success, 1 on bad input, 2 when a size cap is exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .entropy import entropy_value, gamma_count
from .errors import CapExceededError, SFTError
from .fixtures import NAMED
from .lattice import IntMat2, Unimodular, hnf_of, to_gamma0, transform
from .oracle import DEFAULT_CAP, TorusSpec, count_torus
from .patterns import BasicSet, parse_basic_set
from .spectral import ConnectivityReport, connectivity_row, domination_row, least_positive_power
from .transfer import TransferFamily, build_T_gamma_q_1, dim_cap

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 1, 2


def fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


class Report:
    def __init__(self, columns: list[str], header: dict):
        self.columns = columns
        self.header = header
        self.rows: list[list[str]] = []
        self.notes: list[str] = []

    def add(self, *cells) -> None:
        self.rows.append([fmt(c) for c in cells])

    def render(self, form: str) -> str:
        if form == "json":
            doc = {"header": self.header, "columns": self.columns, "rows": self.rows, "notes": self.notes}
            return json.dumps(doc, sort_keys=True, indent=1) + "\n"
        lines = [f"# {k}={self.header[k]}" for k in sorted(self.header)]
        lines.append("\t".join(self.columns))
        lines += ["\t".join(r) for r in self.rows]
        lines += [f"# {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _load(args) -> tuple[BasicSet, str]:
    if args.fixture:
        bs = NAMED[args.fixture]()
        text = bs.to_text()
    elif args.input:
        text = Path(args.input).read_text()
        bs = parse_basic_set(text)
    else:
        raise SFTError("one of --input or --fixture is required")
    return bs, hashlib.sha256(text.encode()).hexdigest()


def _header(args, digest: str, **caps) -> dict:
    h = {"tool": f"periodic-sft {__version__}", "command": args.command, "input_sha256": digest,
         "dim_cap": dim_cap(), "log_base": "2" if args.log2 else "e"}
    h.update({k: v for k, v in caps.items()})
    return h


def _scale(args) -> float:
    return math.log(2) if args.log2 else 1.0


# --- subcommands ---------------------------------------------------------------------

def cmd_entropy(args, report_out):
    bs, digest = _load(args)
    rep = Report(["n", "h_H(n)", "h_V(n)", "m", "h_T(m)", "q", "h_gamma(q)"],
                 _header(args, digest, n_max=args.n_max, m_max=args.m_max, q_max=args.q_max, tol=args.tol))
    report_out.append(rep)
    s = _scale(args)
    fams = {kind: TransferFamily(bs, kind) for kind in ("H", "V", "T")}
    for i in range(1, max(args.n_max, args.m_max, args.q_max) + 1):
        row = [None] * 7
        if 2 <= i <= args.n_max:
            row[0:3] = [i, entropy_value(fams["H"].get(i), i, i, args.tol).value / s,
                        entropy_value(fams["V"].get(i), i, i, args.tol).value / s]
        if i <= args.m_max:
            row[3:5] = [i, entropy_value(fams["T"].get(i), i, i, args.tol).value / s]
        if i <= args.q_max:
            row[5:7] = [i, entropy_value(build_T_gamma_q_1(bs, i).matrix, 1, i, args.tol).value / s]
        rep.add(*row)


def _count_cmd(args, report_out, oracle: bool):
    bs, digest = _load(args)
    spec = TorusSpec(args.n, args.k, args.ell)
    caps = {"n": args.n, "ell": args.ell, "k": args.k}
    if oracle:
        caps["enum_cap"] = args.cap
    rep = Report(["n", "ell", "k", "gamma"], _header(args, digest, **caps))
    report_out.append(rep)
    if oracle:
        value = count_torus(bs, spec, cap=args.cap)
    else:
        value = gamma_count(bs, spec.n, spec.ell, spec.k)
    rep.add(spec.n, spec.ell, spec.k, value)


def cmd_periodic(args, report_out):
    _count_cmd(args, report_out, oracle=False)


def cmd_oracle(args, report_out):
    _count_cmd(args, report_out, oracle=True)


def cmd_mixing(args, report_out):
    bs, digest = _load(args)
    rep = Report(["m", "dim", "irreducible", "diameter", "self_loop", "gluing_K", "rho", "c_diag(m,m)"],
                 _header(args, digest, m_max=args.m_max, k_window=args.k_window, tol=args.tol,
                         evidence="finite: m <= m_max only, uniformity in m is not certified"))
    report_out.append(rep)
    s = _scale(args)
    fam = TransferFamily(bs, "T")
    rows = []
    for m in range(1, args.m_max + 1):
        t = fam.get(m)
        row = replace(connectivity_row(t, m), gluing_K=least_positive_power(t, args.k_window))
        rows.append(row)
        if row.support == 0:
            rep.add(m, row.dim, False, None, None, None, 0.0, None)
            continue
        cell = domination_row(t, bs.r, m, m, tol=args.tol)[0][-1]
        rep.add(m, row.dim, row.irreducible, row.diameter, row.self_loop, row.gluing_K,
                cell.rho, cell.log_diag / s)
    report = ConnectivityReport(tuple(rows))
    rep.notes.append(f"K={fmt(report.K)}")
    rep.notes.append(f"gluing_K={fmt(report.gluing_K)}")
    if report.all_zero:
        rep.notes.append("all matrices are zero")


def cmd_domination(args, report_out):
    bs, digest = _load(args)
    rep = Report(["m", "k", "norm", "rho", "c", "log_c_over_mk", "bound", "within_bound"],
                 _header(args, digest, m_max=args.m_max, k_max=args.k_max, tol=args.tol,
                         K=args.K if args.K is not None else "-"))
    report_out.append(rep)
    s = _scale(args)
    fam = TransferFamily(bs, "T")
    for m in range(1, args.m_max + 1):
        cells, certified = domination_row(fam.get(m), bs.r, m, args.k_max, args.K, args.tol)
        if not certified:
            rep.notes.append(f"m={m}: spectral radius not certified")
        for c in cells:
            rep.add(c.m, c.k, c.norm, c.rho, c.c, c.log_diag / s, c.bound, c.within_bound)


def cmd_hnf(args, out: list[str]):
    if args.matrix:
        a11, a12, a21, a22 = args.matrix
        h = hnf_of(IntMat2(a11, a12, a21, a22))
        out.append(f"{h.n} {h.ell} {h.k}")
        return
    if not args.hnf:
        raise SFTError("hnf needs --matrix or --hnf M L K")
    gamma = Unimodular(*args.gamma) if args.gamma else Unimodular(1, 0, 0, 1)
    M, L, K = args.hnf
    h = transform(gamma, Unimodular(*args.to), M, L, K) if args.to else to_gamma0(gamma, M, L, K)
    out.append(f"{h.n} {h.ell} {h.k}")


# --- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="periodic-sft",
                                description="Entropy, periodic counts and mixing checks for 2x2 basic sets")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", help="basic set file (text or JSON)")
        sp.add_argument("--fixture", choices=sorted(NAMED), help="use a built-in basic set")
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
        sp.add_argument("--log2", action="store_true", help="report logarithms base 2")
        sp.add_argument("--tol", type=_tol, default=1e-10)
        sp.add_argument("--partial", action="store_true", help="on a cap, print the completed rows")
        return sp

    sp = common(sub.add_parser("entropy", help="h, h_* and h_1 sequences"))
    sp.add_argument("--n-max", type=_pos, default=6)
    sp.add_argument("--m-max", type=_pos, default=6)
    sp.add_argument("--q-max", type=_pos, default=4)

    for name, helptext in (("periodic-count", "Gamma by the trace formula"),
                           ("oracle-count", "Gamma by brute-force enumeration")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--n", type=_pos, required=True)
        sp.add_argument("--ell", type=int, default=0)
        sp.add_argument("--k", type=_pos, required=True)
        if name == "oracle-count":
            sp.add_argument("--cap", type=_pos, default=DEFAULT_CAP)

    sp = common(sub.add_parser("mixing-check", help="diameters, self-loops and gluing exponents of T_m"))
    sp.add_argument("--m-max", type=_pos, default=6)
    sp.add_argument("--k-window", type=_pos, default=8)

    sp = common(sub.add_parser("domination", help="c(m, k) = |T_m^k| / rho^k"))
    sp.add_argument("--m-max", type=_pos, default=6)
    sp.add_argument("--k-max", type=_pos, default=6)
    sp.add_argument("--K", type=int, default=None, help="gluing constant for the (r^(K+1))^m bound")

    sp = sub.add_parser("hnf", help="Hermite normal form of a 2x2 lattice")
    sp.add_argument("--matrix", type=int, nargs=4, metavar=("A11", "A12", "A21", "A22"))
    sp.add_argument("--gamma", type=int, nargs=4, metavar=("A", "B", "C", "D"))
    sp.add_argument("--hnf", type=int, nargs=3, metavar=("M", "L", "K"))
    sp.add_argument("--to", type=int, nargs=4, metavar=("A", "B", "C", "D"),
                    help="target system (default: standard)")
    return p


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _tol(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1)")
    return v


COMMANDS = {
    "entropy": cmd_entropy,
    "periodic-count": cmd_periodic,
    "oracle-count": cmd_oracle,
    "mixing-check": cmd_mixing,
    "domination": cmd_domination,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    stdout = sys.stdout

    if args.command == "hnf":
        out: list[str] = []
        try:
            cmd_hnf(args, out)
        except (SFTError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        stdout.write("\n".join(out) + "\n")
        return EXIT_OK

    reports: list[Report] = []
    try:
        COMMANDS[args.command](args, reports)
    except CapExceededError as exc:
        print(f"error: cap exceeded: {exc}", file=sys.stderr)
        if args.partial and reports:
            reports[0].notes.append(f"partial: cap exceeded: {exc}")
            stdout.write(reports[0].render(args.format))
        return EXIT_CAP
    except (SFTError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stdout.write(reports[0].render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
