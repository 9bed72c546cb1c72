"""Command-line entry point: ``afl {zeros,norm,analyze,synthesize,check,verify}``.

Exit codes: 0 success / Holds, 1 failed verification suite, 2 numeric
failure, 10 NotImplied, 11 OutOfTheoremScope, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .embeddings import (
    HOLDS,
    NOT_IMPLIED,
    EmbeddingQuery,
    NumericConfig,
    check_bessel_potential,
    check_embedding,
    decide_from_dict,
)
from .errors import AFLError, NumericalFailure
from .frame import (
    CoefficientGrid,
    analyze,
    build_frame,
    l2_norm_frequency,
    reconstruction_error,
    synthesize,
    synthesize_spectrum,
)
from .profiles import RadialProfile
from .spectral import SpaceParams, besov_norm_report, build_filter_bank, tl_norm_report, weighted_lp_norm
from .special_functions import bessel_zeros, cached_bessel_zeros
from .weights import PowerWeight, weight_from_dict

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_NUMERIC = 2
EXIT_NOT_IMPLIED = 10
EXIT_OUT_OF_SCOPE = 11
EXIT_USAGE = 64

log = logging.getLogger("afl")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class CliConfig:
    command: str
    options: dict = field(default_factory=dict)
    verbosity: int = 0


def _number(text):
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _read_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc


def _write(text, path=None):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_zeros(a):
    if a.K < 1:
        raise UsageError("K must be >= 1")
    table = bessel_zeros(a.nu, a.K) if a.no_cache else cached_bessel_zeros(a.nu, a.K, a.cache_dir)
    if a.json:
        _write(_dump(table.to_dict()))
    else:
        _write("\n".join(repr(float(z)) for z in table.zeros))
    return EXIT_OK


def _weight(a, n):
    if a.weight and a.gamma is not None:
        raise UsageError("--weight and --gamma are mutually exclusive")
    if a.weight:
        d = _read_json(a.weight)
        return weight_from_dict(dict(d, n=d.get("n", n)))
    return PowerWeight(a.gamma or 0.0, n)


def _profile(path):
    try:
        return RadialProfile.from_dict(_read_json(path))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: not a profile description ({exc})") from exc


def cmd_norm(a):
    f = _profile(a.profile)
    n = a.n
    w = _weight(a, n)
    if a.kind == "L":
        value = weighted_lp_norm(f, w, a.p, n)
        out = {"schema": "afl-norm/1", "space": {"kind": "L", "p": _jnum(a.p), "n": n, "weight": w.to_dict()},
               "value": value, "bands": [], "band_values": []}
    else:
        sp = SpaceParams(a.kind, a.s, a.p, a.q, n, w)
        bank = build_filter_bank("lp", n, a.mu_max)
        rep = besov_norm_report(f, sp, bank) if sp.kind == "B" else tl_norm_report(f, sp, bank)
        out = dict(schema="afl-norm/1", space=sp.to_dict(), **rep.to_dict())
    _write(_dump(out) if a.json else repr(out["value"]))
    return EXIT_OK


def _jnum(x):
    return "inf" if isinstance(x, float) and math.isinf(x) else x


def cmd_analyze(a):
    f = _profile(a.profile)
    frame = build_frame(a.n, a.mu_max, a.k_max)
    lam = analyze(f, frame)
    _write(lam.to_json() if a.format == "json" else lam.to_csv(), a.output)
    return EXIT_OK


def cmd_synthesize(a):
    text = _read_text(a.coefficients)
    lam = CoefficientGrid.from_json(text) if text.lstrip().startswith("{") else CoefficientGrid.from_csv(text)
    frame = build_frame(lam.n, lam.mu_max, lam.k_max)
    g = synthesize(lam, frame)
    nodes, wts, _ = frame.common_grid()
    l2 = l2_norm_frequency(synthesize_spectrum(lam, frame, nodes), nodes, wts, lam.n)
    src = _profile(a.profile).to_dict() if a.profile else lam.metadata.get("source_profile")
    rel = None
    if src is not None:
        rel = reconstruction_error(RadialProfile.from_dict(src), lam, frame)
    out = {"schema": "afl-reconstruction/1", "n": lam.n, "mu_max": lam.mu_max, "k_max": lam.k_max,
           "l2_norm": l2, "rel_error": rel, "source_profile": src}
    if a.samples:
        r = np.linspace(0.0, a.sample_radius, a.samples)
        out["samples"] = {"r": r.tolist(), "values": np.asarray(g(r), dtype=float).tolist()}
    _write(_dump(out))
    return EXIT_OK


def _inline_space(a, side):
    vals = {k: getattr(a, f"{k}{side}") for k in ("kind", "s", "p", "q", "gamma")}
    missing = [k for k in ("s", "p", "q") if vals[k] is None]
    if missing:
        raise UsageError(f"inline query needs --{missing[0]}{side}")
    n = a.n
    return SpaceParams(vals["kind"] or "B", vals["s"], vals["p"], vals["q"], n, PowerWeight(vals["gamma"] or 0.0, n))


def _inline_used(a):
    keys = [f"{k}{i}" for k in ("kind", "s", "p", "q", "gamma") for i in (1, 2)]
    return any(getattr(a, k) is not None for k in keys)


def cmd_check(a):
    modes = sum(bool(x) for x in (a.file, a.bessel, _inline_used(a)))
    if modes != 1:
        raise UsageError("give exactly one of --file, --bessel or inline --s1/--p1/... flags")
    if a.file:
        d = _read_json(a.file)
        if a.method:
            d["method"] = a.method
        try:
            decision = decide_from_dict(d)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, AFLError):
                raise
            raise UsageError(f"{a.file}: malformed query ({exc})") from exc
    elif a.bessel:
        n, s, p, q, c = a.bessel
        decision = check_bessel_potential(int(n), s, p, q, c)
    else:
        cfg = NumericConfig(mu_max=a.mu_max, k_max=a.k_max, eps_margin=a.eps_margin)
        query = EmbeddingQuery(_inline_space(a, 1), _inline_space(a, 2), cfg)
        decision = check_embedding(query, a.method or "auto")
    _write(decision.to_json())
    log.info("continuity=%s compactness=%s", decision.continuity, decision.compactness)
    if decision.continuity == HOLDS:
        return EXIT_OK
    return EXIT_NOT_IMPLIED if decision.continuity == NOT_IMPLIED else EXIT_OUT_OF_SCOPE


def cmd_verify(a):
    from .harness import SUITES, run_suite

    names = sorted(SUITES) if a.suite == "all" else [a.suite]
    ok = True
    summary = []
    for name in names:
        rep = run_suite(name)
        if a.out:
            rep.write(a.out)
        summary.append({"suite": rep.suite, "passed": rep.passed, "cases": len(rep.cases), "runtime": rep.runtime})
        ok = ok and rep.passed
    _write(_dump(summary))
    return EXIT_OK if ok else EXIT_SUITE_FAILED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .harness import SUITES

    p = _Parser(prog="afl", description="Radial Besov / Triebel-Lizorkin toolkit: Bessel zeros, norms, "
                                          "frame analysis/synthesis and embedding checks.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeros", help="print the first K positive zeros of J_nu")
    z.add_argument("nu", type=float)
    z.add_argument("K", type=int)
    z.add_argument("--json", action="store_true", help="emit the zero table as JSON")
    z.add_argument("--no-cache", action="store_true", help="do not read or write the on-disk cache")
    z.add_argument("--cache-dir", default=None, help="cache directory (default $AFL_CACHE_DIR or ./.afl-cache)")
    z.set_defaults(func=cmd_zeros)

    nm = sub.add_parser("norm", help="Besov (B), Triebel-Lizorkin (F) or weighted Lebesgue (L) norm of a profile")
    nm.add_argument("--profile", required=True, help="profile JSON file ('-' for stdin)")
    nm.add_argument("--kind", choices=("B", "F", "L"), default="B")
    nm.add_argument("--s", type=float, default=0.0)
    nm.add_argument("--p", type=_number, default=2.0)
    nm.add_argument("--q", type=_number, default=2.0)
    nm.add_argument("--n", type=int, default=3)
    nm.add_argument("--gamma", type=float, default=None, help="power weight exponent")
    nm.add_argument("--weight", default=None, help="weight JSON file (alternative to --gamma)")
    nm.add_argument("--mu-max", type=int, default=10)
    nm.add_argument("--json", action="store_true")
    nm.set_defaults(func=cmd_norm)

    an = sub.add_parser("analyze", help="frame coefficients of a profile (CSV by default)")
    an.add_argument("--profile", required=True)
    an.add_argument("--n", type=int, default=3)
    an.add_argument("--mu-max", type=int, default=10)
    an.add_argument("--k-max", type=int, default=256)
    an.add_argument("--format", choices=("csv", "json"), default="csv")
    an.add_argument("-o", "--output", default=None)
    an.set_defaults(func=cmd_analyze)

    sy = sub.add_parser("synthesize", help="rebuild a profile from coefficients and report the L2 error")
    sy.add_argument("--coefficients", default="-", help="coefficient CSV/JSON file (default stdin)")
    sy.add_argument("--profile", default=None, help="reference profile (default: the one recorded by analyze)")
    sy.add_argument("--samples", type=int, default=0, help="also print this many samples of the result")
    sy.add_argument("--sample-radius", type=float, default=5.0)
    sy.set_defaults(func=cmd_synthesize)

    ck = sub.add_parser("check", help="decide an embedding by the sufficient conditions")
    ck.add_argument("--file", default=None, help="query JSON file")
    ck.add_argument("--bessel", nargs=5, type=_number, metavar=("N", "S", "P", "Q", "C"),
                    help="H^{s,p} into L^q(|x|^c)")
    ck.add_argument("--method", choices=("auto", "general", "power", "two_regime", "tl", "elementary"), default=None)
    ck.add_argument("--n", type=int, default=3)
    for i in (1, 2):
        ck.add_argument(f"--kind{i}", choices=("B", "F"), default=None)
        ck.add_argument(f"--s{i}", type=float, default=None)
        ck.add_argument(f"--p{i}", type=_number, default=None)
        ck.add_argument(f"--q{i}", type=_number, default=None)
        ck.add_argument(f"--gamma{i}", type=float, default=None)
    ck.add_argument("--mu-max", type=int, default=None)
    ck.add_argument("--k-max", type=int, default=1024)
    ck.add_argument("--eps-margin", type=float, default=0.02)
    ck.set_defaults(func=cmd_check)

    ve = sub.add_parser("verify", help="run a verification suite and persist its report")
    ve.add_argument("suite", choices=sorted(SUITES) + ["all"])
    ve.add_argument("--out", default=None, help="directory for JSON and CSV reports")
    ve.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"afl {args.command}: {exc}\n")
        return EXIT_USAGE
    except NumericalFailure as exc:
        sys.stderr.write(f"afl {args.command}: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except AFLError as exc:
        sys.stderr.write(f"afl {args.command}: {exc}\n")
        return EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NUMERIC


def main():
    sys.exit(run())
