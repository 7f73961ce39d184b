"""``ellw`` command line: eval | verify | table.

Parameters may be given as flags (``--q 0.5``) or as positional ``key=value``
tokens (``q=0.5``). Exit codes: 0 pass, 1 verification failure, 2 usage
error, 3 numeric or domain error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import replace
from fractions import Fraction

from ellw.errors import EllwError
from ellw.mode_algebra import (
    classical_higher_spin_f,
    critical_k0_table,
    h_limit_table,
    higher_spin_k0_table,
    quantum_higher_spin_y,
    sl2_sector_table,
)
from ellw.params import DEFAULT_TRUNC, ModularParams, Tolerance, TruncationConfig
from ellw.special_fn import ThetaChar, big_theta, kappa_inv, q_number, tau_n, theta_char
from ellw.structure_fn import f_exchange, f_function, f_h_function, solve_surface, t_function, y_exchange
from ellw.suites import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {"N": 2, "M": 1, "q": 0.5, "p": 0.3, "tol": 1e-8, "samples": 20, "seed": 42, "r_max": 5}
INT_KEYS = {"N", "M", "h", "i", "j", "k", "r", "r_max", "samples", "seed", "trunc_theta", "trunc_prod", "trunc_series"}
REAL_KEYS = {"tol"}
TABLES = ("critical-k0", "sl2-sector", "higher-spin-k0", "h-limit")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Accept "a", "bi", "a+bi", "a-bi", "1/2"; 'j' works in place of 'i'."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty number")
    if "/" in s and not s.endswith(("i", "j")):
        try:
            return complex(float(Fraction(s)))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse {text!r} as a number") from exc
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        pass
    if s.endswith(("i", "j")):
        body = s[:-1]
        # split at the last sign that is not an exponent sign
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                re_part, im_part = body[:pos], body[pos:]
                break
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+", "-"):
            im_part += "1"
        try:
            return complex(float(re_part), float(im_part))
        except ValueError:
            pass
    raise UsageError(f"cannot parse {text!r} as a complex number")


def parse_value(key: str, text: str):
    if key in INT_KEYS:
        try:
            return int(text)
        except ValueError as exc:
            raise UsageError(f"{key} must be an integer, got {text!r}") from exc
    if key in REAL_KEYS:
        try:
            return float(text)
        except ValueError as exc:
            raise UsageError(f"{key} must be real, got {text!r}") from exc
    if key in ("g1", "g2"):
        try:
            return Fraction(text)
        except ValueError as exc:
            raise UsageError(f"{key} must be a rational characteristic, got {text!r}") from exc
    if key in ("table", "suite", "function"):
        return text
    return parse_complex(text)


def format_complex(z: complex) -> str:
    re_, im = complex(z).real + 0.0, complex(z).imag + 0.0
    re_ = 0.0 if re_ == 0 else re_
    im = 0.0 if im == 0 else im
    return f"{re_:.15g}{im:+.15g}i"


# -- argument surface -------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser) -> None:
    for name in ("N", "M", "h", "i", "j", "k", "samples", "seed"):
        sp.add_argument(f"--{name}", dest=name, default=None)
    for name in ("q", "p", "x", "c", "tol"):
        sp.add_argument(f"--{name}", dest=name, default=None)
    sp.add_argument("--r-max", dest="r_max", default=None)
    sp.add_argument("--trunc-theta", dest="trunc_theta", default=None)
    sp.add_argument("--trunc-prod", dest="trunc_prod", default=None)
    sp.add_argument("--trunc-series", dest="trunc_series", default=None)
    sp.add_argument("--format", dest="format", choices=("json", "csv", "text"), default=None)
    sp.add_argument("--out", dest="out", default=None)
    sp.add_argument("params", nargs="*", metavar="key=value")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellw", description="Elliptic R-matrix and structure-function harness.")
    sub = ap.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", help="evaluate one function")
    e.add_argument("function")
    _add_common(e)
    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    _add_common(v)
    t = sub.add_parser("table", help="emit a mode coefficient table")
    t.add_argument("table", choices=TABLES)
    _add_common(t)
    return ap


def collect_params(ns: argparse.Namespace) -> dict:
    """Merge flags and key=value tokens; the same key given twice with different values is an error."""
    raw = {}
    for key in ("N", "M", "h", "i", "j", "k", "samples", "seed", "q", "p", "x", "c", "tol", "r_max", "trunc_theta", "trunc_prod", "trunc_series"):
        val = getattr(ns, key, None)
        if val is not None:
            raw[key] = val
    for token in ns.params:
        if "=" not in token:
            raise UsageError(f"expected key=value, got {token!r}")
        key, val = token.split("=", 1)
        key = key.strip().replace("-", "_")
        if key in raw and raw[key] != val:
            raise UsageError(f"{key} given twice ({raw[key]!r} and {val!r})")
        raw[key] = val
    return {k: parse_value(k, v) for k, v in raw.items()}


def _trunc(params: dict) -> TruncationConfig:
    tc = DEFAULT_TRUNC
    updates = {}
    if "trunc_theta" in params:
        updates["theta_terms"] = params["trunc_theta"]
    if "trunc_prod" in params:
        updates["prod_terms"] = params["trunc_prod"]
    if "trunc_series" in params:
        updates["series_lmax"] = params["trunc_series"]
    return replace(tc, **updates) if updates else tc


class _Params:
    def __init__(self, params: dict):
        self.values = params

    def __call__(self, key: str):
        if key in self.values:
            return self.values[key]
        if key in DEFAULTS:
            return DEFAULTS[key]
        raise UsageError(f"missing parameter {key}")


def _mp(P: _Params, c=None) -> ModularParams:
    N = P("N")
    return ModularParams(N, P("q"), P("p"), c)


def _eval(function: str, P: _Params, tc: TruncationConfig) -> complex:
    if function == "theta":
        ch = ThetaChar(P("g1"), P("g2"))
        return theta_char(ch, P("xi"), P("tau"), tc)
    if function == "big-theta":
        return big_theta(P("z"), P("nome"), tc)
    if function == "tau":
        return tau_n(P("z"), _mp(P), tc)
    if function == "kappa-inv":
        return kappa_inv(P("z2"), _mp(P), tc)
    if function == "T":
        c = P.values.get("c", -P("N"))
        return t_function(P("x"), _mp(P, c), tc)
    if function == "f":
        return f_function(P("x"), _mp(P), tc)
    if function == "F":
        return f_exchange(P("M"), P("x"), _mp(P), tc)
    if function == "Y":
        return y_exchange(P("N"), P("M"), P("x"), P("q"), P("p"), tc)
    if function == "fh":
        return f_h_function(P("x"), P("N"), P("M"), P("h"), P("q"), tc)
    if function == "mode-coeff":
        table = _table(P("table"), P, max(abs(P("r")), 0))
        return table.coeffs[P("r")]
    if function == "hs-f":
        return classical_higher_spin_f(P("i"), P("j"), P("x"), _mp(P), tc)
    if function == "hs-y":
        sp = solve_surface(P("N"), P("M"), P("q"), P("p"))
        return quantum_higher_spin_y(P("i"), P("j"), P("x"), sp, tc)
    if function == "q-number":
        return q_number(P("r"), P("q"))
    raise UsageError(f"unknown function {function!r}")


EVAL_FUNCTIONS = ("theta", "big-theta", "tau", "kappa-inv", "T", "f", "F", "Y", "fh", "mode-coeff", "hs-f", "hs-y", "q-number")


def _table(name: str, P: _Params, r_max: int):
    q = P("q")
    if name == "critical-k0":
        return critical_k0_table(P("N"), q, r_max)
    if name == "sl2-sector":
        return sl2_sector_table(P("k"), q, r_max)
    if name == "higher-spin-k0":
        return higher_spin_k0_table(P("i"), P("j"), P("N"), q, r_max)
    if name == "h-limit":
        return h_limit_table(P("N"), P("M"), P("h"), q, r_max)
    raise UsageError(f"unknown table {name!r}; choose from {', '.join(TABLES)}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(ns: argparse.Namespace) -> int:
    params = collect_params(ns)
    P = _Params(params)
    tc = _trunc(params)
    if ns.command == "eval":
        if ns.function not in EVAL_FUNCTIONS:
            raise UsageError(f"unknown function {ns.function!r}; choose from {', '.join(EVAL_FUNCTIONS)}")
        _emit(format_complex(_eval(ns.function, P, tc)) + "\n", ns.out)
        return EXIT_OK
    if ns.command == "table":
        table = _table(ns.table, P, P("r_max"))
        fmt = ns.format or "csv"
        _emit({"csv": table.to_csv, "json": table.to_json, "text": table.to_text}[fmt](), ns.out)
        return EXIT_OK
    tol = P("tol")
    cfg = SuiteConfig(
        N=P("N"), M=P("M"), q=P("q"), p=P("p"), r_max=P("r_max"),
        samples=P("samples"), seed=P("seed"), tol=Tolerance(tol, tol), trunc=tc,
    )
    if cfg.samples < 1:
        raise UsageError("samples must be >= 1")
    report = run_suite(ns.suite, cfg)
    _emit(report.render(ns.format or "json"), ns.out)
    return EXIT_OK if report.overall_pass else EXIT_FAIL


def _short_warning(message, category, filename, lineno, line=None):
    return f"ellw: warning: {message}\n"


def main(argv=None) -> int:
    warnings.formatwarning = _short_warning
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _run(ns)
    except UsageError as exc:
        print(f"ellw: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EllwError, ZeroDivisionError, OverflowError) as exc:
        print(f"ellw: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
