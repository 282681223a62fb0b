"""Command-line front end.

    ramanujan-lab catalog     [--catalog PATH] [--export-json PATH]
    ramanujan-lab verify-value --series all --digits 50
    ramanujan-lab congruence  --kind A --series all --pmax 199
    ramanujan-lab fourier     --series T3.11 --digits 60
    ramanujan-lab r0          --series T3.11,T3.6
    ramanujan-lab identities  --name 6n+1 --pmax 99
    ramanujan-lab classical   --pmax 499
    ramanujan-lab report      (everything above)

Exit status: 0 if every non-excluded check held, 1 if any failed (or the run
was interrupted), 2 on configuration or IO errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import mpmath as mp

from . import catalog as cat
from . import congruence, exact, identities, numerics
from .errors import AccelerationFailure, RamanujanLabError, ReconstructionFailure
from .report import EmptyReport, Record, emit_report, summarize

COMMANDS = ("catalog", "verify-value", "congruence", "fourier", "r0", "identities", "classical", "report")
NUMERIC_COMMANDS = ("verify-value", "fourier", "r0", "report")
DIGITS_ENV = "RAMANUJAN_LAB_DIGITS"
DEFAULT_DIGITS = 50
DEFAULT_PMAX = {"congruence": 199, "identities": 99, "classical": 499, "report": 199}

#: the worked examples used as the default selection for fourier / r0
WORKED_EXAMPLES = ("T3.11", "T3.15", "T3.6", "T5.2")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    series: str = "all"
    p_max: int | None = None
    digits: int = DEFAULT_DIGITS
    kind: str = "A"
    name: str | None = None
    format: str = "text"
    out: str | None = None
    catalog: str | None = None
    max_levin_order: int = numerics.DEFAULT_MAX_LEVIN_ORDER
    max_precision_bits: int = numerics.DEFAULT_MAX_PRECISION_BITS
    allow_empty: bool = False
    workers: int = 1
    export_json: str | None = None
    quiet: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command in ("congruence", "report") and self.pmax < 3:
            raise ConfigError("--pmax must be at least 3 for congruence scans")
        if self.command in NUMERIC_COMMANDS and self.digits < 15:
            raise ConfigError("--digits must be at least 15 for numeric commands")
        if self.kind not in ("A", "B", "AB"):
            raise ConfigError("--kind must be A or B")
        if self.format not in ("text", "json-lines"):
            raise ConfigError("--format must be text or json-lines")
        if self.workers < 1:
            raise ConfigError("--workers must be positive")
        if self.max_precision_bits < 64:
            raise ConfigError("--max-precision-bits must be at least 64")

    @property
    def pmax(self) -> int:
        return self.p_max if self.p_max is not None else DEFAULT_PMAX.get(self.command, 199)

    def public(self) -> dict:
        """The settings that determine the results (for the report header)."""
        d = asdict(self)
        for k in ("out", "quiet", "extra", "workers", "format", "allow_empty", "export_json"):
            d.pop(k)
        d["p_max"] = self.pmax
        return d


# ---------------------------------------------------------------------------
# progress


class Progress:
    """Per-series progress with ETA on stderr."""

    def __init__(self, label, total, enabled=True, stream=None):
        self.label = label
        self.total = total
        self.enabled = enabled and total > 0
        self.stream = stream or sys.stderr
        self.start = time.monotonic()
        self.done = 0

    def step(self, what=""):
        self.done += 1
        if not self.enabled:
            return
        elapsed = time.monotonic() - self.start
        eta = elapsed / self.done * (self.total - self.done)
        self.stream.write(f"[{self.label}] {self.done}/{self.total} {what} elapsed {elapsed:.1f}s eta {eta:.1f}s\n")
        self.stream.flush()


# ---------------------------------------------------------------------------
# workflows; each returns a list of Records in deterministic order


def _entries(cfg: RunConfig, default=None):
    catalog = cat.load(cfg.catalog) if cfg.catalog else cat.builtin_catalog()
    selector = cfg.series
    if selector == "all" and default is not None and cfg.extra.get("series_defaulted"):
        selector = list(default)
    return sorted(cat.select(selector, catalog), key=lambda e: e.sort_key)


def _catalog(cfg, out):
    entries = _entries(cfg)
    if cfg.export_json:
        try:
            with open(cfg.export_json, "w") as fh:
                fh.write(cat.to_json(entries))
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.export_json}: {exc.strerror}") from exc
    for e in entries:
        bad = cat.validate(e)
        out.append(Record("catalog", "failed" if bad else "held", {
            "series_id": e.id, "m": e.m, "s": [str(s) for s in e.s], "z0": str(e.z0),
            "a": list(e.a), "v0": e.v0, "chi0": e.chi0, "eps0": e.eps0,
            "divergent": e.divergent, "violations": [str(v) for v in bad] or None,
        }))


def _verify_value(cfg, out):
    entries = _entries(cfg)
    prog = Progress("verify-value", len(entries), not cfg.quiet)
    for e in entries:
        base = {"series_id": e.id, "digits": cfg.digits}
        if abs(e.z0) >= 1:
            out.append(Record("verify-value", "excluded", {**base, "excluded_reason": "|z0| >= 1 (divergent)"}))
        elif not numerics.is_real_valued(e):
            out.append(Record("verify-value", "excluded", {**base, "excluded_reason": "(-1)^m chi0 < 0"}))
        else:
            v = numerics.sum_unilateral(e, cfg.digits)
            with mp.workprec(v.precision_bits):
                target = mp.re(numerics.ramanujan_constant(e))
                rel = abs(v.value - target) / abs(target)
                agree = int(min(-mp.log10(rel), v.precision_bits / 3.33)) if rel else cfg.digits + 10
                out.append(Record("verify-value", "held" if agree >= cfg.digits - 5 else "failed", {
                    **base, "value": mp.nstr(v.value, 30), "closed_form": mp.nstr(target, 30),
                    "digits_agree": min(agree, cfg.digits + 10),
                }))
        prog.step(e.id)


def _congruence(cfg, out, kinds=None):
    entries = _entries(cfg)
    for kind in kinds or (["A", "B"] if cfg.kind == "AB" else [cfg.kind]):
        prog = Progress(f"congruence {kind}", len(entries), not cfg.quiet)
        reps = congruence.scan(entries, kind, cfg.pmax, workers=cfg.workers,
                               progress=lambda done, total, sid, el: prog.step(sid))
        for r in reps:
            status = "excluded" if r.excluded else ("held" if r.holds else "failed")
            out.append(Record("congruence", status, r.to_record()))


def _fourier_one(cfg, e):
    """(FourierCoefficients or None, Record)."""
    base = {"series_id": e.id, "m": e.m, "digits": cfg.digits}
    try:
        method = numerics.choose_method(e)
    except AccelerationFailure as exc:
        return None, Record("fourier", "excluded", {**base, "excluded_reason": str(exc)})
    try:
        fc = numerics.solve_fourier(e, cfg.digits, method=method, max_levin_order=cfg.max_levin_order,
                                    max_precision_bits=cfg.max_precision_bits)
    except (AccelerationFailure, RamanujanLabError) as exc:
        return None, Record("fourier", "failed", {**base, "method": method, "error": f"{type(exc).__name__}: {exc}"})
    fields = {**base, "method": fc.method, "reconstructed": fc.reconstructed,
              "precision_bits": fc.precision_bits}
    if fc.reconstructed:
        fields["alpha"] = [str(a) for a in fc.alpha]
        fields["beta"] = [str(b) for b in fc.beta]
    else:
        fields["alpha"] = [mp.nstr(a, 20) for a in fc.numeric_alpha]
        fields["beta"] = [mp.nstr(b, 20) for b in fc.numeric_beta]
    return fc, Record("fourier", "held" if fc.reconstructed else "failed", fields)


def _fourier(cfg, out):
    entries = _entries(cfg, WORKED_EXAMPLES)
    prog = Progress("fourier", len(entries), not cfg.quiet)
    for e in entries:
        out.append(_fourier_one(cfg, e)[1])
        prog.step(e.id)


def _r0(cfg, out):
    entries = _entries(cfg, WORKED_EXAMPLES)
    prog = Progress("r0", len(entries), not cfg.quiet)
    for e in entries:
        fc, rec = _fourier_one(cfg, e)
        base = {"series_id": e.id, "digits": cfg.digits}
        if fc is None or not fc.reconstructed:
            status = "excluded" if rec.status == "excluded" else "failed"
            reason = rec.fields.get("excluded_reason") or rec.fields.get("error") or "alpha not reconstructed"
            key = "excluded_reason" if status == "excluded" else "error"
            out.append(Record("r0", status, {**base, key: reason}))
        else:
            try:
                st = numerics.r0_closed_form(e, fc.alpha, cfg.digits)
            except ReconstructionFailure as exc:
                out.append(Record("r0", "failed", {**base, "error": str(exc)}))
            else:
                status = "held" if e.eps0 is None or st.eps0 == e.eps0 else "failed"
                with mp.workprec(numerics.digits_to_bits(cfg.digits)):
                    pref = mp.nstr(st.prefactor, 25)
                out.append(Record("r0", status, {
                    **base, "alpha": [str(a) for a in fc.alpha], "prefactor": pref,
                    "closed_form": st.closed_form(), "r0": str(st.r0), "eps0": st.eps0, "j": st.j,
                    "catalog_eps0": e.eps0,
                }))
        prog.step(e.id)


def _identities(cfg, out):
    names = [cfg.name] if cfg.name else list(identities.IDENTITIES)
    prog = Progress("identities", len(names), not cfg.quiet)
    for name in names:
        identities.get_identity(name)
        ps = range(1, cfg.pmax + 1, 2)
        bad = [p for p in ps if not identities.eval_identity(name, p)[2]]
        out.append(Record("identities", "failed" if bad else "held", {
            "name": name, "check": "exact", "p_max": cfg.pmax, "count": len(ps), "mismatches": bad or None,
        }))
        fields = {"name": name, "check": "recurrence", "p_max": cfg.pmax}
        try:
            lhs, rhs = identities.identity_sequences(name, cfg.pmax)
            ok, fit = identities.certify_sequences(lhs, rhs, cfg.extra.get("degree_bound", 8))
            fields["recurrence"] = str(fit)
            out.append(Record("identities", "held" if ok else "failed", fields))
        except (RamanujanLabError, ValueError) as exc:
            out.append(Record("identities", "failed", {**fields, "error": str(exc)}))
        prog.step(name)


def _classical(cfg, out):
    odd = range(1, min(cfg.pmax, 201) + 1, 2)
    for k in sorted(exact.POCHHAMMER_IDENTITIES):
        bad = [p for p in odd if not exact.check_pochhammer_identity(k, p)]
        out.append(Record("classical", "failed" if bad else "held", {
            "check": f"pochhammer-id{k}", "range": f"odd p <= {odd[-1]}", "mismatches": bad or None,
        }))
    primes = [p for p in exact.primes_up_to(cfg.pmax) if p >= 5]
    for label, fn in (("morley", exact.morley_holds), ("wolstenholme", exact.wolstenholme_holds)):
        bad = [p for p in primes if not fn(p)]
        out.append(Record("classical", "failed" if bad else "held", {
            "check": label, "range": f"primes 5 <= p <= {cfg.pmax}", "mismatches": bad or None,
        }))


def _report(cfg, out):
    _catalog(cfg, out)
    _classical(cfg, out)
    _identities(cfg, out)
    _congruence(cfg, out, kinds=["A", "B"])
    _verify_value(cfg, out)
    _fourier(cfg, out)
    _r0(cfg, out)


WORKFLOWS = {
    "catalog": _catalog,
    "verify-value": _verify_value,
    "congruence": _congruence,
    "fourier": _fourier,
    "r0": _r0,
    "identities": _identities,
    "classical": _classical,
    "report": _report,
}


def run(cfg: RunConfig, stream=None) -> int:
    """Execute one command and write its report.  Returns the exit code."""
    stream = stream or sys.stdout
    try:
        cfg.validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records: list[Record] = []
    truncated = False
    try:
        WORKFLOWS[cfg.command](cfg, records)
    except KeyboardInterrupt:
        truncated = True
        print("interrupted; writing partial report", file=sys.stderr)
    except (ConfigError, cat.ParseError, cat.ValidationError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_report(records, cfg.format, cfg.out, command=cfg.command, config=cfg.public(),
                    allow_empty=cfg.allow_empty, truncated=truncated, stream=stream)
    except (EmptyReport, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if truncated:
        return 1
    return 0 if summarize(records).failed == 0 else 1


# ---------------------------------------------------------------------------
# argument handling

_FLAG_KEYS = {
    "series": "series", "pmax": "p_max", "digits": "digits", "kind": "kind", "name": "name",
    "format": "format", "out": "out", "catalog": "catalog", "max_levin_order": "max_levin_order",
    "max_precision_bits": "max_precision_bits", "allow_empty": "allow_empty", "workers": "workers",
    "export_json": "export_json", "quiet": "quiet",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramanujan-lab",
        description="Verify Ramanujan-like series for 1/pi^m: values, supercongruences, "
        "terminating identities and Fourier constants.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--series", help='comma-separated ids or "all"')
    parser.add_argument("--pmax", type=int, help="largest prime / odd parameter")
    parser.add_argument("--digits", type=int, help=f"decimal digits (default ${DIGITS_ENV} or {DEFAULT_DIGITS})")
    parser.add_argument("--kind", choices=("A", "B", "AB"), help="congruence kind")
    parser.add_argument("--name", help="identity name, e.g. 6n+1")
    parser.add_argument("--format", choices=("text", "json-lines"))
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--catalog", help="catalog file in the text format")
    parser.add_argument("--export-json", dest="export_json", help="catalog command: also write JSON here")
    parser.add_argument("--max-levin-order", dest="max_levin_order", type=int)
    parser.add_argument("--max-precision-bits", dest="max_precision_bits", type=int)
    parser.add_argument("--allow-empty", dest="allow_empty", action="store_const", const=True)
    parser.add_argument("--workers", type=int, help="processes for congruence scans")
    parser.add_argument("--quiet", action="store_const", const=True, help="no progress on stderr")
    parser.add_argument("--config", help="JSON file with the same keys as the flags")
    return parser


def _load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        k = key.lstrip("-").replace("-", "_")
        if k not in _FLAG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        out[_FLAG_KEYS[k]] = value
    return out


def config_from_args(argv=None, environ=None) -> RunConfig:
    """Flags > config file > environment > defaults."""
    environ = os.environ if environ is None else environ
    args = build_parser().parse_args(argv)
    values: dict = {}
    env_digits = environ.get(DIGITS_ENV)
    if env_digits:
        try:
            values["digits"] = int(env_digits)
        except ValueError:
            raise ConfigError(f"{DIGITS_ENV} must be an integer, got {env_digits!r}") from None
    if args.config:
        values.update(_load_config_file(args.config))
    for flag, key in _FLAG_KEYS.items():
        v = getattr(args, flag)
        if v is not None:
            values[key] = v
    extra = {}
    if "series" not in values:
        extra["series_defaulted"] = True
    if isinstance(values.get("series"), list):
        values["series"] = ",".join(values["series"])
    return RunConfig(command=args.command, extra=extra, **values)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        build_parser().print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
