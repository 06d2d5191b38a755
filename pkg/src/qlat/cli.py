"""``qlat`` command line."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional

from . import equivalence as eq
from . import floorform as ff
from . import geometry as geo
from . import selfsim as ss
from . import svg
from .errors import QlatError

COMMANDS = ("generate", "convert", "substitute", "derive-rule", "analyze", "count-cycles", "tables", "render")
FORMATS = ("text", "json", "tsv", "svg")
WINDOW_LIMIT = 10 ** 6


@dataclass
class JobConfig:
    command: str
    case: Optional[str] = None
    tau: Optional[str] = None
    spec: Optional[str] = None
    params: Optional[str] = None
    window: tuple = (-50, 50)
    s_max: int = 12
    signs: Optional[str] = None
    fmt: str = "text"
    out: Optional[str] = None
    kind: str = "ticks"
    word: Optional[str] = None
    inverse: bool = False
    which: int = 1
    table: str = "both"
    extra: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"window must look like lo:hi, got {text!r}")
    if lo > hi:
        raise UsageError("window lower bound exceeds upper bound")
    if max(abs(lo), abs(hi)) > WINDOW_LIMIT:
        raise UsageError(f"window exceeds |n| <= {WINDOW_LIMIT}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qlat", description="Exact quadratic 1D quasilattices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json", "tsv")):
        sp.add_argument("--case", help="catalog case id (1, 2a, ..., 4d) or family 1-4")
        sp.add_argument("--tau", help="basis change a,b,c,d")
        sp.add_argument("--spec", help="geometric spec JSON file")
        sp.add_argument("--params", help="floor-form params JSON file")
        sp.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
        sp.add_argument("--out", help="output path (written atomically)")

    g = sub.add_parser("generate", help="generate points and the tile word")
    common(g)
    g.add_argument("--window", default="-50:50")
    g.add_argument("--signs", help="sign pair for singular lines, e.g. +-")
    g.add_argument("--s", dest="s", type=int, default=0, help="inflation count for singular evaluation")

    c = sub.add_parser("convert", help="convert between geometric spec and floor form")
    common(c, ("json", "text"))
    c.add_argument("--which", type=int, choices=(1, 2), default=1)

    s = sub.add_parser("substitute", help="apply (or invert) a substitution rule to a word")
    common(s)
    s.add_argument("--word", required=True)
    s.add_argument("--inverse", action="store_true", help="glue instead of decorate")

    d = sub.add_parser("derive-rule", help="derive the canonical rule for tau on a spec")
    common(d, ("json", "text"))

    a = sub.add_parser("analyze", help="self-similarity data and cycle counts")
    common(a, ("json", "text"))
    a.add_argument("--s-max", dest="s_max", type=int, default=12)

    cc = sub.add_parser("count-cycles", help="F_s, N_s and s-cycle counts")
    common(cc, ("tsv", "json", "text"))
    cc.add_argument("--s-max", dest="s_max", type=int, default=12)

    t = sub.add_parser("tables", help="reproduce both catalog tables")
    common(t, ("tsv", "json"))
    t.add_argument("--table", choices=("1", "2", "both"), default="both")
    t.add_argument("--s-max", dest="s_max", type=int, default=12)

    r = sub.add_parser("render", help="SVG figures")
    common(r, ("svg",))
    r.add_argument("--kind", choices=("ticks", "bigrid", "rule"), default="ticks")
    r.add_argument("--window", default="-10:10")
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    cfg = JobConfig(command=ns.command)
    for name in ("case", "tau", "spec", "params", "fmt", "out", "kind", "word", "inverse", "which", "table", "signs", "s_max"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "window"):
        cfg.window = parse_window(ns.window)
    if hasattr(ns, "s"):
        cfg.extra["s"] = ns.s
    if cfg.s_max < 1 or cfg.s_max > ss.S_MAX:
        raise UsageError(f"--s-max must lie in 1..{ss.S_MAX}")
    return cfg


# -- input resolution -----------------------------------------------------

def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def resolve_tau(cfg: JobConfig) -> Optional[eq.BasisChange]:
    if cfg.tau:
        try:
            return eq.BasisChange.parse(cfg.tau)
        except ValueError as exc:
            raise UsageError(str(exc))
    if cfg.case:
        return _entry(cfg).tau
    return None


def _entry(cfg: JobConfig) -> ss.CatalogEntry:
    try:
        return ss.catalog_entry(cfg.case)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))


def resolve_spec(cfg: JobConfig) -> geo.GeometricSpec:
    if cfg.spec:
        return geo.spec_from_json(_load_json(cfg.spec))
    if cfg.params:
        return ff.floorform_to_geometry(ff.FloorFormParams.from_json(_load_json(cfg.params)))
    if cfg.case:
        return _entry(cfg).spec
    if cfg.tau:
        return ss.catalog_spec(resolve_tau(cfg))
    raise UsageError("need one of --case, --spec, --params or --tau")


# -- commands -------------------------------------------------------------

def _points_payload(pts: geo.QuasilatticePoints) -> dict:
    return {"indices": list(pts.indices), "points": [x.to_text() for x in pts.xs], "word": pts.word}


def cmd_generate(cfg: JobConfig) -> str:
    spec = resolve_spec(cfg)
    if cfg.signs:
        try:
            signs = ff.SingularSigns.parse(cfg.signs)
        except ValueError as exc:
            raise UsageError(str(exc))
        s = cfg.extra.get("s", 0)
        tau = resolve_tau(cfg) if s else None
        pts = ff.singular_points(spec, signs, cfg.window, s=s, tau=tau)
    else:
        pts = geo.cut_and_project(spec, cfg.window)
    if cfg.fmt == "text":
        return pts.word + "\n"
    if cfg.fmt == "json":
        return _dump(_points_payload(pts))
    lines = ["n\tx\tx_float"] + [f"{n}\t{x.to_text()}\t{float(x):.12f}" for n, x in pts.points]
    return "\n".join(lines) + "\n"


def cmd_convert(cfg: JobConfig) -> str:
    if cfg.params and not cfg.spec:
        params = ff.FloorFormParams.from_json(_load_json(cfg.params))
        spec = ff.floorform_to_geometry(params)
        back, _ = ff.geometry_to_floorform(spec, 1)
        payload = {"spec": geo.spec_to_json(spec), "roundtrip_params": back.to_json(), "identity": back == params}
    else:
        spec = resolve_spec(cfg)
        params, asym = ff.geometry_to_floorform(spec, cfg.which)
        back = ff.floorform_to_geometry(params)
        ref = ff.short_first(spec)
        ref_red, ref_shift = ff.reduce_umklaap(ref)
        back_red, back_shift = ff.reduce_umklaap(back)
        shift = [a - b for a, b in zip(back_shift, ref_shift)]  # back.umklaap(*shift) == ref
        payload = {
            "params": params.to_json(),
            "asymmetric": {
                "which": asym.which,
                "chi_par": asym.chi_par.to_text(),
                "chi_perp": asym.chi_perp.to_text(),
                "kappa_i": asym.kappa_i.to_text(),
            },
            "roundtrip_spec": geo.spec_to_json(back),
            "umklaap_shift": shift,
            "identity_mod_umklaap": ref_red == back_red,
        }
    if cfg.fmt == "text":
        return "\n".join(f"{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}" for k, v in payload.items()) + "\n"
    return _dump(payload)


def _rule_for(cfg: JobConfig) -> eq.SubstitutionRule:
    if cfg.case and not cfg.tau and not cfg.spec:
        return _entry(cfg).rule
    tau = resolve_tau(cfg)
    if tau is None:
        raise UsageError("need --case or --tau")
    return eq.derive_canonical_rule(resolve_spec(cfg), tau)


def cmd_substitute(cfg: JobConfig) -> str:
    rule = _rule_for(cfg)
    out = eq.glue(rule, cfg.word) if cfg.inverse else eq.apply_rule(rule, cfg.word)
    if cfg.fmt == "json":
        return _dump({"input": cfg.word, "output": str(out), "inverse": cfg.inverse})
    return str(out) + "\n"


def cmd_derive_rule(cfg: JobConfig) -> str:
    tau = resolve_tau(cfg)
    if tau is None:
        raise UsageError("need --case or --tau")
    spec = resolve_spec(cfg) if (cfg.spec or cfg.params or cfg.case) else ss.catalog_spec(tau)
    rule = eq.derive_canonical_rule(spec, tau)
    if cfg.fmt == "text":
        return f"S' -> {rule.word_S}\nL' -> {rule.word_L}\n"
    return _dump(rule.to_json())


def cmd_analyze(cfg: JobConfig) -> str:
    tau = resolve_tau(cfg)
    if tau is None:
        raise UsageError("need --case or --tau")
    e = ss.eigen_tau(tau)
    spec = resolve_spec(cfg) if (cfg.spec or cfg.params or cfg.case) else ss.catalog_spec(tau)
    payload = {
        "case": cfg.case,
        "tau": tau.rows,
        "det": tau.det,
        "lambda_par": e.lambda_par.to_text(),
        "lambda_perp": e.lambda_perp.to_text(),
        "ratio_par": e.v_par.to_text(),
        "ratio_perp": e.v_perp.to_text(),
        "self_similar": ss.is_self_similar(spec, tau),
        "frequency_ratio": ff.frequency_ratio(spec).to_text(),
        "cycles": [c.cycles for c in ss.cycle_table(tau, cfg.s_max)],
    }
    if cfg.fmt == "text":
        return "\n".join(f"{k}: {json.dumps(v, ensure_ascii=False)}" for k, v in payload.items()) + "\n"
    return _dump(payload)


def cmd_count_cycles(cfg: JobConfig) -> str:
    tau = resolve_tau(cfg)
    if tau is None:
        raise UsageError("need --case or --tau")
    rows = ss.cycle_table(tau, cfg.s_max)
    if cfg.fmt == "json":
        return _dump([{"s": c.s, "F_s": c.F[c.s - 1], "N_s": c.N_s, "irreducible": c.irreducible, "cycles": c.cycles} for c in rows])
    sep = "\t" if cfg.fmt == "tsv" else " "
    lines = [sep.join(("s", "F_s", "cycles"))] + [sep.join(str(v) for v in (c.s, c.F[c.s - 1], c.cycles)) for c in rows]
    return "\n".join(lines) + "\n"


def _tsv(rows) -> str:
    return "\n".join("\t".join(r) for r in rows) + "\n"


def cmd_tables(cfg: JobConfig) -> str:
    t1, t2 = ss.table1_rows(), ss.table2_rows(cfg.s_max)
    if cfg.fmt == "json":
        payload = {}
        if cfg.table in ("1", "both"):
            payload["table1"] = [dict(zip(t1[0], r)) for r in t1[1:]]
        if cfg.table in ("2", "both"):
            payload["table2"] = [dict(zip(t2[0], r)) for r in t2[1:]]
        return _dump(payload)
    parts = []
    if cfg.table in ("1", "both"):
        parts.append(_tsv(t1))
    if cfg.table in ("2", "both"):
        parts.append(_tsv(t2))
    return "\n".join(parts)


def cmd_render(cfg: JobConfig) -> str:
    if cfg.kind == "rule":
        rule = _rule_for(cfg)
        S, L = geo.tile_lengths(resolve_spec(cfg))
        return svg.render_rule(rule, S, L)
    spec = resolve_spec(cfg)
    if cfg.kind == "bigrid":
        return svg.render_bigrid(geo.bigrid_times(spec, cfg.window))
    return svg.render_ticks(geo.cut_and_project(spec, cfg.window))


HANDLERS = {
    "generate": cmd_generate,
    "convert": cmd_convert,
    "substitute": cmd_substitute,
    "derive-rule": cmd_derive_rule,
    "analyze": cmd_analyze,
    "count-cycles": cmd_count_cycles,
    "tables": cmd_tables,
    "render": cmd_render,
}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qlat-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: JobConfig) -> str:
    return HANDLERS[cfg.command](cfg)


def _error_record(name: str, message: str) -> str:
    return json.dumps({"error": name, "message": message}, sort_keys=True)


def _join_dash_values(argv: list[str]) -> list[str]:
    # let "--window -50:50" through; argparse would read -50:50 as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--window" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--window={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = parser.parse_args(_join_dash_values(argv))
        cfg = config_from_args(ns)
        text = run(cfg)
        if cfg.out:
            write_atomic(cfg.out, text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(_error_record("UsageError", str(exc)), file=sys.stderr)
        return 2
    except QlatError as exc:
        print(_error_record(exc.name, str(exc)), file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(_error_record(type(exc).__name__, str(exc)), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
