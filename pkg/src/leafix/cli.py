"""Command-line surface: one config = one job, JSON reports and plain tables."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .arith import Cyclotomic, Scalar, is_cyclotomic_integer, root_of_unity, scalar_to_record
from .config import (
    ConfigError,
    JobConfig,
    Section,
    parse_angle,
    parse_config,
    parse_expression,
    parse_int,
    parse_rational_value,
    split_list,
)
from .genera import (
    COMPLEX,
    REAL,
    BundleError,
    EquivariantBundle,
    TotalClassBundle,
    complex_bundle,
    genus_of_roots,
    genus_of_total_class,
    real_bundle,
)
from .gring import Current, GradedRing, GradedVariable, RingElement, RingError, integrate
from .identities import VERIFIERS, verify_coth_numeric
from .lefschetz import (
    DOLBEAULT,
    SPIN,
    LefschetzError,
    SymbolDatum,
    bott_taubes_value,
    integrality_characteristic_number,
    lefschetz_basic3,
    lefschetz_general,
    lefschetz_strict,
    rigidity_obstruction,
)
from .series import NAMED_SERIES, named_series
from .spaces import (
    FixedComponentModel,
    SpaceModel,
    build_atiyah_Z,
    build_circle,
    build_cp,
    build_kp,
    build_point,
    build_sphere_circle,
    build_torus,
    build_universal_example,
    product,
)

__all__ = ["main", "run_job", "render_table", "to_json_text", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# known parameters per job kind; anything else is a config error
COMMON = {"truncation"}
PARAMS = {
    "genus": {"q", "qm1", "k", "s", "genus", "bundle"},
    "lefschetz": {"k", "complex", "j", "lift", "current", "kappa", "route", "multiplicity"},
    "integrality": {"k", "complex", "j", "lift", "kappa", "multiplicity"},
    "rigidity": {"s", "q", "k", "current"},
    "bott-taubes": {"s", "rank", "n", "Q", "spin", "current"},
    "verify": {"n", "T", "N", "q_max", "k_max", "points", "seed"},
}
BUILDERS = {
    "genus": {"cp", "kp", "torus", "sphere-circle", "atiyah", "point", "custom"},
    "lefschetz": {"universal", "custom"},
    "integrality": {"universal", "custom"},
    "rigidity": {"atiyah", "sphere-circle", "torus", "custom"},
    "bott-taubes": {"trivial", "atiyah", "custom"},
    "verify": set(VERIFIERS) | {"coth-numeric"},
}


class JobFailure(Exception):
    """A module error raised while running a valid config."""


# ---------------------------------------------------------------------------
# scalar rendering
# ---------------------------------------------------------------------------

def scalar_text(x: Scalar) -> str:
    if isinstance(x, Cyclotomic):
        x = x.canonical()
        if x.is_rational():
            x = x.coeffs[0] if x.coeffs else Fraction(0)
        elif x.conductor == 4:
            return _gaussian_text(*(list(x.coeffs) + [Fraction(0)] * 2)[:2])
        else:
            return str(x)
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _gaussian_text(a: Fraction, b: Fraction) -> str:
    # zeta4 written as i
    b_abs = abs(b)
    imag = ("" if b_abs == 1 else str(b_abs)) + "i"
    if not a:
        return ("-" if b < 0 else "") + imag
    return f"{a} {'-' if b < 0 else '+'} {imag}"


def approx_text(x: Scalar) -> str:
    z = x.to_complex() if isinstance(x, Cyclotomic) else complex(float(x))
    re, im = round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0
    if abs(im) < 1e-12:
        return f"{re:.9g}"
    if abs(re) < 1e-12:
        return f"{im:.9g}i"
    return f"{re:.9g}{'+' if im >= 0 else '-'}{abs(im):.9g}i"


def exact(x: Scalar) -> dict:
    return {"exact": scalar_to_record(x), "text": scalar_text(x)}


# ---------------------------------------------------------------------------
# building objects from configs
# ---------------------------------------------------------------------------

def _int(cfg: JobConfig, key: str, default: int | None = None, minimum: int | None = None) -> int:
    raw = cfg.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"{cfg.kind} {cfg.builder} needs {key}=")
        return default
    line, col = cfg.where(key)
    v = parse_int(raw, line, col)
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key} must be at least {minimum}", line, col, raw)
    return v


def _rational(cfg: JobConfig, key: str) -> Fraction:
    raw = cfg.get(key)
    if raw is None:
        raise ConfigError(f"{cfg.kind} {cfg.builder} needs {key}=")
    line, col = cfg.where(key)
    return parse_rational_value(raw, line, col)


def _bool(cfg: JobConfig, key: str, default: bool = False) -> bool:
    raw = cfg.get(key)
    if raw is None:
        return default
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise cfg.error(key, "expected a boolean")


def _ring_from_section(sec: Section | None) -> GradedRing:
    if sec is None:
        raise ConfigError("custom builder needs a [ring] section")
    line, col = sec.where("vars")
    raw = sec.get("vars")
    if raw is None:
        raise ConfigError("[ring] needs vars =", sec.line, 1)
    variables = []
    for item in split_list(raw):
        parts = item.split(":")
        if len(parts) not in (2, 3) or not parts[0].isidentifier():
            raise ConfigError("variable must be name:degree[:nilpotency]", line, col, item)
        deg = parse_int(parts[1], line, col)
        nil = parse_int(parts[2], line, col) if len(parts) == 3 else None
        try:
            variables.append(GradedVariable(parts[0], deg, nil))
        except (RingError, ValueError) as e:
            raise ConfigError(str(e), line, col, item) from None
    cap = sec.get("cap")
    fiber = sec.get("fiber")
    names = {v.name for v in variables}
    fib = None
    if fiber is not None:
        fib = frozenset(split_list(fiber)) if fiber.strip() != "none" else frozenset()
        unknown = fib - names
        if unknown:
            fl, fc = sec.where("fiber")
            raise ConfigError("fiber names an undeclared variable", fl, fc, sorted(unknown)[0])
    try:
        ring = GradedRing(tuple(variables), None if cap is None else parse_int(cap, *sec.where("cap")),
                          fiber=fib, name="custom")
        vol = sec.get("integrate")
        if vol is not None:
            sign, mono = ring.parse_monomial(vol)
            ring = GradedRing(ring.variables, ring.degree_cap, {mono: Fraction(sign)}, fib, name="custom")
    except (RingError, ValueError) as e:
        il, ic = sec.where("integrate" if sec.get("integrate") else "vars")
        raise ConfigError(str(e), il, ic) from None
    return ring


def _names(ring: GradedRing) -> dict:
    return {v.name: ring.var(v.name) for v in ring.variables}


def _element(ring: GradedRing, sec: Section, key: str) -> RingElement:
    line, col = sec.where(key)
    value = parse_expression(sec.get(key), _names(ring), line, col)
    return ring(value) if not isinstance(value, RingElement) else value


def _element_list(ring: GradedRing, sec: Section, key: str) -> list:
    raw = sec.get(key)
    if raw is None:
        return []
    line, col = sec.where(key)
    return [parse_expression(item, _names(ring), line, col) for item in split_list(raw)]


def _bundle_section(ring: GradedRing, sec: Section | None, kind: str, name: str,
                    weight: Scalar | None = None) -> EquivariantBundle | None:
    if sec is None:
        return None
    roots = _element_list(ring, sec, "roots")
    weights = _element_list(ring, sec, "weights") or None
    if weight is not None:
        weights = [weight] * len(roots)
    if weights is not None and len(weights) != len(roots):
        raise ConfigError("weights and roots differ in length", *sec.where("weights"))
    degree = 2
    for r in roots:
        if isinstance(r, RingElement) and r and not (r.is_homogeneous() and r.degree() == degree):
            line, col = sec.where("roots")
            raise ConfigError("degree mismatch: roots must have degree 2", line, col, str(r))
    try:
        if kind == COMPLEX:
            return complex_bundle(ring, roots, weights, name=name)
        return real_bundle(ring, roots, weights, name=name)
    except (BundleError, ValueError) as e:
        raise ConfigError(str(e), *sec.where("roots")) from None


def _symbol(cfg: JobConfig) -> SymbolDatum:
    complex_ = cfg.get("complex", "de_rham").replace("-", "_")
    if complex_ == "derham":
        complex_ = "de_rham"
    lift_raw = cfg.get("lift", "+")
    lifts = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    if lift_raw not in lifts:
        raise cfg.error("lift", "lift must be + or -")
    j = _int(cfg, "j", 0, minimum=0)
    try:
        return SymbolDatum(complex_, j=j, lift=lifts[lift_raw])
    except LefschetzError as e:
        raise cfg.error("complex", str(e)) from None


def _components(cfg: JobConfig) -> list[FixedComponentModel]:
    if cfg.builder == "universal":
        k = _int(cfg, "k", minimum=1)
        if k > 6:
            raise cfg.error("k", "k above 6 is not supported")
        return build_universal_example(k)
    ring = _ring_from_section(cfg.section("ring"))
    normals = []
    for sec in cfg.all_sections("normal"):
        raw = sec.get("theta")
        if raw is None:
            raise ConfigError("[normal] needs theta =", sec.line, 1)
        turns = parse_angle(raw, *sec.where("theta"))
        N = _bundle_section(ring, sec, COMPLEX, f"N({raw})", root_of_unity(turns))
        normals.append((turns, N))
    minus1 = _bundle_section(ring, cfg.section("minus1"), REAL, "N(-1)", -1)
    leaf = _bundle_section(ring, cfg.section("leaf"), REAL, "TF^h") or real_bundle(ring, [], name="TF^h")
    twist = _bundle_section(ring, cfg.section("twist"), COMPLEX, "twist")
    transverse = _bundle_section(ring, cfg.section("transverse"), REAL, "nu^h")
    mult = _int(cfg, "multiplicity", 1, minimum=1)
    try:
        comp = FixedComponentModel("C0", ring, leaf, tuple(normals), minus1, twist, transverse, (), mult)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return [comp]


def _default_kappa(components: list[FixedComponentModel], symbol: SymbolDatum) -> int:
    dens = [Fraction(t).denominator for c in components for t, _ in c.normal_theta]
    dens += [2 for c in components if c.normal_minus1 is not None]
    # twice the order of h, so spinor lifts are covered for every complex
    return 2 * (math.lcm(*dens) if dens else 1)


def _space(cfg: JobConfig) -> SpaceModel:
    b = cfg.builder
    try:
        if b == "cp":
            return build_cp(_int(cfg, "q", minimum=1))
        if b == "kp":
            if cfg.get("qm1") is not None:
                return build_kp(_int(cfg, "qm1", minimum=1))
            return build_kp(_int(cfg, "q", minimum=2) - 1)
        if b == "torus":
            return build_torus(_int(cfg, "k", minimum=1), fiber=cfg.kind != "genus")
        if b == "sphere-circle":
            return build_sphere_circle(_int(cfg, "q", minimum=1))
        if b == "point":
            return build_point()
        if b == "atiyah":
            s = _rational(cfg, "s")
            if s == 0:
                raise cfg.error("s", "Atiyah class must be nonzero")
            Z = build_atiyah_Z(s)
            return Z if cfg.kind == "genus" else product(Z, build_circle())
        if b == "trivial":
            rank = _int(cfg, "rank", minimum=2)
            if rank % 2:
                raise cfg.error("rank", "rank must be even")
            ring = build_circle().ring
            leaf = real_bundle(ring, [0] * (rank // 2), name="trivial")
            return SpaceModel("trivial", ring, None, 1, leaf_tangent=leaf, classes={"dvol": ring.var("theta")})
        if b == "custom":
            return _custom_space(cfg)
    except (ValueError, RingError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from None
    raise ConfigError(f"unknown builder {b!r}")


def _custom_space(cfg: JobConfig) -> SpaceModel:
    ring = _ring_from_section(cfg.section("ring"))
    tangent = _tangent_section(ring, cfg.section("tangent"))
    leaf_sec = cfg.section("leaf")
    leaf = None
    if leaf_sec is not None:
        leaf = _tangent_section(ring, leaf_sec)
    dims = ring.dimension
    return SpaceModel("custom", ring, tangent, dims, leaf_tangent=leaf)


def _tangent_section(ring: GradedRing, sec: Section | None):
    if sec is None:
        return None
    kind = sec.get("kind", REAL)
    if kind not in (REAL, COMPLEX):
        raise ConfigError("kind must be real or complex", *sec.where("kind"), kind)
    if sec.get("total") is not None:
        total = _element(ring, sec, "total")
        rank_raw = sec.get("rank")
        if rank_raw is None:
            raise ConfigError("a total class needs rank =", sec.line, 1)
        try:
            return TotalClassBundle(kind, total, parse_int(rank_raw, *sec.where("rank")), "custom")
        except (BundleError, ValueError) as e:
            raise ConfigError(str(e), *sec.where("total"), sec.get("total")) from None
    return _bundle_section(ring, sec, kind, "custom")


def _check_params(cfg: JobConfig):
    allowed = PARAMS[cfg.kind] | COMMON
    for key, entry in cfg.params.items():
        if key not in allowed:
            raise ConfigError(f"unknown parameter {key!r} for a {cfg.kind} job", entry.line or None,
                              entry.col or None, key)
    if cfg.builder not in BUILDERS[cfg.kind]:
        what = "identity" if cfg.kind == "verify" else "builder"
        raise ConfigError(f"unknown {what} {cfg.builder!r}; expected one of {', '.join(sorted(BUILDERS[cfg.kind]))}",
                          token=cfg.builder)


# ---------------------------------------------------------------------------
# jobs
# ---------------------------------------------------------------------------

def _job_genus(cfg: JobConfig, opts) -> tuple[dict, bool]:
    name = cfg.get("genus", "ahat")
    if name not in ("ahat", "todd", "lgenus"):
        raise cfg.error("genus", "genus must be ahat, todd or lgenus")
    M = _space(cfg)
    ring = M.ring
    order = opts.truncation or max(ring.degree_cap, 1)
    if order < ring.degree_cap:
        raise ConfigError(f"truncation {order} is below the ring degree cap {ring.degree_cap}")
    f = named_series(name, order)
    if name == "todd":
        if cfg.builder != "cp":
            raise cfg.error("genus", "the Todd genus is only wired for cp")
        a = ring.var("alpha")
        E = complex_bundle(ring, [a] * (M.dimension // 2 + 1), name="T CP + C")
        cls = genus_of_roots(f, E)
    elif isinstance(M.tangent, TotalClassBundle):
        cls = genus_of_total_class(f, M.tangent)
    else:
        cls = genus_of_roots(f, M.tangent)
    value = integrate(cls)
    return {"space": M.name, "genus": name, "class": str(cls), "value": exact(value),
            "truncation": order}, True


def _job_lefschetz(cfg: JobConfig, opts) -> tuple[dict, bool]:
    comps = _components(cfg)
    symbol = _symbol(cfg)
    kappa = _int(cfg, "kappa", _default_kappa(comps, symbol), minimum=1)
    current = cfg.get("current", "fundamental")
    route = cfg.get("route", "all")
    routes = {"strict": lefschetz_strict, "general": lefschetz_general, "basic3": lefschetz_basic3}
    if route == "all":
        chosen = [r for r in routes if r != "strict" or all(c.is_strict for c in comps)]
    elif route in routes:
        chosen = [route]
    else:
        raise cfg.error("route", "route must be strict, general, basic3 or all")
    try:
        if current not in ("fundamental",):
            for c in comps:
                c.current(current)
        reports = {r: routes[r](comps, symbol, current, kappa) for r in chosen}
    except (RingError, LefschetzError, BundleError) as e:
        raise JobFailure(f"lefschetz {cfg.builder}: {e}") from None
    values = [rep.value for rep in reports.values()]
    agree = all(v == values[0] for v in values)
    value = values[0]
    verdict = is_cyclotomic_integer(value, kappa)
    result = {
        "complex": symbol.label,
        "current": current,
        "value": exact(value),
        "routes": {r: rep.to_json() for r, rep in reports.items()},
        "routes_agree": agree,
        "integrality": {"kappa": kappa, "verdict": verdict},
    }
    return result, agree and verdict


def _job_integrality(cfg: JobConfig, opts) -> tuple[dict, bool]:
    comps = _components(cfg)
    symbol = _symbol(cfg)
    kappa = _int(cfg, "kappa", _default_kappa(comps, symbol), minimum=1)
    ehat = _bundle_section(comps[0].ring, cfg.section("ehat"), COMPLEX, "E_hat")
    try:
        value, verdict = integrality_characteristic_number(comps, symbol, ehat, kappa)
    except (RingError, LefschetzError, BundleError) as e:
        raise JobFailure(f"integrality {cfg.builder}: {e}") from None
    return {"complex": symbol.label, "value": exact(value), "kappa": kappa, "verdict": verdict}, verdict


def _rigidity_model(cfg: JobConfig) -> tuple[SpaceModel, str]:
    M = _space(cfg)
    if cfg.builder in ("sphere-circle", "torus"):
        # the whole manifold is one leaf: fiber = everything, base = point
        ring = M.ring.with_fiber([v.name for v in M.ring.variables])
        from .spaces import rehome_bundle
        M = SpaceModel(M.name, ring, None, M.dimension, leaf_tangent=rehome_bundle(M.tangent, ring))
        return M, "fundamental"
    if M.leaf_tangent is None:
        raise ConfigError("rigidity needs a [leaf] section")
    return M, "dvol" if "dvol" in M.classes else "fundamental"


def _job_rigidity(cfg: JobConfig, opts) -> tuple[dict, bool]:
    M, default_current = _rigidity_model(cfg)
    current = cfg.get("current", default_current)
    try:
        rep = rigidity_obstruction(M, current)
    except (RingError, LefschetzError, BundleError) as e:
        raise JobFailure(f"rigidity {cfg.builder}: {e}") from None
    body = rep.to_json()
    body.pop("value_text")
    return {"space": M.name, **body, "value": exact(rep.value)}, True


def _job_bott_taubes(cfg: JobConfig, opts) -> tuple[dict, bool]:
    M = _space(cfg)
    if cfg.builder == "atiyah" or cfg.builder == "trivial":
        default_current = "dvol"
    else:
        default_current = "fundamental"
    n = _int(cfg, "n", 0, minimum=0)
    Q = _int(cfg, "Q", n, minimum=n)
    spin = _bool(cfg, "spin")
    current = cfg.get("current", default_current)
    try:
        value = bott_taubes_value(M, n, current, Q, spin)
    except (RingError, LefschetzError, BundleError) as e:
        raise JobFailure(f"bott-taubes {cfg.builder}: {e}") from None
    return {"space": M.name, "n": n, "Q": Q, "spin": spin, "current": current, "value": exact(value)}, True


def _job_verify(cfg: JobConfig, opts) -> tuple[dict, bool]:
    name = cfg.builder
    if name == "coth-numeric":
        n = _int(cfg, "n", 4, minimum=1)
        res = verify_coth_numeric(n, points=_int(cfg, "points", 100, minimum=1), seed=_int(cfg, "seed", 0))
        return res.to_json(), res.verdict
    fn, param = VERIFIERS[name]
    defaults = {"n": 4, "T": 19, "N": 30, "q_max": 12, "k_max": 3}
    value = _int(cfg, param, defaults[param], minimum=1)
    if opts.max_n is not None:
        value = opts.max_n
    if param == "T" and opts.truncation is not None:
        value = opts.truncation
    res = fn(value)
    return res.to_json(), res.verdict


JOBS = {
    "genus": _job_genus,
    "lefschetz": _job_lefschetz,
    "integrality": _job_integrality,
    "rigidity": _job_rigidity,
    "bott-taubes": _job_bott_taubes,
    "verify": _job_verify,
}


class _Opts:
    def __init__(self, truncation: int | None = None, max_n: int | None = None):
        self.truncation = truncation
        self.max_n = max_n


def run_job(cfg: JobConfig, truncation: int | None = None, max_n: int | None = None) -> tuple[dict, int]:
    """Run one validated job; returns (report, exit code)."""
    _check_params(cfg)
    opts = _Opts(truncation, max_n)
    if truncation is None and cfg.get("truncation") is not None:
        opts.truncation = _int(cfg, "truncation", minimum=0)
    result, ok = JOBS[cfg.kind](cfg, opts)
    report = {"schema_version": SCHEMA_VERSION, "job": cfg.normalized(), "ok": ok, "result": result}
    return report, EXIT_OK if ok else EXIT_FAIL


def to_json_text(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        if set(value) == {"exact", "text"}:
            rows.append((prefix, value["text"], _approx_from_record(value["exact"])))
            return
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value, ensure_ascii=False) if not isinstance(value, str) else value, None))


def _approx_from_record(rec) -> str:
    from .arith import scalar_from_record
    return approx_text(scalar_from_record(rec))


def render_table(report: dict) -> str:
    job = report["job"]
    head = f"{job['kind']} {job['builder']} " + " ".join(f"{k}={v}" for k, v in job["params"].items())
    rows: list = []
    _flatten("", report["result"], rows)
    rows = [r for r in rows if not r[0].startswith("routes.")] if "routes" in report["result"] else rows
    width = max((len(r[0]) for r in rows), default=0)
    lines = [head.rstrip(), "-" * len(head.rstrip())]
    for key, text, approx in rows:
        line = f"{key.ljust(width)}  {text}"
        if approx is not None and approx != text:
            line += f"   (approx {approx})"
        lines.append(line)
    if "routes" in report["result"]:
        for r, rep in sorted(report["result"]["routes"].items()):
            from .arith import scalar_from_record
            lines.append(f"{('route ' + r).ljust(width)}  {scalar_text(scalar_from_record(rep['value']))}")
    lines.append(f"{'status'.ljust(width)}  {'ok' if report['ok'] else 'FAILED'}")
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str):
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, target)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="job config file")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    common.add_argument("--truncation", type=int, metavar="N", help="series truncation order")
    common.add_argument("--max-n", type=int, metavar="N", help="upper parameter for verify jobs")
    p = argparse.ArgumentParser(prog="leafix", description="Characteristic numbers and fixed-point formulas.")
    sub = p.add_subparsers(dest="command", required=True)
    for kind in ("genus", "lefschetz", "rigidity", "verify", "bott-taubes", "integrality"):
        sp = sub.add_parser(kind, parents=[common], help=f"run a {kind} job")
        sp.add_argument("words", nargs="*", help="builder and key=value parameters")
    bp = sub.add_parser("batch", parents=[common], help="run every *.cfg in a directory")
    bp.add_argument("directory")
    return p


def _load(kind: str, words: list[str], config: str | None) -> JobConfig:
    text = ""
    if config is not None:
        try:
            text = Path(config).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config: {e.strerror}", token=config) from None
    cfg_words = list(words)
    pre = parse_config(text, []) if text.strip() and _has_kind(text) else None
    if pre is None:
        cfg_words = [kind] + cfg_words
    elif pre.kind != kind:
        raise ConfigError(f"config is a {pre.kind} job, not {kind}", token=pre.kind)
    return parse_config(text, cfg_words)


def _has_kind(text: str) -> bool:
    try:
        parse_config(text)
        return True
    except ConfigError as e:
        return "no job kind" not in e.message


def run_file(path: Path, truncation=None, max_n=None) -> tuple[dict, int]:
    cfg = parse_config(path.read_text(encoding="utf-8"))
    return run_job(cfg, truncation, max_n)


def _emit(report: dict, json_path: str | None, out):
    if json_path == "-":
        out.write(to_json_text(report))
    else:
        out.write(render_table(report))
        if json_path:
            _write_atomic(json_path, to_json_text(report))


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(argv)
    if args.command == "batch":
        return _batch(args, out, err)
    try:
        cfg = _load(args.command, args.words, args.config)
        report, code = run_job(cfg, args.truncation, args.max_n)
    except ConfigError as e:
        err.write(f"{e}\n")
        return EXIT_CONFIG
    except JobFailure as e:
        err.write(f"error: {e}\n")
        return EXIT_FAIL
    _emit(report, args.json, out)
    return code


def _run_one(path: Path, truncation, max_n) -> tuple[str, dict | None, int, str]:
    try:
        report, code = run_file(path, truncation, max_n)
        return path.name, report, code, ""
    except ConfigError as e:
        return path.name, None, EXIT_CONFIG, str(e)
    except JobFailure as e:
        return path.name, None, EXIT_FAIL, f"error: {e}"


def _batch(args, out, err) -> int:
    from concurrent.futures import ThreadPoolExecutor
    directory = Path(args.directory)
    files = sorted(directory.glob("*.cfg"))
    if not files:
        err.write(f"config error: no *.cfg files in {directory}\n")
        return EXIT_CONFIG
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda p: _run_one(p, args.truncation, args.max_n), files))
    worst = EXIT_OK
    summary = []
    for name, report, code, message in results:
        worst = max(worst, code)
        summary.append({"file": name, "exit": code, "report": report, "error": message or None})
        status = "ok" if code == EXIT_OK else ("FAILED" if code == EXIT_FAIL else "CONFIG ERROR")
        out.write(f"{name}: {status}{'  ' + message if message else ''}\n")
        if report is not None and args.json and args.json != "-":
            _write_atomic(str(Path(args.json) / (Path(name).stem + ".json")), to_json_text(report))
    if args.json == "-":
        out.write(to_json_text({"schema_version": SCHEMA_VERSION, "batch": summary}))
    return worst


if __name__ == "__main__":
    sys.exit(main())
