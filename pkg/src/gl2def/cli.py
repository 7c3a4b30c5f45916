"""Command-line entry point.

Every command produces a JSON payload wrapped in a versioned envelope.
Payloads are normalised through a JSON round trip before printing or
caching, so a cache hit prints exactly what a recomputation would.

Exit status: 0 success, 1 verification failure, 2 usage error,
3 degree cap exhausted before a lattice stabilised.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__

SCHEMA = "gl2def/1"
MAX_Q = 128
CACHE_ENV = "GL2DEF_CACHE"

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
_EXIT = {"ok": EXIT_OK, "failed": EXIT_FAILED, "cap-exhausted": EXIT_CAP}


class UsageError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str, ensure_ascii=True)


def normalise(obj):
    return json.loads(json.dumps(obj, sort_keys=True, default=str))


# ---------------------------------------------------------------------------
# validation


def check_q(q: int) -> None:
    from .finite_field import prime_power

    if q > MAX_Q:
        raise UsageError(f"q = {q} exceeds the configured bound {MAX_Q}")
    try:
        prime_power(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def check_ql(q: int, l: int) -> None:
    from .modl import ModlError, check_q_l

    check_q(q)
    try:
        check_q_l(q, l)
    except ModlError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# cache


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "gl2def"


def cache_key(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, "params": params, "version": __version__}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_load(key: str):
    path = cache_dir() / f"{key}.json"
    try:
        entry = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if entry.get("key") != key or entry.get("provenance", {}).get("version") != __version__:
        return None
    return entry["payload"]


def cache_store(key: str, payload) -> None:
    d = cache_dir()
    try:
        d.mkdir(parents=True, exist_ok=True)
        entry = {
            "key": key,
            "payload": payload,
            "provenance": {"version": __version__, "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
        }
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(entry))
        os.replace(tmp, d / f"{key}.json")
    except OSError:
        pass  # a read-only cache location only costs recomputation


# ---------------------------------------------------------------------------
# commands: each returns (status, result)


def _generator(q: int) -> dict:
    from .fq_reps import fq_model

    return fq_model(q).to_json()


def cmd_chartable(a) -> tuple[str, dict]:
    from .fq_reps import chartable_json

    check_q(a.q)
    out = chartable_json(a.q)
    out["class_count"] = len(out["classes"])
    out["irreducible_count"] = len(out["characters"])
    return "ok", out


def cmd_modl(a) -> tuple[str, dict]:
    from .modl import modl_classify

    check_ql(a.q, a.l)
    out = modl_classify(a.q, a.l).to_json()
    out["generator"] = _generator(a.q)
    bad = [k for k, v in out["checks"].items() if v is False]
    return ("failed" if bad else "ok"), out


def cmd_defring(a) -> tuple[str, dict]:
    from .defring import defring_report
    from .modl import ModlError

    check_ql(a.q, a.l)
    try:
        rep = defring_report(a.q, a.l, a.theta, verify=a.verify, cap=a.max_degree)
    except ModlError as exc:
        raise UsageError(str(exc)) from None
    out = rep.to_json()
    out["generator"] = _generator(a.q)
    if not rep.flags["lattice_stabilized"].ok:
        return "cap-exhausted", out
    return ("failed" if rep.failed else "ok"), out


def _pair_char(a):
    from .local_chars import LocalCharError, TameChar, parse_wild, quadratic

    try:
        E = quadratic(a.q, a.ext)
        chi = TameChar.from_exponents(E, a.l, a.unit_exp, a.unif, parse_wild(a.wild))
    except (LocalCharError, ValueError, KeyError) as exc:
        raise UsageError(f"bad character data: {exc}") from None
    return E, chi


def _type(a):
    from .types_transport import TransportError, pair_to_type, primitive_type

    check_ql(a.q, a.l)
    try:
        if getattr(a, "pair", None) == "primitive":
            return primitive_type(a.q, a.l, a.unit_exp, a.unif, a.level)
        return pair_to_type(*_pair_char(a))
    except TransportError as exc:
        raise UsageError(str(exc)) from None


def cmd_pair(a) -> tuple[str, dict]:
    from .types_transport import type_to_pi

    t = _type(a)
    return "ok", {"type": t.to_json(), "pi": type_to_pi(t).to_json(), "generator": _generator(a.q)}


def cmd_transport(a) -> tuple[str, dict]:
    from .coeff_rings import CoeffRingError
    from .local_chars import coefficient_for, restrict_to_base
    from .types_transport import case3_baseline_check, check_ramified_transport, check_transport

    t = _type(a)
    reports = []
    for spec in a.ring:
        try:
            kind, k = _ring_spec(spec)
            A = coefficient_for(kind, a.l, t.chi, restrict_to_base(t.chi), a=k)
        except CoeffRingError as exc:
            raise UsageError(str(exc)) from None
        rep = {"ring": A.name, "transport": check_transport(t, A).to_json()}
        if t.case == 3:
            rep["baseline_change"] = case3_baseline_check(t, A)
        if t.E.role == "E-ram":
            rep["central_parametrisation"] = check_ramified_transport(t, A).to_json()
        reports.append(rep)
    ok = all(r["transport"]["ok"] for r in reports)
    ok = ok and all(r.get("baseline_change", {"ok": True})["ok"] for r in reports)
    ok = ok and all(r.get("central_parametrisation", {"ok": True})["ok"] for r in reports)
    return ("ok" if ok else "failed"), {"type": t.to_json(), "reports": reports}


def _ring_spec(spec: str) -> tuple[str, int]:
    from .coeff_rings import CoeffRingError

    s = spec.replace(" ", "")
    if s in ("dual", "k[eps]"):
        return "dual", 1
    if s in ("k", "O/l"):
        return "O", 1
    if s.startswith("O/l^") and s[4:].isdigit():
        return "O", int(s[4:])
    raise CoeffRingError(f"unsupported coefficient ring {spec!r}")


def cmd_langlands(a) -> tuple[str, dict]:
    from .coeff_rings import CoeffRingError
    from .galois import GaloisError, langlands_match
    from .types_transport import type_to_pi

    if a.pair == "level0":
        if a.theta is None:
            raise UsageError("--pair level0 needs --theta")
        if a.wild:
            raise UsageError("level-0 pairs carry no wild part")
        a.ext, a.unit_exp = "unramified", a.theta
    elif a.unit_exp is None:
        raise UsageError(f"--pair {a.pair} needs --unit-exp")
    if a.pair == "unramified":
        a.ext = "unramified"
    if a.pair == "ramified":
        a.ext = "ramified"
        if not a.wild:
            raise UsageError("ramified pairs need --wild level=<odd n>")
    t = _type(a)
    try:
        kind, k = _ring_spec(a.ring)
        rep = langlands_match(type_to_pi(t), kind=kind, a=k, uniqueness=not a.skip_uniqueness)
    except (GaloisError, CoeffRingError) as exc:
        raise UsageError(str(exc)) from None
    out = rep.to_json()
    out["generator"] = _generator(a.q)
    return ("ok" if rep.ok() else "failed"), out


def cmd_verify(a) -> tuple[str, dict]:
    from .verify import verify_suite

    out = verify_suite(a.scope, a.max_q, a.jobs)
    return ("failed" if out["counts"]["failed"] else "ok"), out


# ---------------------------------------------------------------------------
# parser


def _add_pair_args(p, ext_required: bool = True) -> None:
    p.add_argument("--ext", choices=["unramified", "ramified"], required=ext_required)
    p.add_argument("--unit-exp", type=int, required=ext_required, help="exponent against zeta_N', N' the prime-to-l part of #k_E^x")
    p.add_argument("--unif", default="0", help="value at the uniformizer, in Q/Z (e.g. 1/4)")
    p.add_argument("--wild", default=None, help="opaque wild part: level=<n>[,id=..][,ftn=0|1]")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent jobs")
    common.add_argument("--max-degree", type=int, default=None, help="degree cap for lattice saturation")
    common.add_argument("--no-cache", action="store_true", help="recompute and do not touch the cache")

    ap = argparse.ArgumentParser(prog="gl2def", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({SCHEMA})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chartable", parents=[common], help="character table of GL_2(F_q)")
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("modl", parents=[common], help="mod-l reductions of cuspidal representations")
    p.add_argument("q", type=int)
    p.add_argument("l", type=int)
    p.set_defaults(func=cmd_modl)

    p = sub.add_parser("defring", parents=[common], help="deformation ring of a cuspidal mod-l representation")
    p.add_argument("q", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--theta", type=int, required=True, help="exponent of theta against g2")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_defring)

    p = sub.add_parser("pair", parents=[common], help="type and representation attached to an admissible pair")
    p.add_argument("q", type=int)
    p.add_argument("l", type=int)
    _add_pair_args(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("transport", parents=[common], help="check the transport bijection by enumeration")
    p.add_argument("q", type=int)
    p.add_argument("l", type=int)
    _add_pair_args(p)
    p.add_argument("--ring", action="append", default=None, help="dual, O/l or O/l^2 (repeatable)")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("langlands", parents=[common], help="match representation and Galois deformation rings")
    p.add_argument("q", type=int)
    p.add_argument("l", type=int)
    p.add_argument("--pair", choices=["level0", "unramified", "ramified", "primitive"], default="level0")
    p.add_argument("--theta", type=int, default=None, help="level-0 pairs: exponent of the unit part")
    _add_pair_args(p, ext_required=False)
    p.add_argument("--level", type=int, default=1, help="primitive shape: odd wild level")
    p.add_argument("--ring", default="O/l^2")
    p.add_argument("--skip-uniqueness", action="store_true")
    p.set_defaults(func=cmd_langlands)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("scope", choices=["fq", "defring", "local", "langlands", "all"])
    p.add_argument("--max-q", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return ap


_PARAM_SKIP = {"format", "jobs", "no_cache", "func", "command"}


def canonical_params(a) -> dict:
    return {k: v for k, v in sorted(vars(a).items()) if k not in _PARAM_SKIP}


# ---------------------------------------------------------------------------
# text rendering


def render_text(env: dict) -> str:
    res = env["result"]
    lines = [f"{env['command']} {json.dumps(env['params'], sort_keys=True)}", f"status: {env['status']}"]
    if "generator" in res:
        g = res["generator"]
        lines.append(f"generator: g2 = x in F_{g['p']}[x]/({g['fq2_modulus']}), g = {g['g']}")
    if env["command"] == "verify":
        c = res["counts"]
        lines.append(f"verified {c['verified']}  failed {c['failed']}  skipped {c['skipped']}")
        for r in res["checks"]:
            lines.append(f"  [{r['status']:8}] {r['suite']}/{r['check']} {json.dumps(r['params'], sort_keys=True)}")
    elif env["command"] == "chartable":
        lines.append(f"{res['class_count']} classes, {res['irreducible_count']} irreducibles")
        for ch in res["characters"]:
            lines.append(f"  {ch['label']}{tuple(ch['params'])} dim {ch['dim']}")
    else:
        for key in ("flags", "checks"):
            for k, v in sorted(res.get(key, {}).items()):
                v = v.get("status") if isinstance(v, dict) else v
                lines.append(f"  {k}: {v}")
        for r in res.get("reports", []):
            lines.append(f"  {r['ring']}: transport ok={r['transport']['ok']}")
        for key in ("points", "tangent_dim"):
            if key in res:
                lines.append(f"{key}: {res[key]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if a.command == "transport" and not a.ring:
        a.ring = ["dual", "O/l", "O/l^2"]
    if a.jobs < 1 or (a.max_degree is not None and a.max_degree < 1):
        stderr.write("error: --jobs and --max-degree must be positive\n")
        return EXIT_USAGE
    params = canonical_params(a)
    key = cache_key(a.command, params)
    env = cache_load(key) if not a.no_cache else None
    if env is None:
        try:
            status, result = a.func(a)
        except UsageError as exc:
            stderr.write(f"error: {exc}\n")
            return EXIT_USAGE
        env = normalise({
            "schema": SCHEMA,
            "version": __version__,
            "command": a.command,
            "params": params,
            "status": status,
            "result": result,
        })
        if not a.no_cache:
            cache_store(key, env)
    stdout.write(dumps(env) + "\n" if a.format == "json" else render_text(env))
    if env["status"] == "failed" and a.format == "json":
        stderr.write("verification failed; see the failed entries in the report\n")
    return _EXIT[env["status"]]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
