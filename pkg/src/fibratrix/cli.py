"""Command-line front end.

    fibratrix <command> --input job.json [--point "a:b:c:d"] [--nu N] ...

The job document (JSON, or flat ``key = value`` lines) names the ring, the
field and the four polynomials. A JSON report goes to stdout (or
``--output``); a short human-readable summary goes to stderr.

Exit codes: 0 success, 2 parse error, 3 validation failure, 4 math error.
"""

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import FittingError, MathError, ParameterizationError
from .fibers import (classify, corank_at, fiber_curve, low_degree_sat_elements,
                     membership, parse_point, pullback_classify, unique_preimage)
from .fields import field_from_spec
from .fitting import MinorRequest, fitting_generators, pullback_fitting
from .matrep import (DEFAULT_SEED, Parameterization, build_matrix_rep, compute_nu0,
                     default_index, random_source_point, validate)
from .poly import PolySyntaxError, format_poly, ring_from_kind

COMMANDS = ("validate", "matrix", "nu0", "membership", "fiber", "preimage", "fiber-curve",
            "sat-elements", "stratify", "minors", "pullback-minors")

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_MATH = 0, 2, 3, 4

DEFAULT_SAMPLES = 20


class JobError(ValueError):
    """Malformed job document or arguments (exit code 2)."""


# ---------------------------------------------------------------------------
# job documents

def parse_job_text(text):
    """Parse a JSON or ``key = value`` job document into a plain dict."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise JobError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise JobError("job document must be a JSON object")
        return doc
    doc = {}
    args = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise JobError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split(sep, 1))
        key = key.lower().replace("-", "_")
        if key in ("ring", "field", "command"):
            doc[key] = value
        elif key == "polynomials":
            doc["polynomials"] = [p.strip() for p in value.split(",")]
        elif key in ("f0", "f1", "f2", "f3"):
            doc.setdefault("_f", {})[int(key[1])] = value
        elif key == "points":
            args["points"] = [p.strip() for p in value.split(",") if p.strip()]
        else:
            args[key] = value
    if "_f" in doc:
        fs = doc.pop("_f")
        doc["polynomials"] = [fs.get(i, "") for i in range(4)]
    doc["args"] = args
    return doc


def _int_or_none(x, name):
    if x is None:
        return None
    try:
        return int(x)
    except (TypeError, ValueError):
        raise JobError(f"{name} must be an integer, got {x!r}") from None


def build_job(doc, ns):
    """Merge the document with command-line overrides."""
    args = dict(doc.get("args") or {})
    for key in ("point", "nu", "nu1", "nu2", "fitting_index", "limit", "seed", "samples"):
        v = getattr(ns, key, None)
        if v is not None:
            args[key] = v
    if getattr(ns, "points", None):
        args["points"] = ns.points
    command = ns.command or doc.get("command")
    if command not in COMMANDS:
        raise JobError(f"unknown command {command!r}")
    ring = doc.get("ring", "triangular")
    field = ns.field or doc.get("field", "q")
    polys = doc.get("polynomials")
    if not isinstance(polys, list) or len(polys) != 4:
        raise JobError("the job needs exactly four polynomials")
    return {"command": command, "ring": ring, "field": str(field),
            "polynomials": [str(p) for p in polys], "args": args}


def make_parameterization(job):
    try:
        ring = ring_from_kind(job["ring"])
        if ring.kind == "implicit":
            raise ValueError("ring must be 'triangular' or 'tensor'")
        field = field_from_spec(job["field"])
    except ValueError as exc:
        raise JobError(str(exc)) from None
    return Parameterization.from_strings(job["polynomials"], ring, field)


def _index_arg(phi, args, default):
    nu, nu1, nu2 = (_int_or_none(args.get(k), k) for k in ("nu", "nu1", "nu2"))
    if phi.is_tensor:
        if nu1 is None and nu2 is None:
            return default
        if nu1 is None or nu2 is None:
            raise JobError("tensor parameterizations need both --nu1 and --nu2")
        if nu1 < 0 or nu2 < 0:
            raise JobError("indices must be nonnegative")
        return (nu1, nu2)
    if nu1 is not None or nu2 is not None:
        raise JobError("--nu1/--nu2 apply to tensor parameterizations only")
    if nu is None:
        return default
    if nu < 0:
        raise JobError("--nu must be nonnegative")
    return nu


def _target_point(phi, args):
    text = args.get("point")
    if text is None:
        raise JobError("this command needs --point")
    try:
        return parse_point(str(text), phi.field, arity=4)
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(str(exc)) from None


def _source_point(phi, text):
    try:
        if phi.is_tensor:
            return parse_point(str(text), phi.field, arity=4, split=2)
        return parse_point(str(text), phi.field, arity=3)
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands

def _label(ring, e):
    parts = [n if a == 1 else f"{n}^{a}" for n, a in zip(ring.names, e) if a]
    return "*".join(parts) or "1"


def _nu_json(nu):
    return list(nu) if isinstance(nu, tuple) else nu


def _sat_json(phi):
    info = compute_nu0(phi)
    return {"indeg_sat": info.indeg_sat, "nu0": _nu_json(info.nu0),
            "base_locus_degree": info.base_locus_degree,
            "default_index": _nu_json(default_index(phi))}


def cmd_validate(phi, args, warnings):
    return [validate(phi).as_dict()]


def cmd_matrix(phi, args, warnings):
    nu = _index_arg(phi, args, default_index(phi))
    rep = build_matrix_rep(phi, nu)
    if rep.below_threshold:
        warnings.append(f"index {nu} is below the threshold; matrix carries no guarantees")
    return [{
        "nu": _nu_json(nu), "rows": rep.rows, "cols": rep.cols,
        "below_threshold": rep.below_threshold,
        "row_labels": [_label(phi.ring, e) for e in rep.row_labels],
        "coefficients": {f"A{k}": a.to_strings() for k, a in enumerate(rep.A)},
        "forms": [[format_poly(x) for x in row] for row in rep.linear_forms()],
    }]


def cmd_nu0(phi, args, warnings):
    return [_sat_json(phi)]


def cmd_membership(phi, args, warnings):
    P = _target_point(phi, args)
    nu = default_index(phi)
    r = corank_at(phi, nu, P)
    return [{"point": str(P), "on_surface": membership(phi, P), "nu": _nu_json(nu),
             "corank": r}]


def cmd_fiber(phi, args, warnings):
    P = _target_point(phi, args)
    nu = None if phi.is_tensor else _index_arg(phi, args, None)
    rep = classify(phi, P, nu)
    return [{"point": str(P), **rep.as_dict()}]


def cmd_preimage(phi, args, warnings):
    P = _target_point(phi, args)
    s = unique_preimage(phi, P)
    return [{"point": str(P), "preimage": str(s)}]


def cmd_fiber_curve(phi, args, warnings):
    P = _target_point(phi, args)
    h = fiber_curve(phi, P)
    return [{"point": str(P), "curve_equation": format_poly(h), "constant": h.is_constant()}]


def cmd_sat_elements(phi, args, warnings):
    if phi.is_tensor:
        raise JobError("sat-elements is only available for triangular parameterizations")
    return [low_degree_sat_elements(phi).as_dict()]


def _stratify_one(phi, s):
    try:
        P, rep = pullback_classify(phi, s)
    except MathError as exc:
        return {"source": str(s), "error": str(exc)}
    return {"source": str(s), "image": str(P), **rep.as_dict()}


_WORKER_PHI = {}


def _stratify_worker(payload):
    key, s = payload
    phi = _WORKER_PHI.get(key)
    if phi is None:
        ring, field, polys = key
        phi = _WORKER_PHI[key] = make_parameterization(
            {"ring": ring, "field": field, "polynomials": list(polys)})
    return _stratify_one(phi, s)


def cmd_stratify(phi, args, warnings, job=None, jobs=1):
    raw = args.get("points")
    if raw:
        if isinstance(raw, str):
            raw = [p for p in raw.split(",") if p.strip()]
        points = [_source_point(phi, p) for p in raw]
    else:
        n = _int_or_none(args.get("samples"), "samples") or DEFAULT_SAMPLES
        seed = _int_or_none(args.get("seed"), "seed")
        rng = random.Random(DEFAULT_SEED if seed is None else seed)
        points = [random_source_point(phi, rng) for _ in range(n)]
    if jobs > 1 and job is not None and len(points) > 1:
        key = (job["ring"], job["field"], tuple(job["polynomials"]))
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            # map preserves input order
            return list(ex.map(_stratify_worker, [(key, s) for s in points]))
    return [_stratify_one(phi, s) for s in points]


def _minor_request(phi, args):
    nu = _index_arg(phi, args, default_index(phi))
    i = _int_or_none(args.get("fitting_index"), "fitting_index")
    if i is None:
        i = 0
    limit = _int_or_none(args.get("limit"), "limit")
    seed = _int_or_none(args.get("seed"), "seed")
    try:
        req = MinorRequest(build_matrix_rep(phi, nu), i, limit,
                           DEFAULT_SEED if seed is None else seed)
    except ValueError as exc:
        raise JobError(str(exc)) from None
    return nu, req


def cmd_minors(phi, args, warnings):
    nu, req = _minor_request(phi, args)
    res = fitting_generators(req)
    return [{"nu": _nu_json(nu), "fitting_index": req.fitting_index, **res.as_dict()}]


def cmd_pullback_minors(phi, args, warnings):
    nu, req = _minor_request(phi, args)
    res = pullback_fitting(phi, req)
    return [{"nu": _nu_json(nu), "fitting_index": req.fitting_index, **res.as_dict()}]


HANDLERS = {
    "validate": cmd_validate, "matrix": cmd_matrix, "nu0": cmd_nu0,
    "membership": cmd_membership, "fiber": cmd_fiber, "preimage": cmd_preimage,
    "fiber-curve": cmd_fiber_curve, "sat-elements": cmd_sat_elements,
    "stratify": cmd_stratify, "minors": cmd_minors, "pullback-minors": cmd_pullback_minors,
}


# ---------------------------------------------------------------------------
# driver

def run(job, check=True, jobs=1, timing=True):
    """Execute a job dict. Returns ``(report, exit_code)``; never raises for
    malformed polynomials, failed validation or undefined operations."""
    t0 = time.perf_counter()
    report = {"command": job.get("command"), "input_echo": job, "nu0": None,
              "results": [], "warnings": [], "timing_ms": None}
    code = EXIT_OK
    try:
        phi = make_parameterization(job)
        if check or job["command"] == "validate":
            val = validate(phi)
            report["warnings"].extend(val.warnings)
            if not val.ok:
                report["results"] = [val.as_dict()]
                report["error"] = {"type": "validation", "message": "hypothesis checks failed"}
                code = EXIT_VALIDATION
        if code == EXIT_OK:
            report["nu0"] = _sat_json(phi)
            handler = HANDLERS[job["command"]]
            if job["command"] == "stratify":
                results = handler(phi, job["args"], report["warnings"], job=job, jobs=jobs)
            else:
                results = handler(phi, job["args"], report["warnings"])
            report["results"] = results
            for r in results:
                report["warnings"].extend(r.get("warnings", []) if isinstance(r, dict) else [])
    except (JobError, PolySyntaxError, ParameterizationError) as exc:
        report["error"] = {"type": "parse", "message": str(exc)}
        code = EXIT_PARSE
    except (MathError, FittingError) as exc:
        report["error"] = {"type": "math", "message": str(exc)}
        code = EXIT_MATH
    # de-duplicate, keep first occurrence order
    report["warnings"] = list(dict.fromkeys(report["warnings"]))
    if timing:
        report["timing_ms"] = int((time.perf_counter() - t0) * 1000)
    return report, code


def summarize(report):
    lines = [f"command: {report['command']}"]
    if report.get("nu0"):
        lines.append(f"nu0: {report['nu0']['nu0']} (working index {report['nu0']['default_index']})")
    if "error" in report:
        lines.append(f"error ({report['error']['type']}): {report['error']['message']}")
    for r in report["results"]:
        if not isinstance(r, dict):
            continue
        if "kind" in r:
            head = r.get("image") or r.get("point")
            extra = ""
            if r["kind"] == "finite":
                extra = f" degree {r['degree']}"
            elif r["kind"] == "curve":
                extra = (f" bidegree {r['bidegree']}" if "bidegree" in r
                         else f" degree {r['curve_degree']}, residual {r['residual_degree']}")
                extra += f", h = {r['curve_equation']}"
            src = f"{r['source']} -> " if "source" in r else ""
            lines.append(f"  {src}{head}: {r['kind']}{extra}")
        elif "on_surface" in r:
            lines.append(f"  {r['point']}: {'on' if r['on_surface'] else 'off'} surface "
                         f"(corank {r['corank']})")
        elif "preimage" in r:
            lines.append(f"  {r['point']} <- {r['preimage']}")
        elif "curve_equation" in r:
            lines.append(f"  {r['point']}: h = {r['curve_equation']}")
        elif "generators" in r:
            lines.append(f"  {len(r['generators'])} nonzero generators")
        elif "rows" in r and "cols" in r:
            lines.append(f"  M_{r['nu']}: {r['rows']} x {r['cols']}")
        elif "checks" in r:
            for c in r["checks"]:
                lines.append(f"  {c['name']}: {c['status']}")
        elif "error" in r:
            lines.append(f"  {r['source']}: {r['error']}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def build_parser():
    p = argparse.ArgumentParser(
        prog="fibratrix",
        description="Matrix representations of rational surfaces and their fibers.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", default="-", help="job document (default: stdin)")
    p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    p.add_argument("--nu", type=int)
    p.add_argument("--nu1", type=int)
    p.add_argument("--nu2", type=int)
    p.add_argument("--point", help='target point "a:b:c:d"')
    p.add_argument("--points", nargs="+", help="source points for stratify")
    p.add_argument("--fitting-index", dest="fitting_index", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help=f"random source points for stratify "
                                               f"(default {DEFAULT_SAMPLES})")
    p.add_argument("--field", help="q (default) or fp:P")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for stratify")
    p.add_argument("--no-validate", dest="check", action="store_false",
                   help="skip the hypothesis checks")
    p.add_argument("--no-timing", dest="timing", action="store_false",
                   help="emit timing_ms as null (byte-reproducible output)")
    p.add_argument("--quiet", "-q", action="store_true", help="no summary on stderr")
    return p


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        if ns.input == "-":
            text = sys.stdin.read()
        else:
            with open(ns.input, encoding="utf-8") as fh:
                text = fh.read()
        job = build_job(parse_job_text(text), ns)
    except (OSError, JobError) as exc:
        report = {"command": ns.command, "input_echo": None, "nu0": None, "results": [],
                  "warnings": [], "timing_ms": None,
                  "error": {"type": "parse", "message": str(exc)}}
        code = EXIT_PARSE
    else:
        report, code = run(job, check=ns.check, jobs=max(1, ns.jobs), timing=ns.timing)
    out = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    if not ns.quiet:
        print(summarize(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
