"""Command-line front end: run or size up the jobs of a JSON instance file.

    functorlab run <instance.json> --out <dir> [--n-max K] [--cap BYTES] [--jobs N]
    functorlab estimate <instance.json>
    functorlab schema

Reports are deterministic: JSON is written with sorted keys, wall-clock times go to
a separate ``timing.json``.  Exit codes: 0 ok, 2 invalid instance, 3 sizing,
4 refuted at the instance, 5 hypotheses unmet (refuted wins over unmet over sizing).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema

from . import __version__
from .category import (
    DiagonalFunctor,
    FiniteRing,
    IdentityFunctor,
    InclusionFunctor,
    ProductCat,
    RingMap,
    SizingError,
    SumFunctor,
    TruncCat,
    TruncationError,
    quotient_functor,
)
from .functors import (
    FunctorRep,
    additive_standard,
    constant,
    dual,
    external_tensor,
    hom_quotient_functor,
    linearize,
    pointwise_tensor,
    reduced_part,
    restrict,
    standard_projective,
    standard_projective_op,
)
from .homology import BAR_RANK_CAP, bar_rank_estimate, ext_over_cat, tor_over_cat
from .linalg import ZZ, StructuralError, ring_from_tag
from .polynomial import cross_effect, poly_degree
from .simplicial import (
    check_em_vanishing,
    check_local_hurewicz,
    constant_simplicial,
    em_space,
    homotopy_groups,
    hurewicz_map,
    linearize_simplicial,
    nerve_model,
)
from . import theorems as th

EXIT_OK, EXIT_PARSE, EXIT_SIZING, EXIT_REFUTED, EXIT_UNMET = 0, 2, 3, 4, 5
SCHEMA_VERSION = 1
DEFAULT_N_MAX = 2

_name = {"type": "string", "minLength": 1}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "functorlab instance",
    "version": SCHEMA_VERSION,
    "type": "object",
    "required": ["field", "jobs"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "description": {"type": "string"},
        "field": {"type": "string"},
        "rings": {"type": "object", "additionalProperties": {
            "type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1}},
        "categories": {"type": "object", "additionalProperties": {
            "type": "object",
            "oneOf": [
                {"required": ["ring", "N"], "properties": {
                    "ring": _name,
                    "N": {"anyOf": [{"type": "integer", "minimum": 0},
                                    {"type": "object", "required": ["double"], "properties": {"double": _name}}]}},
                 "additionalProperties": False},
                {"required": ["product"], "properties": {"product": {"type": "array", "items": _name,
                                                                     "minItems": 2, "maxItems": 2}},
                 "additionalProperties": False},
            ]}},
        "maps": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["kind"],
            "properties": {"kind": {"enum": ["quotient", "identity", "diagonal", "sum", "inclusion"]},
                           "src": _name, "dst": _name, "cat": _name},
            "additionalProperties": False}},
        "functors": {"type": "object", "additionalProperties": {"type": "object", "required": ["op"]}},
        "simplicial": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["op", "A", "T"],
            "properties": {"op": {"enum": ["em_space", "nerve", "constant"]},
                           "A": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                           "n": {"type": "integer", "minimum": 0},
                           "T": {"type": "integer", "minimum": 1}},
            "additionalProperties": False}},
        "jobs": {"type": "array", "items": {
            "type": "object", "required": ["kind"],
            "properties": {"kind": {"type": "string", "pattern": "^(tor|ext|cross_effect|poly_degree|homotopy|"
                                                               "hurewicz|check:[a-z_]+)$"},
                           "n_max": {"type": "integer", "minimum": 0},
                           "e": {"type": "integer", "minimum": 0},
                           "degree_bound": {"type": "integer", "minimum": 1},
                           "stabilize": {"type": "boolean"}}}},
    },
}

FUNCTOR_OPS = {
    "standard_projective": ("cat", "object"),
    "linearize_hom_quotient": ("along", "object"),
    "additive_standard": ("cat", "object"),
    "tensor": ("args",),
    "external_tensor": ("args",),
    "restrict": ("along", "arg"),
    "reduced": ("arg",),
    "dual": ("arg",),
    "constant": ("cat",),
}

# theorem id -> (function, ordered positional params, keyword params); a positional
# param is a functor ("f"), a list of functors ("fs"), a map ("m") or the field ("k").
CHECKS = {
    "separation": (th.check_separation, [("B1", "f"), ("B2", "f"), ("C1", "f"), ("C2", "f"), ("phi", "m"),
                                         ("degree_bound", "int")], ["n_max"]),
    "excision": (th.check_excision, [("phi", "m"), ("F", "f"), ("G", "f")], ["n_max"]),
    "general_criterion": (th.check_general_criterion, [("phi", "m"), ("field", "k"), ("e", "int")], []),
    "poly_excision": (th.check_poly_excision, [("phi", "m"), ("F", "f"), ("G", "f")], ["n_max", "degree_bound"]),
    "pirashvili": (th.check_pirashvili, [("F", "f"), ("reduced", "fs")], ["n_max"]),
    "semisimple_vanishing": (th.check_semisimple_vanishing, [("phi", "m"), ("F", "f"), ("G", "f")], ["n_max"]),
    "bifunctor_vanishing": (th.check_bifunctor_vanishing, [("B", "f"), ("C", "f")], ["n_max"]),
    "mixed_vanishing": (th.check_mixed_vanishing, [("A", "f"), ("F", "f"), ("B", "f"), ("phi", "m"),
                                                   ("degree_bound", "int")], ["n_max"]),
    "kunneth": (th.check_kunneth, [("F", "f"), ("H", "f"), ("G", "f"), ("K", "f")], ["n_max"]),
    "sum_diagonal": (th.check_sum_diagonal, [("F", "f"), ("G", "f")], ["n_max"]),
    "duality_square": (th.check_duality_square, [("phi", "m"), ("F", "f"), ("G", "f")], ["n_max"]),
    "em_vanishing": (check_em_vanishing, [("A", "orders"), ("n", "int"), ("field", "k"), ("T", "int")], []),
    "local_hurewicz": (check_local_hurewicz, [("object", "s"), ("field", "k"), ("e", "int")], []),
}


class InstanceError(ValueError):
    """The instance file does not parse, validate, or resolve its names."""


# ---------------------------------------------------------------------------
# building the objects named in an instance


class Environment:
    """Rings, categories, maps, functors and simplicial objects of one instance.

    ``shift`` adds to every truncation bound (used to rerun a check at N + 1).
    """

    def __init__(self, inst: dict, shift: int = 0):
        self.shift = shift
        try:
            self.field = ring_from_tag(inst["field"])
        except (ValueError, KeyError) as err:
            raise InstanceError(f"bad field: {err}") from err
        if self.field == ZZ:
            raise InstanceError("functor coefficients must be a field")
        self.rings = {k: FiniteRing(v) for k, v in inst.get("rings", {}).items()}
        self.cats: dict = {}
        for name, spec in inst.get("categories", {}).items():
            self.cats[name] = self._category(name, spec)
        self.maps = {name: self._map(name, spec) for name, spec in inst.get("maps", {}).items()}
        self.functors: dict[str, FunctorRep] = {}
        for name, spec in inst.get("functors", {}).items():
            self.functors[name] = self.functor(spec, name)
        self.simplicial = {name: self._simplicial(spec) for name, spec in inst.get("simplicial", {}).items()}

    def _lookup(self, table: dict, name, what: str):
        if not isinstance(name, str) or name not in table:
            raise InstanceError(f"unknown {what} {name!r} (names must be defined before use)")
        return table[name]

    def _category(self, name: str, spec: dict):
        if "product" in spec:
            left, right = (self._lookup(self.cats, c, "category") for c in spec["product"])
            return ProductCat(left, right)
        ring = self._lookup(self.rings, spec["ring"], "ring")
        N = spec["N"]
        if isinstance(N, dict):
            base = self._lookup(self.cats, N["double"], "category")
            if not isinstance(base, TruncCat):
                raise InstanceError(f"category {name}: 'double' needs a truncated category")
            N = 2 * base.N
        else:
            N = N + self.shift
        return TruncCat(ring, N)

    def _map(self, name: str, spec: dict):
        kind = spec["kind"]
        try:
            if kind == "identity":
                return IdentityFunctor(self._lookup(self.cats, spec.get("cat"), "category"))
            if kind == "diagonal":
                return DiagonalFunctor(self._lookup(self.cats, spec.get("cat"), "category"))
            src = self._lookup(self.cats, spec.get("src"), "category")
            dst = self._lookup(self.cats, spec.get("dst"), "category")
            if kind == "quotient":
                return quotient_functor(src, RingMap.canonical(src.ring, dst.ring), dst)
            if kind == "sum":
                return SumFunctor(src, dst)
            return InclusionFunctor(src, dst)
        except StructuralError as err:
            raise InstanceError(f"map {name}: {err}") from err

    def functor(self, spec, name: str = "") -> FunctorRep:
        """A functor expression: a name defined earlier or a nested {op: ...} tree."""
        if isinstance(spec, str):
            return self._lookup(self.functors, spec, "functor")
        if not isinstance(spec, dict) or spec.get("op") not in FUNCTOR_OPS:
            raise InstanceError(f"functor {name or spec!r}: op must be one of {sorted(FUNCTOR_OPS)}")
        op = spec["op"]
        for key in FUNCTOR_OPS[op]:
            if key not in spec:
                raise InstanceError(f"functor {name or op}: missing {key!r}")
        k = self.field
        try:
            if op == "standard_projective":
                cat = self._lookup(self.cats, spec["cat"], "category")
                F = (standard_projective_op if spec.get("contravariant") else standard_projective)(
                    cat, self._object(cat, spec["object"]), k)
            elif op == "linearize_hom_quotient":
                phi = self._lookup(self.maps, spec["along"], "map")
                F = linearize(hom_quotient_functor(phi, self._object(phi.dst, spec["object"])), k)
            elif op == "additive_standard":
                cat = self._lookup(self.cats, spec["cat"], "category")
                F = additive_standard(cat, self._object(cat, spec["object"]), k)
            elif op in ("tensor", "external_tensor"):
                args = [self.functor(a) for a in spec["args"]]
                if len(args) != 2:
                    raise InstanceError(f"{op} takes exactly two arguments")
                F = (pointwise_tensor if op == "tensor" else external_tensor)(*args)
            elif op == "restrict":
                F = restrict(self._lookup(self.maps, spec["along"], "map"), self.functor(spec["arg"]))
            elif op == "reduced":
                F = reduced_part(self.functor(spec["arg"])).functor
            elif op == "dual":
                F = dual(self.functor(spec["arg"]))
            else:
                cat = self._lookup(self.cats, spec["cat"], "category")
                F = constant(cat, k, int(spec.get("dim", 1)))
        except (StructuralError, IndexError) as err:
            raise InstanceError(f"functor {name or op}: {err}") from err
        if name:
            F.name = name
        return F

    def _object(self, cat, obj) -> int:
        if not isinstance(obj, int) or not 0 <= obj < cat.n_obj:
            raise InstanceError(f"object {obj!r} is not in {cat!r}")
        return obj

    def _simplicial(self, spec: dict):
        A, T = spec["A"], spec["T"]
        if spec["op"] == "em_space":
            if "n" not in spec:
                raise InstanceError("em_space needs n")
            return em_space(A, spec["n"], T)
        if spec["op"] == "nerve":
            return nerve_model(A, T)
        return constant_simplicial(A, T)


# ---------------------------------------------------------------------------
# jobs


def _n_max(job: dict, default: int) -> int:
    return int(job.get("n_max", default))


def _check_report(env: Environment, job: dict, theorem: str, n_default: int) -> th.TheoremReport:
    if theorem not in CHECKS:
        raise InstanceError(f"unknown theorem id {theorem!r}; known: {sorted(CHECKS)}")
    fn, params, keywords = CHECKS[theorem]
    args = []
    for key, kind in params:
        if kind == "k":
            args.append(env.field)
            continue
        if key not in job:
            raise InstanceError(f"check:{theorem} needs {key!r}")
        val = job[key]
        if kind == "f":
            args.append(env.functor(val))
        elif kind == "fs":
            args.append([env.functor(v) for v in val])
        elif kind == "m":
            args.append(env._lookup(env.maps, val, "map"))
        elif kind == "s":
            args.append(env._lookup(env.simplicial, val, "simplicial object"))
        elif kind == "orders":
            args.append([int(v) for v in val])
        else:
            args.append(int(val))
    kwargs = {}
    for key in keywords:
        if key == "n_max":
            kwargs[key] = _n_max(job, n_default)
        elif key in job:
            kwargs[key] = int(job[key])
    return fn(*args, **kwargs)


def _trunc_window(cat, n_max: int) -> dict:
    return {"N": th._trunc_of(cat), "degrees": [0, n_max], "label": "truncated instance"}


def _compute(env: Environment, job: dict, n_default: int) -> tuple[str, dict, str]:
    """(status, body, text) for a computational job."""
    kind = job["kind"]
    if kind in ("tor", "ext"):
        left, right = env.functor(job.get("left")), env.functor(job.get("right"))
        n = _n_max(job, n_default)
        method = job.get("method", "resolution")
        fn = tor_over_cat if kind == "tor" else ext_over_cat
        try:
            summary = fn(left, right, n, method=method)
        except StructuralError as err:
            raise InstanceError(f"{kind}: {err}") from err
        dims = summary.dims()
        body = {"dims": {str(i): dims[i] for i in sorted(dims)}, "method": method,
                "left": left.name, "right": right.name, "window": _trunc_window(right.cat, n)}
        text = f"{kind}({left.name}, {right.name}) dims " + " ".join(f"{i}:{dims[i]}" for i in sorted(dims))
        return "computed", body, text
    if kind == "cross_effect":
        F = env.functor(job.get("functor"))
        ranks = job.get("ranks", [])
        rep = cross_effect(F, int(job.get("d", len(ranks))), ranks)
        body = rep.as_json() | {"window": {"N": F.cat.N, "label": "truncated instance"}}
        return "computed", body, f"cr_{rep.d} {F.name}{tuple(rep.ranks)} = {rep.dim}"
    if kind == "poly_degree":
        F = env.functor(job.get("functor"))
        rep = poly_degree(F, int(job.get("degree_bound", 3)))
        body = rep.as_json() | {"window": {"N": F.cat.N, "label": "truncated instance"}}
        return "computed", body, f"degree of {F.name}: {rep.label()}"
    if kind == "homotopy":
        X = env._lookup(env.simplicial, job.get("object"), "simplicial object")
        coeff = job.get("coefficients", "none")
        target = X if coeff == "none" else linearize_simplicial(X, ring_from_tag(coeff))
        s = homotopy_groups(target, job.get("max_i"))
        top = max(s.groups)
        body = {"object": X.name, "coefficients": coeff, "groups": {str(i): str(s[i]) for i in sorted(s.groups)},
                "window": {"T": X.T, "certified": [0, top], "label": "certified range"}}
        return "computed", body, f"pi_* {target.name}: " + ", ".join(str(s[i]) for i in sorted(s.groups))
    if kind == "hurewicz":
        X = env._lookup(env.simplicial, job.get("object"), "simplicial object")
        rep = hurewicz_map(X, job.get("max_i"))
        body = rep.as_json() | {"window": {"T": X.T, "certified": [0, len(rep.degrees) - 1],
                                            "label": "certified range"}}
        return "computed", body, f"hurewicz {X.name}: split injective {rep.split_injective}"
    raise InstanceError(f"unknown job kind {kind!r}")


def run_job(inst: dict, index: int, n_default: int = DEFAULT_N_MAX, cap_bytes: int | None = None,
            env: Environment | None = None) -> dict:
    """Run one job; returns {"body": ..., "text": ..., "status": ..., "wall": ...}."""
    t0 = time.perf_counter()
    job = inst["jobs"][index]
    kind = job["kind"]
    head = {"index": index, "kind": kind}
    try:
        env = env or Environment(inst)
        if cap_bytes is not None:
            fc = _forecast(env, job, n_default)
            if fc and fc.get("bytes", 0) > cap_bytes:
                raise SizingError(f"forecast {fc['bytes']} bytes exceeds --cap {cap_bytes}", fc)
        if kind.startswith("check:"):
            theorem = kind.split(":", 1)[1]
            rep = _check_report(env, job, theorem, n_default)
            if job.get("stabilize"):
                rep = th.stabilize(rep, lambda: _check_report(Environment(inst, shift=1), job, theorem, n_default))
            body = head | {"status": rep.verdict, "report": rep.as_json()}
            text = rep.table()
            status = rep.verdict
        else:
            status, result, text = _compute(env, job, n_default)
            body = head | {"status": status, "result": result}
    except SizingError as err:
        status = "inconclusive-sizing"
        body = head | {"status": status, "error": str(err), "estimates": th._jsonable(err.estimates)}
        text = f"{kind}: inconclusive-sizing ({err})"
    except (InstanceError, TruncationError, StructuralError, jsonschema.ValidationError) as err:
        status = "invalid"
        body = head | {"status": status, "error": str(err)}
        text = f"{kind}: invalid ({err})"
    return {"body": th._jsonable(body), "text": text, "status": status, "wall": time.perf_counter() - t0}


def _worker(args) -> dict:
    inst, index, n_default, cap = args
    return run_job(inst, index, n_default, cap)


# ---------------------------------------------------------------------------
# estimate


def _forecast(env: Environment, job: dict, n_default: int) -> dict | None:
    """Bar-complex ranks per degree and the dense memory they would take; None when not applicable."""
    kind = job["kind"]
    if kind not in ("tor", "ext"):
        return None
    left, right = env.functor(job.get("left")), env.functor(job.get("right"))
    n = _n_max(job, n_default)
    cat = right.cat
    ldims = left.dims
    ranks = bar_rank_estimate(cat, ldims, right.dims, n + 1)
    nbytes = max((ranks[i] * ranks[i + 1] * 8 for i in range(len(ranks) - 1)), default=0)
    return {"bar_ranks": ranks, "bytes": nbytes, "over_cap": max(ranks) > BAR_RANK_CAP,
            "rank_cap": BAR_RANK_CAP, "degrees": [0, n + 1]}


def estimate(inst: dict, n_default: int = DEFAULT_N_MAX) -> dict:
    env = Environment(inst)
    out = []
    for i, job in enumerate(inst["jobs"]):
        fc = _forecast(env, job, n_default)
        entry = {"index": i, "kind": job["kind"]}
        if fc is None:
            entry["forecast"] = None
            entry["note"] = "no counting formula for this job kind"
        else:
            entry["forecast"] = fc
        out.append(entry)
    return {"version": __version__, "instance_sha256": instance_hash(inst), "jobs": out}


# ---------------------------------------------------------------------------
# files


def load_instance(path: str | Path) -> dict:
    try:
        inst = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as err:
        raise InstanceError(f"cannot read {path}: {err}") from err
    try:
        jsonschema.validate(inst, SCHEMA)
    except jsonschema.ValidationError as err:
        raise InstanceError(f"schema: {err.message} at {list(err.absolute_path)}") from err
    return inst


def instance_hash(inst: dict) -> str:
    canon = json.dumps(inst, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def exit_code(statuses: list[str]) -> int:
    if "invalid" in statuses:
        return EXIT_PARSE
    if "refuted-at-instance" in statuses:
        return EXIT_REFUTED
    if "hypotheses-unmet" in statuses:
        return EXIT_UNMET
    if "inconclusive-sizing" in statuses:
        return EXIT_SIZING
    return EXIT_OK


def run(inst: dict, out_dir: str | Path, n_default: int = DEFAULT_N_MAX, cap_bytes: int | None = None,
        workers: int = 1) -> int:
    """Run every job, write the bundle into ``out_dir`` and return the exit code."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_jobs = len(inst["jobs"])
    if workers > 1 and n_jobs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, [(inst, i, n_default, cap_bytes) for i in range(n_jobs)]))
    else:
        try:
            env = Environment(inst) if n_jobs else None
        except SizingError:
            env = None  # each job then reports the sizing failure itself
        results = [run_job(inst, i, n_default, cap_bytes, env) for i in range(n_jobs)]
    files = []
    for i, res in enumerate(results):
        name = f"job_{i:03d}.json"
        (out / name).write_text(dumps(res["body"]), encoding="utf-8")
        files.append({"index": i, "kind": res["body"]["kind"], "status": res["status"], "file": name})
    code = exit_code([r["status"] for r in results])
    bundle = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "instance_sha256": instance_hash(inst),
        "determinism": "exact arithmetic, no randomness: identical input gives byte-identical reports",
        "exit_code": code,
        "jobs": files,
    }
    (out / "report.json").write_text(dumps(bundle), encoding="utf-8")
    text = [f"functorlab {__version__}  instance {bundle['instance_sha256'][:16]}  exit {code}"]
    for i, res in enumerate(results):
        text.append(f"[{i}] {res['text']}")
    (out / "report.txt").write_text("\n".join(text) + "\n", encoding="utf-8")
    (out / "timing.json").write_text(dumps({"wall_clock_seconds": [round(r["wall"], 3) for r in results]}),
                                     encoding="utf-8")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="functorlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the jobs of an instance file")
    p_run.add_argument("instance")
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--n-max", type=int, default=DEFAULT_N_MAX, help="default top degree for jobs")
    p_run.add_argument("--cap", type=int, default=None, help="refuse jobs whose forecast exceeds BYTES")
    p_run.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_est = sub.add_parser("estimate", help="forecast sizes without computing")
    p_est.add_argument("instance")
    p_est.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    sub.add_parser("schema", help="print the instance JSON schema")
    args = parser.parse_args(argv)
    if args.command == "schema":
        sys.stdout.write(dumps(SCHEMA))
        return EXIT_OK
    try:
        inst = load_instance(args.instance)
        if args.command == "estimate":
            sys.stdout.write(dumps(estimate(inst, args.n_max)))
            return EXIT_OK
        code = run(inst, args.out, args.n_max, args.cap, args.jobs)
    except InstanceError as err:
        print(f"functorlab: {err}", file=sys.stderr)
        return EXIT_PARSE
    except SizingError as err:
        print(f"functorlab: {err}", file=sys.stderr)
        return EXIT_SIZING
    print((Path(args.out) / "report.txt").read_text(encoding="utf-8"), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
