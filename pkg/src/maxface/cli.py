"""Command-line front end: ``maxface run|presets|schema``.

Exit codes: 0 success, 2 manifest/schema violation, 3 invalid data,
4 numeric failure.  When several tasks fail the first failure's code wins.
"""

import argparse
import csv
import json
import math
import os
import sys

import jsonschema
from jsonschema.exceptions import best_match

from .approximation import convergence_report, make_family
from .bjorling import (BjorlingData, MaxfaceSolution, Rect, check_g_nonunimodular,
                       default_domain, validate)
from .errors import ExprSyntaxError, MaxfaceError
from .expr import parse_expr
from .mesh import build_mesh, write_obj
from .presets import get_preset, list_presets
from .singularity import DEFAULT_TOL, ToleranceSpec, classify_by_data, scan_interval

EXIT_OK, EXIT_SCHEMA, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4
MANIFEST_VERSION = 1

_EXPR3 = {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3}
_NUM3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_INTERVAL = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_GRID2 = {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 2, "maxItems": 2}
_PATH = {"type": "string", "minLength": 1}


def _task(name, props, required):
    return {
        "if": {"properties": {"type": {"const": name}}, "required": ["type"]},
        "then": {
            "properties": dict({"type": {"const": name}}, **props),
            "required": ["type"] + required,
            "additionalProperties": False,
        },
    }


def manifest_schema():
    """JSON schema of the manifest (version 1)."""
    domain = {
        "type": "object",
        "properties": {"center": {"type": "number"},
                       "half_width_u": {"type": "number", "exclusiveMinimum": 0},
                       "half_width_v": {"type": "number", "exclusiveMinimum": 0}},
        "required": ["half_width_u", "half_width_v"],
        "additionalProperties": False,
    }
    data = {
        "type": "object",
        "properties": {
            "gamma": {"oneOf": [_EXPR3, {"type": "null"}]},
            "gamma_prime": _EXPR3,
            "gamma_base": _NUM3,
            "L": _EXPR3,
            "interval": _INTERVAL,
            "base": {"type": "number"},
        },
        "required": ["L", "interval", "base"],
        "oneOf": [{"required": ["gamma"], "not": {"required": ["gamma_prime"]}},
                  {"required": ["gamma_prime"], "not": {"required": ["gamma"]}}],
        "additionalProperties": False,
    }
    tasks = {
        "type": "array", "minItems": 1,
        "items": {
            "type": "object",
            "properties": {"type": {"enum": ["validate", "solve", "classify", "approximate"]}},
            "required": ["type"],
            "allOf": [
                _task("validate", {"output": _PATH,
                                   "samples": {"type": "integer", "minimum": 16}}, ["output"]),
                _task("solve", {"mesh": _PATH, "csv": _PATH, "singular_csv": _PATH,
                                "grid": _GRID2}, ["mesh"]),
                _task("classify", {"output": _PATH,
                                   "grid": {"type": "integer", "minimum": 3},
                                   "interval": _INTERVAL,
                                   "points": {"type": "array", "items": {"type": "number"}}},
                      ["output"]),
                _task("approximate", {
                    "t0": {"type": "number"},
                    "ns": {"type": "array", "minItems": 1, "uniqueItems": True,
                           "items": {"type": "integer", "minimum": 2}},
                    "kind": {"enum": ["auto", "gamma", "L", "shrinking"]},
                    "table": _PATH,
                    "mesh_pattern": {"type": "string", "pattern": "\\{n\\}"},
                    "grid": _GRID2,
                    "half_width": {"type": "number", "exclusiveMinimum": 0},
                }, ["t0", "ns", "table"]),
            ],
        },
    }
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "maxface manifest",
        "type": "object",
        "properties": {
            "version": {"const": MANIFEST_VERSION},
            "preset": {"enum": list_presets()},
            "data": data,
            "domain": {"oneOf": [domain, {"type": "null"}]},
            "tolerances": {"type": "object",
                           "properties": {"rel": {"type": "number", "exclusiveMinimum": 0},
                                          "abs": {"type": "number", "exclusiveMinimum": 0}},
                           "additionalProperties": False},
            "tasks": tasks,
        },
        "required": ["tasks"],
        "oneOf": [{"required": ["preset"], "not": {"required": ["data"]}},
                  {"required": ["data"], "not": {"required": ["preset"]}}],
        "additionalProperties": False,
    }


class TaskError(Exception):
    def __init__(self, code, where, message):
        super().__init__(f"{where}: {message}")
        self.code = code


def _output_paths(task):
    keys = ("output", "mesh", "csv", "singular_csv", "table")
    paths = [task[k] for k in keys if k in task]
    if task["type"] == "solve" and "singular_csv" not in task:
        paths.append(_sidecar_path(task["mesh"]))
    if task["type"] == "approximate":
        paths += [_mesh_pattern(task).format(n=n) for n in task["ns"]]
    return paths


def _mesh_pattern(task):
    root, _ = os.path.splitext(task["table"])
    return task.get("mesh_pattern", root + "_n{n}.obj")


def _sidecar_path(mesh):
    root, _ = os.path.splitext(mesh)
    return root + "_singular.csv"


def _build_data(spec):
    fields = {}
    for key in ("gamma", "gamma_prime", "L"):
        if spec.get(key) is None:
            continue
        exprs = []
        for i, text in enumerate(spec[key]):
            try:
                exprs.append(parse_expr(text))
            except ExprSyntaxError as exc:
                raise TaskError(EXIT_SCHEMA, f"data.{key}[{i}]", str(exc)) from None
        fields[key] = exprs
    try:
        if "gamma_prime" in fields:
            return BjorlingData.from_derivative(
                fields["gamma_prime"], fields["L"], spec["interval"], spec["base"],
                gamma_base=spec.get("gamma_base", (0.0, 0.0, 0.0)), name="manifest")
        if "gamma" in fields:
            return BjorlingData.from_curve(fields["gamma"], fields["L"], spec["interval"],
                                           spec["base"], name="manifest")
        return BjorlingData.zero_curve(fields["L"], spec["interval"], spec["base"],
                                       name="manifest")
    except MaxfaceError as exc:
        raise TaskError(EXIT_SCHEMA, "data", str(exc)) from None


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return x


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


class Runner:
    def __init__(self, manifest, base_dir, tol, jobs=1, log=None):
        self.manifest = manifest
        self.base_dir = base_dir
        self.tol = tol
        self.jobs = jobs
        self.log = log or (lambda msg: None)
        if "preset" in manifest:
            self.data = get_preset(manifest["preset"])
        else:
            self.data = _build_data(manifest["data"])
        dom = manifest.get("domain")
        if dom:
            a, b = self.data.interval
            self.domain = Rect(dom.get("center", 0.5 * (a + b)),
                               dom["half_width_u"], dom["half_width_v"])
        else:
            self.domain = default_domain(self.data)
        self._validation = None

    def path(self, p):
        """Output path relative to the manifest; parent directories are created."""
        full = p if os.path.isabs(p) else os.path.join(self.base_dir, p)
        os.makedirs(os.path.dirname(full) or ".", exist_ok=True)
        return full

    @property
    def validation(self):
        if self._validation is None:
            self._validation = validate(self.data)
        return self._validation

    def gate(self, where):
        rep = self.validation
        if not rep.valid:
            raise TaskError(EXIT_INVALID, where,
                            "data is not valid singular Björling data: " + "; ".join(rep.messages))

    # -- tasks -------------------------------------------------------------

    def task_validate(self, task, where):
        rep = validate(self.data, task.get("samples"))
        out = dict(rep.to_dict(), name=self.data.name)
        with open(self.path(task["output"]), "w") as fh:
            json.dump(out, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.log(f"{where}: wrote {task['output']} (valid={rep.valid})")
        if not rep.valid:
            raise TaskError(EXIT_INVALID, where, "; ".join(rep.messages))

    def task_solve(self, task, where):
        self.gate(where)
        if not check_g_nonunimodular(self.data, self.domain):
            raise TaskError(EXIT_INVALID, where, "|g| is identically 1 on the domain")
        grid = tuple(task.get("grid", (41, 41)))
        sol = MaxfaceSolution(self.data, self.domain, grid)
        tol = self.tol
        mesh = build_mesh(sol, classify=lambda u: classify_by_data(self.data, u, tol).value,
                          offset=self.data.gamma_base)
        write_obj(mesh, self.path(task["mesh"]),
                  comment=f"maxface {self.data.name} grid {grid[0]}x{grid[1]}")
        side = task.get("singular_csv", _sidecar_path(task["mesh"]))
        _write_csv(self.path(side), ["vertex", "u", "type"],
                   [(int(i) + 1, float(u), t)
                    for i, u, t in zip(mesh.polyline, mesh.polyline_u, mesh.polyline_types)])
        if "csv" in task:
            pts = sol.points
            X = sol.values
            rows = [(i, j, float(pts[i, j].real), float(pts[i, j].imag),
                     float(X[i, j, 0]), float(X[i, j, 1]), float(X[i, j, 2]))
                    for i in range(grid[0]) for j in range(grid[1])]
            _write_csv(self.path(task["csv"]), ["i", "j", "u", "v", "x", "y", "z"], rows)
        self.log(f"{where}: wrote {task['mesh']}")

    def task_classify(self, task, where):
        self.gate(where)
        interval = task.get("interval")
        if interval is not None:
            a, b = self.data.interval
            if not (a <= interval[0] < interval[1] <= b):
                raise TaskError(EXIT_SCHEMA, f"{where}, field 'interval'",
                                f"{interval} is not inside the data interval {[a, b]}")
        reports = scan_interval(self.data, task.get("grid", 101), self.tol,
                                interval=interval, extra_points=task.get("points", ()),
                                jobs=self.jobs)
        rows = [r.to_row() for r in reports]
        header = list(rows[0]) if rows else ["u", "type"]
        _write_csv(self.path(task["output"]), header, [list(r.values()) for r in rows])
        self.log(f"{where}: wrote {task['output']} ({len(rows)} points)")

    def task_approximate(self, task, where):
        self.gate(where)
        kind = task.get("kind", "auto")
        family = make_family(self.data, float(task["t0"]), None if kind == "auto" else kind)
        omega = None
        if "half_width" in task:
            r = task["half_width"]
            omega = Rect(family.t0, r, r)
        grid = tuple(task.get("grid", (41, 41)))
        rep = convergence_report(family, omega, task["ns"], grid, self.tol)
        rows = [(n, d, rep.reports[n].type.value, rep.reports[n].agreement)
                for n, d in rep.table.rows]
        _write_csv(self.path(task["table"]), ["n", "distance", "type_at_t0", "agreement"], rows)
        for n in task["ns"]:
            sol = MaxfaceSolution(family.member(n), rep.table.domain, grid)
            write_obj(build_mesh(sol, offset=family.parent.gamma_base),
                      self.path(_mesh_pattern(task).format(n=n)),
                      comment=f"member n={n} of the {family.kind.value} family at t0={family.t0}")
        self.log(f"{where}: wrote {task['table']} (slope {rep.table.slope:.3f})")
        if not rep.table.strictly_decreasing():
            raise TaskError(EXIT_NUMERIC, where, "sup-norm distances are not decreasing")
        bad = [n for n, r in rep.reports.items() if r.type.value != "CuspidalEdge"]
        if bad:
            raise TaskError(EXIT_INVALID, where, f"members {bad} are not cuspidal edges at t0")


def load_manifest(path):
    """Parse and schema-check a manifest; raises :class:`TaskError` (exit 2)."""
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise TaskError(EXIT_SCHEMA, "manifest", str(exc)) from None
    if isinstance(manifest, dict) and ("preset" in manifest) == ("data" in manifest):
        raise TaskError(EXIT_SCHEMA, "manifest fields 'preset'/'data'",
                        "exactly one of 'preset' and 'data' must be given")
    validator = jsonschema.Draft202012Validator(manifest_schema())
    err = best_match(validator.iter_errors(manifest))
    if err is not None:
        raise TaskError(EXIT_SCHEMA, f"manifest field '{err.json_path}'", err.message)
    seen = {}
    for i, task in enumerate(manifest["tasks"]):
        for p in _output_paths(task):
            norm = os.path.normpath(p)
            if norm in seen:
                raise TaskError(EXIT_SCHEMA, f"task {i} ({task['type']})",
                                f"output path {p!r} already used by task {seen[norm]}")
            seen[norm] = i
    return manifest


def run(manifest_path, tol_rel=None, tol_abs=None, jobs=1, log=print, err=None):
    """Execute every task of a manifest; returns the exit code."""
    err = err or (lambda msg: print(f"error: {msg}", file=sys.stderr))
    try:
        manifest = load_manifest(manifest_path)
        tols = manifest.get("tolerances", {})
        tol = ToleranceSpec(rel=tol_rel or tols.get("rel", DEFAULT_TOL.rel),
                            abs=tol_abs or tols.get("abs", DEFAULT_TOL.abs))
        runner = Runner(manifest, os.path.dirname(os.path.abspath(manifest_path)), tol,
                        jobs, log)
    except TaskError as exc:
        err(str(exc))
        return exc.code
    code = EXIT_OK
    for i, task in enumerate(manifest["tasks"]):
        where = f"task {i} ({task['type']})"
        try:
            getattr(runner, "task_" + task["type"])(task, where)
        except TaskError as exc:
            err(str(exc))
            code = code or exc.code
        except (MaxfaceError, ArithmeticError) as exc:
            err(f"{where}: numeric failure: {exc}")
            code = code or EXIT_NUMERIC
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="maxface",
        description="Singular Björling problem for maxfaces: solve, classify, approximate.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute the tasks of a JSON manifest")
    p_run.add_argument("manifest")
    p_run.add_argument("--tol-rel", type=float, default=None,
                       help="relative zero tolerance for classification (default 1e-7)")
    p_run.add_argument("--tol-abs", type=float, default=None,
                       help="absolute zero tolerance for classification (default 1e-10)")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="worker processes for interval scans")
    p_run.add_argument("-q", "--quiet", action="store_true")
    sub.add_parser("presets", help="list built-in data sets")
    sub.add_parser("schema", help="print the manifest JSON schema")
    args = parser.parse_args(argv)

    if args.command == "presets":
        for name in list_presets():
            print(name)
        return EXIT_OK
    if args.command == "schema":
        json.dump(manifest_schema(), sys.stdout, indent=2)
        print()
        return EXIT_OK
    if args.jobs < 1 or any(v is not None and not (v > 0 and math.isfinite(v))
                            for v in (args.tol_rel, args.tol_abs)):
        print("error: --jobs must be >= 1 and tolerances positive", file=sys.stderr)
        return EXIT_SCHEMA
    log = (lambda msg: None) if args.quiet else print
    return run(args.manifest, args.tol_rel, args.tol_abs, args.jobs, log=log)


if __name__ == "__main__":
    sys.exit(main())
