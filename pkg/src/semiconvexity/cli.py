"""Command-line front end: check | geometry | witness | refute.

Reports are JSON on disk with a one-line human summary on stdout.  Exit
codes: 0 pass, 1 an inequality failed (the report carries the witness),
2 usage/precondition/schema errors.  Same scene and seed give byte-identical
reports.
"""

import argparse
import json
import sys

import numpy as np

from .errors import SemiconvexityError
from .geometry import Classification, classify_body, eccentricity_report, recession_cone
from .regularity import (check_inscribed_ball_bound, check_directional_gap, check_envelope,
                         check_semiconcave, check_semiconvex, check_derivative_bounds,
                         estimate_derivative_modulus)
from .reporting import sanitize
from .sampling import sample_pairs
from .scene import load_scene
from .svgplot import render_plot, write_csv
from .witness import construct_witness, refute_c1omega, witness_from_dict

_CHECKS = {
    "semiconvex": check_semiconvex,
    "semiconcave": check_semiconcave,
    "envelope": check_envelope,
    "gap": check_directional_gap,
    "theorem-q": check_derivative_bounds,
    "zodh": None,  # needs the ball parameters; handled separately
}


def _write_json(payload, path):
    text = json.dumps(sanitize(payload), sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _apply_overrides(scene, args):
    if getattr(args, "seed", None) is not None:
        scene.sampler.seed = args.seed
    if getattr(args, "samples", None) is not None:
        scene.sampler.count = args.samples
    if getattr(args, "tol", None) is not None:
        scene.tol = args.tol
    return scene


def cmd_check(args):
    scene = load_scene(args.scene, require_field=True, require_modulus=True)
    _apply_overrides(scene, args)
    if args.which == "zodh":
        if args.ball_center is None or args.ball_radius is None or args.probe is None:
            raise SemiconvexityError("zodh needs --ball-center, --ball-radius and --probe")
        report = check_inscribed_ball_bound(
            scene.field, scene.body, scene.modulus,
            json.loads(args.ball_center), args.ball_radius, json.loads(args.probe),
            p=scene.p, tol=scene.tol,
        )
    else:
        fn = _CHECKS[args.which]
        report = fn(scene.field, scene.body, scene.modulus, scene.sampler, p=scene.p, tol=scene.tol)
    _write_json(report.to_dict(), args.out)
    if args.plot:
        est = estimate_derivative_modulus(scene.field, scene.body, scene.sampler, p=scene.p,
                                          candidate=scene.modulus)
        base = args.out or "check"
        X, Y = sample_pairs(scene.body, scene.sampler, p=scene.p)
        render_plot(
            [
                {"x": est["h_norms"], "y": est["grad_gaps"], "label": "derivative gaps", "kind": "scatter"},
                {"x": np.sort(est["h_norms"]),
                 "y": scene.modulus(np.sort(est["h_norms"])),
                 "label": "modulus", "kind": "line"},
            ],
            _sibling(base, ".svg"),
            title=f"{args.which}: gap vs modulus",
            xlabel="|h|", ylabel="gap", log_x=True, log_y=True,
        )
        write_csv([("h_norm", est["h_norms"]), ("grad_gap", est["grad_gaps"])], _sibling(base, ".csv"))
    status = report.passed
    if status is None:
        print(f"{args.which}: no quantitative bound applies ({report.extra.get('classification')})")
        return 2
    print(f"{args.which}: {'pass' if status else 'FAIL'} (min margin {report.min_margin:.3e}, "
          f"{report.n_samples} samples)")
    if not status:
        print(f"  worst witness: {json.dumps(sanitize(report.witness))}")
    return 0 if status else 1


def _sibling(path, suffix):
    if path is None or path == "-":
        return "report" + suffix
    root = path[:-5] if path.endswith(".json") else path
    return root + suffix


def cmd_geometry(args):
    scene = load_scene(args.scene)
    body = scene.body
    cone = recession_cone(body, validate=False)
    cls = classify_body(body)
    payload = {
        "classification": cls.to_dict(),
        "recession_cone": cone.to_spec(),
        "recession_dim": cone.dim(),
        "lineality_dim": cone.lineality_dim(),
    }
    try:
        rays, lines = cone.generators()
        payload["recession_cone"]["rays"] = rays.tolist()
        payload["recession_cone"]["lines"] = lines.tolist()
    except SemiconvexityError:
        pass
    if cls.kind == Classification.BOUNDED:
        payload["eccentricity"] = eccentricity_report(body, p=scene.p)
    _write_json(payload, args.out)
    print(f"geometry: {cls.kind}, rec dim {payload['recession_dim']}"
          + (f", e_G={payload['eccentricity']['value']:.6g}" if "eccentricity" in payload else ""))
    return 0


def cmd_witness(args):
    scene = load_scene(args.scene)
    _apply_overrides(scene, args)
    cls = classify_body(scene.body)
    if cls.kind != Classification.DEGENERATE:
        reason = {
            Classification.BOUNDED: "the body is bounded",
            Classification.CONE_CONTAINING: "the body contains a translated solid cone",
        }[cls.kind]
        raise SemiconvexityError(
            f"witness construction does not apply: {reason}; the quantitative derivative bound holds there"
        )
    w = construct_witness(scene.body, suite_count=scene.sampler.count, suite_seed=scene.sampler.seed,
                          tol=scene.tol)
    suite = w.margin_suite(count=scene.sampler.count, seed=scene.sampler.seed, tol=scene.tol)
    refutation = refute_c1omega(w)
    payload = w.to_dict()
    payload["margin_suite"] = {k: r.to_dict() for k, r in suite.items()}
    payload["refutation"] = {
        "schedule": refutation.to_dict()["schedule"],
        "pairs": [e.to_dict() for e in refutation.entries],
    }
    _write_json(payload, args.out)
    ok = (suite["semiconvex"].passed and suite["semiconcave"].passed
          and not refutation.undefeated)
    print(f"witness: trace {[t['step'] for t in w.trace]}, C={w.C:.6g}, "
          f"suite {'pass' if ok else 'FAIL'}, {refutation.verdict}")
    return 0 if ok else 1


def cmd_refute(args):
    try:
        with open(args.witness) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SemiconvexityError(f"cannot read witness file: {exc}") from exc
    w = witness_from_dict(data)
    schedule = None
    requested = args.dmax
    effective = requested
    note = None
    profile_max = w.profile.get("dmax", 1024)
    if requested is not None and requested > profile_max:
        effective = profile_max
        note = (f"requested D ceiling {requested:g} capped at {profile_max:g} for this witness type: "
                "its violation scale grows too fast for larger D within float range")
    if effective is not None:
        schedule = []
        d = 1.0
        while d <= effective:
            schedule.append(d)
            d *= 2.0
    report = refute_c1omega(w, schedule=schedule)
    payload = report.to_dict()
    if note:
        payload["ceiling_note"] = note
    _write_json(payload, args.out)
    if args.plot:
        ts = np.geomspace(1.0, report.t_ceiling, 200)
        grads = w.field.gradients(w.ray_points(ts), check_domain=False)
        g0 = w.field.gradients(w.ray_points(np.array([0.0])), check_domain=False)[0]
        from . import kernels
        from .geometry import dual_exponent

        gaps = kernels.row_norms(grads - g0, dual_exponent(w.p))
        series = [{"x": ts, "y": gaps, "label": "derivative gap", "kind": "line"}]
        for D in (report.schedule[0], report.schedule[-1]):
            series.append({"x": ts, "y": D * w.modulus(ts), "label": f"D={D:g} bound", "kind": "line"})
        render_plot(series, _sibling(args.out, ".svg"), title="gap vs D*omega along the ray",
                    xlabel="t", ylabel="gap", log_x=True, log_y=True)
    print(f"refute: {report.verdict}")
    if note:
        print(f"  note: {note}")
    return 0 if not report.undefeated else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="semiconvexity",
                                     description="Verification and counterexample toolkit for "
                                                 "modulus-semiconvex functions on convex bodies.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("check", help="run an inequality check from a scene file")
    pc.add_argument("which", choices=sorted(_CHECKS))
    pc.add_argument("--scene", required=True)
    pc.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    pc.add_argument("--plot", action="store_true", help="emit gap-vs-modulus SVG and CSV")
    pc.add_argument("--seed", type=int, default=None, help="override the scene seed")
    pc.add_argument("--samples", type=int, default=None, help="override the sample count")
    pc.add_argument("--tol", type=float, default=None, help="override the pass tolerance")
    pc.add_argument("--ball-center", default=None, help="JSON point y for the zodh check")
    pc.add_argument("--ball-radius", type=float, default=None)
    pc.add_argument("--probe", default=None, help="JSON point z for the zodh check")
    pc.set_defaults(fn=cmd_check)

    pg = sub.add_parser("geometry", help="classify a body and report its recession cone")
    pg.add_argument("--scene", required=True)
    pg.add_argument("--out", default=None)
    pg.set_defaults(fn=cmd_geometry)

    pw = sub.add_parser("witness", help="construct a counterexample witness for a degenerate body")
    pw.add_argument("--scene", required=True)
    pw.add_argument("--out", default=None)
    pw.add_argument("--seed", type=int, default=None)
    pw.add_argument("--samples", type=int, default=None)
    pw.add_argument("--tol", type=float, default=None)
    pw.set_defaults(fn=cmd_witness)

    pr = sub.add_parser("refute", help="escalation refutation along a witness ray")
    pr.add_argument("--witness", required=True, help="witness JSON produced by the witness command")
    pr.add_argument("--dmax", type=float, default=None, help="largest candidate constant to defeat")
    pr.add_argument("--out", default=None)
    pr.add_argument("--plot", action="store_true")
    pr.set_defaults(fn=cmd_refute)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SemiconvexityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # never a traceback on the user's console
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
