"""Command-line front end: JSON problems in, JSON or text reports out.

Problem files carry complex matrices as nested [re, im] pairs:

    {"B": [[[0,0],[1,0]],[[0,0],[0,0]]], "H": ..., "tolerance": {...}}

Exit codes are stable API: 0 success, 2 invalid input pair, 3 parse
error, 4 no root exists in the requested mode.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import canonical, pairing, roots, stability, verify
from .errors import (
    ExistenceViolation,
    GramianNotHermitian,
    GramianSingular,
    IndefSqrtError,
    NoHnnRoot,
    NotHNonnegative,
)
from .linalg import Tolerance, spectral_norm

EXIT_OK = 0
EXIT_INVALID_PAIR = 2
EXIT_PARSE = 3
EXIT_NO_ROOT = 4


class ProblemFormatError(IndefSqrtError):
    """Problem file does not match the expected schema."""


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def decode_matrix(data, name: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"{name} is not a nested [re, im] array: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ProblemFormatError(
            f"{name} must be a square matrix of [re, im] pairs, got shape {arr.shape}"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def load_problem(path: str, args) -> tuple[np.ndarray, np.ndarray, Tolerance]:
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "B" not in doc or "H" not in doc:
        raise ProblemFormatError('problem file must be an object with "B" and "H"')
    b = decode_matrix(doc["B"], "B")
    h = decode_matrix(doc["H"], "H")
    if b.shape != h.shape:
        raise ProblemFormatError("B and H must have equal dimensions")
    tol_doc = doc.get("tolerance", {})
    if not isinstance(tol_doc, dict):
        raise ProblemFormatError('"tolerance" must be an object')
    rel = args.tol_rel if args.tol_rel is not None else tol_doc.get("rel", 1e-10)
    abs_ = args.tol_abs if args.tol_abs is not None else tol_doc.get("abs", 1e-12)
    try:
        tol = Tolerance(rel=float(rel), abs=float(abs_))
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"bad tolerance: {exc}") from exc
    return b, h, tol


def get_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("INDEFSQRT_SEED")
    return int(env) if env else 0


def _block_json(b: canonical.CanonicalBlock) -> dict:
    return {"eigenvalue": b.eigenvalue, "size": b.size, "sign": b.sign}


def _jordan_json(blocks) -> list:
    out = []
    for blk in blocks:
        ev = complex(blk[0]) if isinstance(blk, tuple) else complex(blk.eigenvalue)
        size = blk[1] if isinstance(blk, tuple) else blk.size
        item = {"eigenvalue": [ev.real, ev.imag], "size": int(size)}
        if not isinstance(blk, tuple) and blk.sign is not None:
            item["sign"] = blk.sign
        out.append(item)
    return out


def _pairing_json(p: pairing.SegrePairing) -> dict:
    l1, l2, l3, l4 = p.counts()
    return {
        "pairs": [list(sp.as_tuple()) for sp in p.pairs],
        "counts": {"l1": l1, "l2": l2, "l3": l3, "l4": l4},
    }


def _envelope(command: str, b, h, tol: Tolerance) -> dict:
    return {
        "command": command,
        "tolerance": {"rel": tol.rel, "abs": tol.abs},
        "input": {"B": encode_matrix(b), "H": encode_matrix(h)},
        "errors": [],
    }


def _canonical_section(cp: canonical.CanonicalPair, transform) -> dict:
    return {
        "blocks": [_block_json(b) for b in cp.blocks],
        "counts": {
            "q": cp.q,
            "r": cp.r,
            "s": cp.s,
            "t": cp.t,
            "s_plus": cp.s_plus,
            "s_minus": cp.s_minus,
        },
        "transform_cond": transform.cond,
    }


def _existence_section(cp: canonical.CanonicalPair) -> dict:
    out = {}
    for mode in pairing.MODES:
        ok, why = roots.existence(cp, mode)
        out[mode] = {"exists": ok, "reason": why}
    return out


def cmd_analyze(args) -> tuple[dict, int]:
    b, h, tol = load_problem(args.problem, args)
    cp, transform = canonical.canonicalize(b, h, tol)
    report = _envelope("analyze", b, h, tol)
    report["canonical"] = _canonical_section(cp, transform)
    report["existence"] = _existence_section(cp)
    return report, EXIT_OK


def cmd_pairings(args) -> tuple[dict, int]:
    b, h, tol = load_problem(args.problem, args)
    cp, transform = canonical.canonicalize(b, h, tol)
    cp0 = cp.zero_part()
    sc = pairing.segre_characteristic(cp0)
    report = _envelope("pairings", b, h, tol)
    report["canonical"] = _canonical_section(cp, transform)
    report["segre_characteristic"] = list(sc.entries)
    items = []
    signs = roots.RootSignChoice((1,) * cp.r)
    for p in pairing.enumerate_pairings(sc):
        entry = _pairing_json(p)
        entry["admissible"] = {}
        for mode in pairing.MODES:
            ok, why = pairing.admissible_for_mode(p, cp0, mode)
            entry["admissible"][mode] = {"ok": ok, "reason": why}
        predicted = roots.predicted_jordan_form(p, cp, signs, pairing.GENERAL)
        entry["predicted_jordan"] = _jordan_json(predicted)
        items.append(entry)
    report["pairings"] = items
    return report, EXIT_OK


def _select_pairing(cp, mode, index):
    cp0 = cp.zero_part()
    all_pairings = pairing.enumerate_pairings(pairing.segre_characteristic(cp0))
    if index is not None:
        if not 0 <= index < len(all_pairings):
            raise ExistenceViolation(
                f"pairing index {index} out of range (have {len(all_pairings)})"
            )
        chosen = all_pairings[index]
        ok, why = pairing.admissible_for_mode(chosen, cp0, mode)
        if not ok:
            raise ExistenceViolation(f"pairing {index} not admissible for {mode}: {why}")
        return chosen
    for p in all_pairings:
        if pairing.admissible_for_mode(p, cp0, mode)[0]:
            return p
    raise ExistenceViolation(f"no pairing is admissible for mode {mode}")


def cmd_sqrt(args) -> tuple[dict, int]:
    b, h, tol = load_problem(args.problem, args)
    seed = get_seed(args)
    cp, transform = canonical.canonicalize(b, h, tol)
    ok, why = roots.existence(cp, args.mode)
    if not ok:
        raise ExistenceViolation(f"no {args.mode} square root: {why}")
    chosen = _select_pairing(cp, args.mode, args.pairing)
    plan = roots.build_plan(cp, chosen, args.mode, seed=seed)
    a_canon = roots.assemble_root(cp, plan)
    s = transform.S
    a = s @ a_canon @ np.linalg.inv(s)  # back to the coordinates of the input

    square = verify.check_square(a, b, tol)
    residuals = {"square": square.residual}
    if args.mode in (pairing.HSA, pairing.HNN):
        ha = h @ a
        residuals["selfadjoint"] = spectral_norm(ha - ha.conj().T)
    if args.mode == pairing.HNN:
        w = np.linalg.eigvalsh(0.5 * (h @ a + (h @ a).conj().T))
        residuals["psd_min_eig"] = float(w[0])

    predicted = roots.predicted_jordan_form(chosen, cp, plan.signs, args.mode)
    detected = verify.jordan_structure(a, tol)
    predicted_jd = verify.JordanData(tuple((p.eigenvalue, p.size) for p in predicted))

    report = _envelope("sqrt", b, h, tol)
    report["canonical"] = _canonical_section(cp, transform)
    report["root"] = {
        "mode": args.mode,
        "seed": seed,
        "matrix": encode_matrix(a),
        "matrix_canonical": encode_matrix(a_canon),
        "pairing": _pairing_json(chosen),
        "signs": list(plan.signs.deltas),
        "params": [
            {"kind": p.kind, "values": [[v.real, v.imag] for v in p.free_values()]}
            for p in plan.params
        ],
        "residuals": residuals,
        "square_ok": square.ok,
        "jordan_predicted": _jordan_json(predicted),
        "jordan_detected": _jordan_json(detected.blocks),
        "jordan_match": detected.matches(predicted_jd),
    }
    return report, EXIT_OK


def cmd_stability(args) -> tuple[dict, int]:
    b, h, tol = load_problem(args.problem, args)
    seed = get_seed(args)
    cp, transform = canonical.canonicalize(b, h, tol)
    ok, why = roots.existence(cp, pairing.HNN)
    if not ok:
        raise NoHnnRoot(f"no hnn square root: {why}")
    best = stability.best_stability(cp)
    cp0 = cp.zero_part()
    per = []
    plans = {}
    for idx, p in enumerate(pairing.enumerate_pairings(pairing.segre_characteristic(cp0))):
        if not pairing.admissible_for_mode(p, cp0, pairing.HNN)[0]:
            continue
        plan = roots.build_plan(cp, p, pairing.HNN, seed=seed)
        verdict = stability.classify_root(plan, cp)
        plans[idx] = plan
        per.append(
            {
                "index": idx,
                "pairing": _pairing_json(p),
                "verdict": {"level": verdict.level, "reason": verdict.reason},
            }
        )
    report = _envelope("stability", b, h, tol)
    report["canonical"] = _canonical_section(cp, transform)
    report["stability"] = {
        "best": {"level": best.level, "reason": best.reason},
        "per_pairing": per,
    }
    if args.probe:
        if args.pairing is not None:
            if args.pairing not in plans:
                raise NoHnnRoot(f"pairing index {args.pairing} is not hnn-admissible")
            plan = plans[args.pairing]
        else:
            plan = plans[min(plans)]
        probe = stability.perturbation_probe(
            cp, plan, args.radius, args.samples, seed, tol
        )
        report["stability"]["probe"] = {
            "samples": probe.samples,
            "root_exists_count": probe.root_exists_count,
            "max_nearest_root_distance": probe.max_nearest_root_distance,
            "radius": probe.radius,
            "failures": [{"index": f.index, "reason": f.reason} for f in probe.failures],
            "sample_distances": [list(d) for d in probe.sample_distances],
        }
    return report, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    b, h, tol = load_problem(args.problem, args)
    try:
        doc = json.loads(open(args.root, "r", encoding="utf-8").read())
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid root JSON: {exc}") from exc
    if isinstance(doc, dict) and "A" in doc:
        a = decode_matrix(doc["A"], "A")
    elif isinstance(doc, dict) and "root" in doc and "matrix" in doc["root"]:
        a = decode_matrix(doc["root"]["matrix"], "root.matrix")
    else:
        raise ProblemFormatError('root file must carry "A" or "root.matrix"')
    square = verify.check_square(a, b, tol)
    ha = h @ a
    sa_res = spectral_norm(ha - ha.conj().T)
    sa_ok = sa_res <= tol.threshold(spectral_norm(ha))
    psd_min = float(np.linalg.eigvalsh(0.5 * (ha + ha.conj().T))[0])
    report = _envelope("verify", b, h, tol)
    report["verify"] = {
        "square_ok": square.ok,
        "square_residual": square.residual,
        "selfadjoint_ok": sa_ok,
        "selfadjoint_residual": sa_res,
        "psd_min_eig": psd_min,
        "hnn_ok": bool(sa_ok and psd_min >= -tol.threshold(spectral_norm(ha))),
        "jordan_detected": _jordan_json(verify.jordan_structure(a, tol).blocks),
    }
    return report, EXIT_OK


def cmd_witness(args) -> tuple[dict, int]:
    b, h = stability.instability_witness(args.kind, args.a)
    problem = {
        "B": encode_matrix(b),
        "H": encode_matrix(h),
        "tolerance": {"rel": 1e-10, "abs": 1e-12},
    }
    return problem, EXIT_OK


def _render_text(report: dict) -> str:
    lines = [f"command: {report.get('command', 'witness')}"]
    if "canonical" in report:
        lines.append("canonical blocks:")
        for blk in report["canonical"]["blocks"]:
            lines.append(
                f"  eigenvalue {blk['eigenvalue']:+.6g}  size {blk['size']}  sign {blk['sign']:+d}"
            )
        counts = report["canonical"]["counts"]
        lines.append(
            "counts: "
            + " ".join(f"{k}={v}" for k, v in counts.items())
        )
    if "existence" in report:
        for mode, info in report["existence"].items():
            lines.append(f"existence[{mode}]: {info['exists']} ({info['reason']})")
    if "pairings" in report:
        for i, item in enumerate(report["pairings"]):
            pairs = ",".join(str(tuple(p)) for p in item["pairs"])
            lines.append(f"pairing {i}: {pairs}")
    if "root" in report:
        r = report["root"]
        lines.append(f"root mode: {r['mode']}  square residual: {r['residuals']['square']:.3e}")
        lines.append(f"jordan match: {r['jordan_match']}")
    if "stability" in report:
        s = report["stability"]
        lines.append(f"best stability: {s['best']['level']} ({s['best']['reason']})")
        for item in s["per_pairing"]:
            lines.append(f"  pairing {item['index']}: {item['verdict']['level']}")
        if "probe" in s:
            p = s["probe"]
            lines.append(
                f"probe: {p['root_exists_count']}/{p['samples']} rooted, "
                f"max distance {p['max_nearest_root_distance']:.3e}"
            )
    if "verify" in report:
        v = report["verify"]
        lines.append(
            f"square ok: {v['square_ok']} (residual {v['square_residual']:.3e}); "
            f"selfadjoint ok: {v['selfadjoint_ok']}; hnn ok: {v['hnn_ok']}"
        )
    if report.get("errors"):
        for err in report["errors"]:
            lines.append(f"error: {err}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    if getattr(args, "format", "json") == "text" and "B" not in report:
        text = _render_text(report)
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indefsqrt",
        description="Square roots of H-nonnegative matrices in indefinite inner product spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_problem=True):
        if needs_problem:
            p.add_argument("problem", help="problem JSON file, or - for stdin")
        p.add_argument("--tol-rel", type=float, default=None)
        p.add_argument("--tol-abs", type=float, default=None)
        p.add_argument("--seed", type=int, default=None, help="fallback: $INDEFSQRT_SEED, then 0")
        p.add_argument("--out", default=None, help="write the report to a file")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("analyze", help="canonical form and existence for all modes")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pairings", help="all Segre pairings with predicted Jordan forms")
    common(p)
    p.set_defaults(func=cmd_pairings)

    p = sub.add_parser("sqrt", help="construct a square root")
    common(p)
    p.add_argument("--mode", choices=pairing.MODES, default=pairing.GENERAL)
    p.add_argument("--pairing", type=int, default=None, help="index into the pairings list")
    p.set_defaults(func=cmd_sqrt)

    p = sub.add_parser("stability", help="stability verdicts for hnn roots")
    common(p)
    p.add_argument("--pairing", type=int, default=None)
    p.add_argument("--probe", action="store_true")
    p.add_argument("--radius", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("verify", help="check a candidate root against a problem")
    common(p)
    p.add_argument("--root", required=True, help='JSON file with "A" or a sqrt report')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="emit an instability witness problem")
    common(p, needs_problem=False)
    p.add_argument("--kind", choices=("delta_minus", "mixed_pair"), required=True)
    p.add_argument("--a", type=float, default=0.5)
    p.set_defaults(func=cmd_witness)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except ProblemFormatError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (NotHNonnegative, GramianNotHermitian, GramianSingular) as exc:
        _emit({"errors": [str(exc)]}, args)
        return EXIT_INVALID_PAIR
    except (ExistenceViolation, NoHnnRoot) as exc:
        _emit({"errors": [str(exc)]}, args)
        return EXIT_NO_ROOT
    _emit(report, args)
    return code


def entry() -> None:
    sys.exit(main())
