"""Command-line interface: ``hopfevo <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .classify import gksl_decompose, positivity_witness
from .constraints import lindblad_feasibility, solve_prescription
from .dynamics import (
    DEMO_GENERATORS,
    PRESETS,
    PrescriptionCoeffs,
    build_generator,
    evolve,
    hamiltonian_for,
    named_state,
    parse_complex,
)
from .errors import HopfEvoError, InconsistentInput, InvalidState, ModelFileError, UnknownSymbol
from .modelfile import load_model
from .models import MODEL_IDS, audit_model, build_model
from .reproduce import ITEMS, run_item

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_UNKNOWN_ID = 2
EXIT_BAD_INPUT = 3
EXIT_BAD_FILE = 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_BAD_INPUT, "bad_input", message)


def _param(text: str | None, name: str, allow_complex: bool = False):
    if text is None:
        return None
    value = parse_complex(text)
    if not allow_complex:
        if value.imag != 0:
            raise InconsistentInput(f"--{name} must be real")
        return value.real
    return value if value.imag != 0 else value.real


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("model_id", nargs="?", help="model id (same as --model)")
    p.add_argument("--model", help="model or demo-generator id")
    p.add_argument("--file", help="custom model JSON file")
    p.add_argument("--z", help="U_q deformation parameter; imaginary values use the suffix i")
    p.add_argument("--h", help="general-family deformation parameter")
    p.add_argument("--inv-kappa", dest="inv_kappa", help="1/kappa")
    p.add_argument("--mode", default="first-order", help="exact | first-order (U_q only)")
    p.add_argument("--scale", type=float, default=1.0, help="energy scale of the Hamiltonian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ham", help="Hamiltonian id (model-specific)")


def _add_coeff_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coeffs", help="alpha,beta,gamma,delta (complex entries like 0.5-0.1i)")
    p.add_argument("--preset", help="quarter | half")


def _resolve_model(args):
    if args.file:
        return load_model(args.file)
    if not args.model:
        raise CliError(EXIT_BAD_INPUT, "bad_input", "either --model or --file is required")
    if args.model not in MODEL_IDS:
        raise CliError(EXIT_UNKNOWN_ID, "unknown_id", f"unknown model id {args.model!r}")
    if args.mode not in ("exact", "first-order"):
        raise CliError(EXIT_BAD_INPUT, "bad_input", f"unknown mode {args.mode!r}")
    return build_model(
        args.model,
        z=_param(args.z, "z", allow_complex=True),
        h=_param(args.h, "h"),
        inv_kappa=_param(args.inv_kappa, "inv-kappa"),
        mode=args.mode,
        seed=args.seed,
        scale=args.scale,
    )


def _resolve_coeffs(args) -> PrescriptionCoeffs:
    if args.coeffs and args.preset:
        raise CliError(EXIT_BAD_INPUT, "bad_input", "give either --coeffs or --preset, not both")
    if args.preset:
        if args.preset not in PRESETS:
            raise CliError(EXIT_UNKNOWN_ID, "unknown_id", f"unknown preset {args.preset!r}")
        return PRESETS[args.preset]
    if args.coeffs:
        return PrescriptionCoeffs.parse(args.coeffs)
    raise CliError(EXIT_BAD_INPUT, "bad_input", "--coeffs or --preset is required")


def _hamiltonian(model, name):
    try:
        return hamiltonian_for(model, name)
    except UnknownSymbol as exc:
        raise CliError(EXIT_UNKNOWN_ID, "unknown_id", str(exc)) from None


def _generator(args):
    """(superop, param value, model or None, descriptor)."""
    if args.model in DEMO_GENERATORS and not args.file:
        kwargs = {}
        if args.model == "redfield-demo" and args.z is not None:
            kwargs["z"] = _param(args.z, "z")
        gen = DEMO_GENERATORS[args.model](**kwargs)
        return gen, None, None, {"name": args.model, "kind": "demo-generator"}
    model = _resolve_model(args)
    h = _hamiltonian(model, args.ham)
    coeffs = _resolve_coeffs(args)
    gen = build_generator(h, model, coeffs)
    desc = model.descriptor()
    desc["hamiltonian"] = args.ham or model.default_hamiltonian
    desc["coeffs"] = coeffs.as_dict()
    return gen, model.value(), model, desc


def _document(command: str, argv: list, model_desc, results, passed: bool | None = None) -> dict:
    doc = {
        "schema_version": REPORT_SCHEMA,
        "tool": {"name": "hopfevo", "version": __version__},
        "command": command,
        "argv": argv,
        "model": model_desc,
        "results": results,
    }
    if passed is not None:
        doc["pass"] = passed
    return doc


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False, default=_default) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not serializable: {type(o).__name__}")


def _finite(x):
    """Replace non-finite floats so that JSON stays strict."""
    if isinstance(x, float) and not np.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_finite(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(args, argv) -> int:
    gen, value, model, desc = _generator(args)
    report = gksl_decompose(gen, value)
    witness = positivity_witness(gen, seed=args.seed, samples=args.samples, param_value=value)
    results = {"generator": report.as_dict(), "witness_search": witness.as_dict()}
    if model is not None:
        audit = audit_model(model)
        results["audit"] = audit.as_dict()
        results["audit_flags"] = {k: "PASS" if v else "FAIL" for k, v in audit.verdicts.items()}
    _emit(_finite(_document("analyze", argv, desc, results)), args.out)
    return EXIT_OK


def _parse_state(spec: str, dim: int) -> np.ndarray:
    spec = spec.strip()
    if spec.startswith("["):
        try:
            raw = np.array(json.loads(spec), dtype=float)
        except (json.JSONDecodeError, TypeError, ValueError):
            raise InvalidState("inline state must be a JSON matrix of [re, im] pairs") from None
        if raw.ndim != 3 or raw.shape[-1] != 2:
            raise InvalidState("inline state must be a JSON matrix of [re, im] pairs")
        return raw[..., 0] + 1j * raw[..., 1]
    return named_state(spec, dim)


def cmd_evolve(args, argv) -> int:
    gen, value, model, desc = _generator(args)
    rho0 = _parse_state(args.rho0, gen.dim)
    traj = evolve(gen, rho0, args.t, args.dt, value)
    if args.out:
        traj.to_csv(args.out)
        doc = _document("evolve", argv, desc, {"trajectory": traj.summary(), "csv": args.out, "rho0": args.rho0})
        _emit(_finite(doc), None)
    else:
        sys.stdout.write(traj.to_csv())
    return EXIT_OK


def cmd_audit(args, argv) -> int:
    try:
        model = _resolve_model(args)
    except ModelFileError:
        raise
    report = audit_model(model)
    _emit(_finite(_document("audit", argv, model.descriptor(), report.as_dict(), report.passed)), args.out)
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_solve(args, argv) -> int:
    model = _resolve_model(args)
    h = _hamiltonian(model, args.ham)
    sol = solve_prescription(model, h, real=args.real)
    results = {"solution": sol.as_dict(), "coefficients": "real" if args.real else "complex"}
    if args.lindblad:
        results["lindblad_feasibility"] = lindblad_feasibility(model, h, seed=args.seed).as_dict()
    desc = model.descriptor()
    desc["hamiltonian"] = args.ham or model.default_hamiltonian
    _emit(_finite(_document("solve-coeffs", argv, desc, results)), args.out)
    return EXIT_OK


def cmd_reproduce(args, argv) -> int:
    if args.item and args.all:
        raise CliError(EXIT_BAD_INPUT, "bad_input", "give either --all or --item")
    if args.item:
        if args.item not in ITEMS:
            raise CliError(EXIT_UNKNOWN_ID, "unknown_id", f"unknown item {args.item!r}")
        names = [args.item]
    else:
        names = list(ITEMS)
    results = []
    for name in names:
        r = run_item(name)
        print(r.line(), flush=True)
        for note in r.notes:
            print(f"    note: {note}", flush=True)
        results.append(r)
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} items passed", flush=True)
    if args.out:
        doc = _document("reproduce", argv, None, [r.as_dict() for r in results], ok)
        _emit(_finite(doc), args.out)
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_models(args, argv) -> int:
    if args.action != "list":
        raise CliError(EXIT_BAD_INPUT, "bad_input", f"unknown models action {args.action!r}")
    listing = {}
    for mid in MODEL_IDS:
        m = build_model(mid)
        listing[mid] = {
            "hamiltonians": sorted(m.hamiltonians),
            "default_hamiltonian": m.default_hamiltonian,
            "param": m.param,
            "physical": m.physical,
            "dim": m.dim,
        }
    doc = {
        "models": listing,
        "demo_generators": sorted(DEMO_GENERATORS),
        "presets": {k: v.as_dict() for k, v in PRESETS.items()},
    }
    _emit(_document("models list", argv, None, doc), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hopfevo", description="Hopf-algebra deformed quantum evolution toolkit")
    parser.add_argument("--version", action="version", version=f"hopfevo {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze", help="build and classify a generator")
    _add_model_args(p)
    _add_coeff_args(p)
    p.add_argument("--samples", type=int, default=10_000, help="witness search sample count")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("evolve", help="integrate a generator and write a CSV trajectory")
    _add_model_args(p)
    _add_coeff_args(p)
    p.add_argument("--rho0", default="z+", help="z+, z-, x+, x-, y+, y-, mixed or a JSON matrix of [re, im]")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--out", help="CSV path (CSV goes to stdout when omitted)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("audit", help="check Hopf-structure physicality")
    _add_model_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("solve-coeffs", help="solve for admissible prescription coefficients")
    _add_model_args(p)
    p.add_argument("--real", action="store_true", help="pin the imaginary parts to zero")
    p.add_argument("--lindblad", action="store_true", help="also run the Lindblad feasibility search")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reproduce", help="run the reproduction suite")
    p.add_argument("--all", action="store_true")
    p.add_argument("--item")
    p.add_argument("--out", help="also write a JSON report")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("models", help="list shipped models")
    p.add_argument("action", nargs="?", default="list")
    p.add_argument("--out")
    p.set_defaults(func=cmd_models)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    msg = " ".join(str(message).split())
    sys.stderr.write(f"hopfevo: error: {kind}: {msg}\n")
    return code


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "model_id", None):
            if args.model and args.model != args.model_id:
                raise CliError(EXIT_BAD_INPUT, "bad_input", "conflicting model ids")
            args.model = args.model_id
        if not getattr(args, "func", None):
            raise CliError(EXIT_BAD_INPUT, "bad_input", "a command is required")
        return args.func(args, argv)
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc))
    except ModelFileError as exc:
        return _fail(EXIT_BAD_FILE, "bad_file", str(exc))
    except UnknownSymbol as exc:
        return _fail(EXIT_UNKNOWN_ID, "unknown_id", str(exc))
    except (HopfEvoError, ValueError) as exc:
        return _fail(EXIT_BAD_INPUT, "bad_input", str(exc))
    except OSError as exc:
        return _fail(EXIT_BAD_INPUT, "bad_input", f"{exc.strerror}: {exc.filename}")


if __name__ == "__main__":
    sys.exit(main())
