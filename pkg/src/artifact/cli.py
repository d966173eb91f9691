"""Command-line interface: construct, verify, transform and export frames as JSON."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from . import conference as cf
from . import finite_field as ff
from . import jsonio
from .abelian_group import FiniteAbelianGroup
from .cmatrix import DEFAULT_TOL
from .constructions import FamilySpec, build_family
from .errors import ValidationError
from .fusion_frame import Certificate, FusionFrame, certify, direct_sum, naimark_complement, spatial_complement
from .harmonic import check_block_circulant, check_real

EXIT_OK, EXIT_INPUT, EXIT_CLAIM = 0, 2, 3

FAMILY_FLAGS = {
    "eitff-qm1-q-2": "EITFF_Qm1_Q_2",
    "ectff-qm1-q-r": "ECTFF_Qm1_Q_R",
    "eitff-q-q-2": "EITFF_Q_Q_2",
    "ectff-q-q-r": "ECTFF_Q_Q_R",
    "eitff-11-11-3": "EITFF_11_11_3",
    "harmonic-etf": "HARMONIC_ETF",
    "example-4-5-2": "EXAMPLE_4_5_2",
}

CONDITIONS = {
    "tight": ("tight: ||sum Phi_n Phi_n* - A I||_F <= tol", "tight_residual"),
    "equichordal": ("equichordal: max |‖B‖_F^2 - mean| over pairs <= tol", "equichordal_deviation"),
    "equiisoclinic": ("equi-isoclinic: max ||B*B - sigma^2 I||_F over pairs <= tol", "equiisoclinic_deviation"),
    "real": ("real: max |Im Gram| <= tol", "max_gram_imag"),
}


class Run:
    """Collects input and output digests for the manifest of one command."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.start = time.perf_counter()
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.extra: dict = {}
        self.out = Path(getattr(args, "out", ".") or ".")

    def read(self, path: str):
        obj = jsonio.read(Path(path))
        self.inputs[str(path)] = jsonio.digest(Path(path))
        return obj

    def write(self, name: str, obj) -> None:
        try:
            self.out.mkdir(parents=True, exist_ok=True)
            self.outputs[name] = jsonio.write(self.out / name, obj)
        except OSError as exc:
            raise ValidationError(f"cannot write {self.out / name}: {exc}") from exc

    def finish(self) -> None:
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "command")}
        manifest = {
            "command": self.args.command,
            "parameters": params,
            "version": __version__,
            "tol": self.args.tol,
            "inputs": self.inputs,
            "outputs": self.outputs,
            **self.extra,
            "wall_time_s": time.perf_counter() - self.start,
        }
        self.write("manifest.json", manifest)


def _certificate(frame: FusionFrame, tol: float) -> Certificate:
    cert = certify(frame, tol)
    if frame.group is not None and frame.is_uniform:
        cert.block_circulant = check_block_circulant(frame, tol)
    return cert


def _violations(cert: Certificate, properties: Sequence[str]) -> list[dict]:
    flags = {
        "tight": cert.is_tight and cert.is_fusion_frame,
        "equichordal": bool(cert.is_equichordal),
        "equiisoclinic": bool(cert.is_equiisoclinic),
        "real": cert.is_real,
    }
    out = []
    for prop in properties:
        if not flags[prop]:
            condition, field = CONDITIONS[prop]
            out.append({"property": prop, "condition": condition, "residual": getattr(cert, field)})
    if "tight" in properties and not cert.is_fusion_frame:
        out.append({"property": "isometries", "condition": "max ||Phi_n* Phi_n - I||_F <= tol",
                    "residual": cert.isometry_residual})
    return out


def _claim_result(run: Run, cert: Certificate, properties: Sequence[str], shape=None) -> int:
    bad = _violations(cert, properties)
    if shape is not None and (cert.ambient_dim, cert.num_subspaces) != tuple(shape[:2]):
        bad.append({"property": "shape", "condition": f"(D, N, R) = {tuple(shape)}", "residual": None})
    run.extra["claim"] = {"properties": list(properties), "shape": None if shape is None else list(shape),
                          "satisfied": not bad}
    cert_json = cert.to_json()
    if bad:
        cert_json["claim_violations"] = bad
    run.write("certificate.json", cert_json)
    return EXIT_OK if not bad else EXIT_CLAIM


def _int_list(text: Optional[str]) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _subset(text: Optional[str], rank: int) -> Optional[tuple[tuple[int, ...], ...]]:
    if text is None:
        return None
    if rank == 1:
        return tuple((g,) for g in _int_list(text))
    return tuple(_int_list(part) for part in text.split(";") if part.strip())


def cmd_construct(args: argparse.Namespace) -> int:
    run = Run(args)
    fam = FAMILY_FLAGS[args.family]
    p = k = None
    if args.q is not None:
        p, k = ff.prime_power(args.q)
    group = _int_list(args.group)
    spec = FamilySpec(
        family=fam,
        p=p,
        k=k or 1,
        R=args.r,
        char_indices=_int_list(args.chars),
        group_factors=group,
        diff_set=_subset(args.subset, len(group) if group else 1),
        realify=args.realify,
        chi_index=args.chi,
    )
    con = build_family(spec)
    run.extra["family"] = spec.to_json()
    run.extra["real_by_projection_symmetry"] = check_real(con.generator, args.tol)
    run.write("frame.json", con.frame.to_json())
    run.write("gen.json", con.generator.to_json())
    cert = _certificate(con.frame, args.tol)
    code = _claim_result(run, cert, con.claim.properties, con.claim.shape)
    run.finish()
    return code


def cmd_verify(args: argparse.Namespace) -> int:
    run = Run(args)
    frame = FusionFrame.from_json(run.read(args.input))
    if args.group is not None:
        frame = FusionFrame(frame.ambient_dim, frame.isometries, FiniteAbelianGroup(_int_list(args.group)))
    if frame.ambient_dim < 1 or max(frame.ranks) < 1:
        raise ValidationError("frame has no nonzero subspace")
    run.write("certificate.json", _certificate(frame, args.tol).to_json())
    run.finish()
    return EXIT_OK


def cmd_complement(args: argparse.Namespace) -> int:
    run = Run(args)
    frame = FusionFrame.from_json(run.read(args.input))
    if args.kind == "naimark":
        out = naimark_complement(frame, args.tol)
    else:
        out = spatial_complement(frame, args.tol)
    run.write("frame.json", out.to_json())
    code = _claim_result(run, _certificate(out, args.tol), ("tight",))
    run.finish()
    return code


def cmd_directsum(args: argparse.Namespace) -> int:
    run = Run(args)
    frames = [FusionFrame.from_json(run.read(p)) for p in args.inputs]
    out = direct_sum(frames, args.tol)
    run.write("frame.json", out.to_json())
    run.write("certificate.json", _certificate(out, args.tol).to_json())
    run.finish()
    return EXIT_OK


def cmd_gauss_sum(args: argparse.Namespace) -> int:
    field = ff.build_field(args.p, args.k)
    if not 0 <= args.gamma < field.q:
        raise ValidationError(f"gamma label must lie in [0, {field.q})")
    z = ff.gauss_sum(field, args.gamma, args.chi)
    result = {"field": field.to_json(), "chi": args.chi % (field.q - 1), "gamma": args.gamma,
              "value": {"re": z.real, "im": z.imag}, "modulus": abs(z)}
    sys.stdout.write(jsonio.dumps(result))
    if args.out is not None:
        run = Run(args)
        run.write("gauss_sum.json", result)
        run.finish()
    return EXIT_OK


def _conference_field(args: argparse.Namespace) -> ff.FiniteField:
    if args.q is not None:
        if args.p is not None:
            raise ValidationError("give either --q or --p/--k")
        return ff.field_of_order(args.q)
    if args.p is None:
        raise ValidationError("give --q or --p")
    return ff.build_field(args.p, args.k)


def cmd_conference(args: argparse.Namespace) -> int:
    run = Run(args)
    field = _conference_field(args)
    want = "even" if args.eps == 1 else "odd"
    if args.chi is not None:
        m = args.chi
        if m % (field.q - 1) == 0 or ff.char_parity(field, m) != want:
            raise ValidationError(f"character {m} is not a nontrivial {want} character of GF({field.q})")
    else:
        m = next((m for m in range(1, field.q - 1) if ff.char_parity(field, m) == want), None)
        if m is None:
            raise ValidationError(f"GF({field.q}) has no nontrivial {want} character")
    conf = cf.paley_conference(field, m)
    run.write("conference.json", conf.to_json())
    run.write("core.json", cf.extract_core(conf).to_json())
    run.extra["conference_residuals"] = conf.residuals()
    run.finish()
    return EXIT_OK if conf.is_valid(args.tol) else EXIT_CLAIM


def cmd_signature(args: argparse.Namespace) -> int:
    run = Run(args)
    core = cf.Core.from_json(run.read(args.from_core))
    sig = cf.signature_from_core(core)
    run.write("signature.json", sig.to_json())
    res = cf.signature_residuals(sig)
    run.extra["signature_residuals"] = res
    if not all(v <= args.tol for v in res.values()):
        run.write("certificate.json", {"claim_violations": [
            {"property": "signature", "condition": f"blockwise signature identity for D = {sig.target_dim}",
             "residual": max(res.values())}]})
        run.finish()
        return EXIT_CLAIM
    out = cf.frame_from_signature(sig, args.tol)
    run.write("frame.json", out.frame.to_json())
    code = _claim_result(run, _certificate(out.frame, args.tol), ("tight", "equiisoclinic"),
                         (sig.target_dim, sig.N, sig.R))
    run.finish()
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="absolute tolerance (default 1e-9)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a frame family and certify it")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_FLAGS))
    p.add_argument("--q", type=int, help="field order (prime power)")
    p.add_argument("--r", type=int, help="subspace rank for the ECTFF families")
    p.add_argument("--chars", help="comma-separated multiplicative character indices, first must be 0")
    p.add_argument("--chi", type=int, default=1, help="dual generator index for eitff-11-11-3")
    p.add_argument("--realify", action="store_true", help="apply the realifying unitary (eitff-11-11-3)")
    p.add_argument("--group", help="cyclic factors for harmonic-etf, e.g. 7 or 2,2")
    p.add_argument("--subset", help="subset for harmonic-etf: 1,2,4 or 0,1;1,0 for multi-factor groups")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="certify a frame file")
    p.add_argument("--input", required=True)
    p.add_argument("--group", help="cyclic factors indexing the subspaces, enables the block-circulant check")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("complement", parents=[common], help="Naimark or spatial complement")
    p.add_argument("--kind", required=True, choices=["naimark", "spatial"])
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("directsum", parents=[common], help="direct sum of frames")
    p.add_argument("--inputs", required=True, nargs="+")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_directsum)

    p = sub.add_parser("gauss-sum", parents=[common], help="evaluate <gamma_y, chi_m>")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--chi", type=int, required=True, help="multiplicative character index m")
    p.add_argument("--gamma", type=int, required=True, help="additive character label y (integer encoding)")
    p.add_argument("--out", default=None, help="optional output directory")
    p.set_defaults(func=cmd_gauss_sum)

    p = sub.add_parser("conference", parents=[common], help="Paley-type conference matrix of size Q+1")
    p.add_argument("--q", type=int, help="field order, alternative to --p/--k")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=int, required=True, choices=[1, -1])
    p.add_argument("--chi", type=int, default=None)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_conference)

    p = sub.add_parser("signature", parents=[common], help="EITFF from a conference core")
    p.add_argument("--from-core", required=True, dest="from_core")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_signature)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
