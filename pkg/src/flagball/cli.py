"""Command-line interface: ``flagball <command> [options]``.

Exit codes: 0 success, 1 numerical failure or failed check, 2 usage error.
"""
import argparse
import sys
import time

import numpy as np

from . import io, plotdata, radial
from .ball import (
    BallParams,
    BallSignal,
    FlagCoefficients,
    ball_convolve_axisym,
    energy,
    flag_forward,
    flag_inverse,
    random_coefficients,
)
from .errors import ConfigurationError, FlagError
from .flaglet import (
    ADMISSIBILITY_TOL,
    FlagletCoefficients,
    TilingParams,
    admissibility_check,
    build_kernels,
    flaglet_analyze,
    flaglet_synthesize,
    frame_energy,
    kernel_family,
)

FRAME_TOL = 1e-10


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_ball(p, required=False, defaults=True):
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--L", type=int, required=required, default=None if required else d(16), help="angular band-limit")
    p.add_argument("--P", type=int, required=required, default=None if required else d(16), help="radial band-limit")
    p.add_argument("--tau", type=float, default=d(1.0), help="radial scale factor")
    p.add_argument("--scheme", choices=["GL", "MW"], type=str.upper, default=d("GL"), help="sphere sampling scheme")


def _add_tiling(p):
    p.add_argument("--lambda", dest="lam", type=float, default=2.0, help="angular dilation (> 1)")
    p.add_argument("--nu", type=float, default=2.0, help="radial dilation (> 1)")
    p.add_argument("--J0", type=int, default=0, help="minimum angular wavelet scale")
    p.add_argument("--J0p", type=int, default=0, help="minimum radial wavelet scale")


def _add_io(p, json_flag=True):
    p.add_argument("--input", "-i", required=True, help="input .flgb file")
    p.add_argument("--output", "-o", required=True, help="output .flgb file")
    if json_flag:
        p.add_argument("--json", action="store_true", help="also write a JSON sidecar (<output>.json)")


def _tiling(args):
    try:
        return TilingParams(args.lam, args.nu, args.J0, args.J0p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ball(args):
    try:
        return BallParams(args.L, args.P, args.tau, args.scheme)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_against_flags(params, args):
    """Flags given on the command line must agree with the file header."""
    for name in ("L", "P", "tau", "scheme"):
        flag = getattr(args, name, None)
        if flag is not None and flag != getattr(params, name):
            raise UsageError(f"--{name} {flag} does not match the input file ({name} = {getattr(params, name)})")


def _write(obj, args):
    io.write_file(args.output, obj)
    if getattr(args, "json", False):
        io.write_json(args.output + ".json", obj)


def _read(path, expected):
    obj = io.read_file(path)
    if not isinstance(obj, expected):
        raise UsageError(f"{path} holds a {io.kind_of(obj)}, expected {expected.__name__}")
    return obj


def _emit_csv(header, rows, output):
    io.write_csv(output if output else sys.stdout, header, rows)


def cmd_forward(args):
    signal = _read(args.input, BallSignal)
    _check_against_flags(signal.params, args)
    _write(flag_forward(signal), args)
    return 0


def cmd_inverse(args):
    coeffs = _read(args.input, FlagCoefficients)
    _check_against_flags(coeffs.params, args)
    _write(flag_inverse(coeffs), args)
    return 0


def cmd_roundtrip(args):
    params = _ball(args)
    coeffs = random_coefficients(params, args.seed)
    t0 = time.perf_counter()
    back = flag_forward(flag_inverse(coeffs))
    wall = time.perf_counter() - t0
    err = float(np.abs(back.values - coeffs.values).max())
    ok = err <= args.tol
    rel = "<" if ok else ">"
    print(f"L={params.L} P={params.P} scheme={params.scheme} N={params.n_samples}")
    print(f"max_error = {err:.3e} {rel} {args.tol:g}  ({'PASS' if ok else 'FAIL'})")
    print(f"wall_time = {wall:.3f} s")
    return 0 if ok else 1


def cmd_convolve(args):
    f = _read(args.input, FlagCoefficients)
    h = _read(args.kernel, FlagCoefficients)
    _write(ball_convolve_axisym(f, h), args)
    return 0


def cmd_wavelet_analyze(args):
    f = _read(args.input, FlagCoefficients)
    family = kernel_family(f.params, _tiling(args))
    _write(flaglet_analyze(f, family, multires=args.multires), args)
    return 0


def cmd_wavelet_synthesize(args):
    w = _read(args.input, FlagletCoefficients)
    family = kernel_family(w.scaling.params, w.tiling or TilingParams())
    _write(flaglet_synthesize(w, family), args)
    return 0


def cmd_check_admissibility(args):
    family = build_kernels(_ball(args), _tiling(args))
    resid = admissibility_check(family)
    ok = resid <= ADMISSIBILITY_TOL
    print(f"admissibility residual = {resid:.3e} ({'PASS' if ok else 'FAIL'}, tolerance {ADMISSIBILITY_TOL:g})")
    if args.save_family:
        io.write_file(args.save_family, family)
    return 0 if ok else 1


def cmd_check_frame(args):
    params = _ball(args)
    family = kernel_family(params, _tiling(args))
    worst = 0.0
    for k in range(args.count):
        f = random_coefficients(params, args.seed + k)
        ratio = frame_energy(flaglet_analyze(f, family, multires=args.multires)) / energy(f)
        worst = max(worst, abs(ratio - 1))
        print(f"seed {args.seed + k}: frame energy ratio = {ratio:.15f}")
    ok = worst <= FRAME_TOL
    print(f"max |ratio - 1| = {worst:.3e} ({'PASS' if ok else 'FAIL'}, tolerance {FRAME_TOL:g})")
    return 0 if ok else 1


def cmd_dump_quadrature(args):
    header, rows = plotdata.quadrature_table(args.P, args.tau)
    _emit_csv(header, rows, args.output)
    if args.binary:
        io.write_file(args.binary, radial.radial_quadrature(radial.RadialParams(args.P, args.tau)))
    return 0


def cmd_dump_dirac(args):
    header, rows = plotdata.dirac_profiles(args.P, args.positions, R=args.R, n_radii=args.n_radii, tau=args.tau)
    _emit_csv(header, rows, args.output)
    return 0


def cmd_dump_kernel(args):
    radial_table, angular_table = plotdata.flaglet_profiles(
        args.L, args.P, args.j, args.jp, shifts=args.s, R=args.R, tau=args.tau, tiling=_tiling(args)
    )
    header, rows = radial_table if args.profile == "radial" else angular_table
    _emit_csv(header, rows, args.output)
    return 0


def cmd_bench(args):
    header, rows = plotdata.bench(args.L_list, args.P_list, scheme=args.scheme, seed=args.seed)
    _emit_csv(header, rows, args.output)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="flagball", description="Fourier-Laguerre transforms and flaglets on the ball.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("forward", help="ball signal file -> Fourier-Laguerre coefficient file")
    _add_io(p)
    _add_ball(p, defaults=False)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("inverse", help="Fourier-Laguerre coefficient file -> ball signal file")
    _add_io(p)
    _add_ball(p, defaults=False)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("roundtrip", help="random coefficients -> samples -> coefficients; report max error")
    _add_ball(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10, help="fail (exit 1) above this max abs error")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("convolve", help="axisymmetric ball convolution in harmonic space")
    _add_io(p)
    p.add_argument("--kernel", "-k", required=True, help="axisymmetric kernel coefficient file")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("wavelet-analyze", help="coefficient file -> flaglet coefficient file")
    _add_io(p)
    _add_tiling(p)
    p.add_argument("--multires", action="store_true", help="store each scale at its reduced band-limits")
    p.set_defaults(func=cmd_wavelet_analyze)

    p = sub.add_parser("wavelet-synthesize", help="flaglet coefficient file -> coefficient file")
    _add_io(p)
    p.set_defaults(func=cmd_wavelet_synthesize)

    p = sub.add_parser("check-admissibility", help="max resolution-of-identity residual; exit 1 above 1e-12")
    _add_ball(p)
    _add_tiling(p)
    p.add_argument("--save-family", metavar="FILE", help="write the kernels as a wavelet-family file")
    p.set_defaults(func=cmd_check_admissibility)

    p = sub.add_parser("check-frame", help="frame energy ratio of random signals; exit 1 if off by > 1e-10")
    _add_ball(p)
    _add_tiling(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1, help="number of seeded signals (seed, seed+1, ...)")
    p.add_argument("--multires", action="store_true")
    p.set_defaults(func=cmd_check_frame)

    p = sub.add_parser("dump-quadrature", help="CSV of radial nodes and weights")
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.add_argument("--binary", metavar="FILE", help="also write a radial-quadrature .flgb file")
    p.set_defaults(func=cmd_dump_quadrature)

    p = sub.add_parser("dump-dirac", help="CSV of band-limited radial Dirac deltas")
    p.add_argument("--P", type=int, required=True)
    p.add_argument("--positions", type=_float_list, default=[0.2, 0.3, 0.4])
    p.add_argument("--R", type=float, default=1.0, help="plot radius; sets tau so the last node is at R")
    p.add_argument("--tau", type=float, default=None, help="explicit tau (overrides --R scaling)")
    p.add_argument("--n-radii", type=int, default=2001)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_dump_dirac)

    p = sub.add_parser("dump-kernel", help="CSV profiles of a flaglet translated radially")
    p.add_argument("--L", type=int, default=64)
    p.add_argument("--P", type=int, default=64)
    p.add_argument("--j", type=int, default=5)
    p.add_argument("--jp", type=int, default=5)
    p.add_argument("--s", type=_float_list, default=[0.2, 0.4], help="comma-separated translation radii")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--profile", choices=["radial", "angular"], default="radial")
    _add_tiling(p)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_dump_kernel)

    p = sub.add_parser("bench", help="CSV of transform timings and round-trip errors")
    p.add_argument("--L-list", type=_int_list, default=[8, 16, 32])
    p.add_argument("--P-list", type=_int_list, default=[8, 16, 32])
    p.add_argument("--scheme", choices=["GL", "MW"], type=str.upper, default="GL")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        parser.error(str(exc))
    except (FlagError, ValueError, OSError) as exc:
        print(f"flagball {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
