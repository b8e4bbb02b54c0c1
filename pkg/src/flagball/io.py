"""Binary (``.flgb``), JSON and CSV serialisation.

Binary layout, all little-endian::

    magic    4s   b"FLGB"
    version  u16  1
    kind     u8   1 ball-signal | 2 flag-coeffs | 3 flaglet-coeffs
                  | 4 wavelet-family | 5 radial-quadrature
    L        u32  (0 for radial-quadrature)
    P        u32
    tau      f64
    scheme   u8   0 GL | 1 MW
    -- kinds 3 and 4 --
    lambda   f64
    nu       f64
    J0       u32
    J0p      u32
    -- kind 3 --
    multires u8
    nscales  u32
    nscales x (j u32, jp u32, L_j u32, P_j u32)
    -- kind 4 --
    nscales  u32
    nscales x (j u32, jp u32)
    payload  complex128 values as interleaved (re, im) f64 pairs

Payload order: ball-signal and flag-coeffs store their flat arrays;
flaglet-coeffs store the scaling coefficients then each scale in header
order; wavelet-family stores phi then each psi, as (L, P) arrays in C
order; radial-quadrature stores nodes, weights, sample_weights.  Real
arrays are written with zero imaginary parts.
"""
import csv
import io as _io
import json
import struct

import numpy as np

from .ball import BallParams, BallSignal, FlagCoefficients
from .errors import FormatError
from .flaglet import FlagletCoefficients, TilingParams, WaveletFamily
from .radial import RadialParams, RadialQuadrature

__all__ = ["MAGIC", "VERSION", "KINDS", "write_file", "read_file", "to_bytes", "from_bytes",
           "write_json", "read_json", "write_csv", "read_csv"]

MAGIC = b"FLGB"
VERSION = 1
KINDS = {
    "ball-signal": 1,
    "flag-coeffs": 2,
    "flaglet-coeffs": 3,
    "wavelet-family": 4,
    "radial-quadrature": 5,
}
_KIND_NAMES = {v: k for k, v in KINDS.items()}
_SCHEMES = {"GL": 0, "MW": 1}
_SCHEME_NAMES = {v: k for k, v in _SCHEMES.items()}

_HEAD = struct.Struct("<4sHB")
_PARAMS = struct.Struct("<IIdB")
_TILING = struct.Struct("<ddII")
_COUNT = struct.Struct("<I")
_MULTIRES = struct.Struct("<BI")
_SCALE4 = struct.Struct("<IIII")
_SCALE2 = struct.Struct("<II")
_C16 = np.dtype("<c16")


def kind_of(obj):
    if isinstance(obj, BallSignal):
        return "ball-signal"
    if isinstance(obj, FlagCoefficients):
        return "flag-coeffs"
    if isinstance(obj, FlagletCoefficients):
        return "flaglet-coeffs"
    if isinstance(obj, WaveletFamily):
        return "wavelet-family"
    if isinstance(obj, RadialQuadrature):
        return "radial-quadrature"
    raise FormatError(f"cannot serialise objects of type {type(obj).__name__}")


def _payload_arrays(obj, kind):
    if kind in ("ball-signal", "flag-coeffs"):
        return [obj.values]
    if kind == "flaglet-coeffs":
        return [obj.scaling.values] + [obj.wavelets[k].values for k in obj.wavelets]
    if kind == "wavelet-family":
        return [obj.phi.ravel()] + [obj.psi[k].ravel() for k in obj.psi]
    return [obj.nodes, obj.weights, obj.sample_weights]


def _params_of(obj, kind):
    if kind == "flaglet-coeffs":
        return obj.scaling.params
    if kind == "wavelet-family":
        return obj.ball
    if kind == "radial-quadrature":
        return obj.params
    return obj.params


def to_bytes(obj):
    kind = kind_of(obj)
    parts = [_HEAD.pack(MAGIC, VERSION, KINDS[kind])]
    params = _params_of(obj, kind)
    if kind == "radial-quadrature":
        parts.append(_PARAMS.pack(0, params.P, params.tau, 0))
    else:
        parts.append(_PARAMS.pack(params.L, params.P, params.tau, _SCHEMES[params.scheme]))
    if kind == "flaglet-coeffs":
        t = obj.tiling or TilingParams()
        parts.append(_TILING.pack(t.lam, t.nu, t.J0, t.J0p))
        parts.append(_MULTIRES.pack(int(obj.multires), len(obj.wavelets)))
        for (j, jp), c in obj.wavelets.items():
            parts.append(_SCALE4.pack(j, jp, c.params.L, c.params.P))
    elif kind == "wavelet-family":
        t = obj.tiling
        parts.append(_TILING.pack(t.lam, t.nu, t.J0, t.J0p))
        parts.append(_COUNT.pack(len(obj.psi)))
        for j, jp in obj.psi:
            parts.append(_SCALE2.pack(j, jp))
    header_len = sum(len(p) for p in parts)
    offset = header_len
    for arr in _payload_arrays(obj, kind):
        arr = np.asarray(arr)
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise FormatError("refusing to write non-finite value", offset + int(bad[0]) * _C16.itemsize)
        data = arr.astype(_C16).tobytes()
        parts.append(data)
        offset += len(data)
    return b"".join(parts)


class _Reader:
    def __init__(self, buf):
        self.buf = buf
        self.pos = 0

    def unpack(self, st, what):
        end = self.pos + st.size
        if end > len(self.buf):
            raise FormatError(
                f"truncated {what}: expected {st.size} bytes, got {len(self.buf) - self.pos}", self.pos
            )
        out = st.unpack_from(self.buf, self.pos)
        self.pos = end
        return out

    def complex_array(self, n, what):
        nbytes = n * _C16.itemsize
        available = len(self.buf) - self.pos
        if nbytes > available:
            raise FormatError(
                f"truncated payload ({what}): expected {nbytes} bytes, got {available}", self.pos
            )
        arr = np.frombuffer(self.buf, dtype=_C16, count=n, offset=self.pos).astype(complex)
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise FormatError(f"non-finite value in {what}", self.pos + int(bad[0]) * _C16.itemsize)
        self.pos += nbytes
        return arr


def _ball_params(L, P, tau, scheme, offset):
    if scheme not in _SCHEME_NAMES:
        raise FormatError(f"unknown sampling scheme tag {scheme}", offset)
    try:
        return BallParams(L, P, tau, _SCHEME_NAMES[scheme])
    except ValueError as exc:
        raise FormatError(f"invalid parameters: {exc}", offset) from None


def from_bytes(buf):
    r = _Reader(memoryview(bytes(buf)))
    magic, version, kind_tag = r.unpack(_HEAD, "header")
    if magic != MAGIC:
        raise FormatError(f"bad magic {bytes(magic)!r}, expected {MAGIC!r}", 0)
    if version != VERSION:
        raise FormatError(f"unsupported format version {version} (this reader handles {VERSION})", 4)
    if kind_tag not in _KIND_NAMES:
        raise FormatError(f"unknown kind tag {kind_tag}", 6)
    kind = _KIND_NAMES[kind_tag]
    params_at = r.pos
    L, P, tau, scheme = r.unpack(_PARAMS, "parameter block")

    if kind == "radial-quadrature":
        try:
            params = RadialParams(P, tau)
        except ValueError as exc:
            raise FormatError(f"invalid parameters: {exc}", params_at) from None
        nodes = r.complex_array(P, "nodes").real
        weights = r.complex_array(P, "weights").real
        sample_w = r.complex_array(P, "sample weights").real
        obj = RadialQuadrature(nodes, weights, sample_w, params)
    else:
        params = _ball_params(L, P, tau, scheme, params_at)
        if kind == "ball-signal":
            obj = BallSignal(r.complex_array(params.n_samples, "ball signal"), params)
        elif kind == "flag-coeffs":
            obj = FlagCoefficients(r.complex_array(params.n_coefficients, "coefficients"), params)
        else:
            tiling_at = r.pos
            lam, nu, J0, J0p = r.unpack(_TILING, "tiling block")
            try:
                tiling = TilingParams(lam, nu, J0, J0p)
            except ValueError as exc:
                raise FormatError(f"invalid tiling: {exc}", tiling_at) from None
            if kind == "flaglet-coeffs":
                multires, nscales = r.unpack(_MULTIRES, "scale table")
                scales = [r.unpack(_SCALE4, "scale table") for _ in range(nscales)]
                scaling = FlagCoefficients(r.complex_array(params.n_coefficients, "scaling coefficients"), params)
                wavelets = {}
                for j, jp, Lj, Pj in scales:
                    sub = params.with_bandlimits(Lj, Pj)
                    wavelets[(j, jp)] = FlagCoefficients(
                        r.complex_array(sub.n_coefficients, f"wavelet scale ({j}, {jp})"), sub
                    )
                obj = FlagletCoefficients(scaling, wavelets, bool(multires), tiling)
            else:
                (nscales,) = r.unpack(_COUNT, "scale table")
                keys = [r.unpack(_SCALE2, "scale table") for _ in range(nscales)]
                n = params.L * params.P
                phi = r.complex_array(n, "scaling kernel").real.reshape(params.L, params.P)
                psi = {}
                for j, jp in keys:
                    psi[(j, jp)] = r.complex_array(n, f"kernel ({j}, {jp})").real.reshape(params.L, params.P)
                obj = WaveletFamily(params, tiling, phi, psi)
    if r.pos != len(r.buf):
        raise FormatError(f"{len(r.buf) - r.pos} trailing bytes after payload", r.pos)
    return obj


def write_file(path, obj):
    data = to_bytes(obj)
    with open(path, "wb") as fh:
        fh.write(data)


def read_file(path):
    with open(path, "rb") as fh:
        return from_bytes(fh.read())


# JSON: same content as the binary form, floats written with repr so they round-trip exactly.

def _cplx_list(arr):
    arr = np.asarray(arr, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in arr]


def _from_cplx_list(items):
    arr = np.asarray(items, dtype=float).reshape(-1, 2)
    out = np.empty(arr.shape[0], dtype=complex)
    out.real = arr[:, 0]
    out.imag = arr[:, 1]
    return out


def to_json_dict(obj):
    kind = kind_of(obj)
    params = _params_of(obj, kind)
    doc = {"format": "FLGB", "version": VERSION, "kind": kind, "P": params.P, "tau": params.tau}
    if kind != "radial-quadrature":
        doc.update(L=params.L, scheme=params.scheme)
    if kind in ("ball-signal", "flag-coeffs"):
        doc["values"] = _cplx_list(obj.values)
    elif kind == "flaglet-coeffs":
        t = obj.tiling or TilingParams()
        doc["tiling"] = {"lambda": t.lam, "nu": t.nu, "J0": t.J0, "J0p": t.J0p}
        doc["multires"] = bool(obj.multires)
        doc["scaling"] = _cplx_list(obj.scaling.values)
        doc["wavelets"] = [
            {"j": j, "jp": jp, "L": c.params.L, "P": c.params.P, "values": _cplx_list(c.values)}
            for (j, jp), c in obj.wavelets.items()
        ]
    elif kind == "wavelet-family":
        t = obj.tiling
        doc["tiling"] = {"lambda": t.lam, "nu": t.nu, "J0": t.J0, "J0p": t.J0p}
        doc["phi"] = obj.phi.tolist()
        doc["psi"] = [{"j": j, "jp": jp, "values": k.tolist()} for (j, jp), k in obj.psi.items()]
    else:
        doc.update(nodes=obj.nodes.tolist(), weights=obj.weights.tolist(), sample_weights=obj.sample_weights.tolist())
    return doc


def from_json_dict(doc):
    if doc.get("format") != "FLGB" or doc.get("version") != VERSION:
        raise FormatError("not a version-1 FLGB JSON document")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    if kind == "radial-quadrature":
        return RadialQuadrature(np.array(doc["nodes"], float), np.array(doc["weights"], float),
                                np.array(doc["sample_weights"], float), RadialParams(doc["P"], doc["tau"]))
    params = BallParams(doc["L"], doc["P"], doc["tau"], doc["scheme"])
    if kind == "ball-signal":
        return BallSignal(_from_cplx_list(doc["values"]), params)
    if kind == "flag-coeffs":
        return FlagCoefficients(_from_cplx_list(doc["values"]), params)
    t = doc["tiling"]
    tiling = TilingParams(t["lambda"], t["nu"], t["J0"], t["J0p"])
    if kind == "flaglet-coeffs":
        wavelets = {
            (w["j"], w["jp"]): FlagCoefficients(_from_cplx_list(w["values"]), params.with_bandlimits(w["L"], w["P"]))
            for w in doc["wavelets"]
        }
        scaling = FlagCoefficients(_from_cplx_list(doc["scaling"]), params)
        return FlagletCoefficients(scaling, wavelets, bool(doc["multires"]), tiling)
    psi = {(k["j"], k["jp"]): np.array(k["values"], float) for k in doc["psi"]}
    return WaveletFamily(params, tiling, np.array(doc["phi"], float), psi)


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(to_json_dict(obj), fh)


def read_json(path):
    with open(path) as fh:
        return from_json_dict(json.load(fh))


def write_csv(dest, header, rows):
    """Write a rectangular numeric table with a header row (',' delimiter, LF endings).

    ``dest`` is a path or a text stream.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(header):
        raise FormatError(f"table shape {rows.shape} does not match {len(header)} columns")
    if not np.all(np.isfinite(rows)):
        raise FormatError("refusing to write non-finite values to CSV")
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        with open(dest, "w", newline="") as fh:
            _write_rows(fh, header, rows)
    else:
        _write_rows(dest, header, rows)


def _write_rows(fh, header, rows):
    writer = csv.writer(fh, delimiter=",", lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])


def read_csv(src):
    """Read a table written by :func:`write_csv`; returns ``(header, array)``."""
    if isinstance(src, (str, bytes)) or hasattr(src, "__fspath__"):
        with open(src, newline="") as fh:
            text = fh.read()
    else:
        text = src.read()
    reader = csv.reader(_io.StringIO(text))
    header = next(reader)
    data = [[float(v) for v in row] for row in reader if row]
    if any(len(row) != len(header) for row in data):
        raise FormatError("CSV table is not rectangular")
    return header, np.array(data, dtype=float).reshape(-1, len(header))
