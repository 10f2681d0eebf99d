"""Body configuration files and mesh/profile exporters.

Configuration is a JSON object, one of::

    {"type": "piecewise", "breakpoints": [1.0471975512], "sigma0": 1, "b0": 0.0, "w": 1.0}
    {"type": "sine_series", "coefficients": [0.0, 0.1], "w": 1.2}
    {"type": "ball", "c": 0.0, "w": 1.0}

Angles are radians.  ``w`` is optional and defaults to the critical
half-width, or 1 when that is zero (balls).
"""
from __future__ import annotations

import csv
import io
import json
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ValidationError
from .geometry import Mesh, curve_point, sample_curve
from .profiles import HALF_PI, Body, PiecewiseTrigProfile, SineSeriesProfile, critical_half_width, make_ball, validate

KINDS = ("sine_series", "piecewise", "ball")
_ALLOWED = {
    "piecewise": {"type", "breakpoints", "sigma0", "b0", "w"},
    "sine_series": {"type", "coefficients", "w"},
    "ball": {"type", "c", "w"},
}

STL_HEADER = b"cwrev binary STL".ljust(80, b" ")
STL_RECORD = np.dtype([("normal", "<f4", (3,)), ("vertices", "<f4", (3, 3)), ("attr", "<u2")])


@dataclass(frozen=True)
class BodyConfig:
    kind: str
    coefficients: tuple[float, ...] | None = None
    breakpoints: tuple[float, ...] | None = None
    sigma0: int = 1
    b0: float = 0.0
    c: float | None = None
    w: float | None = None

    def profile(self):
        if self.kind == "piecewise":
            return PiecewiseTrigProfile(self.breakpoints, self.sigma0, self.b0)
        if self.kind == "sine_series":
            return SineSeriesProfile(self.coefficients)
        return make_ball(self.c if self.c is not None else 0.0)

    def half_width(self):
        if self.w is not None:
            return self.w
        w0 = 0.0 if self.kind == "ball" else critical_half_width(self.profile())
        # a degenerate (round) profile has w0 = 0; give it unit half-width like a ball
        return w0 if w0 > 0.0 else 1.0

    def body(self):
        return Body(self.profile(), self.half_width())

    def to_dict(self):
        out = {"type": self.kind}
        if self.kind == "piecewise":
            out.update(breakpoints=list(self.breakpoints), sigma0=self.sigma0, b0=self.b0)
        elif self.kind == "sine_series":
            out["coefficients"] = list(self.coefficients)
        else:
            out["c"] = self.c if self.c is not None else 0.0
        if self.w is not None:
            out["w"] = self.w
        return out


def serialize_config(config: BodyConfig) -> str:
    return json.dumps(config.to_dict())


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {value!r}", where)
    return float(value)


def _number_list(value, where):
    if not isinstance(value, list):
        raise ConfigError(f"expected a list of numbers, got {type(value).__name__}", where)
    return tuple(_number(v, f"{where}[{i}]") for i, v in enumerate(value))


def parse_config(text) -> BodyConfig:
    """Parse and validate a body configuration.

    Raises :class:`ConfigError` naming the offending line/column (syntax)
    or field (schema, constraint violation, infeasible half-width).
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"not UTF-8: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object")
    kind = data.get("type")
    if kind not in KINDS:
        raise ConfigError(f"unknown representation {kind!r}; expected one of {', '.join(KINDS)}", "type")
    extra = set(data) - _ALLOWED[kind]
    if extra:
        raise ConfigError(f"unexpected field(s) {sorted(extra)} for type {kind!r}", sorted(extra)[0])

    w = None
    if "w" in data:
        w = _number(data["w"], "w")
        if w <= 0.0:
            raise ConfigError("half-width must be positive", "w")

    if kind == "piecewise":
        if "breakpoints" not in data:
            raise ConfigError("missing required field", "breakpoints")
        sigma0 = data.get("sigma0", 1)
        if sigma0 not in (1, -1) or isinstance(sigma0, bool):
            raise ConfigError(f"sigma0 must be 1 or -1, got {sigma0!r}", "sigma0")
        config = BodyConfig(
            kind,
            breakpoints=_number_list(data["breakpoints"], "breakpoints"),
            sigma0=int(sigma0),
            b0=_number(data.get("b0", 0.0), "b0"),
            w=w,
        )
    elif kind == "sine_series":
        if "coefficients" not in data:
            raise ConfigError("missing required field", "coefficients")
        coeffs = _number_list(data["coefficients"], "coefficients")
        if not coeffs:
            raise ConfigError("at least one coefficient is required", "coefficients")
        config = BodyConfig(kind, coefficients=coeffs, w=w)
    else:
        config = BodyConfig(kind, c=_number(data.get("c", 0.0), "c"), w=w)

    report = validate(config.profile())
    if not report.ok:
        field_name = "breakpoints" if kind == "piecewise" else "coefficients"
        raise ConfigError(f"invalid profile: {report.summary()}", field_name)
    try:
        config.body()
    except ValidationError as exc:
        raise ConfigError(str(exc), "w") from None
    return config


# --- meshes ---------------------------------------------------------------------


def _facet_normals(soup):
    n = np.cross(soup[:, 1] - soup[:, 0], soup[:, 2] - soup[:, 0])
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    return np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)


def write_stl(mesh: Mesh, sink):
    soup = mesh.triangle_soup()
    rec = np.zeros(len(soup), dtype=STL_RECORD)
    rec["normal"] = _facet_normals(soup)
    rec["vertices"] = soup
    sink.write(STL_HEADER)
    sink.write(struct.pack("<I", len(soup)))
    sink.write(rec.tobytes())


def read_stl(source):
    """Read binary STL bytes (or a binary stream) into an ``(m, 3, 3)`` float64 soup."""
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    (count,) = struct.unpack_from("<I", data, 80)
    expected = 84 + STL_RECORD.itemsize * count
    if len(data) != expected:
        raise ValueError(f"STL size {len(data)} does not match {count} triangles ({expected} bytes)")
    rec = np.frombuffer(data, dtype=STL_RECORD, count=count, offset=84)
    return rec["vertices"].astype(float)


def write_obj(mesh: Mesh, sink):
    lines = [f"# cwrev surface: {mesh.num_vertices} vertices, {mesh.num_triangles} faces"]
    lines += [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist()]
    sink.write(("\n".join(lines) + "\n").encode("utf-8"))


def read_obj(source) -> Mesh:
    text = source.decode("utf-8") if isinstance(source, (bytes, bytearray)) else source
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(p) for p in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return Mesh(np.array(verts), np.array(faces))


def export_mesh(mesh: Mesh, fmt: str, sink):
    """Write ``mesh`` as binary STL or text OBJ to a binary stream."""
    if fmt == "stl":
        write_stl(mesh, sink)
    elif fmt == "obj":
        write_obj(mesh, sink)
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")


def stl_size(num_triangles: int) -> int:
    return 84 + 50 * num_triangles


# --- profiles -------------------------------------------------------------------

CSV_FIELDS = ("t", "h", "dh", "s", "x", "y", "rho")


def export_profile(body: Body, n: int, sink):
    """CSV of ``n`` uniform samples of the generating curve on [-pi/2, pi/2]."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for smp in sample_curve(body, np.linspace(-HALF_PI, HALF_PI, n)):
        writer.writerow([repr(v) for v in (smp.t, smp.h, smp.dh, smp.s, smp.x, smp.y, smp.rho)])
    sink.write(buf.getvalue().encode("utf-8"))


def export_profile_svg(body: Body, n: int, sink, size: float = 512.0):
    """SVG path of the closed planar curve (generating curve and its mirror image)."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    t = np.linspace(-math.pi, math.pi, 2 * n, endpoint=False)
    x, y = curve_point(body, t)
    lo_x, hi_x, lo_y, hi_y = x.min(), x.max(), y.min(), y.max()
    scale = 0.9 * size / max(hi_x - lo_x, hi_y - lo_y)
    px = 0.05 * size + (x - lo_x) * scale
    py = size - (0.05 * size + (y - lo_y) * scale)
    cmds = [f"M {px[0]:.6f} {py[0]:.6f}"] + [f"L {a:.6f} {b:.6f}" for a, b in zip(px[1:], py[1:])] + ["Z"]
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" height="{size:g}" '
        f'viewBox="0 0 {size:g} {size:g}">\n'
        f'  <path d="{" ".join(cmds)}" fill="none" stroke="black" stroke-width="1"/>\n'
        "</svg>\n"
    )
    sink.write(svg.encode("utf-8"))
