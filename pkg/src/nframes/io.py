"""JSON frame specification files.

Layout (UTF-8 JSON object)::

    {
      "dim": 3, "order": 2,
      "anchors": [[[0, 0], [0, 0], [1, 0]]],
      "vectors": [[[1, 0], [0, 0], [0, 0]], ...],
      "control": "identity" | {"scalar": 2.0} | {"diag": [[1, 0], ...]}
                 | {"matrix": [[[1, 0], ...], ...]}
    }

Complex numbers are ``[re, im]`` pairs. ``diag`` and ``matrix`` controls act
on H_F coordinates (length ``dim - order + 1``) in the canonical basis built
by :func:`nframes.ninner.build_quotient`. Two-space commands read a second
block from ``anchors2``, ``vectors2``, ``control2`` and optionally ``dim2``,
``order2`` (defaulting to the first block's values) and ``layout``
(``"disjoint"`` or ``"paired"``, direct sums only).

Validation errors carry the line number of the offending value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .controlled import ControlledFrame
from .errors import FrameError
from .frames import FrameFamily
from .ninner import AnchorSet, QuotientSpace, build_quotient

_WS = re.compile(r"\s*")


class SpecError(ValueError):
    """Malformed or inconsistent specification file."""

    def __init__(self, message: str, line: int | None = None, source: str = "<spec>"):
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def value_offsets(text: str) -> dict[tuple, int]:
    """Character offset of every JSON value, keyed by its path.

    Only called on text that already parsed, so the scanner can be minimal.
    """
    offsets: dict[tuple, int] = {}
    decoder = json.JSONDecoder()

    def skip(i):
        return _WS.match(text, i).end()

    def value(i, path):
        i = skip(i)
        offsets[path] = i
        c = text[i]
        if c in "{[":
            close = "}" if c == "{" else "]"
            i = skip(i + 1)
            if text[i] == close:
                return i + 1
            k = 0
            while True:
                if c == "{":
                    key, i = json.decoder.scanstring(text, i + 1)
                    i = skip(i) + 1  # colon
                    i = value(i, path + (key,))
                else:
                    i = value(i, path + (k,))
                k += 1
                i = skip(i)
                if text[i] == ",":
                    i = skip(i + 1)
                    continue
                return i + 1
        _, end = decoder.raw_decode(text, i)
        return end

    value(0, ())
    return offsets


@dataclass
class _Reader:
    data: dict
    text: str
    source: str
    offsets: dict = field(init=False)

    def __post_init__(self):
        self.offsets = value_offsets(self.text)

    def line(self, path) -> int | None:
        path = tuple(path)
        while path and path not in self.offsets:
            path = path[:-1]
        off = self.offsets.get(path)
        return None if off is None else self.text.count("\n", 0, off) + 1

    def fail(self, message, path=()):
        raise SpecError(f"{_fmt(path)}: {message}" if path else message, self.line(path), self.source)

    def get(self, key, default=None, required=True):
        if key in self.data:
            return self.data[key]
        if required and default is None:
            self.fail(f"missing required field {key!r}")
        return default

    def integer(self, key, default=None):
        v = self.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail("expected an integer", (key,))
        return v

    def scalar(self, v, path) -> complex:
        if (
            not isinstance(v, list)
            or len(v) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)
        ):
            self.fail("expected a complex number as an [re, im] pair", path)
        return complex(v[0], v[1])

    def vector(self, v, path, length) -> np.ndarray:
        if not isinstance(v, list):
            self.fail("expected a list of [re, im] pairs", path)
        if len(v) != length:
            self.fail(f"expected {length} components, got {len(v)}", path)
        return np.array([self.scalar(x, path + (k,)) for k, x in enumerate(v)], dtype=complex)

    def vectors(self, key, length) -> np.ndarray:
        rows = self.get(key)
        if not isinstance(rows, list) or not rows:
            self.fail("expected a non-empty list of vectors", (key,))
        return np.array([self.vector(r, (key, i), length) for i, r in enumerate(rows)])


def _fmt(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else p)
    return out


@dataclass(frozen=True)
class Block:
    """One parsed space-plus-family block."""

    space: QuotientSpace
    frame: ControlledFrame
    control_spec: object


def _control(reader: _Reader, key: str, dim: int) -> np.ndarray:
    spec = reader.get(key, "identity", required=False)
    path = (key,)
    if spec == "identity":
        return np.eye(dim, dtype=complex)
    if not isinstance(spec, dict) or len(spec) != 1:
        reader.fail('control must be "identity" or an object with one of scalar, diag, matrix', path)
    (kind, value), = spec.items()
    path = path + (kind,)
    if kind == "scalar":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value) * np.eye(dim, dtype=complex)
        return reader.scalar(value, path) * np.eye(dim, dtype=complex)
    if kind == "diag":
        return np.diag(reader.vector(value, path, dim))
    if kind == "matrix":
        if not isinstance(value, list) or len(value) != dim:
            reader.fail(f"expected a {dim} x {dim} matrix in H_F coordinates", path)
        return np.array([reader.vector(r, path + (i,), dim) for i, r in enumerate(value)])
    reader.fail(f"unknown control kind {kind!r}", path)


def _block(reader: _Reader, suffix: str, defaults=None) -> Block:
    defaults = defaults or {}
    dim = reader.integer("dim" + suffix, defaults.get("dim"))
    order = reader.integer("order" + suffix, defaults.get("order"))
    if dim < 2 or not 2 <= order <= dim:
        reader.fail(f"need 2 <= order <= dim, got order={order}, dim={dim}", ("order" + suffix,))
    anchors = reader.vectors("anchors" + suffix, dim)
    if len(anchors) != order - 1:
        reader.fail(f"order {order} needs {order - 1} anchors, got {len(anchors)}", ("anchors" + suffix,))
    vectors = reader.vectors("vectors" + suffix, dim)
    try:
        space = build_quotient(AnchorSet(anchors))
    except FrameError as exc:
        reader.fail(str(exc), ("anchors" + suffix,))
    family = FrameFamily.from_ambient(space, vectors)
    control = _control(reader, "control" + suffix, space.dim)
    try:
        cf = ControlledFrame(family, control)
    except FrameError as exc:
        reader.fail(str(exc), ("control" + suffix,))
    return Block(space, cf, reader.data.get("control" + suffix, "identity"))


@dataclass(frozen=True)
class FrameSpecFile:
    first: Block
    second: Block | None
    layout: str
    raw: dict

    @property
    def controlled(self) -> ControlledFrame:
        return self.first.frame


def parse_spec(text: str, source: str = "<spec>", need_second: bool = False) -> FrameSpecFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", exc.lineno, source) from None
    if not isinstance(data, dict):
        raise SpecError("top level must be a JSON object", 1, source)
    reader = _Reader(data, text, source)
    first = _block(reader, "")
    second = None
    if need_second:
        if "vectors2" not in data:
            reader.fail("this command needs a second block (anchors2, vectors2, control2)")
        second = _block(reader, "2", {"dim": data.get("dim"), "order": data.get("order")})
    layout = data.get("layout", "disjoint")
    if layout not in ("disjoint", "paired"):
        reader.fail('layout must be "disjoint" or "paired"', ("layout",))
    return FrameSpecFile(first, second, layout, data)


def load_spec(path, need_second: bool = False) -> FrameSpecFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read file: {exc.strerror}", None, str(p)) from None
    return parse_spec(text, str(p), need_second)


def complex_list(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def spec_dict(original: FrameSpecFile, family: FrameFamily) -> dict:
    """A single-block spec sharing ``original``'s anchors and control, with the
    family replaced by ambient representatives of ``family``."""
    raw = original.raw
    space = original.first.space
    ambient = family.projected @ space.lift.T
    return {
        "dim": raw["dim"],
        "order": raw["order"],
        "anchors": [complex_list(a) for a in space.anchors.vectors],
        "vectors": [complex_list(v) for v in ambient],
        "control": original.first.control_spec,
    }


def write_spec(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
