"""Plain-text model serialization.

Format (one value per line, repr round-trip precision, parameters in
each model's documented flat layout):

    cauchynet-model v1
    kind <xnet|mlp|kanlite|bspline>
    dims <d0> <d1> ...
    [basis <degree> <grid> <a> <b>]      # kanlite and bspline only
    params <count>
    <value>
    ...
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bspline import BSplineBasis
from .kanlite import KanLite
from .mlp import Mlp
from .xnet import XNet

__all__ = ["dump_model", "load_model", "dumps_model", "loads_model"]

MAGIC = "cauchynet-model v1"


def _kind(model) -> str:
    if isinstance(model, XNet):
        return "xnet"
    if isinstance(model, Mlp):
        return "mlp"
    if isinstance(model, KanLite):
        return "kanlite"
    raise TypeError(f"cannot serialize {type(model).__name__}")


def dumps_model(model) -> str:
    lines = [MAGIC]
    if isinstance(model, tuple):                  # (BSplineBasis, coeffs)
        basis, coeffs = model
        lines.append("kind bspline")
        lines.append("dims 1 1")
        lines.append(f"basis {basis.degree} {basis.grid} "
                     f"{basis.a!r} {basis.b!r}")
        values = np.asarray(coeffs, dtype=float)
    else:
        kind = _kind(model)
        lines.append(f"kind {kind}")
        if kind == "xnet":
            dims = [model.input_dim, model.width, model.output_dim]
        else:
            dims = model.layer_sizes
        lines.append("dims " + " ".join(str(d) for d in dims))
        if kind == "kanlite":
            b = model.basis
            lines.append(f"basis {b.degree} {b.grid} {b.a!r} {b.b!r}")
        values = model.theta
    lines.append(f"params {values.size}")
    lines.extend(repr(float(v)) for v in values)
    return "\n".join(lines) + "\n"


def loads_model(text: str):
    lines = text.strip().split("\n")
    if lines[0] != MAGIC:
        raise ValueError(f"not a model file (header {lines[0]!r})")
    fields = {}
    i = 1
    while not lines[i].startswith("params "):
        key, _, rest = lines[i].partition(" ")
        fields[key] = rest
        i += 1
    count = int(lines[i].split()[1])
    values = np.array([float(v) for v in lines[i + 1:i + 1 + count]])
    if values.size != count:
        raise ValueError(f"expected {count} parameters, found {values.size}")
    kind = fields["kind"]
    dims = [int(d) for d in fields["dims"].split()]
    if kind == "xnet":
        return XNet(dims[0], dims[1], dims[2], theta=values)
    if kind == "mlp":
        return Mlp(dims, theta=values)
    if kind == "kanlite":
        deg, grid, a, b = fields["basis"].split()
        return KanLite(dims, int(deg), int(grid), float(a), float(b),
                       theta=values)
    if kind == "bspline":
        deg, grid, a, b = fields["basis"].split()
        return BSplineBasis(int(deg), int(grid), float(a), float(b)), values
    raise ValueError(f"unknown model kind {kind!r}")


def dump_model(model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))


def load_model(path: str | Path):
    return loads_model(Path(path).read_text())
