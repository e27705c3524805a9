"""Built-in condensers and the JSON condenser document."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .exceptions import BohrLabError
from .faber import faber_polys, scale_to_level
from .laurent import ExteriorMap
from . import norms


class UnknownCondenser(BohrLabError, KeyError):
    pass


@dataclass(frozen=True)
class Condenser:
    name: str
    map: ExteriorMap
    convex: bool
    positive_class: bool | None
    exact_norms: norms.NormModel | None = field(default=None, compare=False)
    # pseudo-positive class: the continuum is a*K + b; Bohr radii are unchanged
    affine: tuple = (1 + 0j, 0j)
    norm_model: str | None = None

    def boundary(self, n_theta=1024):
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        a, b = self.affine
        return a * self.map(np.exp(1j * theta)) + b

    def upper_model(self):
        """Norm model for upper bounds: exact when known, else the best valid bound."""
        if self.norm_model:
            return parse_norm_model(self.norm_model, self.map)
        if self.exact_norms is not None:
            return self.exact_norms
        return norms.NormModel(norms.BOUND_CONVEX if self.convex else norms.BOUND_GENERAL)


def make_disk(radius=1.0):
    if radius <= 0:
        raise ValueError("radius must be positive")
    return Condenser("disk" if radius == 1 else f"disk({radius:g})",
                     ExteriorMap(1.0 / radius, name="disk"), True, True,
                     norms.NormModel(norms.EXACT_DISK))


def make_segment(half_length=1.0):
    """``[-a, a]`` with ``psi(w) = a (w + 1/w) / 2``."""
    fmap = ExteriorMap(2.0 / half_length, 0j, (half_length / 2,), name="segment")
    name = "segment" if half_length == 1 else f"segment({half_length:g})"
    return Condenser(name, fmap, True, True, norms.NormModel.positive_class(fmap))


def make_hypocycloid(m):
    if m < 2:
        raise ValueError("hypocycloids need m >= 2")
    if m == 2:
        seg = make_segment(2.0)
        return Condenser("h2", seg.map, True, True, seg.exact_norms)
    betas = (0.0,) * (m - 2) + (1.0 / (m - 1),)
    fmap = ExteriorMap(1.0, 0j, betas, name=f"h{m}")
    exact = {3: norms.NormModel(norms.EXACT_H3), 4: norms.NormModel(norms.EXACT_H4)}.get(m)
    if exact is None:
        exact = norms.NormModel.positive_class(fmap)
    return Condenser(f"h{m}", fmap, False, True, exact)


def make_level_set(cond, r):
    fmap = scale_to_level(cond.map, r)
    fmap = ExteriorMap(fmap.gamma, fmap.beta0, fmap.betas, fmap.tail_bound, name=f"level:{cond.name}:{r:g}")
    convex = cond.convex or fmap.convexity_margin() >= -1e-9
    positive = positive_class_check(fmap).ok
    if fmap.is_affine:
        exact = norms.NormModel(norms.EXACT_DISK)
    elif positive:
        exact = norms.NormModel.positive_class(fmap)
    else:
        exact = None
    return Condenser(f"level:{cond.name}:{r:g}", fmap, convex, positive, exact, cond.affine)


class ClassCheck(NamedTuple):
    ok: bool
    witness: object = None      # j for a bad beta_j, (n, j) for a bad alpha_j^(n)
    detail: str = ""


def positive_class_check(fmap, n_check=10, j_check=50, tol=1e-12):
    for j, b in enumerate(fmap.betas, start=1):
        if b.real < -tol or abs(b.imag) > tol:
            return ClassCheck(False, j, f"beta_{j} = {b}")
    for p in faber_polys(fmap, n_check):
        a = p.alpha_tail[:j_check]
        bad = np.nonzero((a.real < -tol) | (np.abs(a.imag) > tol))[0]
        if bad.size:
            j = int(bad[0]) + 1
            return ClassCheck(False, (p.n, j), f"alpha_{j}^({p.n}) = {a[j - 1]}")
    return ClassCheck(True)


def parse_norm_model(spec, fmap=None):
    m = re.fullmatch(r"(\w+)(?:\(([-+0-9.eE]+)\))?", spec.strip())
    if not m or m.group(1) not in norms.KINDS:
        raise ValueError(f"unknown norm model {spec!r}")
    kind, arg = m.group(1), m.group(2)
    if kind == norms.EXACT_POSITIVE:
        return norms.NormModel.positive_class(fmap)
    if kind == norms.SAMPLED:
        return norms.NormModel.sampled(fmap)
    if kind in (norms.BOUND_HYPOCYCLOID, norms.BOUND_ANGULAR):
        if arg is None:
            raise ValueError(f"{kind} needs a parameter, e.g. {kind}(5)")
        return norms.NormModel(kind, param=float(arg))
    return norms.NormModel(kind)


def condenser_to_document(cond):
    doc = {"name": cond.name}
    doc.update(cond.map.to_dict())
    doc["flags"] = {"convex": cond.convex, "positive_class": cond.positive_class}
    if cond.norm_model is not None:
        doc["norm_model"] = cond.norm_model
    return doc


def condenser_from_document(doc):
    try:
        name = str(doc["name"])
        flags = doc.get("flags", {})
        convex = bool(flags.get("convex", False))
        positive = flags.get("positive_class")
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed condenser document: {exc}") from exc
    fmap = ExteriorMap.from_dict(doc, name=name)
    if positive and any(b.real < -1e-12 or abs(b.imag) > 1e-12 for b in fmap.betas):
        raise ValueError("flags claim positive_class but some beta_j is not a nonnegative real")
    model = doc.get("norm_model")
    exact = norms.NormModel.positive_class(fmap) if positive else None
    if fmap.is_affine:
        exact = norms.NormModel(norms.EXACT_DISK)
    return Condenser(name, fmap, convex, None if positive is None else bool(positive), exact,
                     norm_model=model)


def dumps_condenser(cond):
    return json.dumps(condenser_to_document(cond), indent=2) + "\n"


def loads_condenser(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed condenser document: {exc}") from exc
    return condenser_from_document(doc)


def load_condenser(path):
    return loads_condenser(Path(path).read_text())


def save_condenser(cond, path):
    Path(path).write_text(dumps_condenser(cond))


def get_condenser(ident):
    """Look up ``disk``, ``segment``, ``h3``, ``h<m>``, ``level:<base>:<r>``, ``file:<path>``."""
    ident = ident.strip()
    if ident == "disk":
        return make_disk()
    if ident == "segment":
        return make_segment()
    m = re.fullmatch(r"h(\d+)", ident)
    if m:
        return make_hypocycloid(int(m.group(1)))
    if ident.startswith("file:"):
        path = ident[5:]
        if not Path(path).is_file():
            raise UnknownCondenser(f"no such condenser file: {path}")
        return load_condenser(path)
    if ident.startswith("level:"):
        base, _, r = ident[6:].rpartition(":")
        try:
            r = float(r)
        except ValueError:
            raise UnknownCondenser(f"bad level in {ident!r}") from None
        if r <= 1:
            raise ValueError("level r must exceed 1")
        return make_level_set(get_condenser(base), r)
    raise UnknownCondenser(f"unknown condenser id {ident!r}")
