"""Concrete symmetric monoidal categories the theories live in.

``MATRIX`` composes plain linear maps.  ``CHOI`` composes completely
positive maps stored as Choi matrices; its scalars are nonnegative reals and
its states are (unnormalised) density matrices.

Both expose the same small interface, plus a *linear read-off*: for every
state, effect and process there are vectors/matrices with
``compose(e, compose(f, s)).value == vec_effect(e) @ linear(f) @ vec_state(s)``.
Batch probability kernels run on that representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ObjectMismatch
from .linalg import (
    ATOL, UNIT, Morphism, TheoryObject, as_object, choi, flatten, max_abs,
    permutation_matrix,
)
from . import linalg


@dataclass(frozen=True, eq=False)
class CPMap:
    """A completely positive map ``dom -> cod`` stored by its Choi matrix.

    Index order of ``choi`` is (input, output) on both sides, matching
    :func:`bornforge.linalg.choi`.
    """

    dom: TheoryObject
    cod: TheoryObject
    choi: np.ndarray

    def __post_init__(self):
        dom, cod = as_object(self.dom), as_object(self.cod)
        c = np.asarray(self.choi, dtype=complex)
        n = dom.dim * cod.dim
        if c.shape != (n, n):
            raise ObjectMismatch(f"Choi shape {c.shape} does not match {dom!r} -> {cod!r}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "choi", c)

    @classmethod
    def from_kraus(cls, f: Morphism) -> "CPMap":
        return cls(f.dom, f.cod, choi(f))

    @classmethod
    def from_density(cls, rho, obj=None) -> "CPMap":
        rho = np.asarray(rho, dtype=complex)
        return cls(UNIT, as_object(obj if obj is not None else rho.shape[0]), rho)

    @classmethod
    def from_effect_operator(cls, e, obj=None) -> "CPMap":
        """The effect rho -> Tr[e rho]; its Choi matrix is e transposed."""
        e = np.asarray(e, dtype=complex)
        return cls(as_object(obj if obj is not None else e.shape[0]), UNIT, e.T)

    @property
    def is_state(self) -> bool:
        return self.dom.dim == 1

    @property
    def is_effect(self) -> bool:
        return self.cod.dim == 1

    @property
    def is_scalar(self) -> bool:
        return self.dom.dim == 1 and self.cod.dim == 1

    @property
    def value(self) -> complex:
        if not self.is_scalar:
            raise ObjectMismatch("value is only defined for scalars")
        return complex(self.choi[0, 0])

    @property
    def mat(self) -> np.ndarray:
        """Alias so generic code can read the defining matrix."""
        return self.choi

    @property
    def density(self) -> np.ndarray:
        """Density matrix of a state."""
        return self.choi

    @property
    def effect_operator(self) -> np.ndarray:
        return self.choi.T

    def allclose(self, other: "CPMap", atol: float = ATOL) -> bool:
        return (self.dom == other.dom and self.cod == other.cod
                and max_abs(self.choi - other.choi) <= atol)

    def __repr__(self):
        return f"CPMap({self.dom!r} -> {self.cod!r}, choi={self.choi.tolist()})"


def choi_to_superop(c: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    """Superoperator acting on row-major vec(rho)."""
    c4 = np.asarray(c).reshape(d_in, d_out, d_in, d_out)
    return c4.transpose(1, 3, 0, 2).reshape(d_out * d_out, d_in * d_in)


def superop_to_choi(s: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    s4 = np.asarray(s).reshape(d_out, d_out, d_in, d_in)
    return s4.transpose(2, 0, 3, 1).reshape(d_in * d_out, d_in * d_out)


class MatrixCategory:
    """Linear maps between finite-dimensional spaces."""

    name = "matrix"
    morphism_type = Morphism

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        return linalg.compose(g, f)

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        return linalg.tensor(f, g)

    def identity(self, obj) -> Morphism:
        return linalg.identity(obj)

    def permute(self, blocks: Sequence[TheoryObject], order: Sequence[int]) -> Morphism:
        return linalg.permute_blocks(blocks, order)

    def scalar(self, z) -> Morphism:
        return linalg.scalar(z)

    def embed(self, f: Morphism) -> Morphism:
        return f

    def unit_state(self) -> Morphism:
        return linalg.scalar(1.0)

    def vec_state(self, s: Morphism) -> np.ndarray:
        return s.mat[:, 0]

    def vec_effect(self, e: Morphism) -> np.ndarray:
        return e.mat[0, :]

    def linear(self, f: Morphism) -> np.ndarray:
        return f.mat

    def zero(self, dom, cod) -> Morphism:
        dom, cod = as_object(dom), as_object(cod)
        return Morphism(dom, cod, np.zeros((cod.dim, dom.dim)))


class ChoiCategory:
    """Completely positive maps, composed through their Choi matrices."""

    name = "choi"
    morphism_type = CPMap

    def compose(self, g: CPMap, f: CPMap) -> CPMap:
        if f.cod != g.dom:
            raise DimensionMismatch(f"cannot compose: f.cod={f.cod!r} but g.dom={g.dom!r}")
        a, b, c = f.dom.dim, f.cod.dim, g.cod.dim
        s = choi_to_superop(g.choi, b, c) @ choi_to_superop(f.choi, a, b)
        return CPMap(f.dom, g.cod, superop_to_choi(s, a, c))

    def tensor(self, f: CPMap, g: CPMap) -> CPMap:
        a1, b1, a2, b2 = f.dom.dim, f.cod.dim, g.dom.dim, g.cod.dim
        k = np.kron(f.choi, g.choi).reshape(a1, b1, a2, b2, a1, b1, a2, b2)
        n = a1 * b1 * a2 * b2
        k = k.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(n, n)
        return CPMap(f.dom @ g.dom, f.cod @ g.cod, k)

    def identity(self, obj) -> CPMap:
        return CPMap.from_kraus(linalg.identity(obj))

    def permute(self, blocks: Sequence[TheoryObject], order: Sequence[int]) -> CPMap:
        return CPMap.from_kraus(linalg.permute_blocks(blocks, order))

    def scalar(self, r) -> CPMap:
        return CPMap(UNIT, UNIT, [[r]])

    def embed(self, f) -> CPMap:
        return f if isinstance(f, CPMap) else CPMap.from_kraus(f)

    def unit_state(self) -> CPMap:
        return self.scalar(1.0)

    def vec_state(self, s: CPMap) -> np.ndarray:
        return s.choi.reshape(-1)

    def vec_effect(self, e: CPMap) -> np.ndarray:
        return e.choi.reshape(-1)

    def linear(self, f: CPMap) -> np.ndarray:
        return choi_to_superop(f.choi, f.dom.dim, f.cod.dim)

    def zero(self, dom, cod) -> CPMap:
        dom, cod = as_object(dom), as_object(cod)
        n = dom.dim * cod.dim
        return CPMap(dom, cod, np.zeros((n, n)))


MATRIX = MatrixCategory()
CHOI = ChoiCategory()


def category_of(m) -> "MatrixCategory | ChoiCategory":
    """The category a morphism value belongs to, judged by its type."""
    if isinstance(m, CPMap):
        return CHOI
    if isinstance(m, Morphism):
        return MATRIX
    raise TypeError(f"not a morphism: {type(m).__name__}")


def compose_any(g, f):
    return category_of(f).compose(g, f)


def tensor_any(f, g):
    return category_of(f).tensor(f, g)


def relabel(m, dom=None, cod=None):
    """Same matrix, regrouped factor lists (dimensions must agree)."""
    dom = m.dom if dom is None else as_object(dom)
    cod = m.cod if cod is None else as_object(cod)
    if dom.dim != m.dom.dim or cod.dim != m.cod.dim:
        raise ObjectMismatch("relabel must preserve dimensions")
    if isinstance(m, CPMap):
        return CPMap(dom, cod, m.choi)
    return Morphism(dom, cod, m.mat)


__all__ = [
    "CPMap", "MatrixCategory", "ChoiCategory", "MATRIX", "CHOI", "category_of",
    "compose_any", "tensor_any", "relabel", "choi_to_superop", "superop_to_choi",
    "flatten", "permutation_matrix",
]
