"""Dense complex linear algebra over small tensor-product spaces.

Objects are factor lists (strict monoidal bookkeeping: tensor concatenates,
the unit is the empty list).  Morphisms carry a ``(cod.dim, dom.dim)``
matrix.  Everything here is an immutable value; random samplers take an
explicit :class:`numpy.random.Generator`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, NotOrthonormal, NotPSD, ObjectMismatch, WeightedSetTooLarge

ATOL = 1e-9
PROBE_TOL = 1e-7
ORTHO_TOL = 1e-8
MAX_WEIGHTED_ITEMS = 64


@dataclass(frozen=True)
class TheoryObject:
    """A finite-dimensional system given by its tensor factor dimensions."""

    factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if any(d < 1 for d in factors):
            raise ValueError(f"tensor factors must be >= 1, got {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return math.prod(self.factors)

    def __matmul__(self, other: "TheoryObject") -> "TheoryObject":
        return TheoryObject(self.factors + other.factors)

    def __repr__(self):
        if not self.factors:
            return "I"
        return "x".join(str(d) for d in self.factors)


UNIT = TheoryObject(())

ObjLike = Union[TheoryObject, int, Sequence[int]]


def as_object(x: ObjLike) -> TheoryObject:
    """Coerce an int or factor sequence to a TheoryObject (``1`` is the unit)."""
    if isinstance(x, TheoryObject):
        return x
    if isinstance(x, (int, np.integer)):
        return UNIT if int(x) == 1 else TheoryObject((int(x),))
    return TheoryObject(tuple(x))


def flatten(objs: Iterable[TheoryObject]) -> TheoryObject:
    """Reassociate a sequence of objects into one flat factor list."""
    factors: tuple = ()
    for o in objs:
        factors += as_object(o).factors
    return TheoryObject(factors)


@dataclass(frozen=True, eq=False)
class Morphism:
    """A linear map ``dom -> cod``; states, effects and scalars included."""

    dom: TheoryObject
    cod: TheoryObject
    mat: np.ndarray

    def __post_init__(self):
        dom, cod = as_object(self.dom), as_object(self.cod)
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 and mat.size == cod.dim * dom.dim:
            mat = mat.reshape(cod.dim, dom.dim)
        if mat.shape != (cod.dim, dom.dim):
            raise ObjectMismatch(
                f"matrix shape {mat.shape} does not match {cod!r} <- {dom!r}")
        mat = mat.astype(complex, copy=True)
        mat.setflags(write=False)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "mat", mat)

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
        """The complex number carried by a scalar."""
        if not self.is_scalar:
            raise ObjectMismatch("value is only defined for scalars")
        return complex(self.mat[0, 0])

    @property
    def dagger(self) -> "Morphism":
        return Morphism(self.cod, self.dom, self.mat.conj().T)

    def scaled(self, c: complex) -> "Morphism":
        return Morphism(self.dom, self.cod, c * self.mat)

    def allclose(self, other: "Morphism", atol: float = ATOL) -> bool:
        return (self.dom == other.dom and self.cod == other.cod
                and max_abs(self.mat - other.mat) <= atol)

    def __repr__(self):
        return f"Morphism({self.dom!r} -> {self.cod!r}, {self.mat.tolist()})"


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def state(vec, obj: ObjLike = None) -> Morphism:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return Morphism(UNIT, as_object(obj if obj is not None else v.size), v.reshape(-1, 1))


def effect(vec, obj: ObjLike = None) -> Morphism:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return Morphism(as_object(obj if obj is not None else v.size), UNIT, v.reshape(1, -1))


def scalar(z: complex) -> Morphism:
    return Morphism(UNIT, UNIT, [[z]])


def identity(obj: ObjLike) -> Morphism:
    obj = as_object(obj)
    return Morphism(obj, obj, np.eye(obj.dim))


def matrix(mat, dom: ObjLike = None, cod: ObjLike = None) -> Morphism:
    """Wrap a 2-D array, inferring single-factor objects from its shape."""
    m = np.atleast_2d(np.asarray(mat, dtype=complex))
    return Morphism(as_object(dom if dom is not None else m.shape[1]),
                    as_object(cod if cod is not None else m.shape[0]), m)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """Sequential composition ``g . f`` (apply f first)."""
    if f.cod != g.dom:
        raise DimensionMismatch(f"cannot compose: f.cod={f.cod!r} but g.dom={g.dom!r}")
    return Morphism(f.dom, g.cod, g.mat @ f.mat)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    return Morphism(f.dom @ g.dom, f.cod @ g.cod, np.kron(f.mat, g.mat))


def tensor_all(ms: Sequence[Morphism]) -> Morphism:
    out = scalar(1.0)
    for m in ms:
        out = tensor(out, m)
    return out


def permutation_matrix(dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Matrix sending |i_0 ... i_k> to |i_order[0] ... i_order[k]>."""
    dims = [int(d) for d in dims]
    total = math.prod(dims)
    if not dims:
        return np.eye(1)
    idx = np.arange(total).reshape(dims).transpose(list(order)).reshape(-1)
    return np.eye(total)[idx]


def permute_blocks(blocks: Sequence[TheoryObject], order: Sequence[int]) -> Morphism:
    """Wire permutation from ``flatten(blocks)`` to ``flatten(blocks[order])``."""
    blocks = [as_object(b) for b in blocks]
    dims = [b.dim for b in blocks]
    return Morphism(flatten(blocks), flatten(blocks[i] for i in order),
                    permutation_matrix(dims, order))


def swap(a: ObjLike, b: ObjLike) -> Morphism:
    return permute_blocks([as_object(a), as_object(b)], [1, 0])


# -- Choi matrices -----------------------------------------------------------

def choi_vector(f) -> np.ndarray:
    """(1 (x) f)|Phi>, the vector whose outer product is choi(f)."""
    m = f.mat if isinstance(f, Morphism) else np.asarray(f, dtype=complex)
    return m.T.reshape(-1)


def choi(f) -> np.ndarray:
    """sum_ij |i><j| (x) f|i><j|f^dagger, ordered domain-first."""
    v = choi_vector(f)
    return np.outer(v, v.conj())


def choi_of_weighted(items) -> np.ndarray:
    items = items.items if isinstance(items, WeightedSet) else list(items)
    if not items:
        raise ValueError("choi_of_weighted needs at least one item (or use WeightedSet)")
    return sum(w * choi(f) for f, w in items)


def _hermitian_eigh(p, tol):
    p = np.asarray(p, dtype=complex)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise NotPSD(f"expected a square matrix, got shape {p.shape}")
    if max_abs(p - p.conj().T) > max(tol, 1e-8):
        raise NotPSD("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh((p + p.conj().T) / 2)
    if vals.size and vals[0] < -tol:
        raise NotPSD(f"minimum eigenvalue {vals[0]:.3e} below -{tol:g}")
    return np.clip(vals, 0.0, None), vecs


def principal_sqrt(p, tol: float = ATOL) -> np.ndarray:
    vals, vecs = _hermitian_eigh(p, tol)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def kraus_from_choi(c, dims, tol: float = ATOL) -> "WeightedSet":
    """Kraus decomposition of a positive Choi matrix.

    Each eigenpair (lam, u) with lam > tol becomes the operator sqrt(lam)*u
    reshaped to ``(dim_out, dim_in)``, carried with weight 1.
    """
    d_in, d_out = (int(d) for d in dims)
    c = np.asarray(c, dtype=complex)
    if c.shape != (d_in * d_out, d_in * d_out):
        raise ObjectMismatch(f"Choi shape {c.shape} does not match dims {dims}")
    vals, vecs = _hermitian_eigh(c, tol)
    dom, cod = as_object(d_in), as_object(d_out)
    items = []
    for lam, u in zip(vals[::-1], vecs[:, ::-1].T):
        if lam <= tol:
            break
        op = math.sqrt(lam) * u.reshape(d_in, d_out).T
        items.append((Morphism(dom, cod, op), 1.0))
    return WeightedSet(dom, cod, tuple(items))


def unitary_complete(cols, n: int = None) -> np.ndarray:
    """Extend k orthonormal columns in C^n to an n x n unitary.

    The input columns are kept verbatim as the first k columns; the rest are
    filled deterministically by Gram-Schmidt over the standard basis, always
    taking the basis vector with the largest residual.
    """
    if isinstance(cols, np.ndarray) and cols.ndim == 2:
        q = np.array(cols, dtype=complex)
    else:
        cols = [np.asarray(c, dtype=complex).reshape(-1) for c in cols]
        if not cols and n is None:
            raise ValueError("need n when no columns are given")
        q = np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=complex)
    n = q.shape[0] if n is None else n
    if q.shape[0] != n or q.shape[1] > n:
        raise NotOrthonormal(f"{q.shape[1]} vectors of length {q.shape[0]} do not fit in C^{n}")
    if max_abs(q.conj().T @ q - np.eye(q.shape[1])) > ORTHO_TOL:
        raise NotOrthonormal("input columns are not orthonormal within 1e-8")
    basis = np.eye(n, dtype=complex)
    while q.shape[1] < n:
        resid = basis - q @ (q.conj().T @ basis)
        resid = resid - q @ (q.conj().T @ resid)
        norms = np.linalg.norm(resid, axis=0)
        j = int(np.argmax(norms))
        q = np.concatenate([q, (resid[:, j] / norms[j])[:, None]], axis=1)
    return q


# -- seeded samplers ---------------------------------------------------------

def _ginibre(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = _ginibre(rng, dim)
    return v / np.linalg.norm(v)


def random_state(dim: ObjLike, rng: np.random.Generator) -> Morphism:
    """Haar-random unit ket (normalised complex Gaussian)."""
    obj = as_object(dim)
    return state(random_vector(obj.dim, rng), obj)


def random_effect(dim: ObjLike, rng: np.random.Generator) -> Morphism:
    """Conjugate transpose of an independent Haar-random unit ket."""
    obj = as_object(dim)
    return effect(random_vector(obj.dim, rng).conj(), obj)


def random_matrix(dom: ObjLike, cod: ObjLike, rng: np.random.Generator) -> Morphism:
    dom, cod = as_object(dom), as_object(cod)
    return Morphism(dom, cod, _ginibre(rng, cod.dim, dom.dim) / math.sqrt(max(dom.dim, 1)))


def random_unitary(obj: ObjLike, rng: np.random.Generator) -> Morphism:
    obj = as_object(obj)
    q, r = np.linalg.qr(_ginibre(rng, obj.dim, obj.dim))
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return Morphism(obj, obj, q)


def random_contraction(dom: ObjLike, cod: ObjLike, rng: np.random.Generator,
                       max_norm: float = 1.0) -> Morphism:
    """Random f with operator norm drawn uniformly from (0, max_norm]."""
    dom, cod = as_object(dom), as_object(cod)
    g = _ginibre(rng, cod.dim, dom.dim)
    s = np.linalg.norm(g, 2)
    target = max_norm * (1.0 - rng.random())
    return Morphism(dom, cod, g * (target / s) if s > 0 else g)


def random_density(dim: int, rng: np.random.Generator, rank: int = None) -> np.ndarray:
    """Trace-one positive matrix from a Wishart draw."""
    rank = dim if rank is None else rank
    g = _ginibre(rng, dim, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_psd(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = _ginibre(rng, dim, dim)
    p = g @ g.conj().T
    return scale * p / np.linalg.norm(p, 2)


# -- weighted sets -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeightedSet:
    """Finite list of (morphism, positive weight); the empty list is zero."""

    dom: TheoryObject
    cod: TheoryObject
    items: tuple = ()

    def __post_init__(self):
        dom, cod = as_object(self.dom), as_object(self.cod)
        items = tuple((m, float(w)) for m, w in self.items)
        if len(items) > MAX_WEIGHTED_ITEMS:
            raise WeightedSetTooLarge(
                f"{len(items)} items exceeds the cap of {MAX_WEIGHTED_ITEMS}")
        for m, w in items:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"weights must be finite and > 0, got {w}")
            if m.dom != dom or m.cod != cod:
                raise ObjectMismatch(
                    f"item {m.dom!r}->{m.cod!r} does not match {dom!r}->{cod!r}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.items], dtype=float)

    @classmethod
    def zero(cls, dom: ObjLike, cod: ObjLike) -> "WeightedSet":
        return cls(dom, cod, ())

    @classmethod
    def single(cls, m, w: float = 1.0) -> "WeightedSet":
        return cls(m.dom, m.cod, ((m, w),))

    def __repr__(self):
        return f"WeightedSet({self.dom!r} -> {self.cod!r}, {len(self.items)} items)"
