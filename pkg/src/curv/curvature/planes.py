"""p-curvatures: sectional curvatures of the generalized double duals."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import doubleform as df
from ..scalars import is_exact_array, to_float
from .core import PreconditionError, as_form, dd_star_p, ricci, scal

FRAME_TOL = 1e-10


def check_orthonormal(frame: Sequence, n: int, tol: float = FRAME_TOL) -> np.ndarray:
    F = np.array([np.asarray(v) for v in frame]) if len(frame) else np.zeros((0, n))
    if F.ndim != 2 or F.shape[1] != n:
        raise PreconditionError(f"frame vectors must have length {n}")
    gram = F @ F.T
    defect = gram - np.eye(len(frame), dtype=np.int64)
    if is_exact_array(np.asarray(defect, dtype=object)):
        ok = all(v == 0 for v in defect.flat)
    else:
        ok = max((abs(to_float(v)) for v in defect.flat), default=0.0) <= tol
    if not ok:
        raise PreconditionError("frame is not orthonormal")
    return F


def p_curvature(R, frame: Sequence):
    """``s_p = 2 *R*_p(e_1..e_p; e_1..e_p)`` on an orthonormal p-frame."""
    R = as_form(R)
    n, p = R.n, len(frame)
    if not 0 <= p <= n - 2:
        raise PreconditionError(f"p={p} outside [0, {n - 2}]")
    check_orthonormal(frame, n)
    return 2 * df.evaluate(dd_star_p(R, p), list(frame), list(frame))


def sectional(R, x, y):
    return df.evaluate(as_form(R), [x, y], [x, y])


def p_curvature_formula(R, frame: Sequence):
    """``Scal - 2 sum Ric(e_i, e_i) + 2 sum_{i<j} K(e_i, e_j)``."""
    R = as_form(R)
    n, p = R.n, len(frame)
    if not 2 <= p <= n - 2:
        raise PreconditionError(f"formula route needs 2 <= p <= n-2, got p={p}")
    check_orthonormal(frame, n)
    ric = ricci(R)
    out = scal(R)
    for e in frame:
        out = out - 2 * df.evaluate(ric, [e], [e])
    for x, y in itertools.combinations(frame, 2):
        out = out + 2 * sectional(R, x, y)
    return out


def cp_curvature(R, frame: Sequence):
    """``C_p = (Scal - s_p) / 2``."""
    return (scal(R) - p_curvature(R, frame)) * Fraction(1, 2)


def scal_from_s2(R):
    """Scalar curvature as the average of ``s_2`` over ordered basis pairs."""
    R = as_form(R)
    n = R.n
    if n < 4:
        raise PreconditionError("needs n >= 4")
    e = np.eye(n, dtype=np.int64)
    D2 = dd_star_p(R, 2)
    total = 0
    for i, j in itertools.permutations(range(n), 2):
        total = total + 2 * df.evaluate(D2, [e[i], e[j]], [e[i], e[j]])
    return total * Fraction(1, (n - 2) * (n - 3))


def random_orthonormal_frame(rng: np.random.Generator, n: int, p: int) -> list[np.ndarray]:
    """Gram-Schmidt of ``p`` Gaussian vectors (QR with a sign fix)."""
    A = rng.normal(size=(n, p))
    Q, Rm = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(Rm))
    return [Q[:, i] for i in range(p)]
