# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Randomized tight frames and Kashin's representation
++++++++++++++++++++++++++++++++++++++++++++++++++++

The frame operator is the :math:`d \\times N` matrix

.. math::

    A = \\mathrm{diag}(s) \\, H_N[\\mathcal{R}, :] \\, \\mathrm{diag}(t) / \\sqrt{N},

with :math:`N = 2^{\\lceil \\log_2 d \\rceil + 1}`, ``t`` the random column
signs (``diag_signs``), ``s`` random row signs and :math:`\\mathcal{R}` a set
of ``d`` distinct rows. :math:`A A^T = I_d`, so the columns :math:`u_j` of
``A`` form a tight frame. Analysis (:math:`A^T x`) and synthesis
(:math:`A a`) both run through :func:`~ldptrilemma.core.hadamard.fwht`.

"""
import numpy as np
from nipype import logging

from .hadamard import fwht, next_power_of_two

LOGGER = logging.getLogger('nipype.utils')

#: shipped Kashin level ``K0``
DEFAULT_KASHIN_LEVEL = 4.0
#: slack accepted on the unit-ball constraint
NORM_SLACK = 1e-9


class KashinDecompositionError(RuntimeError):
    """No Kashin representation was found within the allowed restarts"""


class TightFrame(object):
    """
    Randomized partial Hadamard tight frame, reproducible from ``(d, seed)``

    Attributes
    ----------

    d : int
        ambient dimension
    N : int
        frame size, :math:`2^{\\lceil \\log_2 d \\rceil + 1}`
    diag_signs : numpy.ndarray of ±1, shape (N,)
        the random diagonal ``D``
    row_signs : numpy.ndarray of ±1, shape (d,)
        random signs applied on the input side
    rows : numpy.ndarray of int, shape (d,)
        rows of :math:`H_N` selected by the frame
    scale : float
        :math:`1/\\sqrt{N}`

    """

    def __init__(self, d, seed=0, rows='random'):
        d = int(d)
        if d < 1:
            raise ValueError('frame dimension must be at least 1')
        self.d = d
        self.N = next_power_of_two(d) * 2
        self.seed = int(seed)
        self.row_selection = rows
        self.scale = 1.0 / np.sqrt(self.N)

        rng = np.random.default_rng([self.seed, d])
        self.diag_signs = rng.choice((-1.0, 1.0), size=self.N)
        if rows == 'first':
            self.rows = np.arange(d)
            self.row_signs = np.ones(d)
        elif rows == 'random':
            self.rows = np.sort(rng.choice(self.N, size=d, replace=False))
            self.row_signs = rng.choice((-1.0, 1.0), size=d)
        else:
            raise ValueError('unknown row selection "%s"' % rows)

        for name in ('diag_signs', 'rows', 'row_signs'):
            getattr(self, name).setflags(write=False)

    def __repr__(self):
        return 'TightFrame(d=%d, N=%d, seed=%d, rows=%r)' % (
            self.d, self.N, self.seed, self.row_selection)

    @property
    def matrix(self):
        """Dense :math:`d \\times N` operator (for tests and small ``d``)"""
        return self.synthesize(np.eye(self.N)).T

    def analyze(self, x):
        """:math:`A^T x` for ``x`` of shape ``(d,)`` or ``(n, d)``"""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.d:
            raise ValueError('expected vectors of dimension %d, got %d' % (self.d, x.shape[-1]))
        padded = np.zeros(x.shape[:-1] + (self.N,))
        padded[..., self.rows] = x * self.row_signs
        return fwht(padded) * self.diag_signs * self.scale

    def synthesize(self, a):
        """:math:`A a` for ``a`` of shape ``(N,)`` or ``(n, N)``"""
        a = np.asarray(a, dtype=float)
        if a.shape[-1] != self.N:
            raise ValueError('expected coefficients of length %d, got %d' % (self.N, a.shape[-1]))
        return fwht(a * self.diag_signs)[..., self.rows] * self.row_signs * self.scale


def build_frame(d, seed=0, rows='random'):
    """Build the :class:`TightFrame` of dimension ``d`` drawn from ``seed``"""
    return TightFrame(d, seed=seed, rows=rows)


def analyze(frame, x):
    """Frame analysis :math:`A^T x`"""
    return frame.analyze(x)


def synthesize(frame, a):
    """Frame synthesis :math:`A a`"""
    return frame.synthesize(a)


class KashinCoefficients(object):
    """
    Output of :func:`kashin_decompose`

    For a batch input every attribute gains a leading client axis.

    Attributes
    ----------

    a : numpy.ndarray, shape (N,) or (n, N)
        frame coefficients
    level_bound : float or numpy.ndarray
        :math:`K \\|x\\|_2 / \\sqrt{N}`, with ``K`` the level actually used
    residual_norm : float or numpy.ndarray
        :math:`\\|x - A a\\|_2`
    level : float or numpy.ndarray
        the Kashin level ``K`` (``K0`` doubled on every restart)

    """

    def __init__(self, a, level_bound, residual_norm, level):
        self.a = a
        self.level_bound = level_bound
        self.residual_norm = residual_norm
        self.level = level

    def __getitem__(self, index):
        return KashinCoefficients(self.a[index], self.level_bound[index],
                                  self.residual_norm[index], self.level[index])


def _clip_and_correct(frame, x, norms, level, tol, gamma, rho, max_iter):
    n = x.shape[0]
    bound = level * norms * frame.scale
    coeffs = np.zeros((n, frame.N))
    residual = x.copy()
    rnorm = norms.copy()
    ok = np.ones(n, dtype=bool)
    active = norms > 0

    cap = (1.0 - gamma) * bound
    for _ in range(max_iter):
        active &= rnorm > tol * norms
        if not active.any():
            break
        idx = np.flatnonzero(active)
        clipped = np.clip(frame.analyze(residual[idx]),
                          -cap[idx, None], cap[idx, None])
        coeffs[idx] += clipped
        updated = residual[idx] - frame.synthesize(clipped)
        new_norm = np.linalg.norm(updated, axis=1)
        stalled = new_norm > rho * rnorm[idx]
        ok[idx[stalled]] = False
        active[idx[stalled]] = False
        residual[idx] = updated
        rnorm[idx] = new_norm
        cap *= gamma

    # fold the leftover residual in without leaving the level bound
    coeffs = np.clip(coeffs + frame.analyze(residual), -bound[:, None], bound[:, None])
    rnorm = np.linalg.norm(x - frame.synthesize(coeffs), axis=1)
    ok &= rnorm <= tol * norms
    return coeffs, rnorm, ok


def kashin_decompose(frame, x, level=DEFAULT_KASHIN_LEVEL, tol=1e-9, gamma=0.5,
                     rho=0.9, max_restarts=4, max_iter=200):
    """
    Kashin's representation of ``x`` at level ``K0 = level``

    Iterative clip-and-correct: the residual is analyzed, clipped at
    :math:`M_t = (1-\\gamma)\\gamma^{t-1} K_0 \\|x\\|_2/\\sqrt{N}` and
    synthesized back, so that :math:`\\sum_t M_t \\le K_0\\|x\\|_2/\\sqrt{N}`.
    Each step must shrink the residual by ``rho``; otherwise ``K0`` is
    doubled and the decomposition restarts.

    Parameters
    ----------

    frame : TightFrame
    x : array_like, shape (d,) or (n, d)
        vectors with :math:`\\|x\\|_2 \\le 1`
    level : float
        initial Kashin level ``K0 > 1``
    tol : float
        relative reconstruction tolerance in ``(0, 1)``
    max_restarts : int
        number of ``K0`` doublings allowed

    Returns
    -------

    coefficients : KashinCoefficients
        :math:`\\max_j |a_j| \\le K\\|x\\|_2/\\sqrt{N}` and
        :math:`\\|x - A a\\|_2 \\le tol \\|x\\|_2` hold for every vector

    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.ndim != 2 or batch.shape[1] != frame.d:
        raise ValueError('expected vectors of dimension %d' % frame.d)
    if level <= 1:
        raise ValueError('the Kashin level must be larger than 1')
    if not 0 < tol < 1:
        raise ValueError('tolerance must lie in (0, 1)')
    norms = np.linalg.norm(batch, axis=1)
    if np.any(norms > 1 + NORM_SLACK):
        raise ValueError('inputs must lie in the unit ball (max norm %g)' % norms.max())

    n = batch.shape[0]
    coeffs = np.zeros((n, frame.N))
    residuals = np.zeros(n)
    levels = np.full(n, float(level))
    pending = np.arange(n)
    current = float(level)
    for attempt in range(max_restarts + 1):
        found, rnorm, ok = _clip_and_correct(
            frame, batch[pending], norms[pending], current, tol, gamma, rho, max_iter)
        done = pending[ok]
        coeffs[done] = found[ok]
        residuals[done] = rnorm[ok]
        levels[done] = current
        pending = pending[~ok]
        if not pending.size:
            break
        if attempt < max_restarts:
            LOGGER.warning('Kashin decomposition stalled for %d vector(s) at level %g; '
                           'retrying at level %g', pending.size, current, 2 * current)
        current *= 2

    if pending.size:
        raise KashinDecompositionError(
            'no Kashin representation for %d vector(s) within %d restart(s) (%r); '
            'rebuild the frame with another seed' % (pending.size, max_restarts, frame))

    result = KashinCoefficients(coeffs, levels * norms * frame.scale, residuals, levels)
    return result[0] if single else result


def calibrate_kashin_level(frame, n_vectors=100, seed=0, margin=1.25):
    """
    Estimate a Kashin level for ``frame`` from random unit vectors

    Decomposes ``n_vectors`` Gaussian directions at the shipped level (with
    restarts) and returns ``margin`` times the largest observed
    :math:`\\max_j|a_j|\\sqrt{N}`.

    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_vectors, frame.d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    result = kashin_decompose(frame, x, level=DEFAULT_KASHIN_LEVEL)
    observed = np.abs(result.a).max(axis=1) / frame.scale
    return max(float(margin * observed.max()), 1.0 + 1e-6)
