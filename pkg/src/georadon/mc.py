"""Monte Carlo evaluation of the transforms on general (non-radial)
functions: Haar sampling over rotation groups, plane/geodesic samplers,
and stochastic duality checks.

Determinism contract: every estimator value depends only on
(seed, stream_id, n_samples).  Samples are generated in fixed-size chunks,
each chunk's generator derived independently from the seed and the chunk
index, and the reduction is a fixed-order pairwise sum — so results are
bit-identical regardless of how many worker threads execute the chunks.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (DomainError, KernelSingularityWarning,
                     McConvergenceWarning)
from .profiles import ArgKind, Profile1D
from .special import dual_transform_limit_constant, gamma_nk, sphere_area

CHUNK = 8192
#: distances below this are clamped in the singular sine kernel
KERNEL_FLOOR = 1e-3


def worker_threads() -> int:
    env = os.environ.get("GEORADON_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class McSpec:
    """Seeded sample budget; estimators are deterministic in these fields."""

    seed: int
    n_samples: int
    stream_id: int = 0

    def __post_init__(self):
        if self.n_samples <= 0:
            raise DomainError("n_samples must be positive")

    def substream(self, offset: int, n_samples: Optional[int] = None) -> "McSpec":
        return McSpec(self.seed, n_samples or self.n_samples,
                      self.stream_id + offset)


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_samples: int

    def agrees_with(self, other: float, sigmas: float = 4.0) -> bool:
        return abs(self.value - other) <= sigmas * max(self.std_error, 1e-300)


def _rng(spec: McSpec, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=spec.seed,
                                 spawn_key=(spec.stream_id, chunk_index))
    return np.random.Generator(np.random.Philox(seq))


def _estimate(term_fn: Callable, spec: McSpec,
              warn_convergence: bool = True) -> McEstimate:
    """Mean/stderr of term_fn(rng, count) over the seeded sample budget."""
    counts = []
    left = spec.n_samples
    while left > 0:
        counts.append(min(CHUNK, left))
        left -= counts[-1]

    def run(idx_count):
        idx, count = idx_count
        vals = np.asarray(term_fn(_rng(spec, idx), count), dtype=float)
        return float(np.sum(vals)), float(np.sum(vals * vals))

    jobs = list(enumerate(counts))
    threads = worker_threads()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, jobs))
    else:
        partials = [run(j) for j in jobs]

    sums = _pairwise([s for s, _ in partials])
    sqs = _pairwise([q for _, q in partials])
    n = spec.n_samples
    mean = sums / n
    var = max(sqs - n * mean * mean, 0.0) / max(n - 1, 1)
    stderr = math.sqrt(var / n)

    if warn_convergence and len(partials) >= 4:
        quarter = max(1, len(partials) // 4)
        s_q = _pairwise([s for s, _ in partials[:quarter]])
        q_q = _pairwise([q for _, q in partials[:quarter]])
        n_q = sum(counts[:quarter])
        m_q = s_q / n_q
        v_q = max(q_q - n_q * m_q * m_q, 0.0) / max(n_q - 1, 1)
        se_q = math.sqrt(v_q / n_q)
        if se_q > 0 and stderr / se_q > 0.8:
            warnings.warn(
                "running standard error is not shrinking at the n^-1/2 rate",
                McConvergenceWarning, stacklevel=3)
    return McEstimate(mean, stderr, n)


def _pairwise(vals):
    vals = list(vals)
    if not vals:
        return 0.0
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
                for i in range(0, len(vals), 2)]
    return vals[0]


# -- rotation/frame machinery ---------------------------------------------------

def sample_rotations(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed batch of SO(n) matrices, shape (size, n, n).

    QR of a standard Gaussian matrix with the triangular factor's diagonal
    made positive; a determinant of -1 is repaired by negating the last
    column (right multiplication by a fixed reflection preserves Haar).
    """
    if n < 1:
        raise DomainError("rotation dimension must be >= 1")
    if n == 1:
        return np.ones((size, 1, 1))
    g = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    q = q * d[:, None, :]
    det = np.linalg.det(q)
    q[det < 0, :, -1] *= -1.0
    return q


def sample_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed SO(n) matrix."""
    return sample_rotations(n, 1, rng)[0]


@dataclass(frozen=True)
class Frame:
    """Orthonormal columns spanning a linear subspace."""

    columns: np.ndarray        # (n, d)

    def __post_init__(self):
        c = np.asarray(self.columns, dtype=float)
        object.__setattr__(self, "columns", c)
        d = c.shape[1]
        if d and np.max(np.abs(c.T @ c - np.eye(d))) > 1e-12:
            raise DomainError("frame columns are not orthonormal to 1e-12")


@dataclass(frozen=True)
class AffinePlane:
    """A d-plane as an orthonormal frame plus an orthogonal offset."""

    frame: Frame
    offset: np.ndarray

    def __post_init__(self):
        off = np.asarray(self.offset, dtype=float)
        object.__setattr__(self, "offset", off)
        c = self.frame.columns
        if c.shape[1] and np.max(np.abs(c.T @ off)) > 1e-12:
            raise DomainError("offset is not orthogonal to the frame")

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.offset))


@dataclass(frozen=True)
class PlaneBatch:
    """Batched affine planes; ``frames`` is (B, n, d), ``offsets`` (B, n)."""

    frames: np.ndarray
    offsets: np.ndarray

    @property
    def distances(self) -> np.ndarray:
        return np.linalg.norm(self.offsets, axis=-1)


def complete_rotation(columns: np.ndarray, gauge: int = 0) -> np.ndarray:
    """Deterministic g in SO(n) whose last columns are the given orthonormal
    ones; ``gauge`` rotates the complementary block (all such g are valid)."""
    n, d = columns.shape
    basis = np.linalg.qr(np.concatenate([columns, np.eye(n)], axis=1))[0]
    comp = basis[:, d:n]
    if gauge and comp.shape[1] >= 2:
        th = 0.7 * gauge
        rot = np.eye(comp.shape[1])
        rot[0, 0] = rot[1, 1] = math.cos(th)
        rot[0, 1], rot[1, 0] = -math.sin(th), math.sin(th)
        comp = comp @ rot
    g = np.concatenate([comp, columns], axis=1)
    if np.linalg.det(g) < 0:
        if comp.shape[1]:
            g[:, 0] *= -1.0
        else:
            g[:, -1] *= -1.0     # flipping a frame column keeps its span
    return g


def _complete_rotation_batch(frames: np.ndarray, extra: Optional[np.ndarray]
                             ) -> np.ndarray:
    """Batch of rotations mapping the last coordinates onto ``frames`` and,
    when ``extra`` is given, the next coordinate onto it.

    The complement block comes from a QR of the orthogonal projector, which
    is well defined for generic subspaces (the only kind Monte Carlo ever
    produces).
    """
    b, n, d = frames.shape
    cols = frames if extra is None else np.concatenate(
        [extra[:, :, None], frames], axis=2)
    k1 = cols.shape[2]
    proj = np.eye(n)[None] - cols @ np.transpose(cols, (0, 2, 1))
    q, r = np.linalg.qr(proj)
    sign = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    sign = np.where(sign == 0, 1.0, sign)
    comp = (q * sign[:, None, :])[:, :, :n - k1]
    g = np.concatenate([comp, cols], axis=2)
    det = np.linalg.det(g)
    flip = det < 0
    if n - k1 > 0:
        g[flip, :, 0] *= -1.0
    else:
        g[flip, :, -1] *= -1.0
    return g


# -- hyperbolic elements ----------------------------------------------------------

def hyperbolic_rotation(n: int, d: int, r: float) -> np.ndarray:
    """Hyperbolic rotation in the (x_{n-d}, x_{n+1}) plane of E^{n,1}."""
    m = np.eye(n + 1)
    i = n - d - 1
    ch, sh = math.cosh(r), math.sinh(r)
    m[i, i] = ch
    m[i, n] = sh
    m[n, i] = sh
    m[n, n] = ch
    return m


def _hyperbolic_rotations(n: int, d: int, r: np.ndarray) -> np.ndarray:
    b = r.shape[0]
    m = np.broadcast_to(np.eye(n + 1), (b, n + 1, n + 1)).copy()
    i = n - d - 1
    ch, sh = np.cosh(r), np.sinh(r)
    m[:, i, i] = ch
    m[:, i, n] = sh
    m[:, n, i] = sh
    m[:, n, n] = ch
    return m


def embed_rotation(rot: np.ndarray) -> np.ndarray:
    """Embed SO(n) (acting on the spatial coordinates) into SO_0(n,1)."""
    n = rot.shape[-1]
    if rot.ndim == 2:
        m = np.eye(n + 1)
        m[:n, :n] = rot
        return m
    b = rot.shape[0]
    m = np.broadcast_to(np.eye(n + 1), (b, n + 1, n + 1)).copy()
    m[:, :n, :n] = rot
    return m


def _embed_block(rot: np.ndarray, n: int, lo: int) -> np.ndarray:
    """Embed SO(k) acting on spatial coordinates lo..lo+k-1 into SO_0(n,1)."""
    b, k, _ = rot.shape
    m = np.broadcast_to(np.eye(n + 1), (b, n + 1, n + 1)).copy()
    m[:, lo:lo + k, lo:lo + k] = rot
    return m


@dataclass(frozen=True)
class GeodesicElement:
    """A d-geodesic in factored form: rotation * hyperbolic shift * base."""

    n: int
    dim: int
    rotation: np.ndarray       # (n, n) spatial rotation
    distance: float

    @property
    def matrix(self) -> np.ndarray:
        return embed_rotation(self.rotation) @ hyperbolic_rotation(
            self.n, self.dim, self.distance)


@dataclass(frozen=True)
class GeodesicBatch:
    """Batched d-geodesics given by full matrices in SO_0(n,1)."""

    n: int
    dim: int
    matrices: np.ndarray       # (B, n+1, n+1)

    def distance_to_origin(self) -> np.ndarray:
        """Geodesic distance of each element to the base point."""
        n, d = self.n, self.dim
        last = self.matrices[:, n, :]
        pn2 = last[:, n] ** 2 - np.sum(last[:, n - d:n] ** 2, axis=1)
        return np.arccosh(np.maximum(np.sqrt(np.maximum(pn2, 1.0)), 1.0))


def zonal_function(profile: Profile1D) -> Callable:
    """Lift a zonal profile to a function on geodesic batches."""
    def fn(batch: GeodesicBatch) -> np.ndarray:
        rho = batch.distance_to_origin()
        if profile.arg_kind is ArgKind.CoshDistance:
            return profile(np.cosh(rho))
        if profile.arg_kind is ArgKind.SinhDistance:
            return profile(np.sinh(rho))
        if profile.arg_kind is ArgKind.TanhDistance:
            return profile(np.tanh(rho))
        if profile.arg_kind is ArgKind.GeodesicDistance:
            return profile(rho)
        raise DomainError(f"profile kind {profile.arg_kind} is not zonal")
    return fn


def radial_plane_function(profile: Profile1D) -> Callable:
    """Lift a radial profile to a function on plane batches."""
    def fn(batch: PlaneBatch) -> np.ndarray:
        return profile(batch.distances)
    return fn


# -- estimators -------------------------------------------------------------------

def radon_affine_mc(p, f: Callable, zeta: AffinePlane, mc: McSpec,
                    gauge: int = 0, importance_sigma: float = 1.0) -> McEstimate:
    """Unbiased estimate of the forward transform of f at the plane zeta.

    Direction frames are sampled Haar over the rotations of the plane, the
    transverse offset from a Gaussian envelope with importance correction.
    ``f`` receives a PlaneBatch and must return one value per plane.
    """
    n, j, k = p.n, p.j, p.k
    eta = zeta.frame.columns
    if eta.shape != (n, k):
        raise DomainError(f"expected an (n, k) = ({n}, {k}) frame")
    v = np.asarray(zeta.offset, dtype=float)
    vnorm = float(np.linalg.norm(v))
    u = v / vnorm if vnorm > 0 else None
    g = complete_rotation(eta, gauge) if u is None else _with_marked_axis(
        eta, u, gauge)
    sig = importance_sigma
    log_norm = 0.5 * (k - j) * math.log(2 * math.pi * sig * sig)

    def terms(rng, count):
        gam = sample_rotations(k, count, rng)
        z = sig * rng.standard_normal((count, k - j))
        w = np.exp(log_norm + np.sum(z * z, axis=1) / (2 * sig * sig))
        # local coordinates inside the k-block: offset = |v| e_{n-k} + z
        local = np.zeros((count, n))
        local[:, n - k - 1] = vnorm
        # rotate z by gamma within the k-block, then push through g
        blk = np.zeros((count, k))
        blk[:, :k - j] = z
        local[:, n - k:] = np.einsum("bij,bj->bi", gam, blk)
        offs = local @ g.T
        dirs = np.einsum("ij,bjl->bil", g[:, n - k:], gam[:, :, k - j:]) \
            if j > 0 else np.zeros((count, n, 0))
        vals = np.asarray(f(PlaneBatch(dirs, offs)), dtype=float)
        return vals * w

    return _estimate(terms, mc)


def _with_marked_axis(frame: np.ndarray, u: np.ndarray, gauge: int) -> np.ndarray:
    n, k = frame.shape
    cols = np.concatenate([u[:, None], frame], axis=1)
    g = complete_rotation(cols, gauge)
    return g


def dual_affine_mc(p, phi: Callable, tau: AffinePlane, mc: McSpec,
                   gauge: int = 0) -> McEstimate:
    """Unbiased estimate of the dual transform of phi at the plane tau:
    the average of phi over Haar-rotated k-planes containing tau."""
    n, j, k = p.n, p.j, p.k
    xi = tau.frame.columns
    if xi.shape != (n, j):
        raise DomainError(f"expected an (n, j) = ({n}, {j}) frame")
    u = np.asarray(tau.offset, dtype=float)
    g = complete_rotation(xi, gauge)       # last j columns span xi

    def terms(rng, count):
        rho = sample_rotations(n - j, count, rng)
        # the k-plane directions: rho acts on the first n-j coordinates;
        # the span of the last k base vectors becomes rho(R^{k-j}) + R^j
        base = np.zeros((n - j, k - j))
        base[n - k:, :] = np.eye(k - j)
        rotated = np.einsum("bij,jl->bil", rho, base)
        dirs = np.zeros((count, n, k))
        dirs[:, :n - j, :k - j] = rotated
        dirs[:, n - j:, k - j:] = np.eye(j)
        dirs = np.einsum("ij,bjl->bil", g, dirs)
        proj = np.einsum("bnl,n->bl", dirs, u)
        offs = u[None, :] - np.einsum("bnl,bl->bn", dirs, proj)
        return np.asarray(phi(PlaneBatch(dirs, offs)), dtype=float)

    return _estimate(terms, mc)


def radon_hyper_mc(p, f: Callable, z: GeodesicElement, mc: McSpec) -> McEstimate:
    """Unbiased estimate of the hyperbolic forward transform at the
    k-geodesic ``z`` (factored rotation/distance form).

    The inner geodesics are sampled by a Haar rotation of the plane and a
    radial coordinate drawn uniformly in tanh-distance with the matching
    density weight; ``f`` receives a GeodesicBatch.
    """
    n, j, k = p.n, p.j, p.k
    if z.n != n or z.dim != k:
        raise DomainError("z must be a k-geodesic in the same dimension")
    left = embed_rotation(z.rotation) @ hyperbolic_rotation(n, k, z.distance)
    sig = sphere_area(k - j - 1)

    def terms(rng, count):
        alph = sample_rotations(k, count, rng)
        s = rng.uniform(0.0, 1.0, count)
        s = np.minimum(s, 1.0 - 1e-12)
        w = sig * s ** (k - j - 1) / (1.0 - s * s) ** ((k + 1) / 2.0)
        rho = np.arctanh(s)
        mats = np.einsum("ij,bjl->bil", left,
                         _embed_block(alph, n, n - k) @
                         _hyperbolic_rotations(n, j, rho))
        vals = np.asarray(f(GeodesicBatch(n, j, mats)), dtype=float)
        return vals * w

    return _estimate(terms, mc)


def sample_hyper_elements(n: int, d: int, rng, count: int):
    """Haar rotation + tanh-uniform radius samples of d-geodesics, with the
    invariant-measure weights; returns (batch, weights, rotations, rho)."""
    rot = sample_rotations(n, count, rng)
    s = np.minimum(rng.uniform(0.0, 1.0, count), 1.0 - 1e-12)
    w = sphere_area(n - d - 1) * s ** (n - d - 1) \
        / (1.0 - s * s) ** ((n + 1) / 2.0)
    rho = np.arctanh(s)
    mats = embed_rotation(rot) @ _hyperbolic_rotations(n, d, rho)
    return GeodesicBatch(n, d, mats), w, rot, rho


def dual_sine_mc(alpha: float, p, phi: Profile1D, rho_grid, mc: McSpec,
                 kernel: str = "sine") -> list:
    """Estimates of the weighted dual transform of a zonal function at
    points x at distances ``rho_grid`` from the base point.

    ``kernel`` selects the sinh-power family ("sine", exponent
    alpha + k - n), the logarithmic kernel ("log"), or the vanishing-order
    limit ("plain", the probability average over geodesics through x).
    One common sample set serves every grid point, so the returned curve is
    smooth in rho and the whole grid costs a single sampling pass.
    """
    n, k = p.n, p.k
    rho_grid = np.atleast_1d(np.asarray(rho_grid, dtype=float))
    phi_fn = zonal_function(phi)
    n_pts = len(rho_grid)
    x_mats = np.stack([hyperbolic_rotation(n, 0, float(r)) for r in rho_grid])

    plain = kernel == "plain" or (kernel == "sine" and alpha == 0.0)
    if plain:
        cst = dual_transform_limit_constant(n, k)
    else:
        expo = alpha + k - n
        if kernel == "sine":
            cst = gamma_nk(alpha, n, k)
        elif kernel == "log":
            cst = 1.0
        else:
            raise DomainError(f"unknown kernel {kernel}")

    clamped = False

    def chunk_terms(rng, count):
        """(n_pts, count) matrix of estimator terms for one chunk."""
        nonlocal clamped
        if plain:
            rot = embed_rotation(sample_rotations(n, count, rng))
            out = np.empty((n_pts, count))
            for i in range(n_pts):
                mats = np.einsum("ij,bjl->bil", x_mats[i], rot)
                out[i] = cst * phi_fn(GeodesicBatch(n, k, mats))
            return out
        batch, w, _, _ = sample_hyper_elements(n, k, rng, count)
        vals = phi_fn(batch)
        out = np.empty((n_pts, count))
        for i in range(n_pts):
            inv = _pseudo_inverse_apply(batch.matrices, x_mats[i][:, n])
            d = _distance_to_base(inv, n, k)
            if expo < 0 and np.any(d < KERNEL_FLOOR):
                clamped = True
            d = np.maximum(d, KERNEL_FLOOR)
            ker = np.sinh(d) ** expo if kernel == "sine" \
                else np.log(np.sinh(d))
            out[i] = cst * w * vals * ker
        return out

    counts = []
    left = mc.n_samples
    while left > 0:
        counts.append(min(CHUNK, left))
        left -= counts[-1]

    def run(idx_count):
        idx, count = idx_count
        t = chunk_terms(_rng(mc, idx), count)
        return np.sum(t, axis=1), np.sum(t * t, axis=1)

    jobs = list(enumerate(counts))
    threads = worker_threads()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, jobs))
    else:
        partials = [run(j) for j in jobs]
    if clamped:
        warnings.warn("sampled distances approach the singular kernel; "
                      "clamped", KernelSingularityWarning, stacklevel=2)

    ns = mc.n_samples
    sums = _pairwise_rows([s for s, _ in partials])
    sqs = _pairwise_rows([q for _, q in partials])
    means = sums / ns
    var = np.maximum(sqs - ns * means * means, 0.0) / max(ns - 1, 1)
    errs = np.sqrt(var / ns)
    return [McEstimate(float(means[i]), float(errs[i]), ns)
            for i in range(n_pts)]


def _pairwise_rows(arrays):
    arrays = [np.asarray(a, dtype=float) for a in arrays]
    while len(arrays) > 1:
        arrays = [arrays[i] + arrays[i + 1] if i + 1 < len(arrays)
                  else arrays[i] for i in range(0, len(arrays), 2)]
    return arrays[0]


def _pseudo_inverse_apply(mats: np.ndarray, x: np.ndarray) -> np.ndarray:
    """A^{-1} x for A in SO_0(n,1): A^{-1} = G A^T G with G = diag(-I_n, 1)."""
    n1 = mats.shape[-1]
    gx = x.copy()
    gx[:-1] *= -1.0
    out = np.einsum("bji,j->bi", mats, gx)    # A^T (G x)
    out[:, :-1] *= -1.0
    return out


def _distance_to_base(z: np.ndarray, n: int, d: int) -> np.ndarray:
    pn2 = z[:, n] ** 2 - np.sum(z[:, n - d:n] ** 2, axis=1)
    return np.arccosh(np.maximum(np.sqrt(np.maximum(pn2, 1.0)), 1.0))


# -- duality checks ----------------------------------------------------------------

def _outer_split(n_samples: int):
    n_out = max(64, int(math.sqrt(n_samples)))
    n_in = max(256, n_samples // n_out)
    return n_out, n_in


def duality_check_mc(which: str, f: Callable, phi: Callable, p,
                     mc: McSpec, ball_only: bool = False):
    """Estimate both sides of a forward/dual pairing identity.

    ``which`` selects the geometry: "affine" or "chord" (planes; ``f`` and
    ``phi`` take PlaneBatch) or "hyper" (geodesics; GeodesicBatch).  Returns
    (lhs, rhs) McEstimates computed by nested sampling: the outer element
    from the invariant measure, the inner transform by the estimators above.
    """
    if which == "affine":
        return _duality_planes(f, phi, p, mc, ball=False)
    if which == "chord":
        return _duality_planes(f, phi, p, mc, ball=True)
    if which == "hyper":
        return _duality_hyper(f, phi, p, mc)
    raise DomainError(f"unknown duality geometry {which!r}")


def _gaussian_offsets(rng, count, dim, sigma):
    z = sigma * rng.standard_normal((count, dim))
    w = (2 * math.pi * sigma * sigma) ** (dim / 2.0) \
        * np.exp(np.sum(z * z, axis=1) / (2 * sigma * sigma))
    return z, w


def _ball_offsets(rng, count, dim):
    z = rng.standard_normal((count, dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    radii = rng.uniform(0.0, 1.0, count) ** (1.0 / dim)
    vol = math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)
    return z * radii[:, None], np.full(count, vol)


def _duality_planes(f, phi, p, mc: McSpec, ball: bool):
    n, j, k = p.n, p.j, p.k
    n_out, n_in = _outer_split(mc.n_samples)

    def lhs_terms(rng, count, base_stream):
        rot = sample_rotations(n, count, rng)
        frames = rot[:, :, n - k:]
        perp = rot[:, :, :n - k]
        if ball:
            z, w = _ball_offsets(rng, count, n - k)
        else:
            z, w = _gaussian_offsets(rng, count, n - k, 1.0)
        offs = np.einsum("bnl,bl->bn", perp, z)
        inner = np.empty(count)
        for i in range(count):
            plane = AffinePlane(Frame(frames[i]), offs[i])
            inner[i] = radon_affine_mc(
                p, f, plane, mc.substream(base_stream + i, n_in)).value
        outer_vals = np.asarray(phi(PlaneBatch(frames, offs)), dtype=float)
        return inner * outer_vals * w

    def rhs_terms(rng, count, base_stream):
        rot = sample_rotations(n, count, rng)
        frames = rot[:, :, n - j:] if j > 0 else np.zeros((count, n, 0))
        perp = rot[:, :, :n - j]
        if ball:
            z, w = _ball_offsets(rng, count, n - j)
        else:
            z, w = _gaussian_offsets(rng, count, n - j, 1.0)
        offs = np.einsum("bnl,bl->bn", perp, z)
        inner = np.empty(count)
        for i in range(count):
            plane = AffinePlane(Frame(frames[i]), offs[i])
            inner[i] = dual_affine_mc(
                p, phi, plane, mc.substream(base_stream + i, n_in)).value
        outer_vals = np.asarray(f(PlaneBatch(frames, offs)), dtype=float)
        return inner * outer_vals * w

    lhs = _nested_estimate(lhs_terms, mc, n_out, stream_base=1)
    rhs = _nested_estimate(rhs_terms, mc, n_out, stream_base=1 + 2 * n_out)
    return lhs, rhs


def _duality_hyper(f, phi, p, mc: McSpec):
    n, j, k = p.n, p.j, p.k
    n_out, n_in = _outer_split(mc.n_samples)

    def lhs_terms(rng, count, base_stream):
        batch, w, rot, rho = sample_hyper_elements(n, k, rng, count)
        inner = np.empty(count)
        for i in range(count):
            el = GeodesicElement(n, k, rot[i], float(rho[i]))
            inner[i] = radon_hyper_mc(
                p, f, el, mc.substream(base_stream + i, n_in)).value
        return inner * np.asarray(phi(batch), dtype=float) * w

    def rhs_terms(rng, count, base_stream):
        batch, w, rot, rho = sample_hyper_elements(n, j, rng, count)
        inner = np.empty(count)
        for i in range(count):
            el = GeodesicElement(n, j, rot[i], float(rho[i]))
            inner[i] = dual_hyper_mc(
                p, phi, el, mc.substream(base_stream + i, n_in)).value
        return inner * np.asarray(f(batch), dtype=float) * w

    lhs = _nested_estimate(lhs_terms, mc, n_out, stream_base=1)
    rhs = _nested_estimate(rhs_terms, mc, n_out, stream_base=1 + 2 * n_out)
    return lhs, rhs


def dual_hyper_mc(p, phi: Callable, t: GeodesicElement, mc: McSpec) -> McEstimate:
    """Estimate of the hyperbolic dual transform at a j-geodesic: average of
    phi over Haar-rotated k-geodesics containing it, computed through the
    chord model (the k-plane is sampled around the chord of ``t``)."""
    n, j, k = p.n, p.j, p.k
    if t.n != n or t.dim != j:
        raise DomainError("t must be a j-geodesic in the same dimension")
    # chord of t: direction = last j columns of the rotation, offset along
    # the (n-j)-th column with tanh length
    rot = t.rotation
    xi = rot[:, n - j:] if j > 0 else np.zeros((n, 0))
    u = math.tanh(t.distance) * rot[:, n - j - 1]
    plane = AffinePlane(Frame(xi), u)
    ch_w = math.cosh(t.distance) ** (k - n)

    def phi_on_planes(batch: PlaneBatch) -> np.ndarray:
        dist = batch.distances
        dist = np.minimum(dist, 1.0 - 1e-12)
        weight = (1.0 - dist * dist) ** ((j - n) / 2.0)
        return weight * phi(_planes_to_geodesics(batch, n, k))

    est = dual_affine_mc(p, phi_on_planes, plane, mc)
    return McEstimate(ch_w * est.value, ch_w * est.std_error, est.n_samples)


def _planes_to_geodesics(batch: PlaneBatch, n: int, k: int) -> GeodesicBatch:
    """Lift ball chords to geodesics: rotation aligning the chord, then the
    hyperbolic shift by artanh of the chord distance."""
    b = batch.frames.shape[0]
    dist = np.minimum(batch.distances, 1.0 - 1e-12)
    safe = dist > 1e-14
    u = np.where(safe[:, None], batch.offsets /
                 np.maximum(dist[:, None], 1e-300), 0.0)
    if not np.all(safe):
        # degenerate offsets: any unit vector orthogonal to the frame works
        for i in np.nonzero(~safe)[0]:
            fr = batch.frames[i]
            cand = np.eye(n)[:, 0]
            cand = cand - fr @ (fr.T @ cand)
            nrm = np.linalg.norm(cand)
            if nrm < 1e-8:
                cand = np.eye(n)[:, 1]
                cand = cand - fr @ (fr.T @ cand)
                nrm = np.linalg.norm(cand)
            u[i] = cand / nrm
    g = _complete_rotation_batch(batch.frames, u)
    rho = np.arctanh(dist)
    mats = embed_rotation(g) @ _hyperbolic_rotations(n, k, rho)
    return GeodesicBatch(n, k, mats)


def _nested_estimate(term_fn, mc: McSpec, n_out: int, stream_base: int
                     ) -> McEstimate:
    """Outer-sample estimate where each term launches inner estimators on
    disjoint substreams (kept deterministic by global outer indexing)."""
    counts = []
    left = n_out
    chunk = max(1, min(64, n_out))
    while left > 0:
        counts.append(min(chunk, left))
        left -= counts[-1]
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(int)

    def run(idx):
        rng = _rng(mc.substream(stream_base), idx)
        vals = np.asarray(
            term_fn(rng, counts[idx], stream_base + int(offsets[idx])),
            dtype=float)
        return float(np.sum(vals)), float(np.sum(vals * vals))

    threads = worker_threads()
    jobs = list(range(len(counts)))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, jobs))
    else:
        partials = [run(i) for i in jobs]
    sums = _pairwise([s for s, _ in partials])
    sqs = _pairwise([q for _, q in partials])
    mean = sums / n_out
    var = max(sqs - n_out * mean * mean, 0.0) / max(n_out - 1, 1)
    return McEstimate(mean, math.sqrt(var / n_out), n_out)
