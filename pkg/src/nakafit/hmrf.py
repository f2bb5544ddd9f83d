"""Hidden-Markov-random-field image segmentation with pluggable likelihoods.

A label field over the pixel grid is scored by the posterior energy

    U(x) = -sum_i ln f(y_i | theta_{x_i}) + beta * sum_{<a,b>} [x_a != x_b]

where <a,b> ranges over 4-neighbor pairs, each counted once. Labels start
from 1-D k-means on the intensities and are refined by iterated
conditional modes (ICM, raster order), alternating with per-class
parameter re-estimation: sample mean/variance for the Gaussian likelihood,
the block-recursive ML pipeline for the Nakagami likelihood.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .blockwise import BlockEstimatorState, finalize, ingest_block
from .errors import NakafitError
from .estimators import EstimatorKind, compute_stats
from .nakagami import NakagamiParams
from .specfun import log_gamma

_LN2 = math.log(2.0)

# Classes whose pixels give delta at or below this are treated as flat
# (quantized images produce near-constant regions whose implied shape is
# unphysical).
_SEG_DELTA_MIN = 1e-9

# Fallbacks for classes that cannot be fitted at initialization: a variance
# floor for the Gaussian, a concentrated high-shape spike for the Nakagami.
_VAR_FLOOR = 1e-12
_DEGENERATE_M = 1e4

_KMEANS_MAX_ITER = 100


class Likelihood(Enum):
    GAUSSIAN = "gaussian"
    NAKAGAMI = "nakagami"


@dataclass(frozen=True)
class GaussianParams:
    mu: float
    var: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.var) and self.var > 0):
            raise ValueError(f"bad Gaussian parameters ({self.mu!r}, {self.var!r})")


@dataclass(frozen=True)
class SegModel:
    """Class count, likelihood family, per-class parameters, and MRF weight.

    class_params entries may be None before the first parameter update;
    `starved` lists classes whose parameters were frozen (too few pixels,
    or a degenerate fit) in the most recent update.
    """

    n_classes: int
    likelihood: Likelihood
    class_params: tuple
    beta: float = 1.0
    max_sweeps: int = 10
    starved: tuple = ()

    def __post_init__(self):
        if self.n_classes < 2:
            raise ValueError("n_classes must be >= 2")
        if len(self.class_params) != self.n_classes:
            raise ValueError("class_params must have one entry per class")
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError("beta must be a finite non-negative real")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")

    @classmethod
    def empty(cls, n_classes, likelihood, beta=1.0, max_sweeps=10):
        return cls(
            n_classes=n_classes,
            likelihood=likelihood,
            class_params=(None,) * n_classes,
            beta=beta,
            max_sweeps=max_sweeps,
        )


@dataclass(frozen=True)
class SegmentResult:
    labels: np.ndarray
    model: SegModel
    trace: tuple  # (step, phase, energy) rows; phases "params" and "icm"
    sweeps: int


def _as_image(image):
    img = np.asarray(image, dtype=float)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("image must be a non-empty 2-D array")
    if not np.all(np.isfinite(img)) or np.any(img < 0.0):
        raise ValueError("pixel intensities must be finite and >= 0")
    return img


def _as_labels(labels, shape, n_classes):
    lab = np.asarray(labels)
    if lab.shape != shape:
        raise ValueError(f"label field shape {lab.shape} != image shape {shape}")
    if lab.min() < 0 or lab.max() >= n_classes:
        raise ValueError("labels must lie in [0, n_classes)")
    return lab.astype(np.intp)


def kmeans_init(image, n_classes, seed):
    """1-D k-means on the intensities; classes are ordered by center value."""
    img = _as_image(image)
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2")
    vals = img.ravel()
    distinct = np.unique(vals)
    if distinct.size < n_classes:
        raise ValueError(
            f"image has {distinct.size} distinct intensities, fewer than {n_classes} classes"
        )
    rng = np.random.default_rng(seed)
    centers = np.sort(rng.choice(distinct, size=n_classes, replace=False))
    assign = np.argmin(np.abs(vals[:, None] - centers[None, :]), axis=1)
    for _ in range(_KMEANS_MAX_ITER):
        new_centers = centers.copy()
        for j in range(n_classes):
            members = vals[assign == j]
            if members.size:
                new_centers[j] = members.mean()
            else:
                # re-seed an empty cluster at the worst-represented point
                new_centers[j] = vals[np.argmax(np.abs(vals - centers[assign]))]
        new_assign = np.argmin(np.abs(vals[:, None] - new_centers[None, :]), axis=1)
        moved = not np.array_equal(new_centers, centers)
        centers, assign = new_centers, new_assign
        if not moved:
            break
    order = np.argsort(centers, kind="stable")
    rank = np.empty(n_classes, dtype=np.intp)
    rank[order] = np.arange(n_classes)
    return rank[assign].reshape(img.shape)


def clique_potential(label_a, label_b):
    """Potts pair potential: 0 for equal labels, 1 otherwise."""
    if label_a < 0 or label_b < 0:
        raise ValueError("labels must be non-negative")
    return 0.0 if label_a == label_b else 1.0


def _nll_table(image, model):
    """Per-pixel, per-class negative log-likelihood, shape (H, W, K)."""
    img = image
    out = np.empty(img.shape + (model.n_classes,))
    if model.likelihood is Likelihood.NAKAGAMI and np.any(img <= 0.0):
        raise ValueError("Nakagami likelihood requires strictly positive pixels")
    for k, p in enumerate(model.class_params):
        if p is None:
            raise ValueError(f"class {k} has no parameters; run update_params first")
        if model.likelihood is Likelihood.GAUSSIAN:
            out[:, :, k] = 0.5 * math.log(2.0 * math.pi * p.var) + (img - p.mu) ** 2 / (
                2.0 * p.var
            )
        else:
            out[:, :, k] = -(
                _LN2
                - log_gamma(p.m)
                - p.m * math.log(p.sigma)
                + (2.0 * p.m - 1.0) * np.log(img)
                - img * img / p.sigma
            )
    return out


def _pair_disagreements(labels):
    return int(
        (labels[:, 1:] != labels[:, :-1]).sum() + (labels[1:, :] != labels[:-1, :]).sum()
    )


def _energy_given_table(nll, labels, beta):
    data = float(np.take_along_axis(nll, labels[:, :, None], axis=2).sum())
    return data + beta * _pair_disagreements(labels)


def total_energy(image, labels, model):
    """Posterior energy of a labeling; each 4-neighbor pair counted once."""
    img = _as_image(image)
    lab = _as_labels(labels, img.shape, model.n_classes)
    return _energy_given_table(_nll_table(img, model), lab, model.beta)


def _icm_pass(nll_flat, lab, height, width, n_classes, beta):
    """One raster-order coordinate-descent pass over flat Python lists.

    Mutates `lab` in place; later pixels see earlier updates. Returns the
    number of pixels whose label changed.
    """
    changed = 0
    for i in range(height):
        base = i * width
        for j in range(width):
            idx = base + j
            neigh = []
            if i > 0:
                neigh.append(lab[idx - width])
            if i < height - 1:
                neigh.append(lab[idx + width])
            if j > 0:
                neigh.append(lab[idx - 1])
            if j < width - 1:
                neigh.append(lab[idx + 1])
            costs = nll_flat[idx]
            best = 0
            best_cost = math.inf
            for k in range(n_classes):
                c = costs[k]
                for nl in neigh:
                    if nl != k:
                        c += beta
                if c < best_cost:
                    best_cost = c
                    best = k
            if best != lab[idx]:
                lab[idx] = best
                changed += 1
    return changed


def icm_sweep(image, labels, model):
    """One ICM sweep; returns (new label field, number of changed pixels).

    The total energy never increases across a sweep.
    """
    img = _as_image(image)
    lab = _as_labels(labels, img.shape, model.n_classes)
    height, width = img.shape
    nll_flat = _nll_table(img, model).reshape(height * width, model.n_classes).tolist()
    flat = lab.ravel().tolist()
    changed = _icm_pass(nll_flat, flat, height, width, model.n_classes, model.beta)
    return np.asarray(flat, dtype=np.intp).reshape(height, width), changed


def _fit_class(px, likelihood):
    """Fit one class from its hard-assigned pixels; None if degenerate.

    The Nakagami fit feeds the class pixels through the block-recursive ML
    pipeline as a single block: splitting a class into small fixed chunks
    injects the solver's small-sample bias (~ +3m/L per chunk) into the
    class shape, which over-peaks the density enough to derail the
    segmentation on shape-only contrasts.
    """
    if px.size < 2:
        return None
    if likelihood is Likelihood.GAUSSIAN:
        var = float(px.var(ddof=1))
        if var <= 0.0:
            return None
        return GaussianParams(mu=float(px.mean()), var=var)
    if compute_stats(px).delta <= _SEG_DELTA_MIN:
        return None
    state = BlockEstimatorState(method=EstimatorKind.EXACT_ML)
    try:
        state = ingest_block(state, px)
        est = finalize(state)
    except NakafitError:
        return None
    return NakagamiParams(m=est.m_hat, sigma=est.sigma_hat)


def _bootstrap_class(px, likelihood):
    """Fallback parameters for a class that cannot be fitted at startup."""
    if px.size == 0:
        raise ValueError("a class has no pixels at initialization")
    if likelihood is Likelihood.GAUSSIAN:
        var = float(px.var(ddof=1)) if px.size > 1 else 0.0
        return GaussianParams(mu=float(px.mean()), var=max(var, _VAR_FLOOR))
    mean_x2 = float((px * px).mean())
    return NakagamiParams(m=_DEGENERATE_M, sigma=mean_x2 / _DEGENERATE_M)


def update_params(image, labels, model):
    """Re-estimate per-class parameters from the hard assignment.

    Classes with fewer than 2 pixels or a degenerate fit keep their previous
    parameters and are reported in the returned model's `starved` field
    (bootstrapped if they never had parameters).
    """
    img = _as_image(image)
    lab = _as_labels(labels, img.shape, model.n_classes)
    if model.likelihood is Likelihood.NAKAGAMI and np.any(img <= 0.0):
        raise ValueError("Nakagami likelihood requires strictly positive pixels")
    new_params = []
    starved = []
    for k in range(model.n_classes):
        px = img[lab == k]
        fitted = _fit_class(px, model.likelihood)
        if fitted is None:
            starved.append(k)
            prev = model.class_params[k]
            fitted = prev if prev is not None else _bootstrap_class(px, model.likelihood)
        new_params.append(fitted)
    return replace(model, class_params=tuple(new_params), starved=tuple(starved))


def soft_prior_update(labels, model):
    """Per-pixel label probabilities from the spatial prior alone.

    Weight of label k at a pixel is exp(-beta * number of 4-neighbors whose
    current label differs from k), normalized over labels. Border pixels
    simply have fewer neighbors.
    """
    lab = np.asarray(labels)
    height, width = lab.shape
    n_classes = model.n_classes
    same = np.zeros((height, width, n_classes))
    for k in range(n_classes):
        eq = lab == k
        same[1:, :, k] += eq[:-1, :]
        same[:-1, :, k] += eq[1:, :]
        same[:, 1:, k] += eq[:, :-1]
        same[:, :-1, k] += eq[:, 1:]
    n_neigh = np.zeros((height, width, 1))
    n_neigh[1:, :, 0] += 1
    n_neigh[:-1, :, 0] += 1
    n_neigh[:, 1:, 0] += 1
    n_neigh[:, :-1, 0] += 1
    weights = np.exp(-model.beta * (n_neigh - same))
    return weights / weights.sum(axis=2, keepdims=True)


def _param_vector(model):
    out = []
    for p in model.class_params:
        if model.likelihood is Likelihood.GAUSSIAN:
            out.extend((p.mu, p.var))
        else:
            out.extend((p.m, p.sigma))
    return np.array(out)


def segment(
    image,
    n_classes,
    likelihood,
    *,
    beta=1.0,
    seed=0,
    max_sweeps=3,
    max_outer=100,
    param_tol=1e-5,
    zero_shift=1e-6,
):
    """Full pipeline: k-means init, then alternate parameter updates and ICM.

    Each outer round refits the class parameters and runs at most max_sweeps
    ICM sweeps; keeping the sweep budget small lets labels and parameters
    co-evolve instead of freezing early around the initialization. The loop
    stops once a round changes no pixel and moves the parameters by less
    than param_tol (relative), or at max_outer.

    For the Nakagami likelihood, images containing zeros are shifted up by
    zero_shift * max intensity to restore positive support. Returns labels,
    the fitted model, the (step, phase, energy) trace, and the number of
    ICM sweeps executed.
    """
    img = _as_image(image)
    if likelihood is Likelihood.NAKAGAMI and img.min() <= 0.0:
        peak = img.max()
        if peak <= 0.0:
            raise ValueError("cannot use the Nakagami likelihood on an all-zero image")
        img = img + zero_shift * peak
    labels = kmeans_init(img, n_classes, seed)
    model = SegModel.empty(n_classes, likelihood, beta=beta, max_sweeps=max_sweeps)
    trace = []
    step = 0
    sweeps = 0
    prev_vec = None
    height, width = img.shape
    for _ in range(max_outer):
        model = update_params(img, labels, model)
        nll = _nll_table(img, model)
        trace.append((step, "params", _energy_given_table(nll, labels, model.beta)))
        step += 1
        vec = _param_vector(model)
        params_stable = prev_vec is not None and np.max(
            np.abs(vec - prev_vec) / np.maximum(np.abs(prev_vec), 1e-300)
        ) < param_tol
        prev_vec = vec
        nll_flat = nll.reshape(height * width, n_classes).tolist()
        flat = labels.ravel().tolist()
        round_changed = 0
        for _ in range(model.max_sweeps):
            changed = _icm_pass(nll_flat, flat, height, width, n_classes, model.beta)
            round_changed += changed
            sweeps += 1
            labels = np.asarray(flat, dtype=np.intp).reshape(height, width)
            trace.append((step, "icm", _energy_given_table(nll, labels, model.beta)))
            step += 1
            if changed == 0:
                break
        if round_changed == 0 and params_stable:
            break
    return SegmentResult(labels=labels, model=model, trace=tuple(trace), sweeps=sweeps)
