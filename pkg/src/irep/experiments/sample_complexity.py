"""Translated-object classification with and without an invariance oracle.

Each image is a ``p × p`` torus holding one ``k_obj × k_obj`` patch at a
uniformly random translation, plus Gaussian pixel noise. A regularized
least-squares classifier is trained on three views of the same images:

* ``raw``: all ``p²`` pixels;
* ``oracle``: the patch window after undoing the translation, ``k_obj²``
  pixels (the registration oracle);
* ``invariant``: the CDF representation against a template bank.

For each view the smallest training size whose mean test accuracy reaches
the target is reported as ``n_star``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..groups import make_torus_group
from ..representations import PoolingConfig, TemplateBank, represent_many, sample_templates

REPRESENTATIONS = ("raw", "oracle", "invariant")


def make_patches(k_obj, seed):
    """Two class patches: bright (entries in [0.5, 1]) and dark (in [0, 0.5]).

    Different total intensity keeps the raw-pixel problem linearly
    separable under every translation.
    """
    rng = np.random.default_rng(seed)
    return np.stack([rng.uniform(0.5, 1.0, (k_obj, k_obj)), rng.uniform(0.0, 0.5, (k_obj, k_obj))])


def check_patches(patches):
    patches = np.asarray(patches, dtype=float)
    if patches.ndim != 3 or patches.shape[0] != 2 or patches.shape[1] != patches.shape[2]:
        raise ConfigError("need exactly two square patches")
    if np.array_equal(patches[0], patches[1]):
        raise ConfigError("class patches are identical")
    return patches


def balanced_labels(n, rng):
    """±1 labels where every even-length prefix holds both classes equally."""
    y = np.where(np.arange(n) % 2 == 0, 1, -1)
    flip = rng.integers(0, 2, size=n // 2).astype(bool)
    y[0:2 * (n // 2):2][flip] *= -1
    y[1:2 * (n // 2):2][flip] *= -1
    return y


def generate_images(n, patches, p, noise, rng):
    """Return ``(images (n, p*p), labels (n,), offsets (n, 2))``."""
    k_obj = patches.shape[1]
    labels = balanced_labels(n, rng)
    offsets = rng.integers(0, p, size=(n, 2))
    images = np.zeros((n, p, p))
    images[:, :k_obj, :k_obj] = np.where(labels[:, None, None] > 0, patches[0], patches[1])
    rows = (np.arange(p)[None, :] - offsets[:, :1]) % p
    cols = (np.arange(p)[None, :] - offsets[:, 1:]) % p
    images = images[np.arange(n)[:, None, None], rows[:, :, None], cols[:, None, :]]
    images = images + noise * rng.standard_normal(images.shape)
    return images.reshape(n, p * p), labels, offsets


def register(images, offsets, p, k_obj):
    """Undo each translation and keep the ``k_obj × k_obj`` object window."""
    n = len(images)
    grid = images.reshape(n, p, p)
    rows = (np.arange(k_obj)[None, :] + offsets[:, :1]) % p
    cols = (np.arange(k_obj)[None, :] + offsets[:, 1:]) % p
    window = grid[np.arange(n)[:, None, None], rows[:, :, None], cols[:, None, :]]
    return window.reshape(n, k_obj * k_obj)


def patch_templates(p, k_obj, count, seed, action):
    """Random unit templates supported on a ``k_obj × k_obj`` window."""
    raw = np.zeros((count, p, p))
    raw[:, :k_obj, :k_obj] = np.random.default_rng(seed).standard_normal((count, k_obj, k_obj))
    raw = raw.reshape(count, p * p)
    return TemplateBank(raw / np.linalg.norm(raw, axis=1, keepdims=True), action)


@dataclass
class RidgeClassifier:
    """Regularized least squares on ±1 labels with an unpenalized intercept."""

    lam: float = 1e-3
    weights: np.ndarray = None
    intercept: float = 0.0

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        mean = X.mean(axis=0)
        Xc = X - mean
        yc = y - y.mean()
        if n < d:
            dual = np.linalg.solve(Xc @ Xc.T + n * self.lam * np.eye(n), yc)
            self.weights = Xc.T @ dual
        else:
            self.weights = np.linalg.solve(Xc.T @ Xc + n * self.lam * np.eye(d), Xc.T @ yc)
        self.intercept = float(y.mean() - mean @ self.weights)
        return self

    def decision_function(self, X):
        return np.asarray(X, dtype=float) @ self.weights + self.intercept

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)

    def score(self, X, y):
        return float(np.mean(self.predict(X) == np.asarray(y)))


@dataclass
class SampleComplexityReport:
    n_grid: list
    accuracy: dict = field(repr=False)  # name -> (trials, len(n_grid))
    target: float = 0.9
    p: int = 16
    k_obj: int = 4

    def mean_accuracy(self, name):
        return self.accuracy[name].mean(axis=0)

    def std_accuracy(self, name):
        return self.accuracy[name].std(axis=0)

    def n_star(self, name):
        """Smallest grid size with mean accuracy at least ``target``; None if never."""
        for n, acc in zip(self.n_grid, self.mean_accuracy(name)):
            if acc >= self.target:
                return int(n)
        return None

    @property
    def ratio_raw_over_oracle(self):
        raw, oracle = self.n_star("raw"), self.n_star("oracle")
        if oracle is None:
            return None
        return float("inf") if raw is None else raw / oracle

    @property
    def ideal_ratio(self):
        return (self.p / self.k_obj) ** 2

    def curves(self):
        """Rows ``(representation, n, mean accuracy, std)``."""
        for name in self.accuracy:
            for n, m, s in zip(self.n_grid, self.mean_accuracy(name), self.std_accuracy(name)):
                yield name, int(n), float(m), float(s)


def _features(images, labels, offsets, p, k_obj, bank, pooling):
    return {
        "raw": images,
        "oracle": register(images, offsets, p, k_obj),
        "invariant": represent_many(images, bank, pooling, exact=False).reshape(len(images), -1),
    }


DEFAULT_N_GRID = (2, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024)


def run_sample_complexity(p=16, k_obj=4, noise=0.1, trials=20, n_grid=DEFAULT_N_GRID, test_size=300,
                          lam=1e-3, target=0.9, templates=16, template_support="patch", bins=32,
                          bin_range=1.0, patches=None, seed=11, threads=1):
    """Sweep training sizes and report accuracy curves for each view.

    ``template_support`` is ``"patch"`` (random templates on an object-sized
    window) or ``"sphere"`` (uniform on the whole image sphere).

    Trial ``t`` draws its images from ``default_rng([seed, t])``; training
    sets for the different ``n`` are nested prefixes of one pool. Results do
    not depend on ``threads``.
    """
    n_grid = sorted(int(n) for n in n_grid)
    if n_grid[0] < 2:
        raise ConfigError("training sizes must be at least 2")
    patches = check_patches(make_patches(k_obj, seed) if patches is None else patches)
    if patches.shape[1] != k_obj:
        raise ConfigError("patch shape does not match k_obj")
    _, action = make_torus_group(p)
    bank_seed = np.random.SeedSequence([seed, 1])
    if template_support == "patch":
        bank = patch_templates(p, k_obj, templates, bank_seed, action)
    elif template_support == "sphere":
        bank = sample_templates(p * p, templates, bank_seed, action)
    else:
        raise ConfigError(f"unknown template support {template_support!r}")
    pooling = PoolingConfig(kind="cdf", bins=bins, range=bin_range)
    n_max = n_grid[-1]

    def one_trial(trial):
        rng = np.random.default_rng([seed, trial])
        images, labels, offsets = generate_images(n_max + test_size, patches, p, noise, rng)
        feats = _features(images, labels, offsets, p, k_obj, bank, pooling)
        y_train, y_test = labels[:n_max], labels[n_max:]
        out = {}
        for name in REPRESENTATIONS:
            X_train, X_test = feats[name][:n_max], feats[name][n_max:]
            out[name] = [RidgeClassifier(lam).fit(X_train[:n], y_train[:n]).score(X_test, y_test)
                         for n in n_grid]
        return out

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        results = list(pool.map(one_trial, range(trials)))
    accuracy = {name: np.array([r[name] for r in results]) for name in REPRESENTATIONS}
    return SampleComplexityReport(n_grid, accuracy, target, p, k_obj)
