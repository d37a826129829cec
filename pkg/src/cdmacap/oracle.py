"""Independent ground truth at desk scale.

Exact noiseless sum capacity by exhaustive input/matrix enumeration, Monte
Carlo mutual information for noisy channels under uniform inputs, and the
single-user hard-decision BPSK baseline.  Everything here is deliberately
brute-force so it can arbitrate the analytic bounds.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, ResourceLimitError, UnsupportedNoiseError
from .noise import GAUSSIAN, NoiseModel
from .numerics import LN2, binary_entropy, q_function

_MAX_ENUM_USERS = 24          # 2^n channel-input enumeration cap
_MAX_MC_USERS = 16            # 2^n inner sum per Monte Carlo sample
_MAX_FREE_ENTRIES = 20        # 2^((m-1) n) reduced matrices in exhaustive mode
_MC_BATCH = 8192
_UNIQUE_DIRECT_LIMIT = 18     # above this, count outputs chunk-wise


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate in bits: mean, standard error, provenance."""

    mean: float
    std_error: float
    samples: int
    seed: int


@dataclass(frozen=True)
class ExactCapacity:
    """Max and mean output entropy over enumerated/sampled signature matrices."""

    max_bits: float
    mean_bits: float
    matrices: int
    mode: str


@dataclass(frozen=True)
class SignatureMatrix:
    """An m x n matrix of +-1 chips, one column per user."""

    entries: tuple

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=int)
        if arr.ndim != 2 or arr.size == 0:
            raise DomainError("signature matrix must be a nonempty 2-D array")
        if not np.all(np.isin(arr, (-1, 1))):
            raise DomainError("signature matrix entries must be +-1")

    @classmethod
    def from_array(cls, array) -> "SignatureMatrix":
        arr = np.asarray(array, dtype=int)
        return cls(tuple(tuple(int(v) for v in row) for row in arr))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @classmethod
    def from_text(cls, text: str) -> "SignatureMatrix":
        """Parse 'm n' header then m rows of n entries in {+1,-1} (or {+,-})."""
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not lines:
            raise DomainError("empty signature matrix file")
        try:
            m, n = (int(tok) for tok in lines[0].split())
        except ValueError:
            raise DomainError(f"bad matrix header {lines[0]!r}") from None
        if len(lines) != m + 1:
            raise DomainError(f"expected {m} matrix rows, got {len(lines) - 1}")
        rows = []
        for ln in lines[1:]:
            tokens = ln.split()
            if len(tokens) != n:
                raise DomainError(f"expected {n} entries per row, got {len(tokens)}")
            rows.append(tuple(1 if tok in ("+", "+1", "1") else -1 if tok in ("-", "-1") else
                              _bad_entry(tok) for tok in tokens))
        return cls(tuple(rows))

    def to_text(self) -> str:
        rows = [" ".join(f"{v:+d}" for v in row) for row in self.entries]
        return "\n".join([f"{self.m} {self.n}"] + rows) + "\n"

    @classmethod
    def load(cls, path) -> "SignatureMatrix":
        return cls.from_text(Path(path).read_text())

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())


def _bad_entry(token: str):
    raise DomainError(f"bad matrix entry {token!r}")


def _input_enumeration(n: int) -> np.ndarray:
    """All 2^n sign vectors, row i = bits of i (LSB = user 0)."""
    codes = np.arange(2 ** n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1) * 2 - 1


def output_entropy(a: SignatureMatrix) -> float:
    """H(Y) in bits for the noiseless channel under uniform inputs.

    Outputs are compared as integer vectors A x; the 1/sqrt(m) scaling is a
    bijection and is skipped so multiset counting stays exact.
    """
    n = a.n
    if n > _MAX_ENUM_USERS:
        raise ResourceLimitError(f"output_entropy enumerates 2^n inputs; n={n} exceeds "
                                 f"{_MAX_ENUM_USERS}")
    mat = a.array
    if n <= _UNIQUE_DIRECT_LIMIT:
        products = _input_enumeration(n) @ mat.T
        counts = np.unique(products, axis=0, return_counts=True)[1]
    else:
        tally: Counter = Counter()
        chunk = 1 << _UNIQUE_DIRECT_LIMIT
        for start in range(0, 2 ** n, chunk):
            codes = np.arange(start, min(start + chunk, 2 ** n), dtype=np.int64)
            block = (((codes[:, None] >> np.arange(n)) & 1) * 2 - 1) @ mat.T
            rows, cnts = np.unique(block, axis=0, return_counts=True)
            for row, c in zip(map(bytes, np.ascontiguousarray(rows)), cnts):
                tally[row] += int(c)
        counts = np.array(list(tally.values()))
    return n - float(np.sum(counts * np.log2(counts))) / 2 ** n


def _reduced_matrices(m: int, n: int):
    """All m x n sign matrices with first row fixed to +1.

    Negating a column is an input relabeling and leaves H(Y) unchanged, so
    max and mean over this reduced family equal those over the full family.
    """
    free = (m - 1) * n
    lower = _input_enumeration(free) if free else np.zeros((1, 0), dtype=np.int64)
    for row_bits in lower:
        yield SignatureMatrix.from_array(
            np.vstack([np.ones((1, n), dtype=np.int64),
                       row_bits.reshape(m - 1, n)]))


def exact_noiseless_capacity(size, mode: str = "exhaustive",
                             sample_count: int | None = None,
                             seed: int | None = None) -> ExactCapacity:
    """Max and mean of output_entropy over signature matrices.

    mode="exhaustive" enumerates the column-sign-reduced family (first entry
    of every column fixed to +1); mode="sample" draws sample_count seeded
    uniform matrices from the full family.
    """
    m, n = size.m, size.n
    if mode == "exhaustive":
        if (m - 1) * n > _MAX_FREE_ENTRIES:
            raise ResourceLimitError(
                f"exhaustive enumeration needs 2^((m-1)n) matrices; "
                f"(m-1)*n={(m - 1) * n} exceeds {_MAX_FREE_ENTRIES}")
        entropies = np.array([output_entropy(a) for a in _reduced_matrices(m, n)])
    elif mode == "sample":
        if not sample_count or sample_count < 1:
            raise DomainError("sample mode requires sample_count >= 1")
        if seed is None:
            raise DomainError("sample mode requires a seed")
        rng = np.random.Generator(np.random.Philox(key=seed))
        draws = rng.integers(0, 2, size=(sample_count, m, n)) * 2 - 1
        entropies = np.array([output_entropy(SignatureMatrix.from_array(d))
                              for d in draws])
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return ExactCapacity(max_bits=float(entropies.max()),
                         mean_bits=float(entropies.mean()),
                         matrices=len(entropies), mode=mode)


def mc_mutual_information(a: SignatureMatrix, model: NoiseModel,
                          samples: int, seed: int) -> McEstimate:
    """Monte Carlo I(X; Y) in bits for uniform +-1 inputs through A with noise.

    Per sample the log of sum_u f(A(X-u)/sqrt(m) + N) / f(N) is accumulated
    by log-sum-exp over all 2^n candidate inputs u.  Randomness is derived
    from the seed through counter-based (Philox) streams keyed by a fixed
    internal batch index, so results are bit-identical for a given seed no
    matter how evaluation is scheduled.
    """
    if model.is_noiseless:
        raise UnsupportedNoiseError("mc_mutual_information needs a noise density")
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    n, m = a.n, a.m
    if n > _MAX_MC_USERS:
        raise ResourceLimitError(f"inner sum enumerates 2^n candidates; n={n} exceeds "
                                 f"{_MAX_MC_USERS}")

    mat = a.array.astype(float)
    scale = 1.0 / math.sqrt(m)
    au = _input_enumeration(n).astype(float) @ mat.T * scale   # (2^n, m)
    au_sq = np.einsum("ij,ij->i", au, au)

    values = np.empty(samples)
    offset = 0
    batch_index = 0
    while offset < samples:
        count = min(_MC_BATCH, samples - offset)
        rng = np.random.Generator(np.random.Philox(key=seed, counter=batch_index << 64))
        x = rng.integers(0, 2, size=(count, n)) * 2 - 1
        if model.kind == GAUSSIAN:
            sigma2 = model.sigma2
            noise = rng.standard_normal((count, m)) * math.sqrt(sigma2)
            t = x.astype(float) @ mat.T * scale + noise
            tt = np.einsum("ij,ij->i", t, t)
            nn = np.einsum("ij,ij->i", noise, noise)
            nats = -(tt[:, None] - 2.0 * (t @ au.T) + au_sq[None, :]
                     - nn[:, None]) / (2.0 * sigma2)
            values[offset:offset + count] = logsumexp(nats, axis=1) / LN2
        else:
            half = model.a
            noise = rng.uniform(-half, half, size=(count, m))
            t = x.astype(float) @ mat.T * scale + noise
            # Flat density: each in-support candidate contributes ratio 1,
            # out-of-support candidates contribute zero mass and are dropped.
            hits = np.zeros(count, dtype=np.int64)
            for start in range(0, au.shape[0], 1024):
                block = au[start:start + 1024]
                inside = np.all(np.abs(t[:, None, :] - block[None, :, :]) <= half, axis=2)
                hits += inside.sum(axis=1)
            values[offset:offset + count] = np.log2(hits)
        offset += count
        batch_index += 1

    mean_bits = n - float(values.mean())
    std_error = float(values.std(ddof=1)) / math.sqrt(samples)
    return McEstimate(mean=mean_bits, std_error=std_error, samples=samples, seed=seed)


def bpsk_reference(sigma2: float) -> float:
    """Hard-decision per-user capacity 1 - H(Q(1/sigma)) of the orthogonal system.

    This is the exact per-user capacity for loads beta <= 1, where orthogonal
    (Walsh) signatures reduce each user to antipodal signaling.
    """
    if sigma2 <= 0.0:
        raise DomainError(f"sigma2 must be positive, got {sigma2}")
    return 1.0 - binary_entropy(q_function(1.0 / math.sqrt(sigma2)))
