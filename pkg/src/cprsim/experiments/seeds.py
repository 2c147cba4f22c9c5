"""Per-trial seed derivation.

A trial seed is a hash of the master seed and the trial's grid coordinates,
so extending a grid never changes the seeds of existing trials.
"""

import hashlib

import numpy as np

SEED_MASK = (1 << 63) - 1


def _coordinate(value: object) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def trial_seed(
    master: int,
    experiment: str,
    k: int,
    measurements: int,
    snr_db: float | None,
    variant: str,
    trial: int,
) -> int:
    """First 8 bytes of SHA-256 over "master|experiment|k|M|snr|variant|trial", as a 63-bit integer."""
    key = "|".join(_coordinate(v) for v in (master, experiment, k, measurements, snr_db, variant, trial))
    digest = hashlib.sha256(key.encode()).digest()
    return int.from_bytes(digest[:8], "big") & SEED_MASK


def trial_generators(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent generators for the signal, the sensing operator and the noise."""
    signal, operator, noise = np.random.SeedSequence(seed).spawn(3)
    return np.random.default_rng(signal), np.random.default_rng(operator), np.random.default_rng(noise)
