"""Masks, measurement vectors, sensing operators and intensity measurements."""

from cprsim.measurement.intensities import (
    IntensityMeasurements,
    PairMeasurementBlock,
    measure_fourier,
    measure_vectors,
    sigma_for_snr,
    snr_db,
)
from cprsim.measurement.masks import MaskSet, MeasurementVectors, build_masks, measurement_vectors
from cprsim.measurement.sensing import (
    DenseOperator,
    FirstEntryAugmented,
    PartialFourierOperator,
    SensingOperator,
    build_operator,
)

__all__ = [
    "DenseOperator",
    "FirstEntryAugmented",
    "IntensityMeasurements",
    "MaskSet",
    "MeasurementVectors",
    "PairMeasurementBlock",
    "PartialFourierOperator",
    "SensingOperator",
    "build_masks",
    "build_operator",
    "measure_fourier",
    "measure_vectors",
    "measurement_vectors",
    "sigma_for_snr",
    "snr_db",
]
