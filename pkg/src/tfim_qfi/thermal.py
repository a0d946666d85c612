"""Gibbs states in the energy eigenbasis (k_B = 1)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import EigenSystem


class TemperatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ThermalState:
    populations: np.ndarray = field(repr=False)
    temperature: float
    log_partition: float
    eigensystem: EigenSystem = field(repr=False)

    @property
    def energies(self) -> np.ndarray:
        return self.eigensystem.eigenvalues


def boltzmann_populations(energies, T: float) -> tuple[np.ndarray, float]:
    """Max-shifted Boltzmann weights and ``log Z``.

    Weights are computed as ``exp(-(E - E_min)/T)`` so the largest is exactly
    one and nothing overflows; very high levels may underflow to zero.
    """
    if not T > 0:
        raise TemperatureError(f"temperature must be positive, got {T}")
    e = np.asarray(energies, dtype=float)
    e_min = e.min()
    w = np.exp(-(e - e_min) / T)
    z_shifted = w.sum()
    return w / z_shifted, float(np.log(z_shifted) - e_min / T)


def gibbs_state(es: EigenSystem, T: float) -> ThermalState:
    p, log_z = boltzmann_populations(es.eigenvalues, T)
    p.setflags(write=False)
    return ThermalState(p, float(T), log_z, es)


def energy_moments(ts: ThermalState) -> tuple[float, float]:
    """Thermal mean energy and energy variance.

    The variance is accumulated about the mean, which keeps it accurate when
    the spectrum carries a large constant offset.
    """
    p = ts.populations
    e = ts.energies
    mean = float(p @ e)
    var = float(p @ (e - mean) ** 2)
    return mean, var


def population_temperature_derivative(ts: ThermalState) -> np.ndarray:
    """``dp_n/dT = p_n (E_n - <E>) / T**2``."""
    mean, _ = energy_moments(ts)
    return ts.populations * (ts.energies - mean) / ts.temperature**2


def boltzmann_rate(ts: ThermalState) -> float:
    """Temperature derivative of the lowest level's population, ``dp_0/dT``.

    Under ground degeneracy index 0 is one member of the block; its partners
    carry the same population and rate.
    """
    mean, _ = energy_moments(ts)
    p0 = ts.populations[0]
    return float(p0 * (ts.energies[0] - mean) / ts.temperature**2)
