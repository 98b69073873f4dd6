"""Wideband geometric channel, 2-D DFT codebook and exhaustive beam sweep."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform planar arrays at the RSU (tx) and receiver (rx).

    Rows run along z, columns along y; spacing is in wavelengths.
    """

    nt_rows: int = 4
    nt_cols: int = 2
    nr_rows: int = 4
    nr_cols: int = 2
    spacing: float = 0.5

    def __post_init__(self):
        if min(self.nt_rows, self.nt_cols, self.nr_rows, self.nr_cols) < 1 or self.spacing <= 0:
            raise ValueError("array sizes and spacing must be positive")

    @property
    def n_tx(self):
        return self.nt_rows * self.nt_cols

    @property
    def n_rx(self):
        return self.nr_rows * self.nr_cols

    @property
    def n_beams(self):
        return self.n_tx * self.n_rx


@dataclass(frozen=True)
class ChannelConfig:
    symbol_period: float = 10e-9
    num_taps: int = 16
    rolloff: float = 1.0

    def __post_init__(self):
        if self.num_taps < 1 or self.symbol_period <= 0:
            raise ValueError("num_taps and symbol_period must be positive")
        if not 0.0 <= self.rolloff <= 1.0:
            raise ValueError("rolloff must lie in [0, 1]")

    @property
    def origin(self):
        """Delay (s) at which the earliest path is placed: tap ``num_taps / 4``."""
        return self.num_taps / 4 * self.symbol_period


@dataclass
class ChannelTaps:
    taps: np.ndarray  # (num_taps, n_rx, n_tx) complex


@dataclass
class Codebook:
    """Unitary DFT beam sets; column ``k`` of ``tx_beams`` is beam ``k``.

    Beam pair ``i`` (0-based) combines rx beam ``i // n_tx`` with tx beam
    ``i % n_tx``; reported beam indices are ``i + 1``.
    """

    tx_beams: np.ndarray
    rx_beams: np.ndarray

    @property
    def n_tx(self):
        return self.tx_beams.shape[1]

    @property
    def n_pairs(self):
        return self.tx_beams.shape[1] * self.rx_beams.shape[1]

    def pair(self, i):
        """``(rx_idx, tx_idx)`` of 0-based pair ``i``."""
        return divmod(int(i), self.n_tx)

    def pair_index(self, rx_idx, tx_idx):
        return int(rx_idx) * self.n_tx + int(tx_idx)


@dataclass
class BeamPowerLabel:
    y: np.ndarray  # linear received power per beam pair
    s: int  # 1-based index of the strongest pair


def upa_response(mu, nu, rows, cols):
    """Unit-norm UPA vector with phase ``2 pi (p mu + q nu)`` at element (p, q).

    ``mu`` and ``nu`` are spatial frequencies (cycles per element) along the
    row (z) and column (y) axes; ``p`` varies fastest in the flattened vector.
    """
    p = np.arange(rows)
    q = np.arange(cols)
    phase = 2.0 * np.pi * (q[:, None] * nu + p[None, :] * mu)
    return np.exp(1j * phase).ravel() / np.sqrt(rows * cols)


def steering_vector(az, el, rows, cols, spacing=0.5):
    return upa_response(spacing * np.sin(el), spacing * np.cos(el) * np.sin(az), rows, cols)


def dft_grid(n):
    """Centred DFT spatial frequencies ``(k - n // 2) / n``."""
    return (np.arange(n) - n // 2) / n


def dft_beams(rows, cols):
    """Kronecker DFT basis; beam ``m * cols + k`` points at grid (row m, col k)."""
    beams = [upa_response(mu, nu, rows, cols) for mu in dft_grid(rows) for nu in dft_grid(cols)]
    return np.column_stack(beams)


def make_codebook(arr=ArrayConfig()):
    return Codebook(dft_beams(arr.nt_rows, arr.nt_cols), dft_beams(arr.nr_rows, arr.nr_cols))


def raised_cosine(t, period, rolloff):
    """Raised-cosine pulse ``g(t)`` with ``g(0) = 1``."""
    x = np.asarray(t, dtype=np.float64) / period
    base = np.sinc(x)
    if rolloff == 0:
        return base
    denom = 1.0 - (2.0 * rolloff * x) ** 2
    singular = np.isclose(denom, 0.0, atol=1e-12)
    safe = np.where(singular, 1.0, denom)
    val = base * np.cos(np.pi * rolloff * x) / safe
    limit = np.pi / 4 * np.sinc(1.0 / (2.0 * rolloff))
    return np.where(singular, limit, val)


def build_channel(paths, arr=ArrayConfig(), ch=ChannelConfig()):
    """Taps ``H[n] = sqrt(Nt Nr) sum_l g(nT - tau_l) a_r a_t^H a_l``.

    Delays are shifted so the earliest path sits at ``ch.origin``.
    """
    taps = np.zeros((ch.num_taps, arr.n_rx, arr.n_tx), dtype=np.complex128)
    if not paths:
        return ChannelTaps(taps)
    delays = np.array([p.delay for p in paths])
    delays = delays - delays.min() + ch.origin
    gains = np.array([p.gain for p in paths], dtype=np.complex128)
    a_r = np.array([steering_vector(p.aoa_az, p.aoa_el, arr.nr_rows, arr.nr_cols, arr.spacing)
                    for p in paths])
    a_t = np.array([steering_vector(p.aod_az, p.aod_el, arr.nt_rows, arr.nt_cols, arr.spacing)
                    for p in paths])
    n = np.arange(ch.num_taps)
    g = raised_cosine(n[:, None] * ch.symbol_period - delays[None, :], ch.symbol_period, ch.rolloff)
    taps = np.sqrt(arr.n_tx * arr.n_rx) * np.einsum(
        "nl,l,li,lj->nij", g, gains, a_r, a_t.conj())
    return ChannelTaps(taps)


def beam_sweep(h, cb):
    """``y_i = sum_n |w_i^H H[n] f_i|^2`` over all pairs; ``s`` is 1-based."""
    taps = h.taps if isinstance(h, ChannelTaps) else np.asarray(h)
    if taps.shape[1:] != (cb.rx_beams.shape[0], cb.tx_beams.shape[0]):
        raise ValueError("channel and codebook dimensions disagree")
    z = np.einsum("ir,nij,jt->nrt", cb.rx_beams.conj(), taps, cb.tx_beams)
    y = (np.abs(z) ** 2).sum(axis=0).ravel()
    return BeamPowerLabel(y, int(np.argmax(y)) + 1)
