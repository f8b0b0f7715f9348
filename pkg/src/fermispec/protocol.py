"""System-environment protocol for measuring spectral functions A(k, w).

A system of N sites (modes c_j) couples to an N-site environment (modes d_j)
through H = H_sys + eps*H_int + omega*H_env with H_int = (1/2) sum_j
(d_j^dag c_j + h.c.) and H_env = sum_j d_j^dag d_j.  Starting from an
eigenstate of H_sys and an empty environment, evolving with exp(+iHt) and
measuring the environment momentum occupation n(k) = d(k)^dag d(k) with
d(k) = N^(-1/2) sum_j e^{-ijk} d_j gives

    <n(k)> = eps^2 (A+ * phi_hat)(k, omega) + O(eps^4),

where phi_hat(w) = sin^2(w t / 2) / w^2 is the finite-time observation
kernel and * the frequency convolution with a 1/(2 pi) normalization.  A
completely filled environment measures <1 - n(k)> and yields the hole part
A-.  For the free hopping Hamiltonian H_sys = nu * sum_j (c_j^dag c_{j+1}
+ h.c.) the outcome is known in closed form:

    <n(k)> = eps^2 sin^2(t*Omega) / (eps^2 + (omega - 2 nu cos k)^2) * rho_k,
    Omega  = sqrt(eps^2 + (omega - 2 nu cos k)^2) / 2,

with the hole density 1 - rho_k replacing rho_k in the filled-environment
reading (the two-mode strong-coupling solution fixes this; the functional
form is unchanged).

Everything (Fourier signs, Heisenberg direction, JW ordering c_0,d_0,c_1,...)
is pinned by requiring the Gaussian simulation, the closed form, and the
Trotterized circuit pipeline to agree numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np

from .circuits import Circuit, Gate, GateKind, cz, givens, rz, x, z
from .fft import (InterleaveStrategy, fft_circuit, ground_state_momenta,
                  ground_state_prep_circuit, interleave_circuit,
                  interleave_permutation)
from .gaussian import (GaussianState, coupled_hamiltonian, environment_block,
                       evolve_gaussian, filled_state, mode_propagator,
                       state_from_momentum_occupations, vacuum_state)
from . import statevector as sv


# --------------------------------------------------------------------------
# configuration and result grid
# --------------------------------------------------------------------------

@dataclass
class ProtocolConfig:
    n_sites: int
    epsilon: float
    omega: float = 0.0
    t: float = 5.0
    nu: float = 1.0
    interaction: float = 0.0          # V; 0 = free fermions
    trotter_steps: int = 0            # 0 = continuous time
    environment: str = "empty"        # "empty" | "full"
    initial_state: object = "ground"  # "ground" | sequence of rho_k in [0,1]

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError("n_sites must be >= 2")
        if self.t < 0:
            raise ValueError("t must be >= 0")
        if self.trotter_steps < 0:
            raise ValueError("trotter_steps must be >= 0")
        if self.environment not in ("empty", "full"):
            raise ValueError(f"environment must be 'empty' or 'full', got {self.environment!r}")
        if not isinstance(self.initial_state, str):
            rho = np.asarray(self.initial_state, dtype=float)
            if rho.shape != (self.n_sites,) or rho.min() < 0 or rho.max() > 1:
                raise ValueError("explicit rho_k must be n_sites values in [0, 1]")

    def momenta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_sites) / self.n_sites

    def rho(self) -> np.ndarray:
        if isinstance(self.initial_state, str):
            if self.initial_state != "ground":
                raise ValueError(f"unknown initial_state {self.initial_state!r}")
            filled = ground_state_momenta(self.n_sites, self.nu)
            rho = np.zeros(self.n_sites)
            rho[list(filled)] = 1.0
            return rho
        rho = np.asarray(self.initial_state, dtype=float)
        if rho.shape != (self.n_sites,) or rho.min() < 0 or rho.max() > 1:
            raise ValueError("explicit rho_k must be n_sites values in [0, 1]")
        return rho

    def snapshot(self) -> dict:
        d = asdict(self)
        if not isinstance(d["initial_state"], str):
            d["initial_state"] = list(map(float, d["initial_state"]))
        return d


@dataclass
class SpectralGrid:
    """Samples on the (k, omega) grid; values[ik, iw]."""
    k: np.ndarray
    omega: np.ndarray
    values: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.k), len(self.omega)):
            raise ValueError("values must have shape (len(k), len(omega))")

    def in_unit_interval(self, tol: float = 1e-10) -> bool:
        return bool(self.values.min() >= -tol and self.values.max() <= 1 + tol)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("k,omega,value,method\n")
            for ik, kk in enumerate(self.k):
                for iw, ww in enumerate(self.omega):
                    fh.write(f"{float(kk)!r},{float(ww)!r},"
                             f"{float(self.values[ik, iw])!r},{self.method}\n")


def _omega_list(config: ProtocolConfig, omegas) -> np.ndarray:
    if omegas is None:
        return np.array([config.omega], dtype=float)
    return np.asarray(omegas, dtype=float)


# --------------------------------------------------------------------------
# observation kernel and delta-line convolution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Kernel:
    """phi_hat(w) = sin^2(w t / 2) / w^2, with phi_hat(0) = t^2 / 4."""
    t: float

    def __call__(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        return (self.t ** 2 / 4) * np.sinc(w * self.t / (2 * np.pi)) ** 2


@dataclass
class DeltaLineSpectrum:
    """A(k, w) = sum_lines 2*pi*weight*delta(w - center), stored per k."""
    k: np.ndarray
    centers: list[np.ndarray]
    weights: list[np.ndarray]

    @staticmethod
    def free_particle(config: ProtocolConfig) -> "DeltaLineSpectrum":
        ks = config.momenta()
        rho = config.rho()
        return DeltaLineSpectrum(
            ks, [np.array([2 * config.nu * np.cos(kk)]) for kk in ks],
            [np.array([r]) for r in rho])

    @staticmethod
    def free_hole(config: ProtocolConfig) -> "DeltaLineSpectrum":
        ks = config.momenta()
        rho = config.rho()
        return DeltaLineSpectrum(
            ks, [np.array([2 * config.nu * np.cos(kk)]) for kk in ks],
            [np.array([1 - r]) for r in rho])


def convolve_kernel(spectrum: DeltaLineSpectrum, kern: Kernel,
                    omegas: Sequence[float]) -> SpectralGrid:
    """(A * phi_hat)(k, w); exact for the symbolic delta-line representation."""
    omegas = np.asarray(omegas, dtype=float)
    vals = np.zeros((len(spectrum.k), len(omegas)))
    for ik in range(len(spectrum.k)):
        c = spectrum.centers[ik][:, None]
        w = spectrum.weights[ik][:, None]
        vals[ik] = (w * kern(omegas[None, :] - c)).sum(axis=0)
    return SpectralGrid(spectrum.k, omegas, vals, "kernel-convolution")


def broadening_and_ghosts(epsilon: float, t: float) -> dict:
    """Main-band width and first ghost-band amplitude ratio at finite eps, t.

    n is the smallest integer with (n-1)*pi <= eps*t/2 < n*pi; the first zero
    of the oscillation away from resonance gives the width
    delta_omega = (2 n pi / t) sqrt(1 - (eps t / 2 n pi)^2) and the next band
    is suppressed by r = (t*eps / (2 n pi + t*eps))^2.
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    half = epsilon * t / 2
    n = math.floor(half / math.pi) + 1
    ratio = (t * epsilon / (2 * n * math.pi + t * epsilon)) ** 2
    delta = (2 * n * math.pi / t) * math.sqrt(max(0.0, 1 - (half / (n * math.pi)) ** 2))
    return {"delta_omega": delta, "ratio_r": ratio, "n": n}


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def _require_free(config: ProtocolConfig, what: str) -> None:
    if config.interaction != 0:
        raise ValueError(f"{what} requires V = 0 (free fermions)")


def nk_exact_free(config: ProtocolConfig, omegas=None) -> SpectralGrid:
    """Closed-form environment occupation for the free hopping Hamiltonian."""
    _require_free(config, "nk_exact_free")
    omegas = _omega_list(config, omegas)
    ks = config.momenta()
    rho = config.rho()
    weight = rho if config.environment == "empty" else 1 - rho
    delta = omegas[None, :] - 2 * config.nu * np.cos(ks)[:, None]
    rabi2 = config.epsilon ** 2 + delta ** 2
    omega_big = 0.5 * np.sqrt(rabi2)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = config.epsilon ** 2 * np.sin(config.t * omega_big) ** 2 / rabi2
    vals = np.where(rabi2 == 0, 0.0, vals) * weight[:, None]
    return SpectralGrid(ks, omegas, vals, "exact-free",
                        {"config": config.snapshot()})


def strong_coupling_leading(config: ProtocolConfig, rho_k=None,
                            omegas=None) -> SpectralGrid:
    """Leading order in the hopping: sin^2(t*Omega0) eps^2/(w^2+eps^2) rho_k."""
    omegas = _omega_list(config, omegas)
    ks = config.momenta()
    rho = config.rho() if rho_k is None else np.asarray(rho_k, dtype=float)
    omega0 = 0.5 * np.sqrt(omegas ** 2 + config.epsilon ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        factor = (config.epsilon ** 2 * np.sin(config.t * omega0) ** 2
                  / (omegas ** 2 + config.epsilon ** 2))
    factor = np.nan_to_num(factor)
    vals = rho[:, None] * factor[None, :]
    return SpectralGrid(ks, omegas, vals, "strong-coupling",
                        {"config": config.snapshot()})


# --------------------------------------------------------------------------
# Gaussian (continuous-time) protocol simulation
# --------------------------------------------------------------------------

def _initial_correlation(config: ProtocolConfig) -> np.ndarray:
    n = config.n_sites
    sys_state = state_from_momentum_occupations(config.rho())
    env = (vacuum_state(n) if config.environment == "empty" else filled_state(n))
    corr = np.zeros((2 * n, 2 * n), dtype=complex)
    corr[0::2, 0::2] = sys_state.corr
    corr[1::2, 1::2] = env.corr
    return corr


def nk_gaussian(config: ProtocolConfig, omegas=None) -> SpectralGrid:
    """Continuous-time protocol on the 2N x 2N correlation matrix.

    Builds the initial correlation (momentum-diagonal system, empty or full
    environment), evolves with the coupled single-particle Hamiltonian,
    rotates the environment block by the DFT and reads the diagonal; the
    filled environment reports 1 - n(k).
    """
    _require_free(config, "nk_gaussian")
    omegas = _omega_list(config, omegas)
    n = config.n_sites
    ks = config.momenta()
    corr0 = _initial_correlation(config)
    # environment momentum readout: n(k_m) = [W^dag E W]_mm, W[j,m]=e^{-ijm}/sqrt(N)
    w = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)
    vals = np.zeros((n, len(omegas)))
    for iw, om in enumerate(omegas):
        h = coupled_hamiltonian(n, config.nu, config.epsilon, om)
        transfer = mode_propagator(h, config.t)
        corr = evolve_gaussian(GaussianState(corr0), transfer).corr
        env = environment_block(corr)
        nk = np.einsum("jm,jl,lm->m", w.conj(), env, w).real
        vals[:, iw] = nk if config.environment == "empty" else 1 - nk
    return SpectralGrid(ks, omegas, vals, "gaussian", {"config": config.snapshot()})


# --------------------------------------------------------------------------
# Trotterized circuit pipeline (dense statevector)
# --------------------------------------------------------------------------

def _hopping_bond_gates(n: int, j: int, theta: float) -> list[Gate]:
    """exp(i theta/2 * (XZ..ZX + YZ..ZY)) between system sites j and j+1 mod n.

    The JW string through interposed qubits is produced by CZ conjugation of
    the plain two-qubit rotation.
    """
    p, q = 2 * j, 2 * ((j + 1) % n)
    lo, hi = min(p, q), max(p, q)
    middles = list(range(lo + 1, hi))
    gates = [cz(lo, m) for m in middles]
    return gates + [givens(theta, lo, hi)] + list(reversed(gates))


def _interaction_bond_gates(j: int, n: int, alpha: float) -> list[Gate]:
    """exp(i alpha n_p n_q) on system sites j, j+1 (global phase dropped)."""
    p, q = 2 * j, 2 * ((j + 1) % n)
    return [rz(alpha / 2, p), rz(alpha / 2, q), Gate(GateKind.CX, (p, q)),
            rz(-alpha / 2, q), Gate(GateKind.CX, (p, q))]


def trotter_step_circuit(config: ProtocolConfig, dt: float) -> Circuit:
    """One first-order step of exp(+i H dt): hopping (even bonds, odd bonds),
    interaction, coupling, environment phase."""
    n = config.n_sites
    gates: list[Gate] = []
    bonds = list(range(n if n > 2 else n - 1))
    for parity in (0, 1):
        for j in bonds:
            if j % 2 == parity:
                gates.extend(_hopping_bond_gates(n, j, config.nu * dt))
    if config.interaction != 0:
        for j in bonds:
            gates.extend(_interaction_bond_gates(j, n, config.interaction * dt))
    for j in range(n):
        gates.append(givens(config.epsilon * dt / 2, 2 * j, 2 * j + 1))
    if config.omega != 0:
        for j in range(n):
            gates.append(rz(config.omega * dt, 2 * j + 1))
    return Circuit(2 * n, tuple(gates))


def _system_hamiltonian_dense(config: ProtocolConfig) -> np.ndarray:
    """Dense many-body H_sys (+ interaction) on the N system qubits."""
    n = config.n_sites
    dim = 2 ** n
    ops = [sv.annihilation_operator(n, j) for j in range(n)]
    h = np.zeros((dim, dim), dtype=complex)
    bonds = list(range(n if n > 2 else n - 1))
    for j in bonds:
        a, b = j, (j + 1) % n
        h += config.nu * (ops[a].conj().T @ ops[b] + ops[b].conj().T @ ops[a])
        if config.interaction != 0:
            h += config.interaction * (ops[a].conj().T @ ops[a]
                                       @ ops[b].conj().T @ ops[b])
    return h


def _interacting_ground_state(config: ProtocolConfig) -> np.ndarray:
    h = _system_hamiltonian_dense(config)
    w, v = np.linalg.eigh(h)
    return v[:, 0]


def _embed_system_state(psi_sys: np.ndarray, n: int) -> np.ndarray:
    """Place an N-qubit system state on the even qubits of the 2N register."""
    state = np.zeros((2,) * (2 * n), dtype=complex)
    idx = tuple(slice(None) if q % 2 == 0 else 0 for q in range(2 * n))
    state[idx] = psi_sys.reshape((2,) * n)
    return state


def _fill_environment_gates(n: int) -> list[Gate]:
    """X on every environment qubit plus the fermionic parity fix.

    Adding the d_j^dag in descending order leaves Z strings on the system
    qubits; site j collects Z^(N-j), i.e. a Z wherever N-j is odd (for odd N:
    every other system qubit starting with the first).
    """
    gates = [x(2 * j + 1) for j in range(n - 1, -1, -1)]
    gates.extend(z(2 * j) for j in range(n) if (n - j) % 2 == 1)
    return gates


def _prep_state(config: ProtocolConfig) -> np.ndarray:
    n = config.n_sites
    rho = config.rho()
    binary = np.all((rho < 1e-12) | (rho > 1 - 1e-12))
    if config.interaction == 0 and binary:
        filled = [j for j in range(n) if rho[j] > 0.5]
        prep = ground_state_prep_circuit(n, filled)
        state = sv.run_circuit(
            Circuit(2 * n, tuple(Gate(g.kind, tuple(2 * q for q in g.qubits), g.angle)
                                 for g in prep.gates)))
    else:
        if not binary and config.interaction == 0:
            raise ValueError("circuit protocol needs 0/1 momentum occupations")
        state = _embed_system_state(_interacting_ground_state(config), n)
    if config.environment == "full":
        for g in _fill_environment_gates(n):
            state = sv.apply_gate(state, g)
    return state


def _readout_circuit(n: int) -> Circuit:
    """Physical 2-way interleave followed by the environment FFFT."""
    perm = interleave_permutation(2 * n, 2)
    inter = interleave_circuit(perm, InterleaveStrategy.LOCAL_FSWAP)
    radix = 3 if n % 3 == 0 else 2
    env_fft = fft_circuit(n, radix, InterleaveStrategy.LOCAL_FSWAP)
    gates = list(inter.gates)
    gates.extend(Gate(g.kind, tuple(n + q for q in g.qubits), g.angle)
                 for g in env_fft.gates)
    return Circuit(2 * n, tuple(gates))


def _pure_power(n: int, base: int) -> bool:
    while n > 1 and n % base == 0:
        n //= base
    return n == 1


def _sampled_occupations(state: np.ndarray, num_qubits: int, shots: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Multinomial Z-basis sampling; returns per-qubit occupation frequencies."""
    probs = np.abs(state.ravel()) ** 2
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    idx = np.arange(probs.size)
    occ = np.empty(num_qubits)
    for q in range(num_qubits):
        mask = (idx >> (num_qubits - 1 - q)) & 1
        occ[q] = counts[mask == 1].sum() / shots
    return occ


def run_circuit_protocol(config: ProtocolConfig, omegas=None, shots: int = 0,
                         seed: int = 0) -> SpectralGrid:
    """Full Trotterized pipeline on 2N qubits.

    Default readout is the exact Z-basis expectation; shots > 0 switches to
    multinomial sampling of Z outcomes with a seeded generator.
    """
    n = config.n_sites
    if 2 * n > sv.QUBIT_CAP:
        raise ValueError(f"2*{n} qubits exceeds the statevector cap {sv.QUBIT_CAP}")
    if config.trotter_steps < 1:
        raise ValueError("run_circuit_protocol needs trotter_steps >= 1")
    if not (_pure_power(n, 2) or _pure_power(n, 3)):
        raise ValueError("environment FFT readout needs n_sites = 2**k or 3**k")
    omegas = _omega_list(config, omegas)
    ks = config.momenta()
    steps = config.trotter_steps
    dt = config.t / steps
    prep = _prep_state(config)
    readout = _readout_circuit(n)
    rng = np.random.default_rng(seed)
    vals = np.zeros((n, len(omegas)))
    for iw, om in enumerate(omegas):
        cfg = ProtocolConfig(n, config.epsilon, float(om), config.t, config.nu,
                             config.interaction, steps, config.environment,
                             config.initial_state)
        step = trotter_step_circuit(cfg, dt)
        state = prep.copy()
        for _ in range(steps):
            state = sv.run_circuit(step, state)
        state = sv.run_circuit(readout, state)
        if shots:
            occ = _sampled_occupations(state, 2 * n, shots, rng)[n:]
        else:
            occ = sv.occupations(state)[n:]
        vals[:, iw] = occ if config.environment == "empty" else 1 - occ
    meta = {"config": config.snapshot()}
    if shots:
        meta.update(shots=shots, seed=seed)
    return SpectralGrid(ks, omegas, vals, "circuit-protocol", meta)


# --------------------------------------------------------------------------
# dynamical-correlation baseline and exact windowed reference
# --------------------------------------------------------------------------

def _state_from_filled(n: int, rho: np.ndarray) -> np.ndarray:
    psi = sv.zero_state(n).ravel()
    for j in range(n):
        if rho[j] > 0.5:
            kk = 2 * np.pi * j / n
            psi = sv.momentum_annihilation(n, kk).conj().T @ psi
    norm = np.linalg.norm(psi)
    return (psi / norm).reshape((2,) * n)


def _baseline_initial_state(config: ProtocolConfig) -> np.ndarray:
    rho = config.rho()
    binary = np.all((rho < 1e-12) | (rho > 1 - 1e-12))
    if config.interaction == 0 and binary:
        return _state_from_filled(config.n_sites, rho)
    if not binary:
        raise ValueError("dynamical baseline needs 0/1 momentum occupations")
    return _interacting_ground_state(config).reshape((2,) * config.n_sites)


def dynamical_correlation_baseline(config: ProtocolConfig, omegas=None,
                                   return_parts: bool = False):
    """Classical reference method: measure c(k) correlators on a time grid,
    window with phi(v) = (t - |v|)/4 and Fourier transform to omega.

    trotter_steps = 0 evolves exactly (dense eigendecomposition) on a fine
    grid; trotter_steps = s uses the same first-order splitting as the
    circuit protocol with time points v = m*t/s, m = -s..s.  Coarse grids
    and Trotter error can push samples negative; the count is reported in
    meta["negative_samples"].
    """
    n = config.n_sites
    if n > 12:
        raise ValueError("dense baseline limited to 12 system qubits")
    omegas = _omega_list(config, omegas)
    ks = config.momenta()
    psi0 = _baseline_initial_state(config).ravel()
    cks = [sv.momentum_annihilation(n, kk) for kk in ks]

    steps = config.trotter_steps
    if steps == 0:
        points = 800
        vgrid = np.linspace(-config.t, config.t, 2 * points + 1)
        ham = _system_hamiltonian_dense(config)
        w, vmat = np.linalg.eigh(ham)
    else:
        vgrid = np.linspace(-config.t, config.t, 2 * steps + 1)
        sys_cfg = ProtocolConfig(n, 0.0, 0.0, config.t, config.nu,
                                 config.interaction, steps, "empty",
                                 config.initial_state)
        dt = config.t / steps
        step_fwd = _system_only_step(sys_cfg, dt)
        step_bwd = _system_only_step(sys_cfg, -dt)

    # S+(k,v) = <psi(v)| c^dag(k) |[c(k) psi](v)>      (poles at E0 - E_m)
    # S-(k,v) = <[c^dag(k) psi](v)| c^dag(k) |psi(v)>  (poles at E_m - E0)
    splus = np.zeros((n, len(vgrid)), dtype=complex)
    sminus = np.zeros((n, len(vgrid)), dtype=complex)
    mid = len(vgrid) // 2
    for ik, ck in enumerate(cks):
        cdag = ck.conj().T
        cols = np.stack([psi0, ck @ psi0, cdag @ psi0], axis=1)
        if steps == 0:
            a = vmat.conj().T @ cols          # eigenbasis amplitudes
            cdag_eig = vmat.conj().T @ cdag @ vmat
            for iv, v in enumerate(vgrid):
                ph = np.exp(-1j * v * w)
                y = cdag_eig @ (ph * a[:, 1])
                splus[ik, iv] = np.vdot(ph * a[:, 0], y)
                y0 = cdag_eig @ (ph * a[:, 0])
                sminus[ik, iv] = np.vdot(ph * a[:, 2], y0)
        else:
            shaped = cols.reshape((2,) * n + (3,))
            cur = shaped.copy()
            for iv in range(mid, len(vgrid)):
                flat = cur.reshape(-1, 3)
                splus[ik, iv] = np.vdot(flat[:, 0], cdag @ flat[:, 1])
                sminus[ik, iv] = np.vdot(flat[:, 2], cdag @ flat[:, 0])
                if iv + 1 < len(vgrid):
                    cur = sv.run_circuit(step_fwd, cur)
            cur = shaped.copy()
            for iv in range(mid, -1, -1):
                if iv != mid:
                    flat = cur.reshape(-1, 3)
                    splus[ik, iv] = np.vdot(flat[:, 0], cdag @ flat[:, 1])
                    sminus[ik, iv] = np.vdot(flat[:, 2], cdag @ flat[:, 0])
                if iv > 0:
                    cur = sv.run_circuit(step_bwd, cur)

    window = (config.t - np.abs(vgrid)) / 4
    weights = _simpson_weights(vgrid)
    phase = np.exp(-1j * np.outer(omegas, vgrid))
    plus_vals = (phase[None, :, :] * (window * weights * splus)[:, None, :]).sum(axis=2).real
    minus_vals = (phase[None, :, :] * (window * weights * sminus)[:, None, :]).sum(axis=2).real
    combined = plus_vals + minus_vals
    meta = {"config": config.snapshot(),
            "negative_samples": int((combined < -1e-12).sum()),
            "time_points": len(vgrid)}
    grid = SpectralGrid(ks, omegas, combined, "dynamical-correlation", meta)
    if return_parts:
        return grid, SpectralGrid(ks, omegas, plus_vals, "dyn-corr-plus", meta), \
            SpectralGrid(ks, omegas, minus_vals, "dyn-corr-minus", meta)
    return grid


def _simpson_weights(grid: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on a uniform grid with an odd point count."""
    m = len(grid)
    h = grid[1] - grid[0]
    w = np.ones(m)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * (h / 3)


def _system_only_step(config: ProtocolConfig, dt: float) -> Circuit:
    """First-order step of exp(+i H_sys dt) on the N system qubits alone."""
    n = config.n_sites
    gates: list[Gate] = []
    bonds = list(range(n if n > 2 else n - 1))
    for parity in (0, 1):
        for j in bonds:
            if j % 2 == parity:
                p, q = j, (j + 1) % n
                lo, hi = min(p, q), max(p, q)
                middles = list(range(lo + 1, hi))
                pre = [cz(lo, m) for m in middles]
                gates.extend(pre + [givens(config.nu * dt, lo, hi)] + list(reversed(pre)))
    if config.interaction != 0:
        for j in bonds:
            p, q = j, (j + 1) % n
            alpha = config.interaction * dt
            gates.extend([rz(alpha / 2, p), rz(alpha / 2, q),
                          Gate(GateKind.CX, (p, q)), rz(-alpha / 2, q),
                          Gate(GateKind.CX, (p, q))])
    return Circuit(n, tuple(gates))


def lehmann_lines(config: ProtocolConfig) -> tuple[DeltaLineSpectrum, DeltaLineSpectrum]:
    """Exact A+/A- delta lines from dense diagonalization of H_sys."""
    n = config.n_sites
    if n > 12:
        raise ValueError("Lehmann reference limited to 12 system qubits")
    h = _system_hamiltonian_dense(config)
    w, vmat = np.linalg.eigh(h)
    psi0 = _baseline_initial_state(config).ravel()
    e0 = float(np.vdot(psi0, h @ psi0).real)
    ks = config.momenta()
    plus_c, plus_w, minus_c, minus_w = [], [], [], []
    for kk in ks:
        ck = sv.momentum_annihilation(n, kk)
        amp_minus = vmat.conj().T @ (ck @ psi0)          # <m|c(k)|E0>
        amp_plus = vmat.conj().T @ (ck.conj().T @ psi0)  # <m|c^dag(k)|E0>
        keep = np.abs(amp_minus) ** 2 > 1e-14
        plus_c.append(e0 - w[keep])
        plus_w.append(np.abs(amp_minus[keep]) ** 2)
        keep = np.abs(amp_plus) ** 2 > 1e-14
        minus_c.append(w[keep] - e0)
        minus_w.append(np.abs(amp_plus[keep]) ** 2)
    return (DeltaLineSpectrum(ks, plus_c, plus_w),
            DeltaLineSpectrum(ks, minus_c, minus_w))


def reference_windowed_spectral(config: ProtocolConfig, omegas) -> SpectralGrid:
    """Exact ((A+ + A-) * phi_hat) via Lehmann lines and the analytic kernel."""
    plus, minus = lehmann_lines(config)
    kern = Kernel(config.t)
    a = convolve_kernel(plus, kern, omegas)
    b = convolve_kernel(minus, kern, omegas)
    return SpectralGrid(a.k, a.omega, a.values + b.values, "windowed-reference",
                        {"config": config.snapshot()})


# --------------------------------------------------------------------------
# Trotter comparison (error-versus-steps tables)
# --------------------------------------------------------------------------

def least_squares_scale(values: np.ndarray, reference: np.ndarray) -> float:
    denom = float((values * values).sum())
    if denom == 0:
        return 0.0
    return float((values * reference).sum() / denom)


def environment_method_grid(config: ProtocolConfig, omegas) -> SpectralGrid:
    """A-combined environment readout: empty n(k) plus full 1 - n(k).

    The two fillings share every evolution gate, so they run as one batched
    statevector of shape (2,)*2N + (2,).
    """
    n = config.n_sites
    if 2 * n > sv.QUBIT_CAP:
        raise ValueError(f"2*{n} qubits exceeds the statevector cap {sv.QUBIT_CAP}")
    if config.trotter_steps < 1:
        raise ValueError("environment_method_grid needs trotter_steps >= 1")
    omegas = np.asarray(omegas, dtype=float)
    empty = ProtocolConfig(n, config.epsilon, config.omega, config.t, config.nu,
                           config.interaction, config.trotter_steps, "empty",
                           config.initial_state)
    full = ProtocolConfig(n, config.epsilon, config.omega, config.t, config.nu,
                          config.interaction, config.trotter_steps, "full",
                          config.initial_state)
    batch = np.stack([_prep_state(empty), _prep_state(full)], axis=-1)
    readout = _readout_circuit(n)
    steps = config.trotter_steps
    dt = config.t / steps
    vals_e = np.zeros((n, len(omegas)))
    vals_f = np.zeros((n, len(omegas)))
    nq = 2 * n
    for iw, om in enumerate(omegas):
        cfg = ProtocolConfig(n, config.epsilon, float(om), config.t, config.nu,
                             config.interaction, steps, "empty", config.initial_state)
        step = trotter_step_circuit(cfg, dt)
        state = batch.copy()
        for _ in range(steps):
            for g in step.gates:
                state = sv.apply_gate(state, g, nq)
        for g in readout.gates:
            state = sv.apply_gate(state, g, nq)
        occ = sv.occupations(state, nq)[n:]
        vals_e[:, iw] = occ[:, 0]
        vals_f[:, iw] = 1 - occ[:, 1]
    meta = {"config": config.snapshot(),
            "empty_min": float(vals_e.min()), "empty_max": float(vals_e.max()),
            "full_min": float(vals_f.min()), "full_max": float(vals_f.max())}
    ks = config.momenta()
    return SpectralGrid(ks, omegas, vals_e + vals_f, "environment-combined", meta)


def compare_trotter(config: ProtocolConfig, omegas, step_counts) -> dict:
    """Fig.-style comparison: per-step-count average/max error of the scaled
    environment method and dynamical-correlation baseline against the exact
    windowed spectral function."""
    omegas = np.asarray(omegas, dtype=float)
    ref = reference_windowed_spectral(config, omegas).values
    rows = []
    for steps in step_counts:
        cfg = ProtocolConfig(config.n_sites, config.epsilon, config.omega,
                             config.t, config.nu, config.interaction,
                             int(steps), config.environment, config.initial_state)
        env = environment_method_grid(cfg, omegas)
        base = dynamical_correlation_baseline(cfg, omegas)
        s_env = least_squares_scale(env.values, ref)
        s_base = least_squares_scale(base.values, ref)
        err_env = np.abs(s_env * env.values - ref)
        err_base = np.abs(s_base * base.values - ref)
        rows.append({
            "steps": int(steps),
            "env_avg_error": float(err_env.mean()),
            "env_max_error": float(err_env.max()),
            "base_avg_error": float(err_base.mean()),
            "base_max_error": float(err_base.max()),
            "env_sample_min": min(env.meta["empty_min"], env.meta["full_min"]),
            "env_sample_max": max(env.meta["empty_max"], env.meta["full_max"]),
            "base_negative_samples": base.meta["negative_samples"],
        })
    return {"config": config.snapshot(), "omegas": omegas.tolist(), "rows": rows}
