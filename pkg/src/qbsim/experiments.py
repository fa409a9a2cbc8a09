"""Hong-Ou-Mandel delay sweeps and the two-port beam-splitter algebra."""

import math
from dataclasses import dataclass, field, replace
from math import factorial

import numpy as np
from scipy.optimize import curve_fit

from .assembly import Method, assemble
from .correlations import g2_from_alpha
from .mesh import PermittivityProfile, build_mesh
from .modes import ModeBasis, solve_modes
from .packets import Shape, WavePacket, make_two_photon, project_packet
from .quantize import QuantizedField, detector_alphas

TABLE_I = dict(Rx=1.5, n0=2501, eps_s=7.0, Rs=6e-3, x0=0.375, dx0=0.03, kappa0=526.0)


def default_delta_grid(n=41, span=0.12):
    return np.linspace(-span, span, n)


@dataclass(frozen=True)
class HomConfig:
    Rx: float = TABLE_I["Rx"]
    n0: int = TABLE_I["n0"]
    eps_s: float = TABLE_I["eps_s"]
    Rs: float = TABLE_I["Rs"]
    theta0: float = math.pi / 2
    x0: float = TABLE_I["x0"]
    dx0: float = TABLE_I["dx0"]
    kappa0: float = TABLE_I["kappa0"]
    left_shape: Shape = Shape.GAUSSIAN
    right_shape: Shape = Shape.GAUSSIAN
    delta_x0: tuple = field(default_factory=lambda: tuple(default_delta_grid()))
    method: Method = Method.FEM
    literal_b1: bool = False
    truncate_modes: bool = False
    swap_photons: bool = False
    time_ordered_events: bool = False

    def __post_init__(self):
        object.__setattr__(self, "left_shape", Shape(self.left_shape))
        object.__setattr__(self, "right_shape", Shape(self.right_shape))
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "delta_x0", tuple(float(d) for d in self.delta_x0))
        if not self.delta_x0:
            raise ValueError("empty delay grid")
        worst = max(abs(d) for d in self.delta_x0) + self.x0
        if not worst < self.Rx / 2:
            raise ValueError(
                f"delayed packet at {worst} m leaves the cell of half-length {self.Rx / 2} m"
            )

    @property
    def mesh(self):
        return build_mesh(self.Rx, self.n0)

    @property
    def profile(self):
        return PermittivityProfile(self.eps_s, self.Rs)

    def taus(self, c):
        return np.asarray(self.delta_x0) / c


@dataclass(frozen=True)
class CorrelationCurve:
    tau: np.ndarray
    delta_x0: np.ndarray
    g2: np.ndarray
    visibility: float
    baseline: float
    dip: float

    @property
    def points(self):
        return list(zip(self.tau.tolist(), self.g2.tolist()))


def solve_hom_basis(config: HomConfig) -> ModeBasis:
    system = assemble(config.mesh, config.profile, config.theta0, config.method)
    return solve_modes(system)


def visibility(delta_x0, g2, dx0):
    """``(1 - g2(0)/baseline, baseline, g2(0))``; baseline averages ``|delta| >= 4 dx0``."""
    delta_x0, g2 = np.asarray(delta_x0), np.asarray(g2)
    tail = np.abs(delta_x0) >= 4 * dx0 * (1 - 1e-9)
    if not tail.any():
        raise ValueError("delay grid does not reach the distinguishable tail |delta| >= 4 dx0")
    baseline = float(g2[tail].mean())
    dip = float(g2[np.argmin(np.abs(delta_x0))])
    return 1.0 - dip / baseline, baseline, dip


def run_hom(config: HomConfig, basis: ModeBasis | None = None) -> CorrelationCurve:
    """g2 versus delay for counter-propagating photons meeting at the slab.

    The left photon starts at ``-x0`` moving right, the right one at
    ``x0 + delta`` moving left. Detectors sit on the nodes nearest ``+-x0``;
    the first event is at ``t0 = 2 x0 / c`` and the second at ``t0 + tau``.
    """
    basis = basis or solve_hom_basis(config)
    field_ = QuantizedField.from_basis(basis)
    c = field_.constants.c
    mesh = basis.system.mesh

    left = project_packet(WavePacket(config.left_shape, config.kappa0, -config.x0, config.dx0), basis)
    taus = config.taus(c)
    t0 = 2 * config.x0 / c
    node_l, node_r = mesh.nearest_node(-config.x0), mesh.nearest_node(config.x0)

    g2 = np.empty(taus.size)
    for k, (delta, tau) in enumerate(zip(config.delta_x0, taus)):
        right = project_packet(
            WavePacket(config.right_shape, -config.kappa0, config.x0 + delta, config.dx0), basis
        )
        state = make_two_photon(right, left) if config.swap_photons else make_two_photon(left, right)
        first, second = (node_r, node_l)
        if tau < 0 and config.time_ordered_events:
            first, second = node_l, node_r
        nodes, times = [first, second], [t0, t0 + tau]
        if config.literal_b1:
            nodes.append(second)
            times.append(t0)
        alphas = detector_alphas(field_, nodes, times)
        keep = slice(None)
        if config.truncate_modes:
            keep = np.union1d(state.beta1.support(), state.beta2.support())
            state = _restrict(state, keep)
            alphas = alphas[:, keep]
        alpha_b1 = alphas[2] if config.literal_b1 else None
        g2[k] = g2_from_alpha(alphas[0], alphas[1], state, alpha_b1)

    vis, base, dip = visibility(config.delta_x0, g2, config.dx0)
    return CorrelationCurve(taus, np.asarray(config.delta_x0), g2, vis, base, dip)


def _restrict(state, keep):
    from .packets import ModalAmplitudes, PhotonState

    b1 = ModalAmplitudes.normalized(state.beta1.g[keep])
    b2 = ModalAmplitudes.normalized(state.beta2.g[keep])
    return PhotonState(2, b1, b2)


CASES = {
    "A": (Shape.GAUSSIAN, Shape.GAUSSIAN),
    "B": (Shape.LORENTZIAN, Shape.LORENTZIAN),
    "C": (Shape.GAUSSIAN, Shape.LORENTZIAN),
}


def run_hom_cases(config: HomConfig, basis: ModeBasis | None = None, cases=("A", "B", "C")):
    """Curves for the packet-shape pairings, sharing one mode basis."""
    basis = basis or solve_hom_basis(config)
    out = {}
    for name in cases:
        left, right = CASES[name]
        out[name] = run_hom(replace(config, left_shape=left, right_shape=right), basis)
    return out


def _inverted_gaussian(x, base, depth, centre, width):
    return base - depth * np.exp(-0.5 * ((x - centre) / width) ** 2)


def gaussian_fit(delta_x0, g2):
    """Least-squares inverted-Gaussian fit; returns ``(params, r_squared)``."""
    x, y = np.asarray(delta_x0), np.asarray(g2)
    p0 = [y.max(), y.max() - y.min(), x[np.argmin(y)], (x.max() - x.min()) / 8]
    params, _ = curve_fit(_inverted_gaussian, x, y, p0=p0, maxfev=20000)
    resid = y - _inverted_gaussian(x, *params)
    r2 = 1.0 - np.sum(resid**2) / np.sum((y - y.mean()) ** 2)
    return params, float(r2)


# quasi-monochromatic beam splitter -----------------------------------------

STOKES = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)


class TruncationError(ValueError):
    pass


@dataclass(frozen=True)
class FockKet2Port:
    """Two-mode ket ``{(n_a, n_b): amplitude}``.

    Inputs are keyed by (port 0, port 1) occupations, outputs by (port 2, port 3).
    """

    amplitudes: dict

    def __post_init__(self):
        amps = {tuple(int(n) for n in k): complex(v) for k, v in self.amplitudes.items()}
        object.__setattr__(self, "amplitudes", amps)
        norm = sum(abs(v) ** 2 for v in amps.values())
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ket norm {norm} differs from 1")

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.amplitudes.values()))

    def __getitem__(self, key):
        return self.amplitudes.get(tuple(key), 0j)


def _poly_mul(p, q):
    out = {}
    for (a, b), u in p.items():
        for (c, d), v in q.items():
            out[a + c, b + d] = out.get((a + c, b + d), 0) + u * v
    return out


def stokes_apply(ket: FockKet2Port, max_photons: int = 4) -> FockKet2Port:
    """Map an input ket through ``a_in_j^dag -> sum_k STOKES[k, j] a_out_k^dag``."""
    # creation polynomial of each input port in the output operators
    port = [{(1, 0): STOKES[0, j], (0, 1): STOKES[1, j]} for j in range(2)]
    out = {}
    for (n0, n1), amp in ket.amplitudes.items():
        if n0 + n1 > max_photons:
            raise TruncationError(f"{n0 + n1} photons exceed the truncation {max_photons}")
        poly = {(0, 0): amp / math.sqrt(factorial(n0) * factorial(n1))}
        for j, n in ((0, n0), (1, n1)):
            for _ in range(n):
                poly = _poly_mul(poly, port[j])
        for (k, m), v in poly.items():
            # (a2^dag)^k (a3^dag)^m |0> = sqrt(k! m!) |k, m>
            out[k, m] = out.get((k, m), 0) + v * math.sqrt(factorial(k) * factorial(m))
    return FockKet2Port(out)


def stokes_ordered_terms(n0: int, n1: int):
    """Expansion of ``(a1^dag)^n1 (a0^dag)^n0`` before commuting output operators.

    Returns a list of ``(operator word, coefficient)`` where a word is a tuple
    of output port numbers (2 or 3), leftmost first.
    """
    factors = [1] * n1 + [0] * n0
    terms = [((), 1 / math.sqrt(factorial(n0) * factorial(n1)))]
    for j in factors:
        terms = [(w + (2 + k,), c * STOKES[k, j]) for w, c in terms for k in range(2)]
    return terms
