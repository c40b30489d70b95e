"""Constructors for the pure and mixed three-qubit state families.

Pure families: the generalized GHZ states cos(eta)|000> + sin(eta)|111>, the
extended-GHZ subclass lam0|000> + lam3|110> + lam4|111>, its maximal-slice
(MS) specialization, the named states GHZ / W / W-tilde and the eight
GHZ-type basis states |L,i+-> supported on a bit string and its complement.

Mixed families: the GHZ/W mixtures of rank 2 and 3, and the rank-4..8
mixtures built from the |L,i+-> projectors.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import qalg

NORM_ATOL = 1e-10
# State files carry rounded amplitudes; anything within this budget of unit
# norm is renormalized on ingestion, anything worse is rejected.
FILE_NORM_ATOL = 1e-3


class Family(str, enum.Enum):
    GGHZ = "gghz"
    MS = "ms"
    EXT_S = "ext_s"
    GHZ = "ghz"
    W = "w"
    WTILDE = "wtilde"
    LAMBDA_BASIS = "lambda_basis"
    RHO2 = "rho2"
    RHO3 = "rho3"
    RHO4 = "rho4"
    RHO5 = "rho5"
    RHO6 = "rho6"
    RHO7 = "rho7"
    RHO8 = "rho8"


MIXED_FAMILIES = (
    Family.RHO2,
    Family.RHO3,
    Family.RHO4,
    Family.RHO5,
    Family.RHO6,
    Family.RHO7,
    Family.RHO8,
)


@dataclass
class FamilyParams:
    """Parameter bundle selecting one state out of a family."""

    family: Family
    eta: float | None = None
    lambdas: tuple[float, float, float] | None = None
    p: float | None = None
    k: int | None = None
    basis_index: int | None = None
    sign: int | None = None


def pure_state(amplitudes, normalize: bool = False) -> np.ndarray:
    """Eight-amplitude state vector; optionally renormalized exactly."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.shape[0] != 8:
        raise ValueError(f"expected 8 amplitudes, got {psi.shape[0]}")
    if normalize:
        norm = float(np.linalg.norm(psi))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        psi = psi / norm
    return qalg.check_state_vector(psi)


def gghz(eta: float) -> np.ndarray:
    """Generalized GHZ state cos(eta)|000> + sin(eta)|111>, eta in [0, pi/4]."""
    if not 0.0 <= eta <= math.pi / 4 + 1e-12:
        raise ValueError(f"eta must lie in [0, pi/4], got {eta}")
    psi = np.zeros(8, dtype=complex)
    psi[0] = math.cos(eta)
    psi[7] = math.sin(eta)
    return psi


def extended_ghz(l0: float, l3: float, l4: float) -> np.ndarray:
    """Subclass-S state lam0|000> + lam3|110> + lam4|111>.

    The coefficients may carry signs but must satisfy
    lam0^2 + lam3^2 + lam4^2 = 1 to 1e-10.
    """
    norm_sq = l0 * l0 + l3 * l3 + l4 * l4
    if abs(norm_sq - 1.0) > NORM_ATOL:
        raise ValueError(f"lambda triple not normalized: sum of squares = {norm_sq!r}")
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = l0
    psi[0b110] = l3
    psi[0b111] = l4
    return psi / np.linalg.norm(psi)


def ms(eta: float) -> np.ndarray:
    """Maximal-slice state (|000> + cos(eta)|110> + sin(eta)|111>)/sqrt(2).

    The family is defined for eta in [0, pi/4]; values up to pi/2 are accepted
    with a warning so that rounded literature examples remain constructible.
    """
    if not 0.0 <= eta <= math.pi / 2 + 1e-12:
        raise ValueError(f"eta must lie in [0, pi/2], got {eta}")
    if eta > math.pi / 4 + 1e-12:
        warnings.warn(
            f"MS parameter eta={eta} exceeds pi/4; state is valid but outside "
            "the family's canonical range",
            stacklevel=2,
        )
    r = 1.0 / math.sqrt(2.0)
    return extended_ghz(r, math.cos(eta) * r, math.sin(eta) * r)


def ext_s_lambdas_from_tau_c12(tau: float, c12sq: float) -> tuple[float, float, float]:
    """Invert tau = 4 l0^2 l4^2, C12^2 = 4 l0^2 l3^2 for a subclass-S state.

    Requires tau + C12^2 <= 1. Of the two l0 branches the larger one
    (l0 >= 1/sqrt(2)) is returned; both give the same tau, C12^2 and hence
    the same operator bounds.
    """
    if tau < -1e-12 or c12sq < -1e-12 or tau + c12sq > 1.0 + 1e-12:
        raise ValueError(f"need tau, C12^2 >= 0 and tau + C12^2 <= 1, got {(tau, c12sq)}")
    tau = max(tau, 0.0)
    c12sq = max(c12sq, 0.0)
    disc = math.sqrt(max(1.0 - (tau + c12sq), 0.0))
    l0_sq = (1.0 + disc) / 2.0
    l0 = math.sqrt(l0_sq)
    l3 = math.sqrt(c12sq / (4.0 * l0_sq))
    l4 = math.sqrt(tau / (4.0 * l0_sq))
    # Absorb residual rounding into l4 so the triple passes the norm check.
    rem = 1.0 - l0_sq - l3 * l3
    l4 = math.sqrt(max(rem, 0.0)) if abs(rem - l4 * l4) < 1e-12 else l4
    return l0, l3, l4


def ghz_state() -> np.ndarray:
    return pure_state([1, 0, 0, 0, 0, 0, 0, 1], normalize=True)


def w_state() -> np.ndarray:
    return pure_state([0, 1, 1, 0, 1, 0, 0, 0], normalize=True)


def w_tilde_state() -> np.ndarray:
    return pure_state([0, 0, 0, 1, 0, 1, 1, 0], normalize=True)


# |L,i+-> = (|u_i> +- |complement(u_i)>)/sqrt(2) for the four bit strings
# below; index 1 is the GHZ pair (000, 111).
_LAMBDA_SUPPORT = {1: (0b000, 0b111), 2: (0b110, 0b001), 3: (0b101, 0b010), 4: (0b011, 0b100)}


def lambda_basis(index: int, sign: int) -> np.ndarray:
    """GHZ-type basis state |L,index +-> with sign +1 or -1."""
    if index not in _LAMBDA_SUPPORT:
        raise ValueError(f"lambda basis index must be 1..4, got {index}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    hi, lo = _LAMBDA_SUPPORT[index]
    psi = np.zeros(8, dtype=complex)
    psi[hi] = 1.0 / math.sqrt(2.0)
    psi[lo] = sign / math.sqrt(2.0)
    return psi


_NAMED = {
    "ghz": ghz_state,
    "w": w_state,
    "wtilde": w_tilde_state,
}


def named_pure(name: str) -> np.ndarray:
    """Named pure state: 'ghz', 'w', 'wtilde' or 'lambda,<i><+->'."""
    key = name.strip().lower()
    if key in _NAMED:
        return _NAMED[key]()
    if key.startswith("lambda,") and len(key) == 9:
        idx, sgn = key[7], key[8]
        if idx.isdigit() and sgn in "+-":
            return lambda_basis(int(idx), 1 if sgn == "+" else -1)
    raise ValueError(f"unknown pure state name {name!r}")


def omega_operator() -> np.ndarray:
    """Omega = |L,1+><L,1+| + |L,1-><L,1-| (trace 2)."""
    return qalg.projector(lambda_basis(1, 1)) + qalg.projector(lambda_basis(1, -1))


def pi_operator() -> np.ndarray:
    """Pi = sum over i=2,3,4 of |L,i+><L,i+| (trace 3)."""
    return sum(qalg.projector(lambda_basis(i, 1)) for i in (2, 3, 4))


def rho2(p: float) -> np.ndarray:
    """Rank-2 mixture p |GHZ><GHZ| + (1-p) |W><W|."""
    _check_weight(p)
    return p * qalg.projector(ghz_state()) + (1.0 - p) * qalg.projector(w_state())


def rho3(p: float, k: int) -> np.ndarray:
    """Rank-3 mixture p GHZ + q W + (1-p-q) W-tilde with q = (1-p)/k."""
    _check_weight(p)
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(f"k must be a positive integer, got {k!r}")
    q = (1.0 - p) / k
    r = 1.0 - p - q
    if r < -1e-12:
        raise ValueError(f"weights (p={p}, q={q}) leave negative remainder {r}")
    r = max(r, 0.0)
    return (
        p * qalg.projector(ghz_state())
        + q * qalg.projector(w_state())
        + r * qalg.projector(w_tilde_state())
    )


def rho4(p: float) -> np.ndarray:
    """Rank-4 mixture p |L,1+><L,1+| + (1-p)/3 Pi."""
    _check_weight(p)
    return p * qalg.projector(lambda_basis(1, 1)) + (1.0 - p) / 3.0 * pi_operator()


def rho5(p: float) -> np.ndarray:
    """Rank-5 mixture p |L,1+><L,1+| + (1-p)/10 (|L,1-><L,1-| + 3 Pi)."""
    _check_weight(p)
    return p * qalg.projector(lambda_basis(1, 1)) + (1.0 - p) / 10.0 * (
        qalg.projector(lambda_basis(1, -1)) + 3.0 * pi_operator()
    )


def rho6(p: float) -> np.ndarray:
    """Rank-6 mixture p |L,2-><L,2-| + (1-p)/11 (Omega + 3 Pi)."""
    _check_weight(p)
    return p * qalg.projector(lambda_basis(2, -1)) + (1.0 - p) / 11.0 * (
        omega_operator() + 3.0 * pi_operator()
    )


def rho7(p: float) -> np.ndarray:
    """Rank-7 mixture p |L,3-><L,3-| + (1-p)/34 (|L,2-><L,2-| + 3 Omega + 9 Pi)."""
    _check_weight(p)
    return p * qalg.projector(lambda_basis(3, -1)) + (1.0 - p) / 34.0 * (
        qalg.projector(lambda_basis(2, -1)) + 3.0 * omega_operator() + 9.0 * pi_operator()
    )


def rho8(p: float) -> np.ndarray:
    """Rank-8 mixture built on |L,4-><L,4-|."""
    _check_weight(p)
    return p * qalg.projector(lambda_basis(4, -1)) + (1.0 - p) / 35.0 * (
        qalg.projector(lambda_basis(2, -1))
        + qalg.projector(lambda_basis(3, -1))
        + 3.0 * omega_operator()
        + 9.0 * pi_operator()
    )


_MIXED_BUILDERS = {
    Family.RHO2: lambda params: rho2(params.p),
    Family.RHO3: lambda params: rho3(params.p, params.k if params.k is not None else 1),
    Family.RHO4: lambda params: rho4(params.p),
    Family.RHO5: lambda params: rho5(params.p),
    Family.RHO6: lambda params: rho6(params.p),
    Family.RHO7: lambda params: rho7(params.p),
    Family.RHO8: lambda params: rho8(params.p),
}


def mixed_family(params: FamilyParams) -> np.ndarray:
    """Density matrix of one of the mixed families rho2..rho8."""
    if params.family not in _MIXED_BUILDERS:
        raise ValueError(f"{params.family} is not a mixed family")
    if params.p is None:
        raise ValueError(f"{params.family.value} requires the mixing weight p")
    return qalg.check_density_matrix(_MIXED_BUILDERS[params.family](params))


def family_state(params: FamilyParams) -> np.ndarray:
    """Density matrix for any family (pure families become projectors)."""
    fam = params.family
    if fam in _MIXED_BUILDERS:
        return mixed_family(params)
    if fam is Family.GGHZ:
        _require(params.eta is not None, "gghz requires eta")
        return qalg.projector(gghz(params.eta))
    if fam is Family.MS:
        _require(params.eta is not None, "ms requires eta")
        return qalg.projector(ms(params.eta))
    if fam is Family.EXT_S:
        _require(params.lambdas is not None, "ext_s requires (lam0, lam3, lam4)")
        return qalg.projector(extended_ghz(*params.lambdas))
    if fam is Family.GHZ:
        return qalg.projector(ghz_state())
    if fam is Family.W:
        return qalg.projector(w_state())
    if fam is Family.WTILDE:
        return qalg.projector(w_tilde_state())
    if fam is Family.LAMBDA_BASIS:
        _require(
            params.basis_index is not None and params.sign is not None,
            "lambda_basis requires basis_index and sign",
        )
        return qalg.projector(lambda_basis(params.basis_index, params.sign))
    raise ValueError(f"unhandled family {fam!r}")


def white_noise_mix(rho: np.ndarray, alpha: float) -> np.ndarray:
    """Visibility mix alpha*rho + (1-alpha) I/8."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0,1], got {alpha}")
    rho = qalg.check_density_matrix(rho)
    d = rho.shape[0]
    return alpha * rho + (1.0 - alpha) * np.eye(d, dtype=complex) / d


def load_state_file(path) -> np.ndarray:
    """Read a JSON state document and return an 8x8 density matrix.

    Two layouts are accepted: ``{"amplitudes": [[re, im] x 8]}`` for a pure
    state (renormalized if the rounded norm is within 1e-3 of one) and
    ``{"density": [[[re, im] x 8] x 8]}`` for a general density matrix.
    """
    text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    if "amplitudes" in doc:
        pairs = doc["amplitudes"]
        if len(pairs) != 8:
            raise ValueError(f"state file must list 8 amplitudes, got {len(pairs)}")
        psi = np.array([complex(re, im) for re, im in pairs])
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > FILE_NORM_ATOL:
            raise ValueError(f"state vector norm {norm} too far from 1")
        return qalg.projector(psi / norm)
    if "density" in doc:
        rows = doc["density"]
        mat = np.array([[complex(re, im) for re, im in row] for row in rows])
        if mat.shape != (8, 8):
            raise ValueError(f"density must be 8x8, got {mat.shape}")
        mat = (mat + mat.conj().T) / 2.0
        return qalg.check_density_matrix(mat, name="state file density")
    raise ValueError("state file must contain 'amplitudes' or 'density'")


def _check_weight(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight must lie in [0,1], got {p}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)
