"""
Cœur variationnel : paramètres du modèle, énergie E, fonctionnelle de Pohozaev Q,
gradient L², multiplicateur de Lagrange, constantes de Gagliardo–Nirenberg,
seuils μ* et Γ, classification des régimes.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ondes_vdw.core.exceptions.exceptions import ErreurGrille, ErreurParametres
from ondes_vdw.models.grille import Field, GridSpec, inner_product, kinetic, laplacian, mass
from ondes_vdw.models.riesz import RieszKernel, build_kernel, potential_from_density

logger = logging.getLogger(__name__)


class Regime(Enum):
    """Forme de l'application de fibrage selon (α, β, signe de μ_β)."""
    CASE_I = "I"
    CASE_II = "II"
    CASE_III = "III"
    CASE_IV = "IV"
    UNCLASSIFIED = "Unclassified"


def _borne(dim: int) -> float:
    return float(min(dim, 4))


@dataclass(frozen=True)
class ModelParams:
    """
    Instance complète du problème.

    Attributes:
        dim: Dimension N
        alpha: Exposant α du terme focalisant
        beta: Exposant β du terme de Van der Waals
        mu_beta: Coefficient μ_β
        mass_target: Masse prescrite c
    """
    dim: int
    alpha: float
    beta: float
    mu_beta: float
    mass_target: float

    def __post_init__(self):
        borne = _borne(self.dim)
        if self.dim < 1:
            raise ErreurParametres(f"dimension N = {self.dim} doit être ≥ 1")
        if not 0.0 < self.alpha < borne:
            raise ErreurParametres(f"α = {self.alpha} hors de (0, {borne:g})")
        if not 0.0 < self.beta < borne:
            raise ErreurParametres(f"β = {self.beta} hors de (0, {borne:g})")
        if self.alpha == self.beta:
            raise ErreurParametres("α et β doivent être distincts")
        if not np.isfinite(self.mu_beta):
            raise ErreurParametres(f"μ_β = {self.mu_beta} non fini")
        if not self.mass_target > 0:
            raise ErreurParametres(f"masse c = {self.mass_target} doit être > 0")

    @property
    def regime(self) -> Regime:
        return regime_classify(self)

    def avec(self, **changements) -> "ModelParams":
        """Copie avec certains champs remplacés (utilisé par les balayages)."""
        return replace(self, **changements)


def classify_parameters(dim: int, alpha: float, beta: float, mu_beta: float) -> Regime:
    """
    Classification brute, définie aussi pour β = min{N,4} (alors non classée).
    """
    borne = _borne(dim)
    if mu_beta == 0.0 or alpha == beta or alpha >= borne or beta >= borne:
        return Regime.UNCLASSIFIED
    if alpha <= 0.0 or beta <= 0.0:
        return Regime.UNCLASSIFIED
    if mu_beta > 0:
        if 0 < alpha < beta <= 2:
            return Regime.CASE_I
        if 0 < alpha < 2 < beta:
            return Regime.CASE_II
        if 2 <= alpha < beta:
            return Regime.CASE_III
    else:
        if 0 < beta < alpha < 2:
            return Regime.CASE_I
        if max(beta, 2.0) < alpha:
            return Regime.CASE_III
        if 2 < alpha < beta:
            return Regime.CASE_IV
    return Regime.UNCLASSIFIED


def regime_classify(params: ModelParams) -> Regime:
    """Régime (Cas I à IV) des paramètres validés."""
    return classify_parameters(params.dim, params.alpha, params.beta, params.mu_beta)


class Triple(NamedTuple):
    """Résumé scalaire (A, B_α, B_β) qui pilote tout le fibrage."""
    A: float
    B_alpha: float
    B_beta: float


@dataclass(frozen=True)
class FunctionalValues:
    """
    Fonctionnelles scalaires d'un champ.
    """
    A: float
    B_alpha: float
    B_beta: float
    mass: float
    E: float
    Q: float
    lam: Optional[float] = None

    @property
    def triple(self) -> Triple:
        return Triple(self.A, self.B_alpha, self.B_beta)

    @classmethod
    def depuis_triple(cls, triple: Triple, masse: float, params: ModelParams) -> "FunctionalValues":
        a, ba, bb = triple
        return cls(a, ba, bb, masse, energy(triple, params), pohozaev(triple, params))

    def avec_lambda(self, lam: float) -> "FunctionalValues":
        return replace(self, lam=lam)


def energy(triple: Triple, params: ModelParams) -> float:
    a, ba, bb = triple
    return a / 2.0 - ba / 4.0 - params.mu_beta * bb / 4.0


def pohozaev(triple: Triple, params: ModelParams) -> float:
    a, ba, bb = triple
    return a - params.alpha * ba / 4.0 - params.mu_beta * params.beta * bb / 4.0


@dataclass(frozen=True)
class KernelPair:
    """Noyaux |x|^{−α} et |x|^{−β} construits sur la même grille."""
    alpha: RieszKernel
    beta: RieszKernel

    @property
    def grid(self) -> GridSpec:
        return self.alpha.grid


def build_kernels(params: ModelParams, grid: GridSpec, singular_rule: str = "cell_average") -> KernelPair:
    """Construit la paire de noyaux d'un problème."""
    if params.dim != grid.dim:
        raise ErreurGrille(f"paramètres en dimension {params.dim}, grille en dimension {grid.dim}")
    return KernelPair(build_kernel(grid, params.alpha, singular_rule),
                      build_kernel(grid, params.beta, singular_rule))


def _verifier(u: Field, kernels: KernelPair) -> None:
    if u.grid != kernels.grid:
        raise ErreurGrille(f"champ sur {u.grid}, noyaux sur {kernels.grid}")


def potentials(u: Field, kernels: KernelPair) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Renvoie (|u|², v_α, v_β) sous forme de tableaux."""
    _verifier(u, kernels)
    densite = np.abs(u.values) ** 2
    return (densite,
            potential_from_density(kernels.alpha, densite),
            potential_from_density(kernels.beta, densite))


def total_potential(u: Field, params: ModelParams, kernels: KernelPair) -> np.ndarray:
    """V = v_α + μ_β v_β, réel."""
    _, va, vb = potentials(u, kernels)
    return va + params.mu_beta * vb


def evaluate(u: Field, params: ModelParams, kernels: KernelPair) -> FunctionalValues:
    """
    Calcule toutes les fonctionnelles scalaires de u.

    Args:
        u: Champ sur la grille des noyaux
        params: Paramètres du modèle
        kernels: Noyaux α et β

    Returns:
        FunctionalValues (λ non renseigné)
    """
    densite, va, vb = potentials(u, kernels)
    dv = u.grid.cell_volume
    triple = Triple(kinetic(u), float(dv * np.sum(densite * va)), float(dv * np.sum(densite * vb)))
    return FunctionalValues.depuis_triple(triple, mass(u), params)


def l2_gradient(u: Field, params: ModelParams, kernels: KernelPair) -> Field:
    """
    Gradient L² de E : −Δu − (|x|^{−α}∗|u|²)u − μ_β(|x|^{−β}∗|u|²)u.
    """
    potentiel = total_potential(u, params, kernels)
    return u.avec_valeurs(-laplacian(u) - potentiel * u.values)


def directional_derivative(u: Field, h: Field, params: ModelParams, kernels: KernelPair) -> float:
    """Dérivée directionnelle Re⟨∇E(u), h⟩."""
    return inner_product(l2_gradient(u, params, kernels), h).real


def lagrange_multiplier(values: FunctionalValues, c: float) -> float:
    """
    λ tel que −Δu + λu = Vu, tiré du triple : λc = B_α + μ_β B_β − A.

    L'expression A − 4E = B_α + μ_β B_β − A évite de repasser par μ_β.
    """
    if not c > 0:
        raise ErreurParametres(f"masse c = {c} doit être > 0")
    return (values.A - 4.0 * values.E) / c


def lagrange_multiplier_pohozaev(values: FunctionalValues, c: float, params: ModelParams) -> float:
    """Forme valable sur P(c) : λc = (4−α)/α·A + μ_β(α−β)/α·B_β."""
    if not c > 0:
        raise ErreurParametres(f"masse c = {c} doit être > 0")
    a = params.alpha
    return ((4.0 - a) / a * values.A + params.mu_beta * (a - params.beta) / a * values.B_beta) / c


def action(values: FunctionalValues, lam: float) -> float:
    """Action E_λ(u) = E(u) + λ·masse/2."""
    return values.E + lam * values.mass / 2.0


def nehari_residual(values: FunctionalValues, lam: float, params: ModelParams) -> float:
    """|A + λ·masse − B_α − μ_β B_β| relatif à A + |λ|·masse."""
    brut = values.A + lam * values.mass - values.B_alpha - params.mu_beta * values.B_beta
    echelle = values.A + abs(lam) * values.mass
    return abs(brut) / echelle if echelle > 0 else abs(brut)


def pohozaev_identity_residual(values: FunctionalValues, lam: float, params: ModelParams) -> float:
    """
    Résidu de l'identité de Pohozaev en dimension N :
    (N−2)/2·A + λN·c/2 − (2N−α)/4·B_α − μ_β(2N−β)/4·B_β, relatif.
    """
    n = params.dim
    termes = ((n - 2) / 2.0 * values.A,
              lam * n * values.mass / 2.0,
              -(2 * n - params.alpha) / 4.0 * values.B_alpha,
              -params.mu_beta * (2 * n - params.beta) / 4.0 * values.B_beta)
    echelle = sum(abs(t) for t in termes)
    return abs(sum(termes)) / echelle if echelle > 0 else 0.0


# Gagliardo–Nirenberg

def gn_constant(gamma: float, N: int, q_mass: float) -> float:
    """
    S_γ = ((4−γ)/γ)^{γ/2} · 4/((4−γ)‖Q_γ‖₂²).

    Args:
        gamma: Exposant γ
        N: Dimension
        q_mass: ‖Q_γ‖₂² de l'état fondamental non contraint

    Returns:
        Meilleure constante S_γ
    """
    if not q_mass > 0:
        raise ErreurParametres(f"‖Q_γ‖₂² = {q_mass} doit être > 0")
    if not 0.0 < gamma < min(N, 4):
        raise ErreurParametres(f"γ = {gamma} hors de (0, min(N, 4))")
    return ((4.0 - gamma) / gamma) ** (gamma / 2) * 4.0 / ((4.0 - gamma) * q_mass)


def gn_quotient(b: float, a: float, masse: float, gamma: float) -> float:
    """B/(A^{γ/2}·masse^{(4−γ)/2}), invariant par dilatation et par changement d'échelle."""
    if a <= 0 or masse <= 0:
        raise ErreurParametres("quotient GN indéfini pour A ou masse nuls")
    return b / (a ** (gamma / 2) * masse ** ((4.0 - gamma) / 2))


# Seuils

@dataclass(frozen=True)
class Thresholds:
    """
    Seuils du régime IV.

    Attributes:
        m_infty: Énergie de l'état fondamental du problème de Hartree pur
        S_alpha: Constante GN pour α (optionnelle)
        S_beta: Constante GN pour β
        Gamma: Constante Γ de l'ensemble V_D
        mu_star: Seuil μ*
        mu_admissible: Borne supérieure de |μ_β| garantissant deux solutions
    """
    m_infty: float
    S_alpha: Optional[float]
    S_beta: float
    Gamma: float
    mu_star: float
    mu_admissible: float

    def certifie(self, mu_beta: float) -> bool:
        return 0.0 < abs(mu_beta) < self.mu_admissible


def gamma_constant(params: ModelParams, S_beta: float) -> float:
    a, b, c = params.alpha, params.beta, params.mass_target
    interieur = abs(params.mu_beta) * b * (b - a) * S_beta * c ** ((4.0 - b) / 2) / (4.0 * (a - 2.0))
    return 2.0 * (b - 2.0) / (b - a) * interieur ** ((a - 2.0) / (b - 2.0))


def mu_star(params: ModelParams, m_infty: float, S_beta: float) -> float:
    a, b, c = params.alpha, params.beta, params.mass_target
    prefacteur = 4.0 * (a - 2.0) / (a * (b - 2.0) * S_beta * c ** ((4.0 - b) / 2))
    rapport = ((b - a) / (b - 2.0)) ** ((b - 2.0) / (a - 2.0))
    niveau = (b * (a - 2.0) ** 2 / (2.0 * a ** 2 * (b - 2.0) * m_infty)) ** ((b - 2.0) / 2)
    return prefacteur * rapport * niveau


def admissible_factor(params: ModelParams) -> float:
    a, b = params.alpha, params.beta
    return (a * (b - 2.0) / (b * (b - a)) * (2.0 / a) ** ((b - 2.0) / (a - 2.0))
            * (a * (b - 2.0) / (b * (a - 2.0))) ** ((b - 2.0) / 2))


def thresholds(params: ModelParams, m_infty: float, S_beta: float,
               S_alpha: Optional[float] = None) -> Thresholds:
    """
    Calcule Γ, μ* et la fenêtre admissible pour |μ_β|.

    Raises:
        ErreurParametres: hors du régime IV ou entrées non positives
    """
    if regime_classify(params) is not Regime.CASE_IV:
        raise ErreurParametres(
            f"seuils définis seulement en régime IV (α={params.alpha}, β={params.beta}, μ_β={params.mu_beta})"
        )
    if not m_infty > 0 or not S_beta > 0:
        raise ErreurParametres(f"m_∞ = {m_infty} et S_β = {S_beta} doivent être > 0")
    etoile = mu_star(params, m_infty, S_beta)
    admissible = min(etoile, admissible_factor(params) * etoile)
    return Thresholds(m_infty, S_alpha, S_beta, gamma_constant(params, S_beta), etoile, admissible)


@dataclass(frozen=True)
class TheoremBounds:
    """Bornes explicites attendues pour le couple (u⁻, ũ)."""
    level_bound: float
    kinetic_mid_bound: float
    local_kinetic_floor: Optional[float]
    global_kinetic_floor: float

    @staticmethod
    def pminus_energy_floor(a: float, params: ModelParams) -> float:
        """Minoration E(u) ≥ (α−2)(β−2)/(2αβ)·A(u) sur P⁻."""
        al, be = params.alpha, params.beta
        return (al - 2.0) * (be - 2.0) / (2.0 * al * be) * a


def theorem_bounds(params: ModelParams, seuils: Thresholds) -> TheoremBounds:
    """Niveaux et bornes cinétiques de la structure à deux solutions."""
    a, b, c = params.alpha, params.beta, params.mass_target
    m = seuils.m_infty
    facteur = (a * (b - 2.0) / (b * (b - a))) ** (2.0 / (b - 2.0))
    niveau = a * (b - 2.0) ** 2 * m / (b ** 2 * (a - 2.0)) * facteur
    milieu = 2.0 * a ** 2 * (b - 2.0) * m / (b * (a - 2.0) ** 2) * facteur
    plancher_local = None
    if seuils.S_alpha is not None:
        plancher_local = (4.0 / (a * seuils.S_alpha * c ** ((4.0 - a) / 2))) ** (2.0 / (a - 2.0))
    plancher_global = (4.0 * (a - 2.0) / (abs(params.mu_beta) * seuils.S_beta * b * (b - a)
                                          * c ** ((4.0 - b) / 2))) ** (2.0 / (b - 2.0))
    return TheoremBounds(niveau, milieu, plancher_local, plancher_global)


# Coercivité (N = 3, via B₁)

def interpolation_exponent(params: ModelParams) -> float:
    """θ = (α−1)/(β−1)."""
    return (params.alpha - 1.0) / (params.beta - 1.0)


def interpolation_slack(b_alpha: float, b_beta: float, b_one: float, params: ModelParams) -> float:
    """
    Marge relative de B_α ≤ εB_β + ε^{−θ/(1−θ)}B₁ avec ε = |μ_β|/2 ; positive si l'inégalité tient.
    """
    theta = interpolation_exponent(params)
    eps = abs(params.mu_beta) / 2.0
    majorant = eps * b_beta + eps ** (-theta / (1.0 - theta)) * b_one
    return (majorant - b_alpha) / max(majorant, 1e-300)


def coercivity_lower_bound(a: float, params: ModelParams) -> float:
    """Minoration A/2 − ¼(|μ_β|/2)^{−θ/(1−θ)}c^{3/2}A^{1/2} de E sur S(c)."""
    return a / 2.0 - _constante_coercive(params) * np.sqrt(a)


def kinetic_bound_from_energy(e: float, c: float, params: ModelParams) -> float:
    """
    Plus grand A compatible avec coercivity_lower_bound(A) ≤ E ; borne H¹ uniforme
    le long d'une évolution d'énergie E.
    """
    k = _constante_coercive(replace(params, mass_target=c))
    discriminant = k * k + 2.0 * e
    if discriminant < 0:
        raise ErreurParametres(f"énergie E = {e} sous le minorant de coercivité")
    return float((k + np.sqrt(discriminant)) ** 2)


def _constante_coercive(params: ModelParams) -> float:
    if params.mu_beta == 0.0:
        raise ErreurParametres("la minoration de coercivité exige μ_β ≠ 0")
    theta = interpolation_exponent(params)
    return 0.25 * (abs(params.mu_beta) / 2.0) ** (-theta / (1.0 - theta)) * params.mass_target ** 1.5
