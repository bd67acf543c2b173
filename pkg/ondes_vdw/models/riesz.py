"""
Termes non locaux : potentiel v = |x|^{−γ} ∗ |u|² et fonctionnelles quartiques B_γ(u),
par convolution en espace libre (grille doublée, noyau tronqué).
"""
import itertools
import logging
from dataclasses import dataclass

import numba
import numpy as np
from scipy import fft as sfft
from scipy import integrate
from scipy.special import gamma as fonction_gamma, gammaincc

from ondes_vdw.core.exceptions.exceptions import ErreurGrille, ErreurParametres
from ondes_vdw.models.grille import Field, GridSpec

logger = logging.getLogger(__name__)

REGLES_ORIGINE = ("cell_average", "zeta")
RAYON_ZETA = 5


@dataclass(frozen=True, eq=False)
class RieszKernel:
    """
    Noyau de Riesz |x|^{−γ} tabulé sur la grille doublée (2M points par axe)
    et transformé une fois pour toutes.

    Attributes:
        grid: Grille des champs (non doublée)
        gamma: Exposant γ, 0 < γ < N
        spectrum: Coefficients spectraux réels, forme (2M,)*N
        singular_rule: Règle de la cellule singulière ("cell_average" ou "zeta")
        origin_value: Valeur retenue pour le noyau en x = 0
    """
    grid: GridSpec
    gamma: float
    spectrum: np.ndarray
    singular_rule: str
    origin_value: float

    @property
    def padded_shape(self):
        return (2 * self.grid.points_per_axis,) * self.grid.dim


def _integrale_reduite(dim: int, gamma: float) -> float:
    """∫_{[0,1]^{N−1}} (1 + |u|²)^{−γ/2} du."""
    if dim == 1:
        return 1.0
    if dim == 2:
        valeur, _ = integrate.quad(lambda u: (1.0 + u * u) ** (-gamma / 2), 0.0, 1.0,
                                   epsabs=1e-14, epsrel=1e-13)
        return valeur
    valeur, _ = integrate.dblquad(lambda v, u: (1.0 + u * u + v * v) ** (-gamma / 2),
                                  0.0, 1.0, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    return valeur


def cell_average_constant(dim: int, gamma: float) -> float:
    """
    Moyenne de |y|^{−γ} sur la cellule unité [−1/2, 1/2]^N.

    Le cube est découpé en N pyramides selon la coordonnée maximale, ce qui ramène
    l'intégrale singulière à une intégrale régulière sur [0,1]^{N−1}.
    """
    return (2.0 ** dim * dim * 0.5 ** (dim - gamma) / (dim - gamma)
            * _integrale_reduite(dim, gamma))


def epstein_zeta(dim: int, gamma: float, rayon: int = RAYON_ZETA) -> float:
    """
    Prolongement analytique de Σ'_{j∈ℤ^N} |j|^{−γ} par découpage de la fonction thêta.

    Args:
        dim: Dimension du réseau
        gamma: Exposant, 0 < γ < N
        rayon: Demi-largeur du bloc d'indices sommé

    Returns:
        Valeur de la zêta d'Epstein du réseau cubique
    """
    s = gamma / 2.0
    t = dim / 2.0 - s
    total = -1.0 / s - 1.0 / t
    bornes = range(-rayon, rayon + 1)
    for j in itertools.product(bornes, repeat=dim):
        r2 = float(sum(c * c for c in j))
        if r2 == 0.0:
            continue
        x = np.pi * r2
        total += gammaincc(s, x) * fonction_gamma(s) / x ** s
        total += gammaincc(t, x) * fonction_gamma(t) / x ** t
    return float(np.pi ** s / fonction_gamma(s) * total)


def _valeur_origine(grid: GridSpec, gamma: float, regle: str) -> float:
    h = grid.spacing
    if regle == "cell_average":
        return cell_average_constant(grid.dim, gamma) * h ** (-gamma)
    return -epstein_zeta(grid.dim, gamma) * h ** (-gamma)


def padded_distances(grid: GridSpec) -> np.ndarray:
    """Distances |x| des nœuds de la grille doublée, indices repliés m → m − 2M."""
    m = grid.points_per_axis
    indices = np.arange(2 * m)
    axe = np.where(indices < m, indices, indices - 2 * m) * grid.spacing
    maillage = np.meshgrid(*([axe] * grid.dim), indexing="ij")
    return np.sqrt(sum(x ** 2 for x in maillage))


def build_kernel(grid: GridSpec, gamma: float, singular_rule: str = "cell_average") -> RieszKernel:
    """
    Tabule |x|^{−γ} sur la grille doublée et calcule sa transformée.

    Args:
        grid: Grille des champs
        gamma: Exposant γ (0 < γ < N)
        singular_rule: "cell_average" (moyenne sur la cellule) ou "zeta"
            (correction de réseau par la zêta d'Epstein)

    Returns:
        RieszKernel prêt pour apply_potential et b_value
    """
    if not 0.0 < gamma < grid.dim:
        raise ErreurParametres(f"γ = {gamma} doit vérifier 0 < γ < N = {grid.dim}")
    if singular_rule not in REGLES_ORIGINE:
        raise ErreurParametres(f"règle d'origine inconnue: {singular_rule}")

    distances = padded_distances(grid)
    origine = _valeur_origine(grid, gamma, singular_rule)
    with np.errstate(divide="ignore"):
        noyau = distances ** (-gamma)
    noyau[(0,) * grid.dim] = origine

    spectre = sfft.fftn(noyau).real
    if not np.all(np.isfinite(spectre)):
        raise ErreurParametres(f"spectre du noyau non fini pour γ = {gamma}")
    spectre.flags.writeable = False
    logger.debug("Noyau γ=%.4g construit (%s), origine=%.6e", gamma, singular_rule, origine)
    return RieszKernel(grid, float(gamma), spectre, singular_rule, float(origine))


def potential_from_density(kernel: RieszKernel, densite: np.ndarray) -> np.ndarray:
    """v = |x|^{−γ} ∗ ρ sur les tableaux bruts (remplissage de zéros, produit, troncature)."""
    m = kernel.grid.points_per_axis
    transformee = sfft.fftn(densite, s=kernel.padded_shape)
    convolution = sfft.ifftn(transformee * kernel.spectrum).real
    return convolution[(slice(0, m),) * kernel.grid.dim] * kernel.grid.cell_volume


def _verifier_grille(kernel: RieszKernel, u: Field) -> None:
    if u.grid != kernel.grid:
        raise ErreurGrille(f"champ sur {u.grid}, noyau sur {kernel.grid}")


def apply_potential(kernel: RieszKernel, u: Field) -> Field:
    """
    Potentiel v = |x|^{−γ} ∗ |u|².

    Args:
        kernel: Noyau construit sur la grille de u
        u: Champ réel ou complexe

    Returns:
        Champ réel v
    """
    _verifier_grille(kernel, u)
    return Field(u.grid, potential_from_density(kernel, np.abs(u.values) ** 2))


def b_value(kernel: RieszKernel, u: Field) -> float:
    """B_γ(u) = ∫(|x|^{−γ} ∗ |u|²)|u|²."""
    _verifier_grille(kernel, u)
    densite = np.abs(u.values) ** 2
    v = potential_from_density(kernel, densite)
    return float(kernel.grid.cell_volume * np.sum(densite * v))


@numba.jit(cache=True)
def _somme_directe(densite, indices, pas, gamma, origine):
    """
    Double somme O(M^{2N}) de la convolution discrète, même noyau que la voie spectrale.
    """
    n = densite.shape[0]
    dim = indices.shape[1]
    sortie = np.zeros(n)
    for i in range(n):
        total = 0.0
        for j in range(n):
            d2 = 0.0
            for a in range(dim):
                d = (indices[i, a] - indices[j, a]) * pas
                d2 += d * d
            if d2 == 0.0:
                total += origine * densite[j]
            else:
                total += d2 ** (-0.5 * gamma) * densite[j]
        sortie[i] = total
    return sortie


def direct_potential(kernel: RieszKernel, u: Field) -> Field:
    """Potentiel par sommation directe ; oracle pour les petites grilles."""
    _verifier_grille(kernel, u)
    grille = kernel.grid
    indices = np.indices(grille.shape).reshape(grille.dim, -1).T.astype(np.int64)
    densite = (np.abs(u.values) ** 2).ravel().astype(np.float64)
    v = _somme_directe(densite, indices, grille.spacing, kernel.gamma, kernel.origin_value)
    return Field(grille, v.reshape(grille.shape) * grille.cell_volume)


def b_gaussian(gamma: float, sigma: float, dim: int) -> float:
    """
    Valeur exacte de B_γ pour la gaussienne normalisée de largeur σ :
    E|Z|^{−γ} avec Z ~ N(0, σ²I_N).
    """
    return float(sigma ** (-gamma) * 2.0 ** (-gamma / 2)
                 * fonction_gamma((dim - gamma) / 2) / fonction_gamma(dim / 2))
