"""
Grille périodique uniforme sur [−L, L)^N, champs échantillonnés, profils
initiaux, dilatation spectrale et quadratures.
"""
import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft as sfft
from scipy.special import erfc

from ondes_vdw.core.exceptions.exceptions import ErreurGrille, ErreurParametres

logger = logging.getLogger(__name__)

SEUIL_MASSE_QUEUE = 1e-8
DILATATION_MIN_CONSEILLEE = 0.25
DILATATION_MAX_CONSEILLEE = 4.0


def _lecture_seule(tableau: np.ndarray) -> np.ndarray:
    tableau.flags.writeable = False
    return tableau


@dataclass(frozen=True)
class GridSpec:
    """
    Discrétisation périodique de ℝ^N par M points par axe sur [−L, L).

    Les grandeurs dérivées (pas, nombres d'onde, coordonnées) sont calculées
    à la demande puis mises en cache ; les tableaux renvoyés sont en lecture seule.
    """
    dim: int
    points_per_axis: int
    half_length: float

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim not in (1, 2, 3):
            raise ErreurGrille(f"dimension {self.dim} hors de {{1, 2, 3}}")
        m = self.points_per_axis
        if not isinstance(m, (int, np.integer)) or m < 8 or (m & (m - 1)) != 0:
            raise ErreurGrille(f"M = {m} doit être une puissance de deux ≥ 8")
        if not np.isfinite(self.half_length) or self.half_length <= 0:
            raise ErreurGrille(f"demi-longueur L = {self.half_length} doit être > 0")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dim

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Nombres d'onde k_j = πj/L dans l'ordre standard de la FFT."""
        return _lecture_seule(2.0 * np.pi * sfft.fftfreq(self.points_per_axis, d=self.spacing))

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Coordonnées x_i = −L + i·dx d'un axe."""
        return _lecture_seule(-self.half_length + self.spacing * np.arange(self.points_per_axis))

    @cached_property
    def mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(_lecture_seule(x) for x in np.meshgrid(*([self.coordinates] * self.dim), indexing="ij"))

    @cached_property
    def k_mesh(self) -> Tuple[np.ndarray, ...]:
        return tuple(_lecture_seule(k) for k in np.meshgrid(*([self.wavenumbers] * self.dim), indexing="ij"))

    @cached_property
    def k_squared(self) -> np.ndarray:
        """|k|² sur la grille de Fourier complète."""
        return _lecture_seule(sum(k ** 2 for k in self.k_mesh))

    def fingerprint(self) -> str:
        """Empreinte stable (dim, M, L) utilisée comme clé d'enregistrement."""
        cle = f"{self.dim}:{self.points_per_axis}:{float(self.half_length)!r}"
        return hashlib.sha1(cle.encode("utf-8")).hexdigest()[:16]


def make_grid(dim: int, points_per_axis: int, half_length: float) -> GridSpec:
    """
    Construit une grille validée.

    Args:
        dim: Dimension N (1 à 3)
        points_per_axis: Nombre M de points par axe (puissance de deux ≥ 8)
        half_length: Demi-longueur L de la boîte

    Returns:
        GridSpec validée
    """
    return GridSpec(int(dim), int(points_per_axis), float(half_length))


@dataclass(eq=False)
class Field:
    """
    Fonction réelle ou complexe échantillonnée sur une grille.
    """
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != self.grid.shape:
            raise ErreurGrille(f"forme {self.values.shape} ≠ {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ErreurGrille("le champ contient des valeurs non finies")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def avec_valeurs(self, valeurs: np.ndarray) -> "Field":
        """Nouveau champ sur la même grille."""
        return Field(self.grid, valeurs)


def verifier_meme_grille(*champs: Field) -> GridSpec:
    grille = champs[0].grid
    for autre in champs[1:]:
        if autre.grid != grille:
            raise ErreurGrille(f"grilles incompatibles: {grille} et {autre.grid}")
    return grille


def inner_product(f: Field, g: Field) -> complex:
    """
    Produit scalaire discret ⟨f, g⟩ = dx^N Σ conj(f)·g.
    """
    grille = verifier_meme_grille(f, g)
    return complex(grille.cell_volume * np.vdot(f.values, g.values))


def mass(f: Field) -> float:
    """Masse discrète ∫|f|²."""
    return float(f.grid.cell_volume * np.sum(np.abs(f.values) ** 2))


def mass_fourier(f: Field) -> float:
    """Masse calculée sur les coefficients de Fourier (Parseval discret)."""
    coefficients = sfft.fftn(f.values)
    return float(f.grid.cell_volume / f.grid.size * np.sum(np.abs(coefficients) ** 2))


def kinetic(f: Field) -> float:
    """Énergie cinétique A = ∫|∇f|², calculée spectralement."""
    coefficients = sfft.fftn(f.values)
    return float(f.grid.cell_volume / f.grid.size * np.sum(f.grid.k_squared * np.abs(coefficients) ** 2))


def h1_norm(f: Field) -> float:
    return float(np.sqrt(mass(f) + kinetic(f)))


def laplacian(f: Field) -> np.ndarray:
    """Δf spectral ; renvoie un tableau réel si f est réel."""
    resultat = sfft.ifftn(-f.grid.k_squared * sfft.fftn(f.values))
    return resultat if f.is_complex else resultat.real


# Profils initiaux

@dataclass(frozen=True)
class GaussianProfile:
    """
    Gaussienne normalisée u = (πσ²)^{−N/4} exp(−|x − c|²/2σ²).
    """
    sigma: float
    center: Optional[Tuple[float, ...]] = None
    mass_target: Optional[float] = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ErreurParametres(f"σ = {self.sigma} doit être > 0")
        _verifier_cible(self.mass_target)

    def evaluer_points(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        dim = len(coords)
        centre = self.center if self.center is not None else (0.0,) * dim
        r2 = sum((x - c) ** 2 for x, c in zip(coords, centre))
        return (np.pi * self.sigma ** 2) ** (-dim / 4) * np.exp(-r2 / (2.0 * self.sigma ** 2))

    def composantes(self, dim: int) -> List[Tuple[float, Tuple[float, ...]]]:
        centre = tuple(self.center) if self.center is not None else (0.0,) * dim
        return [(self.sigma, centre)]


@dataclass(frozen=True)
class DilatedProfile:
    """
    Dilatation s^{N/2}·base(s·x) d'un profil, évaluée analytiquement.
    """
    base: "ProfileSpec"
    s: float
    mass_target: Optional[float] = None

    def __post_init__(self):
        if not self.s > 0:
            raise ErreurParametres(f"facteur de dilatation s = {self.s} doit être > 0")
        _verifier_cible(self.mass_target)

    def evaluer_points(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        dim = len(coords)
        return self.s ** (dim / 2) * self.base.evaluer_points([self.s * x for x in coords])

    def composantes(self, dim: int) -> List[Tuple[float, Tuple[float, ...]]]:
        return [(sigma / self.s, tuple(c / self.s for c in centre))
                for sigma, centre in self.base.composantes(dim)]


@dataclass(frozen=True)
class SumProfile:
    """Somme de profils."""
    profiles: Tuple["ProfileSpec", ...]
    mass_target: Optional[float] = None

    def __post_init__(self):
        if not self.profiles:
            raise ErreurParametres("une somme de profils ne peut pas être vide")
        _verifier_cible(self.mass_target)

    def evaluer_points(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        return sum(p.evaluer_points(coords) for p in self.profiles)

    def composantes(self, dim: int) -> List[Tuple[float, Tuple[float, ...]]]:
        return [c for p in self.profiles for c in p.composantes(dim)]


ProfileSpec = Union[GaussianProfile, DilatedProfile, SumProfile]


def _verifier_cible(cible: Optional[float]) -> None:
    if cible is not None and not cible > 0:
        raise ErreurParametres(f"masse cible {cible} doit être > 0")


def tail_mass_estimate(grid: GridSpec, profile: ProfileSpec) -> float:
    """
    Estimation de la fraction de masse hors de la boîte : Σ_axes erfc((L − |c_j|)/σ).
    """
    pire = 0.0
    for sigma, centre in profile.composantes(grid.dim):
        distances = [grid.half_length - abs(c) for c in centre]
        if min(distances) <= 0:
            return 1.0
        pire = max(pire, float(sum(erfc(d / sigma) for d in distances)))
    return pire


def sample_profile(grid: GridSpec, profile: ProfileSpec) -> Field:
    """
    Échantillonne un profil sur la grille, puis le renormalise si une masse cible est demandée.

    Args:
        grid: Grille cible
        profile: Profil gaussien, dilaté ou somme

    Returns:
        Champ réel échantillonné

    Raises:
        ErreurGrille: si le profil déborde de la boîte
    """
    queue = tail_mass_estimate(grid, profile)
    if queue >= SEUIL_MASSE_QUEUE:
        raise ErreurGrille(
            f"boîte trop petite pour le profil: masse hors boîte estimée {queue:.2e}"
        )
    valeurs = profile.evaluer_points(grid.mesh)
    champ = Field(grid, valeurs)
    if profile.mass_target is not None:
        champ = normaliser_masse(champ, profile.mass_target)
    return champ


def normaliser_masse(f: Field, cible: float) -> Field:
    """Renormalise un champ à la masse cible c."""
    m = mass(f)
    if m <= 0:
        raise ErreurParametres("impossible de normaliser un champ de masse nulle")
    return f.avec_valeurs(f.values * np.sqrt(cible / m))


def _matrice_evaluation(grid: GridSpec, s: float) -> np.ndarray:
    """
    Matrice d'évaluation de la série de Fourier d'un axe aux points s·x_i.
    La colonne de Nyquist utilise le cosinus pour garder un interpolant réel.
    Le champ est supposé nul hors de la boîte : les lignes |s·x_i| > L sont
    annulées, sinon l'image périodique réapparaît sur les bords pour s > 1.
    """
    m = grid.points_per_axis
    points = s * grid.coordinates + grid.half_length
    k = grid.wavenumbers
    matrice = np.exp(1j * np.outer(points, k)) / m
    nyquist = m // 2
    matrice[:, nyquist] = np.cos(k[nyquist] * points) / m
    matrice[np.abs(s * grid.coordinates) > grid.half_length, :] = 0.0
    return matrice


def dilate_field(field: Field, s: float) -> Field:
    """
    Dilatation u_s(x) = s^{N/2} u(sx) par interpolation trigonométrique.

    Args:
        field: Champ à dilater
        s: Facteur de dilatation (> 0)

    Returns:
        Champ dilaté, de même type (réel/complexe) que l'entrée
    """
    if not s > 0:
        raise ErreurParametres(f"facteur de dilatation s = {s} doit être > 0")
    if s == 1.0:
        return field.copy()
    if not DILATATION_MIN_CONSEILLEE <= s <= DILATATION_MAX_CONSEILLEE:
        logger.warning("Dilatation s=%.4g hors de [1/4, 4]: résolution à vérifier", s)

    grille = field.grid
    coefficients = sfft.fftn(field.values)
    matrice = _matrice_evaluation(grille, s)
    for axe in range(grille.dim):
        coefficients = np.moveaxis(np.tensordot(matrice, coefficients, axes=([1], [axe])), 0, axe)
    valeurs = s ** (grille.dim / 2) * coefficients
    if not field.is_complex:
        valeurs = valeurs.real
    return Field(grille, valeurs)


def random_band_limited(grid: GridSpec, rng: np.random.Generator, k_cut: float,
                        complexe: bool = True) -> Field:
    """
    Champ aléatoire à spectre limité à |k| ≤ k_cut, normalisé à masse unité.

    Args:
        grid: Grille
        rng: Générateur numpy (graine fixée par l'appelant)
        k_cut: Fréquence de coupure
        complexe: Champ complexe si vrai, réel sinon

    Returns:
        Champ aléatoire
    """
    masque = grid.k_squared <= k_cut ** 2
    coefficients = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    valeurs = sfft.ifftn(np.where(masque, coefficients, 0.0))
    if not complexe:
        valeurs = valeurs.real
    return normaliser_masse(Field(grid, valeurs), 1.0)
