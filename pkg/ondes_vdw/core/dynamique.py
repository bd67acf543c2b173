"""
Intégration temporelle de i∂ψ/∂t + Δψ + (W ∗ |ψ|²)ψ = 0 par décomposition de Strang,
surveillance des invariants et expérience de stabilité orbitale.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from scipy import fft as sfft

from ondes_vdw.core.exceptions.exceptions import ErreurDynamique, ErreurGrille, ErreurParametres
from ondes_vdw.models.fonctionnelle import KernelPair, ModelParams, evaluate
from ondes_vdw.models.grille import (Field, h1_norm, mass, normaliser_masse, random_band_limited,
                                     verifier_meme_grille)
from ondes_vdw.models.riesz import potential_from_density

logger = logging.getLogger(__name__)

SEUIL_PHASE_CONSEILLE = 0.5
PLANCHER_STABILITE = 1e-4


@dataclass
class EvolutionTrace:
    """
    Séries temporelles échantillonnées à la cadence de surveillance.

    Attributes:
        times: Instants
        energy: E[ψ(t)]
        mass: ∫|ψ|²
        momentum: P[ψ] = Im∫ψ̄∇ψ, forme (n, N)
        kinetic: A[ψ(t)]
        orbit_distance: Distance à l'orbite de la référence (si fournie)
        l4_norm: ‖ψ(t)‖₄, diagnostic de dispersion
        final: État à la fin de l'intégration
    """
    times: np.ndarray
    energy: np.ndarray
    mass: np.ndarray
    momentum: np.ndarray
    kinetic: np.ndarray
    orbit_distance: Optional[np.ndarray]
    l4_norm: np.ndarray
    final: Optional[Field] = None

    def __post_init__(self):
        n = len(self.times)
        for nom in ("energy", "mass", "momentum", "kinetic", "l4_norm"):
            if len(getattr(self, nom)) != n:
                raise ErreurParametres(f"série {nom} de longueur {len(getattr(self, nom))} ≠ {n}")
        if self.orbit_distance is not None and len(self.orbit_distance) != n:
            raise ErreurParametres("série orbit_distance de longueur incohérente")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ErreurParametres("les instants doivent être strictement croissants")

    def __len__(self) -> int:
        return len(self.times)


@dataclass
class Monitors:
    """
    Réglages de la surveillance.

    Attributes:
        cadence: Échantillonnage tous les `cadence` pas
        reference: Profil de référence pour la distance orbitale
        snapshot_cadence: Instantanés tous les `snapshot_cadence` échantillons (0 : aucun)
        on_snapshot: Fonction appelée avec (t, ψ) pour chaque instantané
        log_every: Cadence des lignes de progression, en échantillons
    """
    cadence: int = 10
    reference: Optional[Field] = None
    snapshot_cadence: int = 0
    on_snapshot: Optional[Callable[[float, Field], None]] = None
    log_every: int = 50


@dataclass
class StabilityReport:
    """
    Résultat de l'expérience de stabilité ; distances relatives à ‖u‖_{H¹}.
    """
    perturbation_size: float
    max_distance: float
    stable_flag: bool
    trace: EvolutionTrace
    delta0: float


class _Collecteur:
    """Accumule les échantillons ; produit une trace partielle en cas d'abandon."""

    def __init__(self, avec_orbite: bool):
        self.lignes: List[tuple] = []
        self.avec_orbite = avec_orbite

    def ajouter(self, t, e, m, p, a, d, l4):
        self.lignes.append((t, e, m, p, a, d, l4))

    def trace(self, dim: int) -> EvolutionTrace:
        if not self.lignes:
            vide = np.zeros(0)
            return EvolutionTrace(vide, vide, vide, np.zeros((0, dim)), vide,
                                  vide if self.avec_orbite else None, vide)
        t, e, m, p, a, d, l4 = zip(*self.lignes)
        return EvolutionTrace(np.array(t), np.array(e), np.array(m), np.array(p), np.array(a),
                              np.array(d) if self.avec_orbite else None, np.array(l4))


def _potentiel(valeurs: np.ndarray, params: ModelParams, kernels: KernelPair) -> np.ndarray:
    densite = np.abs(valeurs) ** 2
    return (potential_from_density(kernels.alpha, densite)
            + params.mu_beta * potential_from_density(kernels.beta, densite))


def _verifier(psi: Field, kernels: KernelPair) -> None:
    if psi.grid != kernels.grid:
        raise ErreurGrille(f"champ sur {psi.grid}, noyaux sur {kernels.grid}")


def strang_step(psi: Field, dt: float, params: ModelParams, kernels: KernelPair) -> Field:
    """
    Un pas de Strang : demi-phase non linéaire, pas cinétique exact, demi-phase recalculée.

    Args:
        psi: État courant
        dt: Pas de temps (> 0)
        params: Paramètres du modèle
        kernels: Noyaux α et β

    Returns:
        Nouvel état complexe
    """
    if not dt > 0:
        raise ErreurParametres(f"pas de temps dt = {dt} doit être > 0")
    _verifier(psi, kernels)
    valeurs = psi.values.astype(np.complex128)
    valeurs = valeurs * np.exp(0.5j * dt * _potentiel(valeurs, params, kernels))
    valeurs = sfft.ifftn(np.exp(-1j * dt * psi.grid.k_squared) * sfft.fftn(valeurs))
    valeurs = valeurs * np.exp(0.5j * dt * _potentiel(valeurs, params, kernels))
    return Field(psi.grid, valeurs)


def momentum(psi: Field) -> np.ndarray:
    """Impulsion P_j = Im∫ψ̄ ∂_jψ, dérivées spectrales."""
    grille = psi.grid
    coefficients = sfft.fftn(psi.values)
    impulsion = np.empty(grille.dim)
    for j, k in enumerate(grille.k_mesh):
        derivee = sfft.ifftn(1j * k * coefficients)
        impulsion[j] = grille.cell_volume * np.imag(np.vdot(psi.values, derivee))
    return impulsion


def l4_norm(psi: Field) -> float:
    return float((psi.grid.cell_volume * np.sum(np.abs(psi.values) ** 4)) ** 0.25)


def time_reverse(psi: Field) -> Field:
    """Renversement du temps ψ ↦ ψ̄, exact pour la décomposition symétrique."""
    return psi.avec_valeurs(np.conj(psi.values))


def orbit_distance(psi: Field, u: Field) -> float:
    """
    min sur la phase θ et les translations de grille a de ‖e^{iθ}ψ(· + a) − u‖_{H¹}.

    La translation est donnée par le pic de corrélation C(m) = Σ ū_x ψ_{x+m},
    la phase par l'argument de C au pic.
    """
    verifier_meme_grille(psi, u)
    correlation = sfft.ifftn(np.conj(sfft.fftn(u.values)) * sfft.fftn(psi.values))
    pic = np.unravel_index(int(np.argmax(np.abs(correlation))), correlation.shape)
    decale = np.roll(psi.values, tuple(-int(m) for m in pic), axis=tuple(range(psi.grid.dim)))
    theta = -np.angle(np.vdot(u.values, decale))
    ecart = psi.avec_valeurs(np.exp(1j * theta) * decale - u.values)
    return h1_norm(ecart)


def evolve(psi0: Field, T: float, dt: float, params: ModelParams, kernels: KernelPair,
           monitors: Optional[Monitors] = None) -> EvolutionTrace:
    """
    Intègre jusqu'à T en enregistrant les invariants à la cadence de surveillance.

    Le potentiel calculé en fin de pas sert au début du pas suivant : la phase ne
    modifie pas |ψ|.

    Args:
        psi0: Donnée initiale
        T: Durée (> 0)
        dt: Pas de temps (> 0)
        params: Paramètres du modèle
        kernels: Noyaux α et β
        monitors: Réglages de la surveillance

    Returns:
        EvolutionTrace échantillonnée (t = 0 inclus, t = T inclus)

    Raises:
        ErreurDynamique: valeurs non finies ; la trace valide jusque-là est jointe
    """
    if not T > 0 or not dt > 0:
        raise ErreurParametres(f"T = {T} et dt = {dt} doivent être > 0")
    _verifier(psi0, kernels)
    surveillance = monitors if monitors else Monitors()
    if surveillance.cadence < 1:
        raise ErreurParametres(f"cadence = {surveillance.cadence} doit être ≥ 1")
    reference = surveillance.reference
    if reference is not None:
        verifier_meme_grille(psi0, reference)

    n_pas = max(1, int(round(T / dt)))
    if abs(n_pas * dt - T) > 1e-9 * T:
        logger.info("dt ajusté de %g à %g pour atteindre T=%g", dt, T / n_pas, T)
    dt = T / n_pas

    grille = psi0.grid
    collecte = _Collecteur(reference is not None)
    propagateur = np.exp(-1j * dt * grille.k_squared)
    valeurs = psi0.values.astype(np.complex128)
    potentiel = _potentiel(valeurs, params, kernels)
    if dt * np.max(np.abs(potentiel)) > SEUIL_PHASE_CONSEILLE:
        logger.warning("dt·max|V| = %.3g > %.1f: pas de temps à réduire",
                       dt * np.max(np.abs(potentiel)), SEUIL_PHASE_CONSEILLE)

    def echantillonner(pas: int) -> None:
        t = pas * dt
        if not np.all(np.isfinite(valeurs)):
            raise ErreurDynamique(f"valeurs non finies à t = {t:.6g}", collecte.trace(grille.dim))
        psi = Field(grille, valeurs)
        v = evaluate(psi, params, kernels)
        distance = orbit_distance(psi, reference) if reference is not None else None
        collecte.ajouter(t, v.E, v.mass, momentum(psi), v.A, distance, l4_norm(psi))
        numero = len(collecte.lignes) - 1
        if numero % surveillance.log_every == 0:
            logger.info("[t %8.3f/%g] masse=%.15e | energie=%.12e", t, T, v.mass, v.E)
        if (surveillance.snapshot_cadence and surveillance.on_snapshot is not None
                and numero % surveillance.snapshot_cadence == 0):
            surveillance.on_snapshot(t, psi)

    echantillonner(0)
    demi = 0.5j * dt
    for pas in range(1, n_pas + 1):
        valeurs = valeurs * np.exp(demi * potentiel)
        valeurs = sfft.ifftn(propagateur * sfft.fftn(valeurs))
        potentiel = _potentiel(valeurs, params, kernels)
        valeurs = valeurs * np.exp(demi * potentiel)
        if pas % surveillance.cadence == 0 or pas == n_pas:
            echantillonner(pas)
    trace = collecte.trace(grille.dim)
    trace.final = Field(grille, valeurs)
    return trace


def perturb(u: Field, delta0: float, seed: int = 0, k_cut: Optional[float] = None) -> Field:
    """
    u + h, h aléatoire à spectre borné (graine fixée) de norme H¹ δ₀·‖u‖_{H¹},
    renormalisé à la masse de u.
    """
    if delta0 < 0:
        raise ErreurParametres(f"δ₀ = {delta0} doit être ≥ 0")
    base = u.avec_valeurs(u.values.astype(np.complex128))
    if delta0 == 0:
        return base
    grille = u.grid
    coupure = k_cut if k_cut is not None else min(2.0, 0.5 * np.pi / grille.spacing)
    bruit = random_band_limited(grille, np.random.default_rng(seed), coupure)
    echelle = delta0 * h1_norm(u) / h1_norm(bruit)
    return normaliser_masse(base.avec_valeurs(base.values + echelle * bruit.values), mass(u))


def stability_experiment(u: Field, params: ModelParams, kernels: KernelPair, delta0: float = 1e-2,
                         T: float = 10.0, dt: float = 1e-3, seed: int = 0, cadence: int = 100,
                         multiple: float = 5.0) -> StabilityReport:
    """
    Perturbe u, intègre jusqu'à T et suit la distance à l'orbite de u.

    Args:
        u: Solution convergée (branche Global en général)
        params: Paramètres du modèle
        kernels: Noyaux α et β
        delta0: Taille relative H¹ de la perturbation
        T: Durée
        dt: Pas de temps
        seed: Graine de la perturbation
        cadence: Cadence de surveillance en pas
        multiple: Verdict stable si la distance maximale reste sous multiple·max(δ₀, 1e−4)

    Returns:
        StabilityReport
    """
    psi0 = perturb(u, delta0, seed)
    norme = h1_norm(u)
    trace = evolve(psi0, T, dt, params, kernels, Monitors(cadence=cadence, reference=u))
    distances = trace.orbit_distance / norme
    initiale = float(distances[0])
    maximum = float(np.max(distances))
    stable = maximum < multiple * max(delta0, PLANCHER_STABILITE)
    logger.info("Stabilité: δ₀=%.2e, distance initiale=%.3e, maximale=%.3e, stable=%s",
                delta0, initiale, maximum, stable)
    return StabilityReport(initiale, maximum, bool(stable), trace, float(delta0))
