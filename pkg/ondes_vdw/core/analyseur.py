"""
Module définissant la vérification des solutions et la classe Analyseur pour les
traces d'évolution et les balayages de paramètres.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ondes_vdw.core.dynamique import EvolutionTrace
from ondes_vdw.core.exceptions.exceptions import ErreurParametres
from ondes_vdw.core.solveur import TOLERANCE_POHOZAEV_DISCRETE, Branch, SolveReport
from ondes_vdw.models.fibrage import MembershipFlags, g2_on_pohozaev, membership
from ondes_vdw.models.fonctionnelle import (KernelPair, ModelParams, TheoremBounds, Thresholds, action,
                                            evaluate, kinetic_bound_from_energy, l2_gradient,
                                            lagrange_multiplier, lagrange_multiplier_pohozaev,
                                            nehari_residual, pohozaev_identity_residual)
from ondes_vdw.models.grille import h1_norm

logger = logging.getLogger(__name__)


@dataclass
class Diagnostics:
    """
    Résidus recalculés indépendamment du solveur.

    Attributes:
        branch: Branche du rapport vérifié
        pohozaev_identity_residual: Résidu relatif de l'identité de Pohozaev en dimension N,
            diagnostic principal (égal à |Q| normalisé quand λ vient du triple)
        grad_residual: ‖∇E(u) + λu‖₂/‖u‖_{H¹}
        pohozaev_residual: |Q|/A
        nehari_residual: Résidu relatif de A + λ·masse − B_α − μ_β B_β ; nul par construction
            puisque λ = (A − 4E)/c, il ne mesure que l'écart de masse
        lam: Multiplicateur recalculé
        lam_pohozaev: Multiplicateur par la forme valable sur P(c)
        lam_positive: λ > 0
        mass_error: |masse − c|/c
        flags: Appartenance V_D, P, P⁻, P⁺
        g2_forms: Les deux expressions de g″(1) sur P(c)
        action: E_λ(u)
        action_identity_residual: |E_λ − (σ(c) + λc/2)| relatif (branche Global)
        pminus_energy_floor: Minorant de E sur P⁻ (branche Local)
    """
    branch: Branch
    pohozaev_identity_residual: float
    grad_residual: float
    pohozaev_residual: float
    nehari_residual: float
    lam: float
    lam_pohozaev: float
    lam_positive: bool
    mass_error: float
    flags: Optional[MembershipFlags]
    g2_forms: Tuple[float, float]
    action: float
    action_identity_residual: Optional[float] = None
    pminus_energy_floor: Optional[float] = None

    def residus_sous(self, tolerance: float) -> bool:
        """Vrai si tous les résidus sont sous la tolérance."""
        return max(self.pohozaev_identity_residual, self.grad_residual, self.pohozaev_residual) < tolerance

    def en_dict(self) -> Dict:
        donnees = asdict(self)
        donnees["branch"] = self.branch.value
        donnees["g2_forms"] = list(self.g2_forms)
        return donnees


def _contexte_reference(rapport: SolveReport, params: ModelParams,
                        kernels: KernelPair) -> Tuple[ModelParams, KernelPair]:
    """Problème de Hartree pur (μ_β = 0) sur l'exposant de la référence."""
    gamma = rapport.extras.get("gamma", params.alpha)
    if gamma == kernels.alpha.gamma:
        principal, autre = kernels.alpha, kernels.beta
    elif gamma == kernels.beta.gamma:
        principal, autre = kernels.beta, kernels.alpha
    else:
        raise ErreurParametres(f"aucun noyau d'exposant γ = {gamma} pour vérifier la référence")
    return (params.avec(alpha=principal.gamma, beta=autre.gamma, mu_beta=0.0),
            KernelPair(principal, autre))


def verify_solution(report: SolveReport, params: ModelParams, kernels: KernelPair,
                    thresholds: Optional[Thresholds] = None,
                    pohozaev_tol: float = TOLERANCE_POHOZAEV_DISCRETE) -> Diagnostics:
    """
    Recalcule tous les résidus d'une solution à partir du champ seul.

    Args:
        report: Rapport de résolution (de préférence convergé)
        params: Paramètres du problème
        kernels: Noyaux de la grille du champ
        thresholds: Seuils, pour le drapeau V_D
        pohozaev_tol: Tolérance relative sur |Q| pour l'appartenance à P

    Returns:
        Diagnostics
    """
    if not report.converged:
        logger.warning("Vérification d'un rapport non convergé (%s)", report.branch.value)
    if report.branch is Branch.BASELINE:
        params, kernels = _contexte_reference(report, params, kernels)

    u = report.solution
    c = params.mass_target
    valeurs = evaluate(u, params, kernels)
    lam = lagrange_multiplier(valeurs, c)
    reste = l2_gradient(u, params, kernels).values + lam * u.values
    residu = float(np.sqrt(u.grid.cell_volume * np.vdot(reste, reste).real) / h1_norm(u))
    poh = abs(valeurs.Q) / valeurs.A if valeurs.A > 0 else float("inf")

    flags = membership(valeurs.triple, params, thresholds, valeurs.mass, pohozaev_tol)
    e_lambda = action(valeurs, lam)

    identite_action = None
    if report.branch is Branch.GLOBAL:
        niveau = report.level + lam * c / 2.0
        identite_action = abs(e_lambda - niveau) / max(abs(niveau), 1e-300)
    plancher = None
    if report.branch is Branch.LOCAL:
        plancher = TheoremBounds.pminus_energy_floor(valeurs.A, params)

    diagnostic = Diagnostics(
        branch=report.branch,
        pohozaev_identity_residual=pohozaev_identity_residual(valeurs, lam, params),
        grad_residual=residu,
        pohozaev_residual=float(poh),
        nehari_residual=nehari_residual(valeurs, lam, params),
        lam=float(lam),
        lam_pohozaev=float(lagrange_multiplier_pohozaev(valeurs, c, params)),
        lam_positive=bool(lam > 0),
        mass_error=abs(valeurs.mass - c) / c,
        flags=flags,
        g2_forms=g2_on_pohozaev(valeurs.triple, params),
        action=float(e_lambda),
        action_identity_residual=identite_action,
        pminus_energy_floor=plancher,
    )
    logger.info("Vérification %s: identité de Pohozaev %.3e | résidu=%.3e | |Q|/A=%.3e", report.branch.value,
                diagnostic.pohozaev_identity_residual, diagnostic.grad_residual, diagnostic.pohozaev_residual)
    return diagnostic


class Analyseur:
    """
    Analyse une trace d'évolution ou les lignes d'un balayage et génère un rapport.
    """

    def __init__(self, trace: Optional[EvolutionTrace] = None, lignes: Optional[List[Dict]] = None):
        """
        Initialise l'analyseur.

        Args:
            trace: Trace d'évolution à analyser
            lignes: Lignes d'un balayage (clés value, E_global, A_global, converged_global...)
        """
        self.trace = trace
        self.lignes = lignes if lignes is not None else []

    # Trace d'évolution

    def _trace_vide(self) -> bool:
        return self.trace is None or len(self.trace) == 0

    def calculer_derive_masse(self) -> float:
        """
        Calcule la dérive relative maximale de la masse.

        Returns:
            max_t |M(t) − M(0)|/M(0)
        """
        if self._trace_vide():
            return 0.0
        m = self.trace.mass
        return float(np.max(np.abs(m - m[0])) / m[0])

    def calculer_derive_energie(self) -> float:
        """
        Calcule la dérive relative maximale de l'énergie.

        Returns:
            max_t |E(t) − E(0)|/|E(0)| (dérive absolue si E(0) = 0)
        """
        if self._trace_vide():
            return 0.0
        e = self.trace.energy
        echelle = abs(e[0]) if e[0] != 0 else 1.0
        return float(np.max(np.abs(e - e[0])) / echelle)

    def calculer_derive_impulsion(self) -> float:
        """Dérive absolue maximale de l'impulsion, en norme euclidienne."""
        if self._trace_vide():
            return 0.0
        p = self.trace.momentum
        return float(np.max(np.linalg.norm(p - p[0], axis=1)))

    def calculer_distance_orbitale_max(self, norme_reference: float = 1.0) -> float:
        """
        Distance maximale à l'orbite de la référence.

        Args:
            norme_reference: ‖u‖_{H¹} pour une distance relative

        Returns:
            Maximum de la distance (0.0 sans référence)
        """
        if self._trace_vide() or self.trace.orbit_distance is None:
            return 0.0
        return float(np.max(self.trace.orbit_distance) / norme_reference)

    def calculer_pente_dispersion(self) -> float:
        """
        Pente des moindres carrés de ‖ψ(t)‖₄ ; négative ou nulle pour une donnée qui disperse.
        """
        if self._trace_vide() or len(self.trace) < 2:
            return 0.0
        pente, _ = np.polyfit(self.trace.times, self.trace.l4_norm, 1)
        return float(pente)

    def verifier_borne_cinetique(self, params: ModelParams) -> Dict[str, float]:
        """
        Compare le maximum de A(ψ(t)) à la borne tirée de la coercivité.

        Args:
            params: Paramètres du modèle (μ_β ≠ 0)

        Returns:
            {"borne": ..., "maximum": ..., "respectee": ...}
        """
        if self._trace_vide():
            return {"borne": float("nan"), "maximum": 0.0, "respectee": True}
        borne = kinetic_bound_from_energy(float(self.trace.energy[0]), float(self.trace.mass[0]), params)
        maximum = float(np.max(self.trace.kinetic))
        return {"borne": borne, "maximum": maximum, "respectee": bool(maximum <= borne)}

    # Balayages

    def _colonne(self, cle: str, drapeau: str = "converged_global") -> Tuple[np.ndarray, np.ndarray]:
        """(valeurs du paramètre, colonne) sur les lignes convergées, triées par paramètre."""
        retenues = [l for l in self.lignes if l.get(drapeau) and np.isfinite(l.get(cle, np.nan))]
        retenues.sort(key=lambda l: l["value"])
        return (np.array([l["value"] for l in retenues], dtype=float),
                np.array([l[cle] for l in retenues], dtype=float))

    def verifier_monotonie_sigma(self, tolerance: float = 1e-6) -> bool:
        """
        σ(c) = E(ũ) non croissante en c, à une tolérance relative près.

        Returns:
            True si la colonne est non croissante (vrai aussi pour moins de deux lignes)
        """
        _, sigma = self._colonne("E_global")
        return all(s2 <= s1 + tolerance * abs(s2) for s1, s2 in zip(sigma, sigma[1:]))

    def verifier_sous_additivite(self, tolerance: float = 1e-6) -> bool:
        """σ(c₂) ≤ (c₂/c₁)σ(c₁) pour chaque couple consécutif c₁ < c₂."""
        masses, sigma = self._colonne("E_global")
        return all(s2 <= c2 / c1 * s1 + tolerance * abs(s2)
                   for c1, c2, s1, s2 in zip(masses, masses[1:], sigma, sigma[1:]))

    def verifier_tendance_cinetique(self) -> bool:
        """
        A(ũ) strictement croissante quand |μ_β| décroît.
        """
        mu, a = self._colonne("A_global")
        ordre = np.argsort(-np.abs(mu))
        return bool(np.all(np.diff(a[ordre]) > 0))

    def verifier_tendance_locale(self, tolerance: float = 1e-6) -> bool:
        """
        E(u⁻) non décroissante quand |μ_β| croît : pour μ_β < 0 l'énergie croît
        en tout point, donc aussi le maximum local de chaque fibre.
        """
        mu, e = self._colonne("E_local", "converged_local")
        e = e[np.argsort(np.abs(mu))]
        return all(e2 >= e1 - tolerance * abs(e1) for e1, e2 in zip(e, e[1:]))

    def compter_echecs(self) -> int:
        return sum(1 for l in self.lignes if l.get("error"))

    def generer_rapport_complet(self, params: Optional[ModelParams] = None) -> Dict:
        """
        Génère un rapport complet d'analyse.

        Args:
            params: Paramètres, pour la borne cinétique (optionnel)

        Returns:
            Dictionnaire contenant toutes les analyses disponibles
        """
        rapport: Dict = {}
        if not self._trace_vide():
            rapport["trace"] = {
                "echantillons": len(self.trace),
                "duree": float(self.trace.times[-1]),
                "derive_masse": self.calculer_derive_masse(),
                "derive_energie": self.calculer_derive_energie(),
                "derive_impulsion": self.calculer_derive_impulsion(),
                "distance_orbitale_max": self.calculer_distance_orbitale_max(),
                "pente_dispersion_l4": self.calculer_pente_dispersion(),
            }
            if params is not None and params.mu_beta != 0.0:
                try:
                    rapport["trace"]["borne_cinetique"] = self.verifier_borne_cinetique(params)
                except ErreurParametres as erreur:
                    logger.warning("Borne cinétique indisponible: %s", erreur)
        if self.lignes:
            axes = {l.get("parameter") for l in self.lignes}
            balayage = {"lignes": len(self.lignes), "echecs": self.compter_echecs()}
            if axes == {"mass"}:
                balayage["sigma_non_croissante"] = self.verifier_monotonie_sigma()
                balayage["sous_additivite"] = self.verifier_sous_additivite()
            elif axes == {"mu_beta"}:
                balayage["cinetique_croissante"] = self.verifier_tendance_cinetique()
                balayage["energie_locale_croissante"] = self.verifier_tendance_locale()
            rapport["balayage"] = balayage
        return rapport
