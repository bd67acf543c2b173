"""
Module définissant le Solveur : état fondamental de Hartree (ω₀, m_∞, S_γ),
minimiseur global ũ sur S(c) et minimiseur local u⁻ sur P⁻.
"""
import logging
from dataclasses import dataclass, field as champ
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sfft

from ondes_vdw.core.exceptions.exceptions import (ErreurConvergence, ErreurFibrage, ErreurGrille,
                                                  ErreurParametres, ErreurProjection)
from ondes_vdw.models.fibrage import (FiberKind, MembershipFlags, fiber_critical_points, fiber_landmarks,
                                      fiber_unbounded_below, membership, project_pminus)
from ondes_vdw.models.fonctionnelle import (FunctionalValues, KernelPair, ModelParams, Regime, Thresholds,
                                            Triple, gn_constant, gn_quotient,
                                            regime_classify, thresholds)
from ondes_vdw.models.grille import (DilatedProfile, Field, GaussianProfile, GridSpec, dilate_field, h1_norm,
                                     kinetic, laplacian, mass, normaliser_masse, sample_profile)
from ondes_vdw.models.riesz import RieszKernel, build_kernel, potential_from_density

logger = logging.getLogger(__name__)

TOLERANCE_DILATATION = 1e-12
TOLERANCE_POHOZAEV_DISCRETE = 1e-3
ITERATIONS_FIBRE = 12


class Branch(Enum):
    BASELINE = "Baseline"
    GLOBAL = "Global"
    LOCAL = "Local"


@dataclass
class SolverSettings:
    """
    Réglages de la descente projetée.

    Attributes:
        max_iter: Nombre maximal d'itérations
        grad_tol: Tolérance sur ‖∇E + λu‖₂/‖u‖_{H¹}
        pohozaev_tol: Tolérance sur |Q|/A, vérifiée à l'arrêt (plancher fixé par la quadrature singulière)
        step0: Pas initial, réinitialisé à chaque itération
        preconditioner: "sobolev" ((1 − Δ)^{−1}) ou "l2" (aucun)
        armijo_c1: Constante de décroissance suffisante
        min_step: Pas minimal avant abandon
        kinetic_cap_fraction: Plafond de A en fraction de k_max²·c (détection d'effondrement)
        log_every: Cadence des lignes de progression
        init_sigma: Largeur de la gaussienne initiale
    """
    max_iter: int = 50000
    grad_tol: float = 1e-6
    pohozaev_tol: float = TOLERANCE_POHOZAEV_DISCRETE
    step0: float = 0.5
    preconditioner: str = "sobolev"
    armijo_c1: float = 1e-4
    min_step: float = 1e-12
    kinetic_cap_fraction: float = 0.25
    log_every: int = 500
    init_sigma: float = 1.0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ErreurParametres(f"max_iter = {self.max_iter} doit être ≥ 1")
        for nom in ("grad_tol", "pohozaev_tol", "step0", "armijo_c1", "min_step",
                    "kinetic_cap_fraction", "init_sigma"):
            if not getattr(self, nom) > 0:
                raise ErreurParametres(f"{nom} = {getattr(self, nom)} doit être > 0")
        if self.preconditioner not in ("sobolev", "l2"):
            raise ErreurParametres(f"préconditionneur inconnu: {self.preconditioner}")


@dataclass
class SolveReport:
    """
    Diagnostic complet d'une résolution.
    """
    branch: Branch
    solution: Field
    values: FunctionalValues
    lam: float
    grad_residual: float
    pohozaev_residual: float
    iterations: int
    converged: bool
    flags: Optional[MembershipFlags]
    level: float
    regime_certified: bool = False
    unbounded_suspected: bool = False
    asymmetry: float = 0.0
    extras: Dict[str, float] = champ(default_factory=dict)


@dataclass(frozen=True)
class BaselineRecord:
    """Résultat persistant d'une résolution de Hartree, indexé par (γ, c, grille)."""
    gamma: float
    mass_target: float
    grid_fingerprint: str
    m_infty: float
    S_gamma: float
    mass_omega0: float
    field_path: Optional[str] = None

    @property
    def cle(self) -> str:
        return record_key(self.gamma, self.mass_target, self.grid_fingerprint)


def record_key(gamma: float, c: float, empreinte: str) -> str:
    return f"gamma={float(gamma)!r}|c={float(c)!r}|grid={empreinte}"


@dataclass
class _Etat:
    """Grandeurs d'un itéré pour une énergie A/2 − Σ_k a_k B_k/4."""
    u: Field
    A: float
    B: Tuple[float, ...]
    E: float
    Q: float
    potentiel: np.ndarray

    @cached_property
    def gradient(self) -> np.ndarray:
        return -laplacian(self.u) - self.potentiel * self.u.values


class _Energie:
    """Énergie à plusieurs termes de Riesz, partagée par les trois branches."""

    def __init__(self, noyaux: Sequence[RieszKernel], coefficients: Sequence[float]):
        self.noyaux = tuple(noyaux)
        self.coefficients = tuple(float(a) for a in coefficients)
        self._dernier: Optional[_Etat] = None

    def etat(self, u: Field) -> _Etat:
        if self._dernier is not None and self._dernier.u is u:
            return self._dernier
        densite = np.abs(u.values) ** 2
        dv = u.grid.cell_volume
        potentiels = [potential_from_density(k, densite) for k in self.noyaux]
        b = tuple(float(dv * np.sum(densite * v)) for v in potentiels)
        a = kinetic(u)
        e = a / 2.0 - sum(c * bk for c, bk in zip(self.coefficients, b)) / 4.0
        q = a - sum(c * k.gamma * bk for c, k, bk in zip(self.coefficients, self.noyaux, b)) / 4.0
        total = sum(c * v for c, v in zip(self.coefficients, potentiels))
        self._dernier = _Etat(u, a, b, e, q, total)
        return self._dernier


def asymmetry(u: Field) -> float:
    """
    Défaut de symétrie après recentrage sur le centre de masse :
    max de ‖u − u(−x)‖/‖u‖ et des écarts par échange d'axes.
    """
    grille = u.grid
    valeurs = u.values
    densite = np.abs(valeurs) ** 2
    total = densite.sum()
    if total == 0:
        return 0.0
    for axe, x in enumerate(grille.mesh):
        centre = float(np.sum(x * densite) / total)
        valeurs = np.roll(valeurs, -int(round(centre / grille.spacing)), axis=axe)
    norme = np.linalg.norm(valeurs)
    reflechi = valeurs
    for axe in range(grille.dim):
        reflechi = np.roll(np.flip(reflechi, axis=axe), 1, axis=axe)
    ecarts = [np.linalg.norm(valeurs - reflechi) / norme]
    for a in range(grille.dim):
        for b in range(a + 1, grille.dim):
            ecarts.append(np.linalg.norm(valeurs - np.swapaxes(valeurs, a, b)) / norme)
    return float(max(ecarts))


class Solveur:
    """
    Descente de gradient projetée sur la sphère de masse, avec recherche linéaire d'Armijo.

    Les noyaux de Riesz sont mis en cache par exposant pour être partagés entre
    les résolutions de référence et les résolutions du régime IV.
    """

    def __init__(self, grid: GridSpec, settings: Optional[SolverSettings] = None,
                 singular_rule: str = "cell_average"):
        """
        Args:
            grid: Grille de calcul
            settings: Réglages de la descente
            singular_rule: Règle de la cellule singulière des noyaux
        """
        self.grid = grid
        self.settings = settings if settings else SolverSettings()
        self.singular_rule = singular_rule
        self._noyaux: Dict[float, RieszKernel] = {}

    def noyau(self, gamma: float) -> RieszKernel:
        if gamma not in self._noyaux:
            self._noyaux[gamma] = build_kernel(self.grid, gamma, self.singular_rule)
        return self._noyaux[gamma]

    def noyaux(self, params: ModelParams) -> KernelPair:
        if params.dim != self.grid.dim:
            raise ErreurGrille(f"paramètres en dimension {params.dim}, grille en dimension {self.grid.dim}")
        return KernelPair(self.noyau(params.alpha), self.noyau(params.beta))

    # Outils de la descente

    def _plafond_cinetique(self, c: float) -> float:
        k_max = np.pi / self.grid.spacing
        return self.settings.kinetic_cap_fraction * k_max ** 2 * c

    def _preconditionner(self, valeurs: np.ndarray) -> np.ndarray:
        if self.settings.preconditioner == "l2":
            return valeurs
        resultat = sfft.ifftn(sfft.fftn(valeurs) / (1.0 + self.grid.k_squared))
        return resultat if np.iscomplexobj(valeurs) else resultat.real

    def _produit(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(self.grid.cell_volume * np.real(np.vdot(f, g)))

    def _residus(self, etat: _Etat, c: float) -> Tuple[float, float, float]:
        """(λ, résidu du gradient, résidu de Pohozaev)."""
        lam = (etat.A - 4.0 * etat.E) / c
        reste = etat.gradient + lam * etat.u.values
        residu = np.sqrt(self._produit(reste, reste)) / h1_norm(etat.u)
        poh = abs(etat.Q) / etat.A if etat.A > 0 else float("inf")
        return lam, float(residu), float(poh)

    def _descendre(self, branche: Branch, u0: Field, energie: _Energie, c: float,
                   objectif: Callable[[Field], Optional[Tuple[float, Field]]]) -> Tuple[_Etat, int, bool]:
        """
        Boucle commune : direction préconditionnée tangente, pas d'Armijo réinitialisé
        à chaque itération, puis application de la transformation propre à la branche.

        Args:
            branche: Branche résolue (journalisation et erreurs)
            u0: Itéré initial de masse c
            energie: Énergie dont on prend le gradient
            c: Masse prescrite
            objectif: w ↦ (J(w), itéré accepté) ou None si w est rejeté

        Returns:
            (état final, itérations, convergence)
        """
        reglages = self.settings
        plafond = self._plafond_cinetique(c)
        etat = energie.etat(u0)
        for iteration in range(reglages.max_iter + 1):
            lam, residu, poh = self._residus(etat, c)
            if iteration % reglages.log_every == 0:
                logger.info("[Iter %6d/%d] %s E=%.12e | residu=%.3e | Q/A=%.3e",
                            iteration, reglages.max_iter, branche.value, etat.E, residu, poh)
            if residu < reglages.grad_tol:
                if poh >= reglages.pohozaev_tol:
                    logger.warning("%s: point critique discret atteint mais |Q|/A = %.3e ≥ %g (grille trop grossière)",
                                   branche.value, poh, reglages.pohozaev_tol)
                    return etat, iteration, False
                logger.info("%s convergé en %d itérations (E=%.12e, λ=%.6e)",
                            branche.value, iteration, etat.E, lam)
                return etat, iteration, True
            if iteration == reglages.max_iter:
                break

            gradient = etat.gradient
            p_gradient = self._preconditionner(gradient)
            p_u = self._preconditionner(etat.u.values)
            sigma = self._produit(etat.u.values, p_gradient) / self._produit(etat.u.values, p_u)
            direction = p_gradient - sigma * p_u
            pente = self._produit(gradient, direction)
            j_u = etat.E
            arrondi = 1e-13 * (abs(j_u) + etat.A)

            tau = reglages.step0
            while True:
                if tau < reglages.min_step:
                    raise ErreurConvergence(branche.value, f"pas d'Armijo sous {reglages.min_step:g} "
                                                          f"à l'itération {iteration}")
                essai = normaliser_masse(etat.u.avec_valeurs(etat.u.values - tau * direction), c)
                resultat = objectif(essai)
                if resultat is not None and resultat[0] <= j_u - reglages.armijo_c1 * tau * pente + arrondi:
                    break
                tau /= 2.0

            etat = energie.etat(resultat[1])
            if etat.A > plafond:
                raise ErreurConvergence(branche.value, f"effondrement: A = {etat.A:.3e} > plafond {plafond:.3e}")
        return etat, reglages.max_iter, False

    def _dilater(self, u: Field, s: float, c: float) -> Field:
        if abs(s - 1.0) < TOLERANCE_DILATATION:
            return u
        return normaliser_masse(dilate_field(u, s), c)

    def _generateur(self, valeurs: np.ndarray) -> np.ndarray:
        """Générateur des dilatations (N/2)u + x·∇u, dérivées spectrales."""
        coefficients = sfft.fftn(valeurs)
        resultat = 0.5 * self.grid.dim * valeurs
        for x, k in zip(self.grid.mesh, self.grid.k_mesh):
            resultat = resultat + x * sfft.ifftn(1j * k * coefficients)
        return resultat if np.iscomplexobj(valeurs) else resultat.real

    def _pente_fibre(self, etat: _Etat, c: float) -> float:
        """Pente de s ↦ E(u_s) en s = 1 pour l'énergie discrète, à masse fixée."""
        lam = (etat.A - 4.0 * etat.E) / c
        return self._produit(etat.gradient + lam * etat.u.values, self._generateur(etat.u.values))

    def _ajuster_fibre(self, energie: _Energie, u: Field, s0: float, c: float) -> Field:
        """
        Dilatation annulant la pente discrète de la fibre, par sécante depuis le point
        critique s0 de la fibre continue.
        """
        s_prec = s0
        w = self._dilater(u, s0, c)
        etat = energie.etat(w)
        pente_prec = self._pente_fibre(etat, c)
        seuil = 1e-3 * self.settings.grad_tol * etat.A
        if abs(pente_prec) <= seuil:
            return w
        s = s0 * (1.0 + 1e-4)
        for _ in range(ITERATIONS_FIBRE):
            w = self._dilater(u, s, c)
            etat = energie.etat(w)
            pente = self._pente_fibre(etat, c)
            if abs(pente) <= seuil or pente == pente_prec:
                break
            suivant = s - pente * (s - s_prec) / (pente - pente_prec)
            if not suivant > 0:
                break
            s_prec, pente_prec, s = s, pente, suivant
        return w

    def _gaussienne(self, c: float, s: float = 1.0) -> Field:
        base = GaussianProfile(self.settings.init_sigma)
        profil = DilatedProfile(base, s, mass_target=c) if s != 1.0 else GaussianProfile(
            self.settings.init_sigma, mass_target=c)
        return sample_profile(self.grid, profil)

    # Branches

    def solve_hartree_baseline(self, alpha: float, c: float, init: Optional[Field] = None) -> SolveReport:
        """
        Minimise E_∞ = A/2 − B_α/4 sur N(c) en alternant dilatation vers
        s = (4A/(αB_α))^{1/(α−2)}, corrigée sur la fibre discrète, et pas de gradient projeté.

        Args:
            alpha: Exposant, 2 < α < min(N, 4)
            c: Masse prescrite
            init: Profil initial positif (gaussienne par défaut)

        Returns:
            SolveReport de la branche Baseline ; extras contient m_infty, S_gamma, q_mass
        """
        if not 2.0 < alpha < min(self.grid.dim, 4):
            raise ErreurParametres(f"référence de Hartree définie pour 2 < α < min(N, 4), α = {alpha}")
        if not c > 0:
            raise ErreurParametres(f"masse c = {c} doit être > 0")
        energie = _Energie([self.noyau(alpha)], [1.0])

        def pic(etat: _Etat) -> float:
            return (4.0 * etat.A / (alpha * etat.B[0])) ** (1.0 / (alpha - 2.0))

        def objectif(w: Field):
            etat = energie.etat(w)
            if etat.A <= 0 or etat.B[0] <= 0:
                return None
            projete = self._ajuster_fibre(energie, w, pic(etat), c)
            return energie.etat(projete).E, projete

        if init is None:
            depart = energie.etat(self._gaussienne(c))
            u0 = self._gaussienne(c, pic(depart))
        else:
            if init.grid != self.grid:
                raise ErreurGrille(f"profil initial sur {init.grid}, solveur sur {self.grid}")
            u0 = normaliser_masse(init, c)
        u0 = objectif(u0)[1]

        etat, iterations, converge = self._descendre(Branch.BASELINE, u0, energie, c, objectif)
        lam, residu, poh = self._residus(etat, c)
        masse = mass(etat.u)
        valeurs = FunctionalValues(etat.A, etat.B[0], 0.0, masse, etat.E, etat.Q, lam)
        quotient = gn_quotient(etat.B[0], etat.A, c, alpha)
        q_mass = c * lam ** ((alpha - 2.0) / 2.0) if lam > 0 else float("nan")
        extras = {
            "gamma": float(alpha),
            "mass_target": float(c),
            "m_infty": etat.E,
            "S_gamma": quotient,
            "q_mass": q_mass,
            "S_gamma_from_q": gn_constant(alpha, self.grid.dim, q_mass) if lam > 0 else float("nan"),
        }
        # terme de Van der Waals éteint : μ_β = 0, B_β = 0
        hartree = ModelParams(self.grid.dim, alpha, alpha / 2.0, 0.0, c)
        drapeaux = membership(valeurs.triple, hartree, None, masse, self.settings.pohozaev_tol)
        rapport = SolveReport(Branch.BASELINE, etat.u, valeurs, lam, residu, poh, iterations, converge,
                              drapeaux, etat.E, asymmetry=asymmetry(etat.u), extras=extras)
        if not converge:
            raise ErreurConvergence(Branch.BASELINE.value, f"non convergé après {iterations} itérations", rapport)
        return rapport

    def _rapport(self, branche: Branch, etat: _Etat, params: ModelParams, seuils: Optional[Thresholds],
                 iterations: int, converge: bool, **options) -> SolveReport:
        c = params.mass_target
        lam, residu, poh = self._residus(etat, c)
        valeurs = FunctionalValues(etat.A, etat.B[0], etat.B[1], c, etat.E, etat.Q, lam)
        drapeaux = membership(valeurs.triple, params, seuils, c, self.settings.pohozaev_tol)
        return SolveReport(branche, etat.u, valeurs, lam, residu, poh, iterations, converge, drapeaux,
                           etat.E, regime_certified=_certifie(params, seuils),
                           asymmetry=asymmetry(etat.u), **options)

    def _energie_complete(self, params: ModelParams) -> _Energie:
        paire = self.noyaux(params)
        return _Energie([paire.alpha, paire.beta], [1.0, params.mu_beta])

    def solve_global(self, params: ModelParams, seuils: Optional[Thresholds] = None,
                     init: Optional[Field] = None) -> SolveReport:
        """
        Minimiseur global ũ de E sur S(c), depuis la dilatation témoin d'énergie négative.

        Args:
            params: Paramètres (régime IV attendu)
            seuils: Seuils, pour les drapeaux V_D et la certification
            init: Profil initial (gaussienne par défaut)

        Returns:
            SolveReport de la branche Global ; unbounded_suspected si la fibre
            initiale n'est pas minorée
        """
        c = params.mass_target
        energie = self._energie_complete(params)
        base = normaliser_masse(init, c) if init is not None else self._gaussienne(c)
        etat0 = energie.etat(base)
        triple0 = Triple(etat0.A, etat0.B[0], etat0.B[1])

        if params.mu_beta >= 0 or fiber_unbounded_below(triple0, params):
            logger.warning("Énergie non minorée le long de la fibre (μ_β=%g): UnboundedSuspected", params.mu_beta)
            return self._rapport(Branch.GLOBAL, etat0, params, seuils, 0, False, unbounded_suspected=True)

        u0 = self._depart_negatif(base, triple0, params, energie, init is None)
        etat, iterations, converge = self._descendre(
            Branch.GLOBAL, u0, energie, c, lambda w: (energie.etat(w).E, w))
        rapport = self._rapport(Branch.GLOBAL, etat, params, seuils, iterations, converge)
        if not converge:
            raise ErreurConvergence(Branch.GLOBAL.value, f"non convergé après {iterations} itérations", rapport)
        return rapport

    def _depart_negatif(self, base: Field, triple: Triple, params: ModelParams,
                        energie: _Energie, analytique: bool) -> Field:
        """Dilatation témoin, puis minimum local de la fibre si le témoin ne suffit pas."""
        c = params.mass_target
        candidats = []
        temoin = fiber_landmarks(triple, params).s_witness
        if temoin is not None:
            candidats.append(temoin)
        candidats += [p.s for p in fiber_critical_points(triple, params) if p.kind is FiberKind.LOCAL_MIN]
        plafond = self._plafond_cinetique(c)
        for s in candidats:
            u0 = self._gaussienne(c, s) if analytique else self._dilater(base, s, c)
            etat = energie.etat(u0)
            if etat.A > plafond:
                raise ErreurConvergence(Branch.GLOBAL.value,
                                        f"sous-résolution au départ: A = {etat.A:.3e} > plafond {plafond:.3e}")
            if etat.E < 0:
                logger.info("Départ global: dilatation s=%.6g, E=%.6e", s, etat.E)
                return u0
        raise ErreurConvergence(Branch.GLOBAL.value,
                                "E ne devient pas négative au témoin (μ_β hors régime ou sous-résolution)")

    def solve_local(self, params: ModelParams, seuils: Optional[Thresholds] = None,
                    init: Optional[Field] = None) -> SolveReport:
        """
        Minimiseur local u⁻ de E sur P⁻, initialisé par ω₀ projeté.

        Chaque essai est reprojeté sur P⁻ par la dilatation s_*^− ; un essai hors de V_D
        ou sans maximum local sur sa fibre divise le pas par deux.

        Args:
            params: Paramètres du régime IV
            seuils: Seuils (Γ pour la garde V_D)
            init: ω₀ issu de la référence (gaussienne par défaut)

        Returns:
            SolveReport de la branche Local
        """
        c = params.mass_target
        energie = self._energie_complete(params)
        gamma = seuils.Gamma if seuils is not None else None
        if init is not None and init.grid != self.grid:
            raise ErreurGrille(f"ω₀ sur {init.grid}, solveur sur {self.grid}")

        def projeter(w: Field) -> Optional[Tuple[float, Field]]:
            etat = energie.etat(w)
            try:
                point = project_pminus(Triple(etat.A, etat.B[0], etat.B[1]), params, gamma)
            except (ErreurProjection, ErreurFibrage):
                return None
            projete = self._ajuster_fibre(energie, w, point.s, c)
            return energie.etat(projete).E, projete

        base = normaliser_masse(init, c) if init is not None else self._gaussienne(c)
        depart = projeter(base)
        if depart is None:
            raise ErreurConvergence(Branch.LOCAL.value, "le profil initial ne se projette pas sur P⁻")
        etat, iterations, converge = self._descendre(Branch.LOCAL, depart[1], energie, c, projeter)
        rapport = self._rapport(Branch.LOCAL, etat, params, seuils, iterations, converge)
        if not converge:
            raise ErreurConvergence(Branch.LOCAL.value, f"non convergé après {iterations} itérations", rapport)
        return rapport


def _certifie(params: ModelParams, seuils: Optional[Thresholds]) -> bool:
    if seuils is None or regime_classify(params) is not Regime.CASE_IV:
        return False
    certifie = seuils.certifie(params.mu_beta)
    if not certifie:
        logger.warning("|μ_β| = %g hors de la fenêtre admissible %g: régime non certifié",
                       abs(params.mu_beta), seuils.mu_admissible)
    return certifie


# Fonctions d'entrée

def solve_hartree_baseline(alpha: float, c: float, grid: GridSpec, init: Optional[Field] = None,
                           settings: Optional[SolverSettings] = None,
                           singular_rule: str = "cell_average") -> SolveReport:
    return Solveur(grid, settings, singular_rule).solve_hartree_baseline(alpha, c, init)


def solve_global(params: ModelParams, grid: GridSpec, init: Optional[Field] = None,
                 seuils: Optional[Thresholds] = None, settings: Optional[SolverSettings] = None,
                 singular_rule: str = "cell_average") -> SolveReport:
    return Solveur(grid, settings, singular_rule).solve_global(params, seuils, init)


def solve_local(params: ModelParams, grid: GridSpec, init: Optional[Field] = None,
                seuils: Optional[Thresholds] = None, settings: Optional[SolverSettings] = None,
                singular_rule: str = "cell_average") -> SolveReport:
    return Solveur(grid, settings, singular_rule).solve_local(params, seuils, init)


def baseline_record(rapport: SolveReport, grid: GridSpec, chemin: Optional[str] = None) -> BaselineRecord:
    """Enregistrement persistant tiré d'un rapport de référence."""
    return BaselineRecord(rapport.extras["gamma"], rapport.extras["mass_target"], grid.fingerprint(),
                          rapport.extras["m_infty"], rapport.extras["S_gamma"], rapport.values.mass, chemin)


def thresholds_from_records(params: ModelParams, record_alpha: BaselineRecord,
                            record_beta: BaselineRecord) -> Thresholds:
    """Seuils du régime IV à partir des références α (m_∞, S_α) et β (S_β)."""
    return thresholds(params, record_alpha.m_infty, record_beta.S_gamma, record_alpha.S_gamma)
