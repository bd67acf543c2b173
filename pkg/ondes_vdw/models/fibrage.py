"""
Analyse en forme close de l'application de fibrage g_u(s) = E(u_s) sur le triple
(A, B_α, B_β) : valeurs, dérivées, points critiques, projections sur P⁻ et tests
d'appartenance à V_D et P^±.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numba
import numpy as np
from scipy.optimize import bisect

from ondes_vdw.core.exceptions.exceptions import ErreurFibrage, ErreurParametres, ErreurProjection
from ondes_vdw.models.fonctionnelle import ModelParams, Thresholds, Triple, pohozaev

logger = logging.getLogger(__name__)

S_SCAN_MIN = 1e-3
S_SCAN_MAX = 1e3
S_LIMITE_BASSE = 1e-12
S_LIMITE_HAUTE = 1e12
POINTS_SCAN = 241
TOLERANCE_RACINE = 1e-12
TOLERANCE_TANGENCE = 1e-10
TOLERANCE_POHOZAEV = 1e-8


@numba.jit(cache=True)
def _derivees_fibre(s: float, a: float, ba: float, bb: float,
                    alpha: float, beta: float, mu: float):
    """
    g, g′, g″ du polynôme de fibrage en s. Calcul purement scalaire.
    """
    sa = s ** alpha
    sb = s ** beta
    g = 0.5 * s * s * a - 0.25 * sa * ba - 0.25 * mu * sb * bb
    g1 = s * a - 0.25 * alpha * sa / s * ba - 0.25 * mu * beta * sb / s * bb
    g2 = (a - 0.25 * alpha * (alpha - 1.0) * sa / (s * s) * ba
          - 0.25 * mu * beta * (beta - 1.0) * sb / (s * s) * bb)
    return g, g1, g2


class FiberKind(Enum):
    LOCAL_MAX = "LocalMax"
    LOCAL_MIN = "LocalMin"
    INFLECTION = "Inflection"


@dataclass(frozen=True)
class FiberPoint:
    """
    Point de l'application de fibrage.

    Attributes:
        s: Paramètre de dilatation
        g: g_u(s)
        g1: g′_u(s)
        g2: g″_u(s)
        kind: Nature du point critique (None hors racine)
        tangent_warning: Racine double détectée (cas tangent)
    """
    s: float
    g: float
    g1: float
    g2: float
    kind: Optional[FiberKind] = None
    tangent_warning: bool = False


@dataclass(frozen=True)
class MembershipFlags:
    in_VD: bool
    on_P: bool
    in_Pminus: bool
    in_Pplus: bool
    g2_one: float


@dataclass(frozen=True)
class FiberLandmarks:
    """ŝ_u (zéro de Q_∞ le long de la fibre), s_u^* (minimum de ĥ) et témoin d'énergie négative."""
    s_hat: Optional[float]
    s_star: Optional[float]
    s_witness: Optional[float]


def _verifier_triple(triple: Triple) -> Triple:
    triple = Triple(*(float(x) for x in triple))
    if min(triple) < 0 or not all(np.isfinite(triple)):
        raise ErreurParametres(f"triple {tuple(triple)} doit être fini et ≥ 0")
    return triple


def fiber_eval(triple: Triple, params: ModelParams, s: float) -> FiberPoint:
    """
    Évalue g, g′ et g″ en s.

    Args:
        triple: (A, B_α, B_β)
        params: Paramètres du modèle
        s: Paramètre de dilatation (> 0)

    Returns:
        FiberPoint sans nature
    """
    if not s > 0:
        raise ErreurParametres(f"s = {s} doit être > 0")
    triple = _verifier_triple(triple)
    g, g1, g2 = _derivees_fibre(float(s), float(triple[0]), float(triple[1]), float(triple[2]),
                                params.alpha, params.beta, params.mu_beta)
    return FiberPoint(float(s), g, g1, g2)


def dilate_triple(triple: Triple, params: ModelParams, s: float) -> Triple:
    """Lois de dilatation A → s²A, B_α → s^αB_α, B_β → s^βB_β."""
    if not s > 0:
        raise ErreurParametres(f"s = {s} doit être > 0")
    triple = Triple(*triple)
    return Triple(s * s * triple.A, s ** params.alpha * triple.B_alpha, s ** params.beta * triple.B_beta)


# Recherche de racines d'une somme de puissances Σ c_k s^{e_k}

Termes = Sequence[Tuple[float, float]]


def _evaluer(termes: Termes, s: float) -> float:
    return float(sum(c * s ** e for c, e in termes))


def _echelle(termes: Termes, s: float) -> float:
    return float(sum(abs(c) * s ** e for c, e in termes))


def _signe_limite(termes: Termes, vers_zero: bool) -> float:
    """Signe de la somme quand s → 0⁺ (vers_zero) ou s → ∞."""
    groupes = {}
    for c, e in termes:
        groupes[e] = groupes.get(e, 0.0) + c
    exposants = sorted((e for e, c in groupes.items() if c != 0.0), reverse=not vers_zero)
    if not exposants:
        return 0.0
    return float(np.sign(groupes[exposants[0]]))


def _point_critique(termes: Termes) -> Optional[float]:
    """Unique zéro de la dérivée quand deux termes non constants sont présents."""
    actifs = [(c, e) for c, e in termes if c != 0.0 and e != 0.0]
    if len(actifs) != 2:
        return None
    (c1, e1), (c2, e2) = actifs
    if e1 == e2:
        return None
    rapport = -c2 * e2 / (c1 * e1)
    if rapport <= 0:
        return None
    return float(rapport ** (1.0 / (e1 - e2)))


def _racines(termes: Termes) -> Tuple[List[float], Optional[float], bool]:
    """
    Toutes les racines positives de Σ c_k s^{e_k} (au plus deux).

    Returns:
        (racines croissantes, point critique, cas tangent)
    """
    s_c = _point_critique(termes)
    if s_c is not None and abs(_evaluer(termes, s_c)) <= TOLERANCE_TANGENCE * _echelle(termes, s_c):
        return [s_c], s_c, True

    bas, haut = S_SCAN_MIN, S_SCAN_MAX
    if s_c is not None:
        bas, haut = min(bas, s_c / 10.0), max(haut, s_c * 10.0)
    signe_zero = _signe_limite(termes, vers_zero=True)
    signe_infini = _signe_limite(termes, vers_zero=False)
    if signe_zero == 0.0 and signe_infini == 0.0:
        return [], s_c, False
    while np.sign(_evaluer(termes, bas)) != signe_zero:
        if bas < S_LIMITE_BASSE:
            raise ErreurFibrage(f"encadrement impossible vers s → 0 (s = {bas:.1e})")
        bas /= 10.0
    while np.sign(_evaluer(termes, haut)) != signe_infini:
        if haut > S_LIMITE_HAUTE:
            raise ErreurFibrage(f"encadrement impossible vers s → ∞ (s = {haut:.1e})")
        haut *= 10.0

    grille = np.geomspace(bas, haut, POINTS_SCAN)
    if s_c is not None:
        grille = np.unique(np.append(grille, s_c))
    valeurs = [_evaluer(termes, s) for s in grille]

    racines: List[float] = []
    for i in range(len(grille) - 1):
        if valeurs[i] == 0.0:
            racines.append(float(grille[i]))
        elif valeurs[i] * valeurs[i + 1] < 0:
            racine = bisect(lambda s: _evaluer(termes, s), grille[i], grille[i + 1],
                            xtol=1e-300, rtol=TOLERANCE_RACINE, maxiter=400)
            racines.append(float(racine))
    return racines, s_c, False


def _termes_derivee(triple: Triple, params: ModelParams) -> List[Tuple[float, float]]:
    """g′(s)/s^{β−1} = A s^{2−β} − (α/4)B_α s^{α−β} − μ_ββB_β/4, même signe que g′."""
    a, ba, bb = triple
    al, be, mu = params.alpha, params.beta, params.mu_beta
    return [(a, 2.0 - be), (-al * ba / 4.0, al - be), (-mu * be * bb / 4.0, 0.0)]


def _nature(point: FiberPoint, triple: Triple, params: ModelParams) -> FiberKind:
    a, ba, bb = triple
    al, be, s = params.alpha, params.beta, point.s
    echelle = (a + al * abs(al - 1.0) / 4.0 * s ** (al - 2.0) * ba
               + abs(params.mu_beta) * be * abs(be - 1.0) / 4.0 * s ** (be - 2.0) * bb)
    if abs(point.g2) <= TOLERANCE_TANGENCE * echelle:
        return FiberKind.INFLECTION
    return FiberKind.LOCAL_MAX if point.g2 < 0 else FiberKind.LOCAL_MIN


def fiber_critical_points(triple: Triple, params: ModelParams) -> List[FiberPoint]:
    """
    Tous les zéros de g′ sur (0, ∞), classés.

    La fonction auxiliaire F(s) = g′(s)/s^{β−1} n'a qu'un point critique, donc au plus
    deux racines ; l'intervalle de recherche est élargi jusqu'à retrouver le signe
    des limites en 0 et à l'infini.

    Args:
        triple: (A, B_α, B_β)
        params: Paramètres du modèle

    Returns:
        Liste de FiberPoint triée par s croissant (vide si B_α = B_β = 0)
    """
    triple = _verifier_triple(triple)
    if triple.B_alpha == 0.0 and triple.B_beta == 0.0:
        return []
    racines, _, tangent = _racines(_termes_derivee(triple, params))
    points = []
    for s in racines:
        brut = fiber_eval(triple, params, s)
        if tangent:
            logger.warning("Fibre tangente en s=%.6g: point d'inflexion unique", s)
            points.append(FiberPoint(brut.s, brut.g, brut.g1, brut.g2, FiberKind.INFLECTION, True))
        else:
            points.append(FiberPoint(brut.s, brut.g, brut.g1, brut.g2, _nature(brut, triple, params)))
    return points


def fiber_zeros(triple: Triple, params: ModelParams) -> List[float]:
    """Zéros de g_u(s) (changements de signe de l'énergie le long de la fibre)."""
    triple = _verifier_triple(triple)
    a, ba, bb = triple
    termes = [(a / 2.0, 0.0), (-ba / 4.0, params.alpha - 2.0), (-params.mu_beta * bb / 4.0, params.beta - 2.0)]
    racines, _, _ = _racines(termes)
    return racines


def fiber_unbounded_below(triple: Triple, params: ModelParams) -> bool:
    """Vrai si g_u(s) → −∞ quand s → ∞."""
    a, ba, bb = triple
    termes = [(a / 2.0, 2.0), (-ba / 4.0, params.alpha), (-params.mu_beta * bb / 4.0, params.beta)]
    return _signe_limite(termes, vers_zero=False) < 0


def fiber_landmarks(triple: Triple, params: ModelParams) -> FiberLandmarks:
    """
    Repères explicites de la fibre (définis pour α > 2 et B_α > 0).
    """
    a, ba, _ = triple
    al, be = params.alpha, params.beta
    if al <= 2.0 or ba <= 0.0 or a <= 0.0:
        return FiberLandmarks(None, None, None)
    exposant = 1.0 / (al - 2.0)
    s_hat = (4.0 * a / (al * ba)) ** exposant
    if be <= al:
        return FiberLandmarks(s_hat, None, None)
    s_star = (4.0 * (be - 2.0) * a / (al * (be - al) * ba)) ** exposant
    s_temoin = (2.0 * (be - 2.0) * a / ((be - al) * ba)) ** exposant
    return FiberLandmarks(s_hat, s_star, s_temoin)


def vd_deficit(triple: Triple, params: ModelParams, Gamma: float) -> float:
    """Γ·A^{α/2} − B_α ; négatif dans V_D."""
    triple = Triple(*triple)
    return Gamma * triple.A ** (params.alpha / 2.0) - triple.B_alpha


def project_pminus(triple: Triple, params: ModelParams, Gamma: Optional[float] = None) -> FiberPoint:
    """
    Dilatation s_*^− ramenant le triple sur P⁻ (plus petit maximum local de la fibre).

    Args:
        triple: (A, B_α, B_β)
        params: Paramètres du modèle
        Gamma: Constante Γ ; si fournie, l'inégalité V_D est vérifiée d'abord

    Returns:
        FiberPoint de type LOCAL_MAX

    Raises:
        ErreurProjection: V_D violé ou aucun maximum local
    """
    deficit = float("nan")
    if Gamma is not None:
        deficit = vd_deficit(triple, params, Gamma)
        if deficit >= 0:
            raise ErreurProjection(deficit, "triple hors de V_D")
    maxima = [p for p in fiber_critical_points(triple, params) if p.kind is FiberKind.LOCAL_MAX]
    if not maxima:
        raise ErreurProjection(deficit, "aucun maximum local sur la fibre")
    return maxima[0]


def g2_on_pohozaev(triple: Triple, params: ModelParams) -> Tuple[float, float]:
    """
    Deux expressions de g″(1) valables sur P(c) :
    (2−α)A − μ_ββ(β−α)B_β/4 et (2−β)A + α(β−α)B_α/4.
    """
    a, ba, bb = triple
    al, be, mu = params.alpha, params.beta, params.mu_beta
    return ((2.0 - al) * a - mu * be * (be - al) * bb / 4.0,
            (2.0 - be) * a + al * (be - al) * ba / 4.0)


def membership(triple: Triple, params: ModelParams, thresholds: Optional[Thresholds],
               mass: Optional[float] = None, tolerance: float = TOLERANCE_POHOZAEV) -> MembershipFlags:
    """
    Appartenance à V_D, P, P⁻ et P⁺.

    Args:
        triple: (A, B_α, B_β)
        params: Paramètres du modèle
        thresholds: Seuils (sans seuils, in_VD vaut faux)
        mass: Masse du champ, comparée à c pour V_D
        tolerance: Tolérance relative sur |Q| pour l'appartenance à P (champs discrets : celle du solveur)
    """
    triple = _verifier_triple(triple)
    in_vd = False
    if thresholds is not None:
        masse_ok = mass is None or mass <= params.mass_target * (1.0 + 1e-10)
        in_vd = masse_ok and vd_deficit(triple, params, thresholds.Gamma) < 0
    q = pohozaev(triple, params)
    on_p = abs(q) < tolerance * max(triple.A, 1.0)
    g2 = fiber_eval(triple, params, 1.0).g2
    return MembershipFlags(bool(in_vd), bool(on_p), bool(on_p and g2 < 0), bool(on_p and g2 > 0), float(g2))


def fiber_table(triple: Triple, params: ModelParams, s_min: float = S_SCAN_MIN,
                s_max: float = S_SCAN_MAX, points: int = 200) -> List[FiberPoint]:
    """Échantillonnage log de la fibre pour la commande fibering-scan."""
    return [fiber_eval(triple, params, float(s)) for s in np.geomspace(s_min, s_max, points)]
