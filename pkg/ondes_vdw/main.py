"""
Point d'entrée en ligne de commande : référence de Hartree, seuils, résolutions,
dynamique et balayages. Une ligne JSON de résumé sur la sortie standard, les
journaux sur la sortie d'erreur.
"""
import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as champ, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ondes_vdw.core.analyseur import Analyseur, verify_solution
from ondes_vdw.core.dynamique import Monitors, evolve, stability_experiment
from ondes_vdw.core.exceptions.exceptions import (ErreurConfiguration, ErreurConvergence, ErreurDynamique,
                                                  ErreurEnregistrementManquant, ErreurEntreeSortie,
                                                  ErreurOndes)
from ondes_vdw.core.solveur import (TOLERANCE_POHOZAEV_DISCRETE, BaselineRecord, SolveReport, Solveur,
                                    SolverSettings, baseline_record, thresholds_from_records)
from ondes_vdw.inputOutput.export import (COLONNES_FIBRE, ExporteurResultats, RegistreReferences,
                                          fiber_rows, read_field, write_field)
from ondes_vdw.models.fibrage import fiber_critical_points, fiber_landmarks, fiber_table, fiber_zeros
from ondes_vdw.models.fonctionnelle import (ModelParams, Regime, Thresholds, Triple, build_kernels,
                                            classify_parameters, theorem_bounds)
from ondes_vdw.models.grille import Field, GaussianProfile, make_grid, sample_profile

logger = logging.getLogger(__name__)

CONFIG_DEFAUT = Path(__file__).parent / "data" / "config_ondes.json"
COMMANDES = ("baseline", "solve-global", "solve-local", "classify", "fibering-scan", "evolve",
             "stability", "sweep")
AXES_BALAYAGE = {"mu_beta": "mu_beta", "mass": "mass_target", "alpha": "alpha", "beta": "beta"}
COLONNES_BALAYAGE = ["parameter", "value", "E_global", "E_local", "A_global", "A_local",
                     "lambda_global", "lambda_local", "converged_global", "converged_local", "error"]

SORTIE_OK = 0
SORTIE_VALIDATION = 1
SORTIE_CONVERGENCE = 2
SORTIE_ES = 3


# Configuration

@dataclass
class GridConfig:
    dim: int = 3
    points: int = 32
    half_length: float = 12.0
    singular_rule: str = "cell_average"


@dataclass
class SolverConfig:
    max_iter: int = 50000
    grad_tol: float = 1e-6
    pohozaev_tol: float = TOLERANCE_POHOZAEV_DISCRETE
    step0: float = 0.5
    preconditioner: str = "sobolev"
    log_every: int = 500

    def reglages(self) -> SolverSettings:
        return SolverSettings(max_iter=self.max_iter, grad_tol=self.grad_tol, pohozaev_tol=self.pohozaev_tol,
                              step0=self.step0, preconditioner=self.preconditioner, log_every=self.log_every)


@dataclass
class DynamicsConfig:
    T: float = 10.0
    dt: float = 1e-3
    monitor_cadence: int = 100
    delta0: float = 1e-2


@dataclass
class RunConfig:
    """
    Configuration complète d'une commande.

    Attributes:
        model: Paramètres validés du modèle
        grid: Grille de calcul
        solver: Réglages de la descente
        dynamics: Réglages de l'intégration
        output_dir: Dossier des résultats
        seed: Graine des perturbations
    """
    model: ModelParams
    grid: GridConfig = champ(default_factory=GridConfig)
    solver: SolverConfig = champ(default_factory=SolverConfig)
    dynamics: DynamicsConfig = champ(default_factory=DynamicsConfig)
    output_dir: str = "resultats"
    seed: int = 0

    def grille(self):
        return make_grid(self.grid.dim, self.grid.points, self.grid.half_length)


def charger_config(chemin) -> Dict:
    """
    Charge un fichier de configuration JSON.

    Raises:
        ErreurConfiguration: fichier absent ou JSON invalide
    """
    try:
        with open(chemin, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ErreurConfiguration(str(chemin), f"lecture impossible ({e})") from e
    except json.JSONDecodeError as e:
        raise ErreurConfiguration(str(chemin), f"JSON invalide ({e})") from e


def _convertir(valeur, type_, source: str, cle: str):
    """Vérifie le type d'une valeur de configuration (int, float ou str)."""
    if type_ is str:
        if not isinstance(valeur, str):
            raise ErreurConfiguration(source, f"{cle}: chaîne attendue, reçu {valeur!r}")
        return valeur
    if isinstance(valeur, bool) or not isinstance(valeur, (int, float)):
        raise ErreurConfiguration(source, f"{cle}: nombre attendu, reçu {valeur!r}")
    if type_ is int:
        if not (np.isfinite(valeur) and float(valeur).is_integer()):
            raise ErreurConfiguration(source, f"{cle}: entier attendu, reçu {valeur!r}")
        return int(valeur)
    return float(valeur)


def _section(donnees: Dict, nom: str, classe, source: str) -> Dict:
    brut = donnees.get(nom, {})
    if not isinstance(brut, dict):
        raise ErreurConfiguration(source, f"la section {nom} doit être un objet")
    types = {f.name: f.type for f in fields(classe)}
    inconnues = set(brut) - set(types)
    if inconnues:
        raise ErreurConfiguration(source, f"clés inconnues dans {nom}: {sorted(inconnues)}")
    return {cle: _convertir(valeur, types[cle], source, f"{nom}.{cle}") for cle, valeur in brut.items()}


# (option de ligne de commande, section, clé)
SURCHARGES = [
    ("alpha", "model", "alpha"), ("beta", "model", "beta"), ("mu_beta", "model", "mu_beta"),
    ("mass", "model", "mass_target"), ("dim", "model", "dim"), ("dim", "grid", "dim"),
    ("points", "grid", "points"), ("box", "grid", "half_length"), ("tmax", "dynamics", "T"),
    ("dt", "dynamics", "dt"), ("delta0", "dynamics", "delta0"), ("max_iter", "solver", "max_iter"),
]
CLES_RACINE = {"model", "grid", "solver", "dynamics", "output_dir", "seed"}
TYPES_MODELE = {"dim": int, "alpha": float, "beta": float, "mu_beta": float, "mass_target": float}
CLES_MODELE = set(TYPES_MODELE)


def fusionner(donnees: Dict, options: argparse.Namespace, source: str) -> Dict:
    """Applique les options de la ligne de commande au dictionnaire de configuration."""
    if not isinstance(donnees, dict):
        raise ErreurConfiguration(source, "la configuration doit être un objet JSON")
    inconnues = set(donnees) - CLES_RACINE
    if inconnues:
        raise ErreurConfiguration(source, f"clés inconnues: {sorted(inconnues)}")
    resultat = {cle: dict(valeur) if isinstance(valeur, dict) else valeur for cle, valeur in donnees.items()}
    for option, section, cle in SURCHARGES:
        valeur = getattr(options, option, None)
        if valeur is not None:
            if not isinstance(resultat.setdefault(section, {}), dict):
                raise ErreurConfiguration(source, f"la section {section} doit être un objet")
            resultat[section][cle] = valeur
    if getattr(options, "out", None) is not None:
        resultat["output_dir"] = options.out
    if getattr(options, "seed", None) is not None:
        resultat["seed"] = options.seed
    return resultat


def modele_brut(donnees: Dict, source: str) -> Dict:
    modele = donnees.get("model", {})
    if not isinstance(modele, dict):
        raise ErreurConfiguration(source, "la section model doit être un objet")
    inconnues = set(modele) - CLES_MODELE
    if inconnues:
        raise ErreurConfiguration(source, f"clés inconnues dans model: {sorted(inconnues)}")
    manquantes = CLES_MODELE - set(modele)
    if manquantes:
        raise ErreurConfiguration(source, f"clés manquantes dans model: {sorted(manquantes)}")
    return {cle: _convertir(valeur, TYPES_MODELE[cle], source, f"model.{cle}") for cle, valeur in modele.items()}


def construire_config(donnees: Dict, source: str) -> RunConfig:
    """
    Construit et valide la RunConfig.

    Args:
        donnees: Configuration fusionnée
        source: Nom du fichier, pour les messages

    Returns:
        RunConfig validée
    """
    modele = modele_brut(donnees, source)
    params = ModelParams(int(modele["dim"]), float(modele["alpha"]), float(modele["beta"]),
                         float(modele["mu_beta"]), float(modele["mass_target"]))
    config = RunConfig(
        model=params,
        grid=GridConfig(**_section(donnees, "grid", GridConfig, source)),
        solver=SolverConfig(**_section(donnees, "solver", SolverConfig, source)),
        dynamics=DynamicsConfig(**_section(donnees, "dynamics", DynamicsConfig, source)),
        output_dir=_convertir(donnees.get("output_dir", "resultats"), str, source, "output_dir"),
        seed=_convertir(donnees.get("seed", 0), int, source, "seed"),
    )
    if config.grid.dim != params.dim:
        raise ErreurConfiguration(source, f"grille en dimension {config.grid.dim}, modèle en dimension {params.dim}")
    config.solver.reglages()
    d = config.dynamics
    if not (d.T > 0 and d.dt > 0 and d.monitor_cadence >= 1 and d.delta0 >= 0):
        raise ErreurConfiguration(source, f"réglages de dynamique invalides: {asdict(d)}")
    if config.seed < 0:
        raise ErreurConfiguration(source, f"graine {config.seed} doit être ≥ 0")
    return config


# Références et seuils

def _registre(config: RunConfig) -> RegistreReferences:
    return RegistreReferences(Path(config.output_dir) / "references" / "registre.json")


def _exposants_reference(params: ModelParams) -> List[float]:
    borne = min(params.dim, 4)
    return [g for g in (params.alpha, params.beta) if 2.0 < g < borne]


def calculer_reference(solveur: Solveur, gamma: float, c: float,
                        dossier: Optional[Path] = None) -> Tuple[BaselineRecord, SolveReport]:
    """Résout la référence de Hartree ; si un dossier est donné, ω₀ y est écrit."""
    rapport = solveur.solve_hartree_baseline(gamma, c)
    chemin = None
    if dossier is not None:
        try:
            dossier.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ErreurEntreeSortie(str(dossier), str(e)) from e
        chemin = dossier / f"omega_{gamma!r}_{c!r}_{solveur.grid.fingerprint()}.nwav"
        write_field(chemin, rapport.solution)
        chemin = str(chemin)
    return baseline_record(rapport, solveur.grid, chemin), rapport


def charger_seuils(config: RunConfig, solveur: Solveur,
                   calculer: bool = False) -> Tuple[Optional[Thresholds], Optional[Field]]:
    """
    Seuils du régime IV et ω₀ (référence α) à partir du registre.

    Args:
        config: Configuration
        solveur: Solveur sur la grille de la configuration
        calculer: Résout en mémoire les références absentes au lieu d'échouer

    Returns:
        (seuils, ω₀) ; (None, None) hors du régime IV

    Raises:
        ErreurEnregistrementManquant: référence absente et calculer faux
    """
    params = config.model
    if params.regime is not Regime.CASE_IV:
        logger.warning("Régime %s: pas de seuils, résolution non certifiée", params.regime.value)
        return None, None
    registre = _registre(config)
    empreinte = solveur.grid.fingerprint()
    references = []
    omega = None
    for gamma in (params.alpha, params.beta):
        try:
            record = registre.obtenir(gamma, params.mass_target, empreinte)
            if gamma == params.alpha and record.field_path and Path(record.field_path).exists():
                omega = read_field(record.field_path)
        except ErreurEnregistrementManquant:
            if not calculer:
                raise
            logger.info("Référence γ=%g absente du registre: calcul en mémoire", gamma)
            record, rapport = calculer_reference(solveur, gamma, params.mass_target)
            if gamma == params.alpha:
                omega = rapport.solution
        references.append(record)
    seuils = thresholds_from_records(params, references[0], references[1])
    logger.info("Seuils: μ*=%.6e, fenêtre admissible |μ_β| < %.6e, Γ=%.6e",
                seuils.mu_star, seuils.mu_admissible, seuils.Gamma)
    return seuils, omega


# Commandes

def _resume_rapport(rapport) -> Dict:
    return {"branch": rapport.branch.value, "converged": rapport.converged, "iterations": rapport.iterations,
            "E": rapport.values.E, "A": rapport.values.A, "lambda": rapport.lam,
            "grad_residual": rapport.grad_residual, "pohozaev_residual": rapport.pohozaev_residual,
            "regime_certified": rapport.regime_certified, "unbounded_suspected": rapport.unbounded_suspected}


def commande_baseline(config: RunConfig, options) -> Dict:
    params = config.model
    solveur = Solveur(config.grille(), config.solver.reglages(), config.grid.singular_rule)
    exporteur = ExporteurResultats(config.output_dir, "baseline")
    registre = _registre(config)
    exposants = _exposants_reference(params)
    if not exposants:
        raise ErreurConfiguration("ligne de commande", "aucun exposant dans (2, min(N, 4)) pour la référence")
    resume = {"records": []}
    for gamma in exposants:
        record, rapport = calculer_reference(solveur, gamma, params.mass_target, registre.chemin.parent)
        registre.enregistrer(record)
        diagnostic = verify_solution(rapport, params, solveur.noyaux(params))
        exporteur.exporter_rapport(rapport, diagnostic.en_dict(), prefixe=f"baseline_gamma_{gamma:g}")
        resume["records"].append({"key": record.cle, "m_infty": record.m_infty, "S_gamma": record.S_gamma,
                                  "S_gamma_from_q": rapport.extras["S_gamma_from_q"]})
    resume["output"] = str(exporteur.dossier_sortie)
    return resume


def _resoudre(config: RunConfig, branche: str):
    params = config.model
    solveur = Solveur(config.grille(), config.solver.reglages(), config.grid.singular_rule)
    seuils, omega = charger_seuils(config, solveur)
    if branche == "global":
        rapport = solveur.solve_global(params, seuils)
    else:
        rapport = solveur.solve_local(params, seuils, omega)
    return solveur, seuils, rapport


def commande_resolution(config: RunConfig, options, branche: str) -> Dict:
    params = config.model
    solveur, seuils, rapport = _resoudre(config, branche)
    exporteur = ExporteurResultats(config.output_dir, f"solve_{branche}")
    diagnostic = verify_solution(rapport, params, solveur.noyaux(params), seuils, config.solver.pohozaev_tol)
    chemin = exporteur.exporter_rapport(rapport, diagnostic.en_dict())
    resume = _resume_rapport(rapport)
    if seuils is not None:
        bornes = theorem_bounds(params, seuils)
        resume.update({"mu_admissible": seuils.mu_admissible, "level_bound": bornes.level_bound,
                       "kinetic_mid_bound": bornes.kinetic_mid_bound})
    resume["report"] = chemin
    return resume


def commande_classify(donnees: Dict, source: str) -> Dict:
    modele = modele_brut(donnees, source)
    regime = classify_parameters(int(modele["dim"]), float(modele["alpha"]), float(modele["beta"]),
                                 float(modele["mu_beta"]))
    return {"case": regime.value, "dim": int(modele["dim"]), "alpha": float(modele["alpha"]),
            "beta": float(modele["beta"]), "mu_beta": float(modele["mu_beta"])}


def _lire_triple(texte: Optional[str]) -> Triple:
    if texte is None:
        raise ErreurConfiguration("ligne de commande", "--triple A,B_alpha,B_beta est requis")
    try:
        morceaux = [float(x) for x in texte.split(",")]
    except ValueError as e:
        raise ErreurConfiguration("ligne de commande", f"triple illisible: {texte}") from e
    if len(morceaux) != 3:
        raise ErreurConfiguration("ligne de commande", f"trois valeurs attendues, reçu {texte}")
    return Triple(*morceaux)


def commande_fibrage(config: RunConfig, options) -> Dict:
    params = config.model
    triple = _lire_triple(options.triple)
    points = fiber_critical_points(triple, params)
    exporteur = ExporteurResultats(config.output_dir, "fibering_scan")
    chemin = exporteur.exporter_csv(COLONNES_FIBRE, fiber_rows(points), "points_critiques.csv")
    exporteur.exporter_csv(COLONNES_FIBRE, fiber_rows(fiber_table(triple, params)), "table_fibre.csv")
    reperes = fiber_landmarks(triple, params)
    return {"case": params.regime.value, "critical_points": len(points),
            "kinds": [p.kind.value for p in points], "s": [p.s for p in points],
            "zeros": fiber_zeros(triple, params), "s_hat": reperes.s_hat, "s_star": reperes.s_star,
            "csv": chemin}


def _donnee_initiale(config: RunConfig, options) -> Field:
    if options.init:
        return read_field(options.init, as_complex=True)
    profil = GaussianProfile(1.0, mass_target=config.model.mass_target)
    return sample_profile(config.grille(), profil)


def commande_evolve(config: RunConfig, options) -> Dict:
    params = config.model
    psi0 = _donnee_initiale(config, options)
    noyaux = build_kernels(params, psi0.grid, config.grid.singular_rule)
    d = config.dynamics
    exporteur = ExporteurResultats(config.output_dir, "evolve")
    try:
        trace = evolve(psi0, d.T, d.dt, params, noyaux, Monitors(cadence=d.monitor_cadence, reference=psi0))
    except ErreurDynamique as e:
        if e.trace is not None and len(e.trace):
            exporteur.exporter_trace(e.trace, "trace_partielle.csv")
        raise
    chemin = exporteur.exporter_trace(trace)
    exporteur.exporter_champ(trace.final, "final.nwav")
    analyse = Analyseur(trace=trace).generer_rapport_complet(params)
    exporteur.exporter_rapport_texte(analyse)
    return {"samples": len(trace), **analyse["trace"], "trace": chemin}


def commande_stability(config: RunConfig, options) -> Dict:
    params = config.model
    if options.init:
        u = read_field(options.init, as_complex=True)
    else:
        _, _, rapport = _resoudre(config, "global")
        u = rapport.solution
    noyaux = build_kernels(params, u.grid, config.grid.singular_rule)
    d = config.dynamics
    rapport_stabilite = stability_experiment(u, params, noyaux, d.delta0, d.T, d.dt, config.seed, d.monitor_cadence)
    exporteur = ExporteurResultats(config.output_dir, "stability")
    chemin = exporteur.exporter_trace(rapport_stabilite.trace)
    resume = {"delta0": rapport_stabilite.delta0, "perturbation_size": rapport_stabilite.perturbation_size,
              "max_distance": rapport_stabilite.max_distance, "stable_flag": rapport_stabilite.stable_flag}
    exporteur.exporter_json(resume, "stabilite.json")
    return {**resume, "trace": chemin}


def _lire_valeurs(texte: Optional[str]) -> List[float]:
    if texte is None or not texte.strip():
        raise ErreurConfiguration("ligne de commande", "liste de valeurs vide pour le balayage")
    try:
        return [float(x) for x in texte.split(",") if x.strip()]
    except ValueError as e:
        raise ErreurConfiguration("ligne de commande", f"valeurs illisibles: {texte}") from e


def executer_ligne(config: RunConfig, axe: str, valeur: float) -> Dict:
    """
    Une ligne de balayage : résolutions globale et locale pour une valeur du paramètre.
    Les échecs sont consignés dans la colonne error.
    """
    ligne: Dict = {"parameter": axe, "value": valeur, "error": ""}
    for cle in COLONNES_BALAYAGE[2:-1]:
        ligne[cle] = False if cle.startswith("converged") else float("nan")
    try:
        params = config.model.avec(**{AXES_BALAYAGE[axe]: valeur})
        locale = RunConfig(params, config.grid, config.solver, config.dynamics, config.output_dir, config.seed)
        solveur = Solveur(locale.grille(), locale.solver.reglages(), locale.grid.singular_rule)
        seuils, omega = charger_seuils(locale, solveur, calculer=True)
    except ErreurOndes as e:
        ligne["error"] = str(e)
        return ligne
    erreurs = []
    for branche in ("global", "local"):
        try:
            if branche == "global":
                rapport = solveur.solve_global(params, seuils)
            else:
                rapport = solveur.solve_local(params, seuils, omega)
        except ErreurOndes as e:
            erreurs.append(str(e))
            continue
        ligne.update({f"E_{branche}": rapport.values.E, f"A_{branche}": rapport.values.A,
                      f"lambda_{branche}": rapport.lam,
                      f"converged_{branche}": rapport.converged and not rapport.unbounded_suspected})
        if rapport.unbounded_suspected:
            erreurs.append(f"{branche}: énergie non minorée")
    ligne["error"] = " | ".join(erreurs)
    return ligne


def nombre_workers(n_taches: int) -> int:
    """Plafonné par NWAV_THREADS (nombre de processeurs par défaut)."""
    brut = os.environ.get("NWAV_THREADS")
    if brut is None:
        plafond = os.cpu_count() or 1
    else:
        try:
            plafond = int(brut)
        except ValueError as e:
            raise ErreurConfiguration("NWAV_THREADS", f"entier attendu, reçu {brut!r}") from e
        if plafond < 1:
            raise ErreurConfiguration("NWAV_THREADS", f"doit être ≥ 1, reçu {plafond}")
    return max(1, min(plafond, n_taches))


def sweep(config: RunConfig, axe: str, valeurs: Sequence[float]) -> Tuple[List[Dict], Dict]:
    """
    Balayage d'un paramètre ; les lignes sont indépendantes et réparties sur des processus.

    Args:
        config: Configuration de base
        axe: mu_beta, mass, alpha ou beta
        valeurs: Valeurs du paramètre

    Returns:
        (lignes dans l'ordre des valeurs, rapport d'analyse)
    """
    if axe not in AXES_BALAYAGE:
        raise ErreurConfiguration("ligne de commande", f"axe {axe} hors de {sorted(AXES_BALAYAGE)}")
    if not valeurs:
        raise ErreurConfiguration("ligne de commande", "liste de valeurs vide pour le balayage")
    workers = nombre_workers(len(valeurs))
    logger.info("Balayage %s sur %d valeurs, %d processus", axe, len(valeurs), workers)
    if workers == 1:
        lignes = [executer_ligne(config, axe, v) for v in valeurs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            lignes = list(pool.map(executer_ligne, [config] * len(valeurs), [axe] * len(valeurs), valeurs))
    return lignes, Analyseur(lignes=lignes).generer_rapport_complet()


def commande_sweep(config: RunConfig, options) -> Tuple[Dict, int]:
    if options.axis is None:
        raise ErreurConfiguration("ligne de commande", "--axis est requis pour sweep")
    lignes, analyse = sweep(config, options.axis, _lire_valeurs(options.values))
    exporteur = ExporteurResultats(config.output_dir, f"sweep_{options.axis}")
    chemin = exporteur.exporter_csv(COLONNES_BALAYAGE, lignes, "balayage.csv")
    exporteur.exporter_rapport_texte(analyse)
    echecs = analyse["balayage"]["echecs"]
    code = SORTIE_CONVERGENCE if echecs else SORTIE_OK
    return {**analyse["balayage"], "csv": chemin}, code


# Ligne de commande

class _Parseur(argparse.ArgumentParser):
    """Les erreurs d'arguments deviennent des erreurs de configuration (code 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ErreurConfiguration("ligne de commande", message)


def construire_parseur() -> argparse.ArgumentParser:
    commun = argparse.ArgumentParser(add_help=False)
    commun.add_argument("--config", default=str(CONFIG_DEFAUT), help="fichier de configuration JSON")
    commun.add_argument("--alpha", type=float)
    commun.add_argument("--beta", type=float)
    commun.add_argument("--mu-beta", dest="mu_beta", type=float)
    commun.add_argument("--mass", type=float, help="masse prescrite c")
    commun.add_argument("--dim", type=int)
    commun.add_argument("--points", type=int, help="points par axe")
    commun.add_argument("--box", type=float, help="demi-longueur L de la boîte")
    commun.add_argument("--tmax", type=float)
    commun.add_argument("--dt", type=float)
    commun.add_argument("--delta0", type=float)
    commun.add_argument("--max-iter", dest="max_iter", type=int)
    commun.add_argument("--out", help="dossier des résultats")
    commun.add_argument("--seed", type=int)
    commun.add_argument("--init", help="champ initial NWAV (evolve, stability)")
    commun.add_argument("--triple", help="A,B_alpha,B_beta (fibering-scan)")
    commun.add_argument("--axis", help="paramètre balayé (sweep)")
    commun.add_argument("--values", help="valeurs séparées par des virgules (sweep)")
    commun.add_argument("--verbose", action="store_true")

    parseur = _Parseur(prog="ondes-vdw", description="Ondes stationnaires normalisées à non-linéarités de Riesz")
    sous = parseur.add_subparsers(dest="commande", metavar="commande")
    sous.required = True
    for nom in COMMANDES:
        sous.add_parser(nom, parents=[commun])
    return parseur


def _configurer_journal(verbeux: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbeux else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


def _json_valeur(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    raise TypeError(f"type non sérialisable: {type(x)}")


def _executer(options: argparse.Namespace) -> Tuple[Dict, int]:
    donnees = fusionner(charger_config(options.config), options, options.config)
    if options.commande == "classify":
        return commande_classify(donnees, options.config), SORTIE_OK
    config = construire_config(donnees, options.config)
    if options.commande == "baseline":
        return commande_baseline(config, options), SORTIE_OK
    if options.commande == "solve-global":
        return commande_resolution(config, options, "global"), SORTIE_OK
    if options.commande == "solve-local":
        return commande_resolution(config, options, "local"), SORTIE_OK
    if options.commande == "fibering-scan":
        return commande_fibrage(config, options), SORTIE_OK
    if options.commande == "evolve":
        return commande_evolve(config, options), SORTIE_OK
    if options.commande == "stability":
        return commande_stability(config, options), SORTIE_OK
    return commande_sweep(config, options)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Exécute une commande et renvoie le code de sortie.

    Args:
        argv: Arguments (sys.argv[1:] par défaut)

    Returns:
        0 succès, 1 validation, 2 non-convergence, 3 entrée/sortie
    """
    commande = None
    try:
        options = construire_parseur().parse_args(argv)
        commande = options.commande
        _configurer_journal(options.verbose)
        resume, code = _executer(options)
    except ErreurConvergence as e:
        resume, code = {"error": str(e)}, SORTIE_CONVERGENCE
    except ErreurDynamique as e:
        resume, code = {"error": str(e)}, SORTIE_CONVERGENCE
    except ErreurEntreeSortie as e:
        resume, code = {"error": str(e)}, SORTIE_ES
    except OSError as e:
        resume, code = {"error": str(e)}, SORTIE_ES
    except ErreurOndes as e:
        resume, code = {"error": str(e)}, SORTIE_VALIDATION
    if "error" in resume:
        logger.error(resume["error"])
    resume = {"command": commande, "exit_code": code, **resume}
    print(json.dumps(resume, ensure_ascii=False, default=_json_valeur))
    return code


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
