"""
Module pour la persistance des résultats : champs binaires NWAV, rapports JSON,
traces et balayages CSV, registre des références de Hartree.
"""
import csv
import json
import logging
import os
import struct
from dataclasses import asdict
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from ondes_vdw.core.dynamique import EvolutionTrace
from ondes_vdw.core.exceptions.exceptions import (ErreurEnregistrementManquant, ErreurEntreeSortie,
                                                  ErreurFormatFichier, ErreurGrille, MagicMismatch,
                                                  TruncatedPayload, VersionMismatch)
from ondes_vdw.core.solveur import BaselineRecord, SolveReport, record_key
from ondes_vdw.models.fibrage import FiberPoint
from ondes_vdw.models.grille import Field, make_grid

logger = logging.getLogger(__name__)

Chemin = Union[str, Path]

MAGIC = b"NWAV"
VERSION_FORMAT = 1
EN_TETE = struct.Struct("<4sIIIdI")
DTYPES = {0: np.dtype("<f8"), 1: np.dtype("<c16")}
AXES = ("x", "y", "z")


# Champs binaires

def write_field(path: Chemin, field: Field) -> None:
    """
    Écrit un champ au format NWAV (en-tête little-endian puis valeurs en ordre C).

    Args:
        path: Fichier de destination
        field: Champ réel ou complexe
    """
    code = 1 if field.is_complex else 0
    grille = field.grid
    en_tete = EN_TETE.pack(MAGIC, VERSION_FORMAT, grille.dim, grille.points_per_axis,
                           float(grille.half_length), code)
    charge = np.ascontiguousarray(field.values, dtype=DTYPES[code]).tobytes(order="C")
    try:
        with open(path, "wb") as f:
            f.write(en_tete)
            f.write(charge)
    except OSError as e:
        raise ErreurEntreeSortie(str(path), str(e)) from e


def read_field(path: Chemin, as_complex: bool = False) -> Field:
    """
    Relit un fichier NWAV.

    Args:
        path: Fichier source
        as_complex: Élargit un champ réel en complexe (parties imaginaires nulles)

    Returns:
        Field sur la grille décrite par l'en-tête

    Raises:
        MagicMismatch, VersionMismatch, TruncatedPayload, ErreurFormatFichier
    """
    chemin = str(path)
    try:
        with open(path, "rb") as f:
            contenu = f.read()
    except OSError as e:
        raise ErreurEntreeSortie(chemin, str(e)) from e

    if len(contenu) < EN_TETE.size:
        raise TruncatedPayload(chemin, f"en-tête de {len(contenu)} octets sur {EN_TETE.size}")
    magic, version, dim, points, demi_longueur, code = EN_TETE.unpack_from(contenu)
    if magic != MAGIC:
        raise MagicMismatch(chemin, f"signature {magic!r} au lieu de {MAGIC!r}")
    if version != VERSION_FORMAT:
        raise VersionMismatch(chemin, f"version {version} non prise en charge")
    if dim not in (1, 2, 3):
        raise ErreurFormatFichier(chemin, f"dimension {dim} hors de {{1, 2, 3}}")
    if code not in DTYPES:
        raise ErreurFormatFichier(chemin, f"type de données {code} inconnu")
    try:
        grille = make_grid(dim, points, demi_longueur)
    except ErreurGrille as e:
        raise ErreurFormatFichier(chemin, str(e)) from e

    attendu = grille.size * DTYPES[code].itemsize
    charge = contenu[EN_TETE.size:]
    if len(charge) < attendu:
        raise TruncatedPayload(chemin, f"{len(charge)} octets de données sur {attendu}")
    if len(charge) > attendu:
        raise ErreurFormatFichier(chemin, f"{len(charge) - attendu} octets excédentaires")

    valeurs = np.frombuffer(charge, dtype=DTYPES[code]).reshape(grille.shape).copy()
    if as_complex and code == 0:
        valeurs = valeurs.astype(np.complex128)
    return Field(grille, valeurs)


# Rapports et traces

def report_document(report: SolveReport, field_path: Optional[str] = None,
                    diagnostics: Optional[Dict] = None) -> Dict:
    """Document JSON d'un rapport ; le champ est référencé, pas incorporé."""
    document = {
        "branch": report.branch.value,
        "converged": report.converged,
        "iterations": report.iterations,
        "lambda": report.lam,
        "grad_residual": report.grad_residual,
        "pohozaev_residual": report.pohozaev_residual,
        "level": report.level,
        "values": asdict(report.values),
        "flags": asdict(report.flags) if report.flags is not None else None,
        "regime_certified": report.regime_certified,
        "unbounded_suspected": report.unbounded_suspected,
        "asymmetry": report.asymmetry,
        "extras": dict(report.extras),
        "grid": {"dim": report.solution.grid.dim,
                 "points_per_axis": report.solution.grid.points_per_axis,
                 "half_length": report.solution.grid.half_length},
        "solution_file": field_path,
    }
    if diagnostics is not None:
        document["diagnostics"] = diagnostics
    return document


def _ecrire_json(path: Chemin, donnees: Dict) -> None:
    # repr des flottants : relecture exacte au dernier ulp
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(donnees, f, ensure_ascii=False, indent=2)
    except OSError as e:
        raise ErreurEntreeSortie(str(path), str(e)) from e


def _lire_json(path: Chemin) -> Dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ErreurEntreeSortie(str(path), str(e)) from e
    except json.JSONDecodeError as e:
        raise ErreurFormatFichier(str(path), f"JSON invalide: {e}") from e


def write_report(path: Chemin, report: SolveReport, field_path: Optional[str] = None,
                 diagnostics: Optional[Dict] = None) -> None:
    """
    Écrit le rapport en un seul document JSON.

    Args:
        path: Fichier de destination
        report: Rapport de résolution
        field_path: Fichier NWAV de la solution
        diagnostics: Résultat de verify_solution (en_dict), optionnel
    """
    _ecrire_json(path, report_document(report, field_path, diagnostics))


def read_report(path: Chemin) -> Dict:
    return _lire_json(path)


def trace_header(dim: int) -> List[str]:
    return ["t", "mass", "energy", "kinetic", "orbit_distance"] + [f"momentum_{a}" for a in AXES[:dim]]


def write_trace(path: Chemin, trace: EvolutionTrace) -> None:
    """
    Écrit la trace en CSV : t, mass, energy, kinetic, orbit_distance puis une colonne
    d'impulsion par axe (orbit_distance vaut nan sans référence).
    """
    dim = trace.momentum.shape[1] if trace.momentum.ndim == 2 else 0
    distances = trace.orbit_distance if trace.orbit_distance is not None else np.full(len(trace), np.nan)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, delimiter=",")
            writer.writerow(trace_header(dim))
            for i in range(len(trace)):
                ligne = [trace.times[i], trace.mass[i], trace.energy[i], trace.kinetic[i], distances[i]]
                ligne += list(trace.momentum[i])
                writer.writerow([repr(float(x)) for x in ligne])
    except OSError as e:
        raise ErreurEntreeSortie(str(path), str(e)) from e


def write_rows(path: Chemin, colonnes: Sequence[str], lignes: Iterable[Dict]) -> None:
    """CSV générique à en-tête fixe (balayages, tables de fibrage)."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(colonnes), extrasaction="ignore")
            writer.writeheader()
            for ligne in lignes:
                writer.writerow({c: (repr(v) if isinstance(v, float) else v) for c, v in ligne.items()})
    except OSError as e:
        raise ErreurEntreeSortie(str(path), str(e)) from e


COLONNES_FIBRE = ["s", "g", "g1", "g2", "kind", "tangent_warning"]


def fiber_rows(points: Iterable[FiberPoint]) -> List[Dict]:
    return [{"s": p.s, "g": p.g, "g1": p.g1, "g2": p.g2,
             "kind": p.kind.value if p.kind is not None else "",
             "tangent_warning": p.tangent_warning} for p in points]


# Registre des références

class RegistreReferences:
    """
    Enregistrements de Hartree indexés par (γ, c, empreinte de grille), dans un
    fichier JSON unique.
    """

    def __init__(self, chemin: Chemin):
        self.chemin = Path(chemin)

    def _charger(self) -> Dict[str, Dict]:
        if not self.chemin.exists():
            return {}
        return _lire_json(self.chemin)

    def enregistrer(self, record: BaselineRecord) -> None:
        entrees = self._charger()
        entrees[record.cle] = asdict(record)
        temporaire = self.chemin.with_suffix(".tmp")
        try:
            self.chemin.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ErreurEntreeSortie(str(self.chemin.parent), str(e)) from e
        _ecrire_json(temporaire, entrees)
        try:
            os.replace(temporaire, self.chemin)
        except OSError as e:
            raise ErreurEntreeSortie(str(self.chemin), str(e)) from e
        logger.info("Référence enregistrée: %s", record.cle)

    def obtenir(self, gamma: float, c: float, empreinte: str) -> BaselineRecord:
        """
        Raises:
            ErreurEnregistrementManquant: aucune référence pour cette clé
        """
        cle = record_key(gamma, c, empreinte)
        entrees = self._charger()
        if cle not in entrees:
            raise ErreurEnregistrementManquant(cle)
        return BaselineRecord(**entrees[cle])

    def __contains__(self, cle: str) -> bool:
        return cle in self._charger()


class ExporteurResultats:
    """
    Gère l'export des artefacts d'une commande dans un dossier horodaté.
    """

    def __init__(self, dossier_sortie: Chemin = "resultats", prefixe: str = "run"):
        """
        Initialise l'exporteur.

        Args:
            dossier_sortie: Dossier racine des résultats
            prefixe: Préfixe du sous-dossier (nom de la commande)
        """
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        self.dossier_sortie = Path(dossier_sortie) / f"{prefixe}_{self.timestamp}"
        try:
            self.dossier_sortie.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ErreurEntreeSortie(str(self.dossier_sortie), str(e)) from e

    def _chemin(self, nom_fichier: str) -> Path:
        return self.dossier_sortie / nom_fichier

    def exporter_champ(self, field: Field, nom_fichier: str = "solution.nwav") -> str:
        chemin = self._chemin(nom_fichier)
        write_field(chemin, field)
        logger.info("✅ Export champ réussi: %s", chemin)
        return str(chemin)

    def exporter_rapport(self, report: SolveReport, diagnostics: Optional[Dict] = None,
                         prefixe: Optional[str] = None) -> str:
        """
        Exporte la solution (NWAV) et son rapport (JSON).

        Returns:
            Chemin du rapport JSON
        """
        base = prefixe or report.branch.value.lower()
        champ = self.exporter_champ(report.solution, f"{base}.nwav")
        chemin = self._chemin(f"{base}_rapport.json")
        write_report(chemin, report, champ, diagnostics)
        logger.info("✅ Export rapport JSON réussi: %s", chemin)
        return str(chemin)

    def exporter_trace(self, trace: EvolutionTrace, nom_fichier: str = "trace.csv") -> str:
        chemin = self._chemin(nom_fichier)
        write_trace(chemin, trace)
        logger.info("✅ Export trace CSV réussi: %s", chemin)
        return str(chemin)

    def exporter_csv(self, colonnes: Sequence[str], lignes: Iterable[Dict], nom_fichier: str) -> str:
        chemin = self._chemin(nom_fichier)
        write_rows(chemin, colonnes, lignes)
        logger.info("✅ Export CSV réussi: %s", chemin)
        return str(chemin)

    def exporter_json(self, donnees: Dict, nom_fichier: str) -> str:
        chemin = self._chemin(nom_fichier)
        _ecrire_json(chemin, {"metadata": {"date_export": datetime.now().isoformat()}, **donnees})
        logger.info("✅ Export JSON réussi: %s", chemin)
        return str(chemin)

    def exporter_rapport_texte(self, rapport: Dict, nom_fichier: str = "rapport_analyse.txt") -> str:
        """
        Exporte un rapport d'analyse (Analyseur.generer_rapport_complet) en texte.

        Args:
            rapport: Dictionnaire par sections
            nom_fichier: Nom du fichier

        Returns:
            Chemin du fichier créé
        """
        chemin = self._chemin(nom_fichier)
        titres = {"trace": "ÉVOLUTION TEMPORELLE", "balayage": "BALAYAGE DE PARAMÈTRES",
                  "diagnostics": "VÉRIFICATION DE LA SOLUTION"}
        try:
            with open(chemin, "w", encoding="utf-8") as f:
                f.write("=" * 80 + "\n")
                f.write(" " * 28 + "RAPPORT D'ANALYSE\n")
                f.write("=" * 80 + "\n\n")
                f.write(f"Date de génération: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n\n")
                for section, contenu in rapport.items():
                    f.write(titres.get(section, section.upper()) + "\n")
                    f.write("-" * 80 + "\n")
                    for cle, valeur in contenu.items():
                        f.write(f"{cle}: {valeur}\n")
                    f.write("\n")
        except OSError as e:
            raise ErreurEntreeSortie(str(chemin), str(e)) from e
        logger.info("✅ Export rapport texte réussi: %s", chemin)
        return str(chemin)
