import csv
import json

import numpy as np
import pytest

from ondes_vdw.core.dynamique import EvolutionTrace
from ondes_vdw.core.exceptions.exceptions import (ErreurEnregistrementManquant, ErreurEntreeSortie,
                                                  ErreurFormatFichier, MagicMismatch, TruncatedPayload,
                                                  VersionMismatch)
from ondes_vdw.core.solveur import BaselineRecord, Branch, SolveReport
from ondes_vdw.inputOutput.export import (EN_TETE, MAGIC, ExporteurResultats, RegistreReferences, fiber_rows,
                                          read_field, read_report, trace_header, write_field, write_report,
                                          write_rows, write_trace)
from ondes_vdw.models.fibrage import FiberKind, FiberPoint, membership
from ondes_vdw.models.fonctionnelle import FunctionalValues, Triple
from ondes_vdw.models.grille import random_band_limited


@pytest.fixture
def rapport_global(gaussienne, params_cas_iv):
    triple = Triple(1.5, 0.41, 0.37)
    valeurs = FunctionalValues.depuis_triple(triple, 1.0, params_cas_iv).avec_lambda(0.123456789)
    return SolveReport(Branch.GLOBAL, gaussienne, valeurs, 0.123456789, 3.2e-7, 4.1e-4, 812, True,
                       membership(triple, params_cas_iv, None), valeurs.E, asymmetry=1e-15)


@pytest.fixture
def trace_courte():
    return EvolutionTrace(np.array([0.0, 0.5, 1.0]), np.array([-1.0, -1.0, -1.0]), np.ones(3),
                          np.array([[0.0, 0.1, 0.2], [0.0, 0.1, 0.2], [0.0, 0.1, 0.2]]), np.full(3, 2.0),
                          None, np.ones(3))


class TestChampBinaire:
    """Tests pour le format NWAV."""

    def test_aller_retour_complexe(self, tmp_path, grille_petite, rng):
        champ = random_band_limited(grille_petite, rng, 2.0)
        write_field(tmp_path / "u.nwav", champ)
        relu = read_field(tmp_path / "u.nwav")

        assert relu.grid == grille_petite
        assert relu.is_complex
        assert np.array_equal(relu.values, champ.values)

    def test_champ_reel_elargi(self, tmp_path, gaussienne):
        """Un champ réel relu avec as_complex a des parties imaginaires nulles."""
        write_field(tmp_path / "u.nwav", gaussienne)

        assert not read_field(tmp_path / "u.nwav").is_complex
        relu = read_field(tmp_path / "u.nwav", as_complex=True)
        assert relu.is_complex
        assert np.array_equal(relu.values.real, gaussienne.values)
        assert np.all(relu.values.imag == 0.0)

    def test_taille_du_fichier(self, tmp_path, gaussienne):
        write_field(tmp_path / "u.nwav", gaussienne)

        assert (tmp_path / "u.nwav").stat().st_size == EN_TETE.size + 8 * gaussienne.grid.size

    def test_signature_invalide(self, tmp_path, gaussienne):
        chemin = tmp_path / "u.nwav"
        write_field(chemin, gaussienne)
        contenu = bytearray(chemin.read_bytes())
        contenu[:4] = b"XXXX"
        chemin.write_bytes(bytes(contenu))
        with pytest.raises(MagicMismatch):
            read_field(chemin)

    def test_version_inconnue(self, tmp_path):
        chemin = tmp_path / "u.nwav"
        chemin.write_bytes(EN_TETE.pack(MAGIC, 2, 1, 8, 1.0, 0) + bytes(64))
        with pytest.raises(VersionMismatch):
            read_field(chemin)

    def test_charge_tronquee(self, tmp_path, gaussienne):
        chemin = tmp_path / "u.nwav"
        write_field(chemin, gaussienne)
        chemin.write_bytes(chemin.read_bytes()[:-8])
        with pytest.raises(TruncatedPayload):
            read_field(chemin)

    def test_en_tete_tronque(self, tmp_path):
        chemin = tmp_path / "u.nwav"
        chemin.write_bytes(MAGIC)
        with pytest.raises(TruncatedPayload):
            read_field(chemin)

    def test_octets_excedentaires(self, tmp_path):
        chemin = tmp_path / "u.nwav"
        chemin.write_bytes(EN_TETE.pack(MAGIC, 1, 1, 8, 1.0, 0) + bytes(72))
        with pytest.raises(ErreurFormatFichier):
            read_field(chemin)

    def test_grille_invalide_dans_l_en_tete(self, tmp_path):
        chemin = tmp_path / "u.nwav"
        chemin.write_bytes(EN_TETE.pack(MAGIC, 1, 1, 12, 1.0, 0) + bytes(96))
        with pytest.raises(ErreurFormatFichier):
            read_field(chemin)

    def test_fichier_absent(self, tmp_path):
        with pytest.raises(ErreurEntreeSortie):
            read_field(tmp_path / "absent.nwav")


class TestRapports:
    """Tests pour les rapports JSON et les CSV."""

    def test_rapport_json(self, tmp_path, rapport_global):
        chemin = tmp_path / "global.json"
        write_report(chemin, rapport_global, "global.nwav", {"grad_residual": 1e-7})
        document = read_report(chemin)

        assert document["branch"] == "Global"
        assert document["lambda"] == 0.123456789
        assert document["values"]["A"] == 1.5
        assert document["flags"]["on_P"] is not None
        assert document["grid"] == {"dim": 3, "points_per_axis": 16, "half_length": 8.0}
        assert document["solution_file"] == "global.nwav"
        assert document["diagnostics"]["grad_residual"] == 1e-7

    def test_json_invalide(self, tmp_path):
        chemin = tmp_path / "casse.json"
        chemin.write_text("{", encoding="utf-8")
        with pytest.raises(ErreurFormatFichier):
            read_report(chemin)

    def test_en_tete_trace(self):
        assert trace_header(3) == ["t", "mass", "energy", "kinetic", "orbit_distance",
                                   "momentum_x", "momentum_y", "momentum_z"]
        assert len(trace_header(1)) == 6

    def test_trace_csv(self, tmp_path, trace_courte):
        chemin = tmp_path / "trace.csv"
        write_trace(chemin, trace_courte)
        with open(chemin, newline="", encoding="utf-8") as f:
            lignes = list(csv.reader(f))

        assert lignes[0] == trace_header(3)
        assert len(lignes) == 4
        assert lignes[1][4] == "nan"
        assert float(lignes[2][7]) == 0.2

    def test_lignes_de_fibre(self, tmp_path):
        points = [FiberPoint(1.0, 0.5, 0.0, -1.0, FiberKind.LOCAL_MAX), FiberPoint(2.0, 0.4, 0.1, 0.2)]
        lignes = fiber_rows(points)
        write_rows(tmp_path / "fibre.csv", ["s", "g", "kind"], lignes)
        with open(tmp_path / "fibre.csv", newline="", encoding="utf-8") as f:
            relues = list(csv.DictReader(f))

        assert lignes[0]["kind"] == "LocalMax"
        assert relues[1]["kind"] == ""
        assert relues[0]["s"] == "1.0"


class TestRegistre:
    """Tests pour RegistreReferences."""

    @pytest.fixture
    def record(self):
        return BaselineRecord(2.5, 1.0, "abcdef", 0.21, 0.37, 1.0, "omega.nwav")

    def test_enregistrer_puis_obtenir(self, tmp_path, record):
        registre = RegistreReferences(tmp_path / "sous" / "registre.json")
        registre.enregistrer(record)

        assert registre.obtenir(2.5, 1.0, "abcdef") == record
        assert record.cle in registre
        assert not (tmp_path / "sous" / "registre.tmp").exists()

    def test_plusieurs_references(self, tmp_path, record):
        registre = RegistreReferences(tmp_path / "registre.json")
        registre.enregistrer(record)
        registre.enregistrer(BaselineRecord(2.8, 1.0, "abcdef", 0.3, 0.5, 1.0))

        assert registre.obtenir(2.8, 1.0, "abcdef").S_gamma == 0.5
        assert len(json.loads((tmp_path / "registre.json").read_text(encoding="utf-8"))) == 2

    def test_reference_manquante(self, tmp_path, record):
        registre = RegistreReferences(tmp_path / "registre.json")
        registre.enregistrer(record)
        with pytest.raises(ErreurEnregistrementManquant) as erreur:
            registre.obtenir(2.5, 2.0, "abcdef")
        assert "c=2.0" in erreur.value.cle


class TestExporteur:
    """Tests pour ExporteurResultats."""

    def test_dossier_horodate(self, tmp_path):
        exporteur = ExporteurResultats(tmp_path, "baseline")

        assert exporteur.dossier_sortie.is_dir()
        assert exporteur.dossier_sortie.name.startswith("baseline_")

    def test_exporter_rapport(self, tmp_path, rapport_global):
        exporteur = ExporteurResultats(tmp_path, "solve-global")
        chemin = exporteur.exporter_rapport(rapport_global)
        document = read_report(chemin)

        assert chemin.endswith("global_rapport.json")
        assert read_field(document["solution_file"]).grid == rapport_global.solution.grid

    def test_exporter_json_avec_metadonnees(self, tmp_path):
        chemin = ExporteurResultats(tmp_path).exporter_json({"regime": "IV"}, "classification.json")
        document = read_report(chemin)

        assert document["regime"] == "IV"
        assert "date_export" in document["metadata"]

    def test_rapport_texte(self, tmp_path):
        chemin = ExporteurResultats(tmp_path).exporter_rapport_texte({"trace": {"derive_masse": 1e-13}})
        with open(chemin, encoding="utf-8") as f:
            texte = f.read()

        assert "RAPPORT D'ANALYSE" in texte
        assert "ÉVOLUTION TEMPORELLE" in texte
        assert "derive_masse: 1e-13" in texte

    def test_exporter_trace(self, tmp_path, trace_courte):
        chemin = ExporteurResultats(tmp_path).exporter_trace(trace_courte)

        assert chemin.endswith("trace.csv")
