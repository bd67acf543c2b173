import csv
import json

import pytest

from ondes_vdw import main as cli
from ondes_vdw.core.exceptions.exceptions import ErreurConfiguration, ErreurConvergence
from ondes_vdw.main import construire_config, construire_parseur, fusionner, nombre_workers, run_command


def _resume(capsys):
    """Dernière ligne de la sortie standard : le résumé JSON de la commande."""
    return json.loads(capsys.readouterr().out.strip().splitlines()[-1])


@pytest.fixture
def config_rapide(tmp_path):
    chemin = tmp_path / "config.json"
    chemin.write_text(json.dumps({
        "model": {"dim": 3, "alpha": 2.5, "beta": 2.8, "mu_beta": -0.02, "mass_target": 2.0},
        "grid": {"dim": 3, "points": 16, "half_length": 10.0},
        "solver": {"max_iter": 3000, "grad_tol": 1e-5, "pohozaev_tol": 5e-2, "log_every": 1000},
        "dynamics": {"T": 0.01, "dt": 1e-3, "monitor_cadence": 5, "delta0": 1e-2},
    }), encoding="utf-8")
    return str(chemin)


class TestConfiguration:
    """Tests pour la fusion et la validation de la configuration."""

    def test_surcharges_de_la_ligne_de_commande(self):
        options = construire_parseur().parse_args(["classify", "--alpha", "2.2", "--points", "64", "--out", "x"])
        donnees = fusionner({"model": {"alpha": 2.5}}, options, "test")

        assert donnees["model"]["alpha"] == 2.2
        assert donnees["grid"]["points"] == 64
        assert donnees["output_dir"] == "x"

    def test_fusion_ne_modifie_pas_l_original(self):
        options = construire_parseur().parse_args(["classify", "--alpha", "2.2"])
        original = {"model": {"alpha": 2.5}}
        fusionner(original, options, "test")

        assert original["model"]["alpha"] == 2.5

    def test_dimension_incoherente(self):
        donnees = {"model": {"dim": 3, "alpha": 2.5, "beta": 2.8, "mu_beta": -0.05, "mass_target": 1.0},
                   "grid": {"dim": 2}}
        with pytest.raises(ErreurConfiguration):
            construire_config(donnees, "test")

    def test_cle_inconnue_dans_une_section(self):
        donnees = {"model": {"dim": 3, "alpha": 2.5, "beta": 2.8, "mu_beta": -0.05, "mass_target": 1.0},
                   "solver": {"tolerance": 1e-6}}
        with pytest.raises(ErreurConfiguration):
            construire_config(donnees, "test")

    def test_cle_manquante_dans_model(self):
        with pytest.raises(ErreurConfiguration):
            construire_config({"model": {"dim": 3, "alpha": 2.5}}, "test")

    @pytest.mark.parametrize("section, cle, valeur", [
        ("grid", "points", "seize"),
        ("grid", "points", 16.5),
        ("solver", "max_iter", None),
        ("dynamics", "dt", [1e-3]),
        ("model", "alpha", "2.5"),
        ("grid", "singular_rule", 3),
    ])
    def test_type_invalide(self, section, cle, valeur):
        donnees = {"model": {"dim": 3, "alpha": 2.5, "beta": 2.8, "mu_beta": -0.05, "mass_target": 1.0}}
        donnees.setdefault(section, {})[cle] = valeur
        with pytest.raises(ErreurConfiguration):
            construire_config(donnees, "test")

    def test_dynamique_invalide(self):
        donnees = {"model": {"dim": 3, "alpha": 2.5, "beta": 2.8, "mu_beta": -0.05, "mass_target": 1.0},
                   "dynamics": {"dt": -1.0}}
        with pytest.raises(ErreurConfiguration):
            construire_config(donnees, "test")

    def test_configuration_par_defaut(self):
        donnees = cli.charger_config(cli.CONFIG_DEFAUT)
        config = construire_config(donnees, "defaut")

        assert config.model.mu_beta == -0.05
        assert config.grille().shape == (32, 32, 32)
        assert config.solver.reglages().pohozaev_tol == 1e-3


class TestNombreWorkers:
    """Tests pour le plafond NWAV_THREADS."""

    def test_plafond_explicite(self, monkeypatch):
        monkeypatch.setenv("NWAV_THREADS", "2")

        assert nombre_workers(5) == 2
        assert nombre_workers(1) == 1

    def test_valeur_par_defaut(self, monkeypatch):
        monkeypatch.delenv("NWAV_THREADS", raising=False)

        assert 1 <= nombre_workers(3) <= 3

    @pytest.mark.parametrize("valeur", ["abc", "0", "-2"])
    def test_valeur_invalide(self, monkeypatch, valeur):
        monkeypatch.setenv("NWAV_THREADS", valeur)
        with pytest.raises(ErreurConfiguration):
            nombre_workers(4)


class TestCommandes:
    """Tests de bout en bout des commandes et des codes de sortie."""

    def test_classify_cas_iv(self, capsys):
        code = run_command(["classify"])
        resume = _resume(capsys)

        assert code == 0
        assert resume["command"] == "classify"
        assert resume["exit_code"] == 0
        assert resume["case"] == "IV"

    def test_classify_beta_critique(self, capsys):
        """β = min(N, 4) n'est pas classé mais la commande réussit."""
        code = run_command(["classify", "--beta", "3.0"])

        assert code == 0
        assert _resume(capsys)["case"] == "Unclassified"

    def test_type_invalide_code_un(self, config_rapide, tmp_path, capsys):
        """Une valeur de configuration mal typée donne le code 1, pas une exception."""
        with open(config_rapide, encoding="utf-8") as f:
            donnees = json.load(f)
        donnees["grid"]["points"] = "seize"
        chemin = tmp_path / "mal_typee.json"
        chemin.write_text(json.dumps(donnees), encoding="utf-8")
        code = run_command(["solve-local", "--config", str(chemin), "--out", str(tmp_path)])

        assert code == 1
        assert "grid.points" in _resume(capsys)["error"]

    def test_classify_cas_iii(self, capsys):
        run_command(["classify", "--alpha", "2.2", "--beta", "2.6", "--mu-beta", "0.5"])

        assert _resume(capsys)["case"] == "III"

    def test_option_inconnue(self, capsys):
        assert run_command(["classify", "--inconnue", "1"]) == 1
        assert _resume(capsys)["exit_code"] == 1

    def test_commande_inconnue(self, capsys):
        assert run_command(["resoudre"]) == 1

    def test_configuration_absente(self, tmp_path, capsys):
        assert run_command(["classify", "--config", str(tmp_path / "absente.json")]) == 1
        assert "Configuration" in _resume(capsys)["error"]

    def test_cle_racine_inconnue(self, tmp_path, capsys):
        chemin = tmp_path / "config.json"
        chemin.write_text(json.dumps({"model": {}, "inconnue": 1}), encoding="utf-8")

        assert run_command(["classify", "--config", str(chemin)]) == 1

    def test_parametres_invalides(self, config_rapide, tmp_path, capsys):
        assert run_command(["fibering-scan", "--config", config_rapide, "--alpha", "2.8",
                            "--triple", "1,4,1", "--out", str(tmp_path)]) == 1

    def test_resolution_sans_reference(self, config_rapide, tmp_path, capsys):
        """Sans baseline préalable, la résolution échoue avec le code 1."""
        code = run_command(["solve-global", "--config", config_rapide, "--out", str(tmp_path)])
        resume = _resume(capsys)

        assert code == 1
        assert "baseline" in resume["error"]

    def test_fibering_scan(self, config_rapide, tmp_path, capsys):
        code = run_command(["fibering-scan", "--config", config_rapide, "--mu-beta", "-0.05", "--mass", "1.0",
                            "--triple", "1,4,1", "--out", str(tmp_path)])
        resume = _resume(capsys)

        assert code == 0
        assert resume["kinds"] == ["LocalMax", "LocalMin"]
        with open(resume["csv"], newline="", encoding="utf-8") as f:
            lignes = list(csv.DictReader(f))
        assert len(lignes) == 2
        assert len(list(tmp_path.glob("fibering_scan_*/table_fibre.csv"))) == 1

    @pytest.mark.parametrize("triple", [None, "1,4", "1,a,1"])
    def test_fibering_scan_triple_invalide(self, config_rapide, tmp_path, capsys, triple):
        argv = ["fibering-scan", "--config", config_rapide, "--out", str(tmp_path)]
        if triple is not None:
            argv += ["--triple", triple]

        assert run_command(argv) == 1

    def test_balayage_vide(self, config_rapide, tmp_path, capsys):
        assert run_command(["sweep", "--config", config_rapide, "--axis", "mu_beta", "--values", "",
                            "--out", str(tmp_path)]) == 1

    def test_balayage_axe_inconnu(self, config_rapide, tmp_path, capsys):
        assert run_command(["sweep", "--config", config_rapide, "--axis", "gamma", "--values", "1",
                            "--out", str(tmp_path)]) == 1

    def test_evolve_court(self, config_rapide, tmp_path, capsys):
        code = run_command(["evolve", "--config", config_rapide, "--points", "16", "--box", "8",
                            "--mass", "1.0", "--out", str(tmp_path)])
        resume = _resume(capsys)

        assert code == 0
        assert resume["samples"] == 3
        assert resume["derive_masse"] < 1e-12
        assert len(list(tmp_path.glob("evolve_*/final.nwav"))) == 1
        assert len(list(tmp_path.glob("evolve_*/rapport_analyse.txt"))) == 1

    def test_donnee_initiale_absente(self, config_rapide, tmp_path, capsys):
        """Un fichier --init illisible donne le code 3."""
        code = run_command(["evolve", "--config", config_rapide, "--init", str(tmp_path / "absent.nwav"),
                            "--out", str(tmp_path)])

        assert code == 3

    def test_non_convergence(self, config_rapide, tmp_path, capsys, monkeypatch):
        def echec(config, options):
            raise ErreurConvergence("Global", "non convergé après 1 itérations")
        monkeypatch.setattr(cli, "commande_fibrage", echec)

        assert run_command(["fibering-scan", "--config", config_rapide, "--out", str(tmp_path)]) == 2
        assert "Convergence" in _resume(capsys)["error"]


class TestBalayage:
    """Balayage réel sur une grille 16³, sans parallélisme."""

    def test_energie_locale_monotone_dans_le_csv(self, config_rapide, tmp_path, capsys, monkeypatch):
        """E(u⁻) lue dans le CSV ne décroît pas quand |μ_β| croît."""
        monkeypatch.setenv("NWAV_THREADS", "1")
        code = run_command(["sweep", "--config", config_rapide, "--axis", "mu_beta", "--values", "-0.03,-0.01",
                            "--out", str(tmp_path)])
        resume = _resume(capsys)
        with open(resume["csv"], newline="", encoding="utf-8") as f:
            lignes = sorted(csv.DictReader(f), key=lambda l: abs(float(l["value"])))

        assert code == (2 if resume["echecs"] else 0)
        assert resume["energie_locale_croissante"]
        assert [float(l["value"]) for l in lignes] == [-0.01, -0.03]
        assert all(l["converged_local"] == "True" for l in lignes)
        energies = [float(l["E_local"]) for l in lignes]
        assert 0 < energies[0] <= energies[1]


@pytest.mark.lent
class TestChaineComplete:
    """baseline puis résolutions et balayage sur une grille 16³."""

    def test_baseline_puis_solve_local(self, config_rapide, tmp_path, capsys):
        assert run_command(["baseline", "--config", config_rapide, "--out", str(tmp_path)]) == 0
        resume = _resume(capsys)
        assert len(resume["records"]) == 2
        assert (tmp_path / "references" / "registre.json").exists()

        assert run_command(["solve-local", "--config", config_rapide, "--out", str(tmp_path)]) == 0
        resume = _resume(capsys)
        assert resume["branch"] == "Local"
        assert resume["converged"]
        assert "mu_admissible" in resume

    def test_balayage_sequentiel(self, config_rapide, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("NWAV_THREADS", "1")
        code = run_command(["sweep", "--config", config_rapide, "--axis", "mu_beta", "--values", "-0.02,-0.03",
                            "--out", str(tmp_path)])
        resume = _resume(capsys)

        assert resume["lignes"] == 2
        assert code == (2 if resume["echecs"] else 0)
