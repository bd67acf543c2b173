import cProfile
import pstats
import io
import sys

from ondes_vdw.core.dynamique import Monitors, evolve
from ondes_vdw.core.solveur import Solveur, SolverSettings
from ondes_vdw.models.fonctionnelle import ModelParams, build_kernels
from ondes_vdw.models.grille import make_grid


def creer_probleme_test():
    """Crée une instance du régime IV sur une grille 16³ adaptée à c = 2."""
    params = ModelParams(dim=3, alpha=2.5, beta=2.8, mu_beta=-0.02, mass_target=2.0)
    grille = make_grid(3, 16, 10.0)
    return params, grille


def _ecrire_rapport(pr, titre):
    for cle, libelle in ((pstats.SortKey.CUMULATIVE, "temps cumulé"), (pstats.SortKey.TIME, "temps propre")):
        s = io.StringIO()
        ps = pstats.Stats(pr, stream=s).sort_stats(cle)

        sys.stdout.write("\n" + "=" * 80 + "\n")
        sys.stdout.write(f"       {titre} (Top 10 par {libelle})      \n")
        sys.stdout.write("=" * 80 + "\n")
        ps.print_stats(10)
        sys.stdout.write(s.getvalue())


def test_profilage_resolution():
    """
    Lance la référence de Hartree puis la branche Local sous cProfile.
    La FFT et la convolution de Riesz doivent dominer le temps cumulé.
    """
    params, grille = creer_probleme_test()
    reglages = SolverSettings(max_iter=3000, grad_tol=1e-5, pohozaev_tol=5e-2, log_every=1000)

    pr = cProfile.Profile()
    pr.enable()

    solveur = Solveur(grille, reglages)
    reference = solveur.solve_hartree_baseline(params.alpha, params.mass_target)
    solveur.solve_local(params, init=reference.solution)

    pr.disable()

    _ecrire_rapport(pr, "PROFILAGE DE LA DESCENTE")


def test_profilage_dynamique():
    """Profile 200 pas de Strang depuis la référence de Hartree."""
    params, grille = creer_probleme_test()
    reference = Solveur(grille, SolverSettings(max_iter=3000, grad_tol=1e-5, pohozaev_tol=5e-2)) \
        .solve_hartree_baseline(params.alpha, params.mass_target)
    noyaux = build_kernels(params, grille)

    pr = cProfile.Profile()
    pr.enable()

    # 200 pas, échantillonnage tous les 20
    evolve(reference.solution, 0.2, 1e-3, params, noyaux, Monitors(cadence=20, reference=reference.solution))

    pr.disable()

    _ecrire_rapport(pr, "PROFILAGE DE L'INTÉGRATION")
