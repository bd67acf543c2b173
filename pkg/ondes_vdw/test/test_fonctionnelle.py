import numpy as np
import pytest

from ondes_vdw.core.exceptions.exceptions import ErreurGrille, ErreurParametres
from ondes_vdw.models.fonctionnelle import (FunctionalValues, ModelParams, Regime, Triple, action,
                                            admissible_factor, build_kernels, classify_parameters,
                                            coercivity_lower_bound, directional_derivative, energy, evaluate,
                                            gamma_constant, gn_constant, gn_quotient, interpolation_slack,
                                            kinetic_bound_from_energy, l2_gradient, lagrange_multiplier,
                                            lagrange_multiplier_pohozaev, mu_star, nehari_residual, pohozaev,
                                            pohozaev_identity_residual, regime_classify, theorem_bounds,
                                            thresholds)
from ondes_vdw.models.grille import (GaussianProfile, inner_product, kinetic, make_grid, mass,
                                     random_band_limited, sample_profile)
from ondes_vdw.models.riesz import b_gaussian, b_value, build_kernel


class TestParametres:
    """Tests pour ModelParams et la classification."""

    def test_exemple_regime_iv(self):
        assert classify_parameters(3, 2.5, 2.8, -0.05) is Regime.CASE_IV

    @pytest.mark.parametrize("alpha,beta,mu,attendu", [
        (1.0, 1.5, 0.5, Regime.CASE_I),
        (1.5, 1.0, -0.5, Regime.CASE_I),
        (1.5, 2.5, 0.5, Regime.CASE_II),
        (2.2, 2.6, 0.5, Regime.CASE_III),
        (2.6, 2.2, -0.5, Regime.CASE_III),
        (2.5, 2.8, -0.5, Regime.CASE_IV),
    ])
    def test_quatre_regimes(self, alpha, beta, mu, attendu):
        assert classify_parameters(3, alpha, beta, mu) is attendu

    def test_mu_nul_non_classe(self):
        assert classify_parameters(3, 2.5, 2.8, 0.0) is Regime.UNCLASSIFIED

    def test_beta_a_la_borne_non_classe(self):
        """β = min{N, 4} reste hors classification."""
        assert classify_parameters(3, 2.5, 3.0, -0.05) is Regime.UNCLASSIFIED

    def test_regime_negatif_sans_cas(self):
        """μ < 0 avec α < 2 < β ne correspond à aucun cas."""
        assert classify_parameters(3, 1.5, 2.5, -0.5) is Regime.UNCLASSIFIED

    def test_parametres_valides_regime(self, params_cas_iv):
        assert params_cas_iv.regime is Regime.CASE_IV
        assert regime_classify(params_cas_iv) is Regime.CASE_IV

    @pytest.mark.parametrize("kwargs", [
        dict(dim=3, alpha=3.0, beta=2.8, mu_beta=-0.05, mass_target=1.0),
        dict(dim=3, alpha=2.5, beta=2.5, mu_beta=-0.05, mass_target=1.0),
        dict(dim=3, alpha=2.5, beta=2.8, mu_beta=-0.05, mass_target=0.0),
        dict(dim=3, alpha=2.5, beta=2.8, mu_beta=float("inf"), mass_target=1.0),
        dict(dim=0, alpha=0.5, beta=0.2, mu_beta=-0.05, mass_target=1.0),
    ])
    def test_parametres_invalides(self, kwargs):
        with pytest.raises(ErreurParametres):
            ModelParams(**kwargs)

    def test_copie_avec_changement(self, params_cas_iv):
        autre = params_cas_iv.avec(mu_beta=-0.1)

        assert autre.mu_beta == -0.1
        assert params_cas_iv.mu_beta == -0.05


class TestFonctionnelles:
    """Tests pour l'énergie, Q et le gradient L²."""

    def test_energie_et_pohozaev_depuis_le_triple(self, params_cas_iv):
        triple = Triple(2.0, 1.0, 4.0)

        assert energy(triple, params_cas_iv) == pytest.approx(1.0 - 0.25 + 0.05)
        assert pohozaev(triple, params_cas_iv) == pytest.approx(2.0 - 2.5 / 4 + 0.05 * 2.8)

    def test_evaluation_gaussienne(self, gaussienne, noyaux_petits, params_cas_iv, grille_petite):
        valeurs = evaluate(gaussienne, params_cas_iv, noyaux_petits)

        assert valeurs.mass == pytest.approx(1.0)
        assert valeurs.A == pytest.approx(kinetic(gaussienne))
        assert valeurs.B_alpha == pytest.approx(b_value(build_kernel(grille_petite, 2.5), gaussienne))
        assert valeurs.E == pytest.approx(energy(valeurs.triple, params_cas_iv))
        assert valeurs.lam is None

    def test_noyaux_dimension_incompatible(self, params_cas_iv):
        with pytest.raises(ErreurGrille):
            build_kernels(params_cas_iv, make_grid(2, 16, 8.0))

    def test_gradient_contre_differences_finies(self, grille_petite, noyaux_petits, params_cas_iv):
        """Re⟨∇E(u), h⟩ contre (E(u+εh) − E(u−εh))/2ε sur des paires aléatoires."""
        rng = np.random.default_rng(42)
        eps = 1e-4
        for _ in range(20):
            u = random_band_limited(grille_petite, rng, 1.5)
            h = random_band_limited(grille_petite, rng, 1.5)
            plus = evaluate(u.avec_valeurs(u.values + eps * h.values), params_cas_iv, noyaux_petits).E
            moins = evaluate(u.avec_valeurs(u.values - eps * h.values), params_cas_iv, noyaux_petits).E
            numerique = (plus - moins) / (2.0 * eps)
            analytique = directional_derivative(u, h, params_cas_iv, noyaux_petits)

            assert analytique == pytest.approx(numerique, rel=1e-5, abs=1e-9)

    def test_gradient_nul_dans_la_direction_de_phase(self, gaussienne, noyaux_petits, params_cas_iv):
        """E est invariante par phase : Re⟨∇E(u), iu⟩ = 0."""
        gradient = l2_gradient(gaussienne, params_cas_iv, noyaux_petits)
        rotation = gaussienne.avec_valeurs(1j * gaussienne.values)

        assert inner_product(gradient, rotation).real == pytest.approx(0.0, abs=1e-12)


class TestMultiplicateur:
    """Tests pour λ et les résidus d'identité."""

    def test_lambda_depuis_le_triple(self, params_cas_iv):
        valeurs = FunctionalValues.depuis_triple(Triple(2.0, 1.0, 4.0), 1.0, params_cas_iv)

        assert lagrange_multiplier(valeurs, 1.0) == pytest.approx(1.0 - 0.05 * 4.0 - 2.0)

    def test_lambda_masse_invalide(self, params_cas_iv):
        valeurs = FunctionalValues.depuis_triple(Triple(2.0, 1.0, 4.0), 1.0, params_cas_iv)
        with pytest.raises(ErreurParametres):
            lagrange_multiplier(valeurs, 0.0)

    def test_deux_formes_de_lambda_sur_p(self, params_cas_iv):
        """Sur Q = 0 les deux expressions de λ coïncident."""
        a, bb = 3.0, 2.0
        ba = 4.0 * (a - params_cas_iv.mu_beta * params_cas_iv.beta * bb / 4.0) / params_cas_iv.alpha
        valeurs = FunctionalValues.depuis_triple(Triple(a, ba, bb), 1.0, params_cas_iv)

        assert valeurs.Q == pytest.approx(0.0, abs=1e-12)
        assert lagrange_multiplier(valeurs, 1.0) == pytest.approx(
            lagrange_multiplier_pohozaev(valeurs, 1.0, params_cas_iv))

    def test_residus_nuls_pour_un_point_critique_scalaire(self, params_cas_iv):
        """Nehari et Pohozaev en dimension N sont satisfaits quand λ vient du triple et Q = 0."""
        a, bb = 3.0, 2.0
        ba = 4.0 * (a - params_cas_iv.mu_beta * params_cas_iv.beta * bb / 4.0) / params_cas_iv.alpha
        valeurs = FunctionalValues.depuis_triple(Triple(a, ba, bb), 1.0, params_cas_iv)
        lam = lagrange_multiplier(valeurs, 1.0)

        assert nehari_residual(valeurs, lam, params_cas_iv) < 1e-12
        assert pohozaev_identity_residual(valeurs, lam, params_cas_iv) < 1e-12

    def test_action(self, params_cas_iv):
        valeurs = FunctionalValues.depuis_triple(Triple(2.0, 1.0, 4.0), 2.0, params_cas_iv)

        assert action(valeurs, 0.5) == pytest.approx(valeurs.E + 0.5)


class TestGagliardoNirenberg:
    """Tests pour S_γ et le quotient GN."""

    def test_constante_formule(self):
        attendu = (1.5 / 2.5) ** 1.25 * 4.0 / (1.5 * 2.0)
        assert gn_constant(2.5, 3, 2.0) == pytest.approx(attendu)

    def test_constante_entrees_invalides(self):
        with pytest.raises(ErreurParametres):
            gn_constant(2.5, 3, 0.0)
        with pytest.raises(ErreurParametres):
            gn_constant(3.5, 3, 1.0)

    def test_quotient_invariant_par_dilatation(self):
        """B s^γ/((A s²)^{γ/2}) = B/A^{γ/2}."""
        gamma, s = 2.5, 1.7
        assert gn_quotient(3.0 * s ** gamma, 2.0 * s * s, 1.0, gamma) == pytest.approx(
            gn_quotient(3.0, 2.0, 1.0, gamma))

    def test_quotient_gaussien_discret(self):
        """Le quotient d'une gaussienne échantillonnée rejoint la valeur exacte B_γ/(N/2)^{γ/2}."""
        grille = make_grid(3, 32, 8.0)
        u = sample_profile(grille, GaussianProfile(1.0, mass_target=1.0))
        b = b_value(build_kernel(grille, 2.5, "zeta"), u)

        attendu = b_gaussian(2.5, 1.0, 3) / 1.5 ** 1.25
        assert gn_quotient(b, kinetic(u), mass(u), 2.5) == pytest.approx(attendu, rel=5e-2)


class TestSeuils:
    """Tests pour Γ, μ*, la fenêtre admissible et les bornes."""

    def test_formules_explicites(self, params_cas_iv):
        a, b, c, mu, s_b, m = 2.5, 2.8, 1.0, 0.05, 0.3, 0.2
        gamma = 2 * 0.8 / 0.3 * (mu * b * 0.3 * s_b / (4 * 0.5)) ** (0.5 / 0.8)
        etoile = (4 * 0.5 / (a * 0.8 * s_b) * (0.3 / 0.8) ** (0.8 / 0.5)
                  * (b * 0.25 / (2 * a * a * 0.8 * m)) ** 0.4)

        assert gamma_constant(params_cas_iv, s_b) == pytest.approx(gamma)
        assert mu_star(params_cas_iv, m, s_b) == pytest.approx(etoile)

    def test_fenetre_admissible(self, params_cas_iv):
        seuils = thresholds(params_cas_iv, 0.2, 0.3, 0.4)

        assert seuils.mu_admissible == pytest.approx(
            min(seuils.mu_star, admissible_factor(params_cas_iv) * seuils.mu_star))
        assert seuils.certifie(-seuils.mu_admissible / 2)
        assert not seuils.certifie(-2.0 * seuils.mu_admissible)
        assert not seuils.certifie(0.0)

    def test_seuils_hors_regime_iv(self):
        params = ModelParams(3, 2.2, 2.6, 0.5, 1.0)
        with pytest.raises(ErreurParametres):
            thresholds(params, 0.2, 0.3)

    def test_seuils_entrees_non_positives(self, params_cas_iv):
        with pytest.raises(ErreurParametres):
            thresholds(params_cas_iv, -1.0, 0.3)

    def test_bornes_du_theoreme_positives(self, params_cas_iv):
        bornes = theorem_bounds(params_cas_iv, thresholds(params_cas_iv, 0.2, 0.3, 0.4))

        assert bornes.level_bound > 0
        assert bornes.kinetic_mid_bound > 0
        assert bornes.local_kinetic_floor > 0
        assert bornes.global_kinetic_floor > 0

    def test_plancher_local_absent_sans_s_alpha(self, params_cas_iv):
        bornes = theorem_bounds(params_cas_iv, thresholds(params_cas_iv, 0.2, 0.3))

        assert bornes.local_kinetic_floor is None


class TestCoercivite:
    """Tests pour la minoration de coercivité en dimension 3."""

    @pytest.fixture
    def params_forts(self, params_cas_iv):
        return params_cas_iv.avec(mu_beta=-1.0)

    def test_borne_cinetique_atteint_l_egalite(self, params_forts):
        borne = kinetic_bound_from_energy(0.3, 1.0, params_forts)

        assert coercivity_lower_bound(borne, params_forts) == pytest.approx(0.3, rel=1e-10)

    def test_energie_sous_le_minorant(self, params_forts):
        with pytest.raises(ErreurParametres):
            kinetic_bound_from_energy(-100.0, 1.0, params_forts)

    def test_interpolation_vraie_sur_gaussienne(self, params_cas_iv):
        """B_α ≤ εB_β + ε^{−θ/(1−θ)}B₁ pour la gaussienne (valeurs exactes)."""
        marge = interpolation_slack(b_gaussian(2.5, 1.0, 3), b_gaussian(2.8, 1.0, 3),
                                    b_gaussian(1.0, 1.0, 3), params_cas_iv)

        assert marge > 0
