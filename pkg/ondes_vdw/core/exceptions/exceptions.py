"""
Module définissant les exceptions personnalisées du solveur d'ondes stationnaires.
"""
from typing import Any, Optional


class ErreurOndes(Exception):
    """
    Classe de base pour toutes les exceptions du paquet.
    """
    pass


class ErreurGrille(ErreurOndes):
    """
    Exception levée lors d'une erreur liée à la grille
    (ex: M non puissance de deux, grilles incompatibles, boîte trop petite).
    """
    def __init__(self, message: str):
        super().__init__(f"Erreur Grille: {message}")


class ErreurParametres(ErreurOndes):
    """
    Exception levée lorsqu'un paramètre du modèle ou d'une opération est invalide.
    """
    def __init__(self, message: str):
        super().__init__(f"Erreur Paramètres: {message}")


class ErreurConfiguration(ErreurOndes):
    """
    Exception levée lors d'un problème de chargement ou de validation de la
    configuration (ex: fichier manquant, format invalide, clé inconnue).
    """
    def __init__(self, fichier: str, message: str):
        self.fichier = fichier
        super().__init__(f"Erreur Configuration dans {fichier}: {message}")


class ErreurConvergence(ErreurOndes):
    """
    Exception levée lorsqu'une descente ne converge pas ou s'effondre.
    Le rapport partiel est conservé pour diagnostic.
    """
    def __init__(self, branche: str, message: str, rapport: Optional[Any] = None):
        self.branche = branche
        self.rapport = rapport
        super().__init__(f"Erreur Convergence ({branche}): {message}")


class ErreurFibrage(ErreurOndes):
    """
    Exception levée lorsque l'encadrement d'une racine de g' échoue.
    """
    def __init__(self, message: str):
        super().__init__(f"Erreur Fibrage: {message}")


class ErreurProjection(ErreurOndes):
    """
    Exception levée lorsque la projection sur P⁻ n'est pas garantie
    (inégalité V_D violée). Porte le déficit Γ·A^{α/2} − B_α.
    """
    def __init__(self, deficit: float, message: str = ""):
        self.deficit = deficit
        texte = f"Erreur Projection: déficit Γ·A^(α/2) − B_α = {deficit:.6e}"
        if message:
            texte += f" ({message})"
        super().__init__(texte)


class ErreurDynamique(ErreurOndes):
    """
    Exception levée lorsque l'intégration temporelle produit des valeurs non finies.
    La dernière trace valide est conservée.
    """
    def __init__(self, message: str, trace: Optional[Any] = None):
        self.trace = trace
        super().__init__(f"Erreur Dynamique: {message}")


class ErreurEnregistrementManquant(ErreurOndes):
    """
    Exception levée lorsqu'un enregistrement de référence (baseline) est absent.
    """
    def __init__(self, cle: str):
        self.cle = cle
        super().__init__(
            f"Enregistrement baseline manquant pour {cle}: "
            f"lancer d'abord la commande baseline avec les mêmes paramètres"
        )


class ErreurEntreeSortie(ErreurOndes):
    """
    Exception levée lors d'un échec de lecture ou d'écriture.
    """
    def __init__(self, chemin: str, message: str):
        self.chemin = chemin
        super().__init__(f"Erreur Entrée/Sortie sur {chemin}: {message}")


class ErreurFormatFichier(ErreurEntreeSortie):
    """
    Classe de base des erreurs de format d'un fichier de champ.
    """
    pass


class MagicMismatch(ErreurFormatFichier):
    """Signature de fichier différente de NWAV."""
    pass


class VersionMismatch(ErreurFormatFichier):
    """Version de format non prise en charge."""
    pass


class TruncatedPayload(ErreurFormatFichier):
    """Charge utile plus courte que l'en-tête ne l'annonce."""
    pass
