from .core import (
    VANILLA_HASH,
    average,
    build_ensembles,
    classify,
    classify_vanilla,
    ensemble_class,
    vanilla_ensembles,
)

__all__ = [
    "VANILLA_HASH",
    "average",
    "build_ensembles",
    "classify",
    "classify_vanilla",
    "ensemble_class",
    "vanilla_ensembles",
]
