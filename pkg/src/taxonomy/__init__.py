from .registry import Taxonomy, load_taxonomy

__all__ = ["Taxonomy", "load_taxonomy"]
