from .adapters import ADAPTERS, collect_rows, prepare

__all__ = ["ADAPTERS", "collect_rows", "prepare"]
