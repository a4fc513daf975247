from .load_results import init_schema, load_trial

__all__ = ["init_schema", "load_trial"]
