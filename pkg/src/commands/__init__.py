from .curate import curate_command
from .datasets import datasets
from .eval import ablate_command, eval_command
from .gen import gen
from .report import compare_command, report_command

COMMANDS = [gen, curate_command, eval_command, ablate_command, report_command, compare_command, datasets]

__all__ = ["COMMANDS"]
