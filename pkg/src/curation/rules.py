import logging
from pathlib import Path
from typing import Iterable, List

from src.errors import ConfigError
from src.schemas.curation import CompatibilityRule, CompatibilityVerdict, RuleTable, Verdict
from src.schemas.prompt import PromptCandidate
from src.utils.log import log_event
from src.utils.yaml_config import line_of, load_yaml, validate_model

logger = logging.getLogger(__name__)


def load_rules(path: Path) -> List[CompatibilityRule]:
    """Load the rule table; (scope, category, term) must be unique."""
    path = Path(path)
    raw = load_yaml(path)
    if raw is None:
        return []
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}:1: top level must be a mapping with a 'rules' list")
    table = validate_model(RuleTable, raw, path)
    raw_rules = raw.get("rules") or []
    seen = {}
    for index, rule in enumerate(table.rules):
        if rule.key() in seen:
            line = line_of(raw_rules[index]) if index < len(raw_rules) else None
            where = f"{path}:{line}" if line else str(path)
            raise ConfigError(
                f"{where}: duplicate rule for ({rule.scope.value}, {rule.category.value}, '{rule.term}'),"
                f" first declared as rule #{seen[rule.key()]}"
            )
        seen[rule.key()] = index
    log_event(logger, "rules_loaded", path=path, rules=len(table.rules))
    return table.rules


def check_compatibility(candidate: PromptCandidate, rules: Iterable[CompatibilityRule]) -> CompatibilityVerdict:
    """Deny iff any Deny rule of the candidate's category matches its attribute or source."""
    violated, allowed_by = [], []
    for rule in rules:
        if not rule.matches(candidate):
            continue
        if rule.verdict == Verdict.DENY:
            violated.append(rule)
        else:
            allowed_by.append(rule)
    return CompatibilityVerdict(
        verdict=Verdict.DENY if violated else Verdict.ALLOW,
        violated=violated,
        allowed_by=allowed_by,
    )
