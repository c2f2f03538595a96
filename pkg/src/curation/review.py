from typing import Callable, Optional

from rich.console import Console
from rich.panel import Panel
from rich.prompt import Prompt

from src.schemas.curation import CompatibilityVerdict
from src.schemas.prompt import PromptCandidate

Ask = Callable[[str], str]

CHOICES = ("y", "n", "q")


class ReviewSession:
    """Terminal accept/reject loop for one curation pass.

    ``ask`` replaces the rich prompt (tests feed scripted answers through it).
    """

    def __init__(self, reviewer: str, console: Optional[Console] = None, ask: Optional[Ask] = None):
        self.reviewer = reviewer
        self.console = console or Console()
        self._ask = ask or self._rich_ask

    def _rich_ask(self, question: str) -> str:
        return Prompt.ask(question, choices=list(CHOICES), console=self.console)

    def decide(self, candidate: PromptCandidate, verdict: CompatibilityVerdict, accepted: int, needed: int) -> str:
        body = f"[bold]{candidate.pattern}[/bold]\n\ngrammar: {candidate.grammar_id.value}"
        if candidate.attribute:
            body += f"   attribute: {candidate.attribute}"
        if candidate.source:
            body += f"   source: {candidate.source}"
        for rule in verdict.allowed_by:
            body += f"\n[green]allowed[/green] {rule.term}: {rule.rationale}"
        self.console.print(
            Panel(
                body,
                title=f"{candidate.category.value}  {accepted}/{needed} accepted",
                border_style="cyan",
            )
        )
        while True:
            answer = str(self._ask("Accept this prompt? (y)es / (n)o / (q)uit")).strip().lower()
            if answer in CHOICES:
                return answer
            self.console.print("[yellow]Please answer y, n or q.[/yellow]")
