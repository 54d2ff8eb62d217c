"""
Moteur de réécriture.

Les règles sont appliquées au point fixe, à la position la plus interne
puis la plus à gauche, dans l'ordre de la liste des règles. Chaque
application est enregistrée dans une trace rejouable.
"""

from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterator, List, NamedTuple, Optional, Tuple

from ..models.expr import Expr, Node, ReducedMatrixElement, children, map_children
from ..rendering.renderers import render_braket, render_slash
from ..utils.logger import get_logger

logger = get_logger()

Path = Tuple[int, ...]


@dataclass(frozen=True)
class RewriteContext:
    """
    Informations disponibles pour les règles.

    Attributes:
        root: Expression complète au moment de l'application
        antilinear: Symboles d'opérateurs anti-linéaires
    """
    root: Node
    antilinear: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class RewriteRule:
    """
    Règle nommée: apply renvoie le remplaçant, ou None si la règle ne
    s'applique pas.
    """
    name: str
    apply: Callable[[Node, RewriteContext], Optional[Node]]
    note: Optional[str] = None


@dataclass(frozen=True)
class RewriteStep:
    """Une application: règle, position, sous-arbre avant et après."""
    rule: str
    path: Path
    before: Node
    after: Node
    note: Optional[str] = None


@dataclass
class RewriteTrace:
    """
    Suite des applications de règles depuis l'expression initiale.

    Attributes:
        initial: Expression de départ
        steps: Applications dans l'ordre
        notes: Remarques attachées (hypothèses, formes conditionnelles)
    """
    initial: Node
    steps: List[RewriteStep] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def record(self, step: RewriteStep):
        self.steps.append(step)
        if step.note and step.note not in self.notes:
            self.notes.append(step.note)

    def note(self, text: str):
        if text not in self.notes:
            self.notes.append(text)

    def extend(self, other: "RewriteTrace", prefix: Path = ()):
        """Ajoute les étapes d'une autre trace, décalées sous prefix."""
        for step in other.steps:
            self.record(RewriteStep(step.rule, prefix + step.path, step.before,
                                    step.after, step.note))
        for text in other.notes:
            self.note(text)

    def replay(self, initial: Optional[Node] = None) -> Node:
        """
        Rejoue les étapes depuis l'expression initiale.

        Returns:
            Expression finale

        Raises:
            ValueError: Une étape ne correspond pas à l'arbre courant
        """
        tree = self.initial if initial is None else initial
        for number, step in enumerate(self.steps, start=1):
            current = node_at(tree, step.path)
            if current != step.before:
                raise ValueError(f"Step {number} ({step.rule}) does not match the tree at {step.path}")
            tree = replace_at(tree, step.path, step.after)
        return tree

    def format(self, notation: str = "slash") -> str:
        """Liste numérotée, une règle par ligne."""
        render = render_slash if notation == "slash" else (lambda e: render_braket(e).text)
        lines = []
        for number, step in enumerate(self.steps, start=1):
            lines.append(f"{number}. {step.rule}: {_show(render, step.before)} => {_show(render, step.after)}")
        for text in self.notes:
            lines.append(f"note: {text}")
        return "\n".join(lines)

    def __len__(self) -> int:
        return len(self.steps)


class RewriteResult(NamedTuple):
    expr: Expr
    trace: RewriteTrace


def _show(render, node: Node) -> str:
    if isinstance(node, Expr):
        try:
            return render(node)
        except TypeError:
            pass
    return type(node).__name__


# --- Chemins ----------------------------------------------------------------

def node_at(tree: Node, path: Path) -> Node:
    node = tree
    for index in path:
        node = list(children(node))[index]
    return node


def replace_at(tree: Node, path: Path, new: Node) -> Node:
    """Reconstruit tree avec new à la position path."""
    if not path:
        return new
    head, rest = path[0], path[1:]
    counter = iter(range(len(list(children(tree)))))

    def visit(child: Node) -> Node:
        return replace_at(child, rest, new) if next(counter) == head else child

    return map_children(tree, visit)


def positions(tree: Node, path: Path = ()) -> Iterator[Tuple[Path, Node]]:
    """Positions en ordre postfixe: la plus interne, puis la plus à gauche."""
    if not isinstance(tree, ReducedMatrixElement):
        for index, child in enumerate(children(tree)):
            yield from positions(child, path + (index,))
    yield path, tree


class RewriteEngine:
    """
    Applique une liste ordonnée de règles jusqu'au point fixe.
    """

    def __init__(self, rules: List[RewriteRule], antilinear: FrozenSet[str] = frozenset(),
                 max_steps: int = 10000):
        """
        Initialise le moteur.

        Args:
            rules: Règles, par ordre de priorité
            antilinear: Symboles anti-linéaires
            max_steps: Garde contre un ensemble de règles non terminant
        """
        self.rules = rules
        self.antilinear = frozenset(antilinear)
        self.max_steps = max_steps

    def step(self, tree: Node) -> Optional[RewriteStep]:
        """Première application possible, ou None au point fixe."""
        context = RewriteContext(root=tree, antilinear=self.antilinear)
        for path, node in positions(tree):
            for rule in self.rules:
                result = rule.apply(node, context)
                if result is not None and result != node:
                    return RewriteStep(rule.name, path, node, result, rule.note)
        return None

    def run(self, e: Node) -> RewriteResult:
        """
        Réécrit jusqu'au point fixe.

        Args:
            e: Expression

        Returns:
            RewriteResult(expression, trace)
        """
        trace = RewriteTrace(initial=e)
        tree = e
        while True:
            step = self.step(tree)
            if step is None:
                break
            if len(trace) >= self.max_steps:
                raise RuntimeError(f"Rewriting did not terminate after {self.max_steps} steps")
            trace.record(step)
            tree = replace_at(tree, step.path, step.after)
        if trace.steps:
            logger.debug(f"Rewrote expression in {len(trace)} steps")
        return RewriteResult(tree, trace)
