"""
Point d'entrée de la ligne de commande repfree.

Commandes: parse, check, convert, rewrite, eval, sweep, probe, demo, explain.

Codes de sortie:
    0  succès
    1  erreur de lecture d'une expression
    2  erreur de vérification, conversion non représentable, invariant violé,
       invocation invalide
    3  erreur de modèle ou d'entrée/sortie
"""

import inspect
import json
import sys
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Optional, Tuple

import click
from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, model_validator

from .checkers import Checker, explain as explain_rule
from .config import Settings
from .models import HilbertModel, ModelKind, Notation, load_model_file
from .models.errors import (
    EvaluationError, ModelError, NotationError, RewriteError, UnknownRuleError,
    UnknownSymbolError,
)
from .models.expr import format_tree
from .models.hilbert import ORTHONORMALITY_TOLERANCE, OperatorSpec, StateDef
from .numeric import SUITES, evaluate, operator_norm_sweep, truncation_sweep, unboundedness_probe
from .parsing import ParseResult, parse_file
from .rendering import render_braket, render_latex, render_slash
from .rewriting import Rewriter, Site
from .utils.logger import LoggerConfig, get_logger

logger = get_logger()


class ExitCode(IntEnum):
    OK = 0
    PARSE = 1
    CHECK = 2
    MODEL = 3


INLINE_SOURCE = "<expr>"
CONVERT_TARGETS = ["slash", "braket", "latex-slash", "latex-braket"]
REWRITE_OPERATIONS = ["simplify", "adjoint", "expand", "identity"]
DEMOS = ["unbounded", "hellinger", "riesz", "schwarz", "adjoint", "completeness"]


class RunConfig(BaseModel):
    """
    Paramètres validés d'une invocation.

    Les combinaisons invalides (évaluation sans modèle, aucune entrée...)
    sont rejetées avant tout traitement.
    """
    command: Literal["parse", "check", "convert", "rewrite", "eval", "sweep"]
    expression: Optional[str] = None
    inputs: List[Path] = []
    model_path: Optional[Path] = None
    notation: Literal["auto", "slash", "braket"] = "auto"
    output_format: Literal["text", "structured"] = "text"
    truncation: Optional[int] = None
    truncations: List[int] = []
    force: bool = False

    @model_validator(mode="after")
    def check_requirements(self) -> "RunConfig":
        if self.expression is None and not self.inputs:
            raise ValueError("an expression (-e) or at least one input file is required")
        if self.command in ("check", "eval", "sweep") and self.model_path is None:
            raise ValueError(f"'{self.command}' requires a model (-m)")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation level N must be positive")
        if any(n < 1 for n in self.truncations):
            raise ValueError("truncation levels must be positive")
        if self.truncations != sorted(set(self.truncations)):
            raise ValueError("truncation levels must be strictly increasing")
        return self

    def require_truncation(self, model: HilbertModel):
        """Un modèle tronqué exige N (eval) ou une liste de niveaux (sweep)."""
        if model.is_finite:
            return
        if self.command == "eval" and self.truncation is None:
            raise click.UsageError("truncated models need a truncation level (-N)")
        if self.command == "sweep" and len(self.truncations) < 2:
            raise click.UsageError("truncated sweeps need at least two truncation levels (--ns)")


@dataclass
class AppContext:
    """État partagé entre les commandes."""
    settings: Settings
    output_format: str

    @property
    def structured(self) -> bool:
        return self.output_format == "structured"

    def emit(self, record: Dict[str, Any], text: str, err: bool = False):
        """Une ligne JSON (format structured) ou le texte lisible."""
        if self.structured:
            click.echo(json.dumps(record, sort_keys=True, ensure_ascii=False), err=err)
        else:
            click.echo(text, err=err)


def _build_config(ctx: click.Context, **values) -> RunConfig:
    try:
        return RunConfig(output_format=ctx.obj.output_format, **values)
    except ValidationError as exc:
        messages = "; ".join(str(error["msg"]).removeprefix("Value error, ") for error in exc.errors())
        raise click.UsageError(messages, ctx) from None


def _parse_ns(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{text}'") from None


def _parse_scalars(items: Tuple[str, ...]) -> Dict[str, complex]:
    scalars = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise click.BadParameter(f"expected NAME=VALUE, got '{item}'")
        try:
            scalars[name.strip()] = complex(value.strip().replace("i", "j"))
        except ValueError:
            raise click.BadParameter(f"invalid complex value '{value}'") from None
    return scalars


def _read_sources(config: RunConfig) -> List[Tuple[str, str]]:
    """(nom de la source, texte) pour l'expression en ligne et les fichiers."""
    sources = []
    if config.expression is not None:
        sources.append((INLINE_SOURCE, config.expression))
    for path in config.inputs:
        try:
            sources.append((str(path), path.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError) as exc:
            logger.error(f"Cannot read {path}: {exc}")
            click.echo(f"{path}: error: cannot read input ({exc})", err=True)
            sys.exit(ExitCode.MODEL)
    return sources


def _expressions(app: AppContext, config: RunConfig) -> Iterator[Tuple[str, int, Optional[ParseResult]]]:
    """
    Lit toutes les expressions des sources.

    Les erreurs de lecture sont signalées sur stderr et produisent None.
    """
    for source, text in _read_sources(config):
        for line, result in parse_file(text, config.notation):
            if isinstance(result, NotationError):
                span = result.span
                where = f"{span.line}:{span.column}" if span is not None else f"{line}:1"
                app.emit({'source': source, 'line': line, 'error': result.message,
                          'where': where},
                         f"{source}:{where}: error: {result.message}", err=True)
                yield source, line, None
                continue
            for warning in result.warnings:
                click.echo(f"{source}:{line}: warning: {warning}", err=True)
            yield source, line, result


def _load_model(settings: Settings, path: Path) -> HilbertModel:
    tolerance = settings.numeric_config.get('orthonormality_tolerance', ORTHONORMALITY_TOLERANCE)
    try:
        return load_model_file(path, tolerance)
    except (ModelError, OSError, UnicodeDecodeError) as exc:
        logger.error(f"Cannot load model {path}: {exc}")
        click.echo(f"{path}: error: {exc}", err=True)
        sys.exit(ExitCode.MODEL)


def _worst(codes: List[int]) -> int:
    """Code de sortie global: la lecture prime sur la vérification."""
    if ExitCode.MODEL in codes:
        return ExitCode.MODEL
    if ExitCode.PARSE in codes:
        return ExitCode.PARSE
    if ExitCode.CHECK in codes:
        return ExitCode.CHECK
    return ExitCode.OK


# --- Groupe -------------------------------------------------------------------

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config-dir", default="config", show_default=True,
              type=click.Path(file_okay=False, path_type=Path), help="Directory holding config.yaml")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Override the configured log level")
@click.option("--color", default=None, type=click.Choice(["auto", "never", "always"]),
              help="Colored log output (default: REPFREE_COLOR, else auto)")
@click.option("--format", "output_format", default=None, type=click.Choice(["text", "structured"]),
              help="Output format; structured emits one JSON object per line")
@click.pass_context
def cli(ctx, config_dir: Path, log_level: Optional[str], color: Optional[str],
        output_format: Optional[str]):
    """Representation-free notation toolkit for Hilbert-space expressions."""
    load_dotenv()
    settings = Settings(config_dir=str(config_dir))

    log_config = settings.logging_config
    LoggerConfig(
        level=(log_level or log_config.get('level', 'WARNING')).upper(),
        log_file=log_config.get('file'),
        rotation=log_config.get('rotation', '10 MB'),
        retention=log_config.get('retention', '7 days'),
        format_type=log_config.get('format', 'text'),
        color=color
    )
    ctx.obj = AppContext(settings, output_format or settings.cli_config.get('format', 'text'))


def _input_options(func):
    func = click.argument("inputs", nargs=-1, type=click.Path(path_type=Path))(func)
    func = click.option("-e", "--expression", default=None, help="Inline expression")(func)
    func = click.option("--notation", default="auto", show_default=True,
                        type=click.Choice(["auto", "slash", "braket"]),
                        help="Notation of the input")(func)
    return func


# --- parse --------------------------------------------------------------------

@cli.command()
@_input_options
@click.pass_obj
def parse(app: AppContext, inputs, expression, notation):
    """Parse expressions and print their trees."""
    config = _build_config(click.get_current_context(), command="parse", expression=expression,
                           inputs=list(inputs), notation=notation)
    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        tree = format_tree(result.expr)
        app.emit(
            {'source': source, 'line': line, 'notation': result.notation.value,
             'slash': render_slash(result.expr), 'tree': tree, 'warnings': result.warnings},
            f"{source}:{line}: {result.notation.value}\n{tree}"
        )
    sys.exit(_worst(codes))


# --- check --------------------------------------------------------------------

@cli.command()
@_input_options
@click.option("-m", "--model", "model_path", required=False, type=click.Path(path_type=Path),
              help="Model file")
@click.option("--acting-right/--no-acting-right", default=None,
              help="Read <u|O|v> with O acting on the ket only")
@click.option("--unknown", "unknown_membership", default=None,
              type=click.Choice(["warning", "error", "info", "ignore"]),
              help="Severity when domain membership is unknown")
@click.pass_obj
def check(app: AppContext, inputs, expression, notation, model_path, acting_right,
          unknown_membership):
    """Check expressions against the domains of a model."""
    config = _build_config(click.get_current_context(), command="check", expression=expression,
                           inputs=list(inputs), notation=notation, model_path=model_path)
    model = _load_model(app.settings, config.model_path)
    checker_config = dict(app.settings.checker_config)
    if acting_right is not None:
        checker_config['acting_right_convention'] = acting_right
    if unknown_membership is not None:
        checker_config['unknown_membership'] = unknown_membership
    checker = Checker(model, checker_config)

    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        try:
            diagnostics = checker.check(result.expr)
        except UnknownSymbolError as exc:
            app.emit({'source': source, 'line': line, 'error': str(exc)},
                     f"{source}:{line}: error: {exc}", err=True)
            codes.append(ExitCode.CHECK)
            continue
        if any(d.is_error for d in diagnostics):
            codes.append(ExitCode.CHECK)
        if not diagnostics:
            app.emit({'source': source, 'line': line, 'status': 'ok'}, f"{source}:{line}: ok")
        for diagnostic in diagnostics:
            app.emit({'source': source, **diagnostic.to_dict()},
                     f"{source}: {diagnostic.to_text_line()}")
    sys.exit(_worst(codes))


# --- convert ------------------------------------------------------------------

@cli.command()
@_input_options
@click.option("--to", "target", required=True, type=click.Choice(CONVERT_TARGETS),
              help="Target notation")
@click.option("-m", "--model", "model_path", default=None, type=click.Path(path_type=Path),
              help="Model file (anti-linear operators, adjoint names)")
@click.option("--trace", is_flag=True, help="Print the rewrite steps")
@click.pass_obj
def convert(app: AppContext, inputs, expression, notation, target, model_path, trace):
    """Convert expressions between slash and bra-ket notation."""
    config = _build_config(click.get_current_context(), command="convert", expression=expression,
                           inputs=list(inputs), notation=notation, model_path=model_path)
    model = _load_model(app.settings, config.model_path) if config.model_path else None
    antilinear = model.antilinear_symbols() if model else frozenset()
    adjoint_names = model.adjoint_names() if model else None
    rewriter = Rewriter(antilinear, model)
    notation_target = Notation.SLASH if target.endswith("slash") else Notation.BRAKET

    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        converted = rewriter.convert(result.expr, notation_target)
        problems: Tuple[str, ...] = ()
        if target == "slash":
            text = render_slash(converted.expr, adjoint_names)
        elif target == "braket":
            rendering = render_braket(converted.expr, antilinear, adjoint_names)
            text, problems = rendering.text, rendering.problems
        else:
            dialect = target.split("-", 1)[1]
            text = render_latex(converted.expr, dialect, antilinear, adjoint_names)
            if dialect == "braket":
                problems = render_braket(converted.expr, antilinear, adjoint_names).problems

        notes = list(converted.trace.notes)
        if problems:
            codes.append(ExitCode.CHECK)
            click.echo(f"{source}:{line}: error: unrepresentable: {'; '.join(problems)}", err=True)
        for note in notes:
            click.echo(f"{source}:{line}: note: {note}", err=True)
        record = {'source': source, 'line': line, 'target': target, 'text': text,
                  'notes': notes, 'problems': list(problems)}
        output = text
        if trace:
            steps = converted.trace.format()
            record["trace"] = steps.splitlines()
            if steps:
                output += "\n" + steps
        app.emit(record, output)
    sys.exit(_worst(codes))


# --- rewrite ------------------------------------------------------------------

@cli.command()
@_input_options
@click.option("--op", "operation", required=True, type=click.Choice(REWRITE_OPERATIONS),
              help="Rewrite to apply")
@click.option("-m", "--model", "model_path", default=None, type=click.Path(path_type=Path),
              help="Model file (required to expand an identity)")
@click.option("--basis", default=None, help="Basis of the inserted identity")
@click.option("--site", default=Site.AT_DOT.value, show_default=True,
              type=click.Choice([s.value for s in Site]), help="Where the identity is inserted")
@click.option("--occurrence", default=0, show_default=True, type=int,
              help="Index of the scalar product receiving the identity")
@click.pass_obj
def rewrite(app: AppContext, inputs, expression, notation, operation, model_path, basis, site,
            occurrence):
    """Simplify, take adjoints, expand by linearity or insert an identity."""
    config = _build_config(click.get_current_context(), command="rewrite", expression=expression,
                           inputs=list(inputs), notation=notation, model_path=model_path)
    if operation == "identity" and basis is None:
        raise click.UsageError("--op identity needs --basis")
    model = _load_model(app.settings, config.model_path) if config.model_path else None
    rewriter = Rewriter(model=model)
    adjoint_names = model.adjoint_names() if model else None

    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        try:
            if operation == "simplify":
                rewritten = rewriter.simplify(result.expr).expr
            elif operation == "adjoint":
                rewritten = rewriter.adjoint(result.expr)
            elif operation == "expand":
                rewritten = rewriter.expand_linear(result.expr)
            else:
                rewritten = rewriter.insert_identity(result.expr, basis, Site(site), occurrence,
                                                     expand=model is not None)
        except (RewriteError, ModelError) as exc:
            app.emit({'source': source, 'line': line, 'error': str(exc)},
                     f"{source}:{line}: error: {exc}", err=True)
            codes.append(ExitCode.CHECK)
            continue
        text = render_slash(rewritten, adjoint_names)
        app.emit({'source': source, 'line': line, 'operation': operation, 'text': text}, text)
    sys.exit(_worst(codes))


# --- eval ---------------------------------------------------------------------

@cli.command(name="eval")
@_input_options
@click.option("-m", "--model", "model_path", default=None, type=click.Path(path_type=Path),
              help="Model file")
@click.option("-N", "truncation", default=None, type=int, help="Truncation level")
@click.option("--scalar", "scalars", multiple=True, help="Scalar value, e.g. c=1+2j")
@click.option("--force", is_flag=True, help="Evaluate even if the checker rejects the expression")
@click.pass_obj
def eval_command(app: AppContext, inputs, expression, notation, model_path, truncation, scalars,
                 force):
    """Evaluate expressions numerically."""
    config = _build_config(click.get_current_context(), command="eval", expression=expression,
                           inputs=list(inputs), notation=notation, model_path=model_path,
                           truncation=truncation, force=force)
    values = _parse_scalars(scalars)
    model = _load_model(app.settings, config.model_path)
    config.require_truncation(model)

    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        try:
            value = evaluate(result.expr, model, config.truncation, values, force=config.force,
                             checker_config=app.settings.checker_config)
        except (EvaluationError, ModelError) as exc:
            app.emit({'source': source, 'line': line, 'error': str(exc)},
                     f"{source}:{line}: error: {exc}", err=True)
            codes.append(ExitCode.CHECK)
            continue
        if value.forced:
            click.echo(f"{source}:{line}: warning: forced evaluation, the value depends on the "
                       "truncation", err=True)
        app.emit({'source': source, 'line': line, **value.to_dict()}, str(value))
    sys.exit(_worst(codes))


# --- sweep / probe ------------------------------------------------------------

def _write_plot_data(report, plot_data: Optional[Path]):
    if plot_data is None:
        return
    try:
        report.to_csv(str(plot_data))
    except OSError as exc:
        click.echo(f"{plot_data}: error: cannot write plot data ({exc})", err=True)
        sys.exit(ExitCode.MODEL)


@cli.command()
@_input_options
@click.option("-m", "--model", "model_path", default=None, type=click.Path(path_type=Path),
              help="Truncated model file")
@click.option("--ns", "ns_text", default=None,
              help="Comma-separated truncation levels (default: numeric.sweep_ns)")
@click.option("--scalar", "scalars", multiple=True, help="Scalar value, e.g. c=1+2j")
@click.option("--force", is_flag=True, help="Sweep even if the checker rejects the expression")
@click.option("--plot-data", default=None, type=click.Path(dir_okay=False, path_type=Path),
              help="Write (N, value) pairs as CSV")
@click.pass_obj
def sweep(app: AppContext, inputs, expression, notation, model_path, ns_text, scalars, force,
          plot_data):
    """Evaluate scalar expressions at increasing truncation levels."""
    ns = _parse_ns(ns_text) or app.settings.sweep_ns
    config = _build_config(click.get_current_context(), command="sweep", expression=expression,
                           inputs=list(inputs), notation=notation, model_path=model_path,
                           truncations=ns, force=force)
    values = _parse_scalars(scalars)
    model = _load_model(app.settings, config.model_path)
    if model.is_finite:
        raise click.UsageError("sweeps need a truncated model")
    config.require_truncation(model)

    codes = []
    for source, line, result in _expressions(app, config):
        if result is None:
            codes.append(ExitCode.PARSE)
            continue
        try:
            report = truncation_sweep(result.expr, model, config.truncations, values,
                                      force=config.force, config=app.settings.numeric_config,
                                      checker_config=app.settings.checker_config)
        except (EvaluationError, ModelError) as exc:
            app.emit({'source': source, 'line': line, 'error': str(exc)},
                     f"{source}:{line}: error: {exc}", err=True)
            codes.append(ExitCode.CHECK)
            continue
        app.emit({'source': source, 'line': line, **report.to_dict()}, report.to_table())
        _write_plot_data(report, plot_data)
    sys.exit(_worst(codes))


@cli.command()
@click.option("-m", "--model", "model_path", required=True, type=click.Path(path_type=Path),
              help="Truncated model file")
@click.option("--op", "operator", required=True, help="Diagonal operator symbol")
@click.option("--state", default=None, help="State u: probe sup |(u, O v_n)|; omitted: norm of O")
@click.option("--ns", "ns_text", default=None,
              help="Comma-separated truncation levels (default: numeric.sweep_ns)")
@click.option("--plot-data", default=None, type=click.Path(dir_okay=False, path_type=Path),
              help="Write (N, value) pairs as CSV")
@click.pass_obj
def probe(app: AppContext, model_path, operator, state, ns_text, plot_data):
    """Probe the growth of a diagonal operator on a truncated model."""
    ns = _parse_ns(ns_text) or app.settings.sweep_ns
    model = _load_model(app.settings, model_path)
    if model.is_finite:
        raise click.UsageError("probes need a truncated model")
    try:
        if state is None:
            report = operator_norm_sweep(model, operator, ns, app.settings.numeric_config)
        else:
            report = unboundedness_probe(model, state, operator, ns, app.settings.numeric_config)
    except (ModelError, EvaluationError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ExitCode.CHECK)
    app.emit(report.to_dict(), report.to_table())
    _write_plot_data(report, plot_data)
    sys.exit(ExitCode.OK)


# --- demo ---------------------------------------------------------------------

def _power_law_model(decay_q: Fraction, power_p: Fraction) -> HilbertModel:
    return HilbertModel(
        ModelKind.TRUNCATED,
        states={"u": StateDef("u", decay_q=decay_q)},
        operators={"P": OperatorSpec("P", power_p=power_p)}
    )


def _expected_sup(decay_q: Fraction, power_p: Fraction, n: int) -> float:
    """max_{k<=n} k^{p-q}: atteint en k = n si p > q, en k = 1 sinon."""
    exponent = float(power_p - decay_q)
    return float(n) ** exponent if exponent > 0 else 1.0


def _demo_growth(app: AppContext, name: str, plot_data: Optional[Path]) -> int:
    """
    unbounded: sup_{n<=N} |(u, P v_n)| avec u_n = n^-q, attendu N^(p-q).
    hellinger: norme de la troncature de P, attendue N^p.
    """
    demo = app.settings.get_demo_config(name)
    power_p = Fraction(str(demo.get('power_p', 1)))
    decay_q = Fraction(str(demo.get('decay_q', 1))) if name == "unbounded" else Fraction(0)
    ns = [int(n) for n in demo.get('ns', [10, 100, 1000])]
    model = _power_law_model(decay_q or Fraction(1), power_p)
    if name == "unbounded":
        report = unboundedness_probe(model, "u", "P", ns, app.settings.numeric_config)
    else:
        report = operator_norm_sweep(model, "P", ns, app.settings.numeric_config)

    expected = [_expected_sup(decay_q, power_p, n) for n in ns]
    error = max(abs(v - e) / e for v, e in zip(report.values, expected))
    passed = error <= 1e-12
    record = {'demo': name, 'expected': expected, 'max_relative_error': error,
              'passed': passed, **report.to_dict()}
    status = "ok" if passed else "VIOLATED"
    app.emit(record, f"{report.to_table()}\nexpected: {expected} (max relative error {error:.3e}) {status}")
    _write_plot_data(report, plot_data)
    return ExitCode.OK if passed else ExitCode.CHECK


DEMO_SUITES = {
    'riesz': ['riesz'],
    'schwarz': ['schwarz'],
    'adjoint': ['adjoint', 'antilinear-adjoint'],
    'completeness': ['projection-adjoint', 'completeness'],
}


def _suite_kwargs(suite: str, demo: Dict[str, Any], seed: int, dim: Optional[int]) -> Dict[str, Any]:
    """Paramètres de la suite pris dans la configuration de la démonstration."""
    parameters = inspect.signature(SUITES[suite]).parameters
    kwargs = {key: value for key, value in demo.items() if key in parameters}
    kwargs['seed'] = seed
    if dim is not None:
        if 'max_dim' in parameters:
            kwargs['max_dim'] = dim
            kwargs['min_dim'] = min(kwargs.get('min_dim', parameters['min_dim'].default), dim)
        elif 'dim' in parameters:
            kwargs['dim'] = dim
    return kwargs


@cli.command()
@click.argument("name", type=click.Choice(DEMOS))
@click.option("--seed", default=None, type=int, help="Random seed (default: cli.seed)")
@click.option("--dim", default=None, type=int, help="Largest dimension of the random models")
@click.option("--plot-data", default=None, type=click.Path(dir_okay=False, path_type=Path),
              help="Write (N, value) pairs as CSV (unbounded, hellinger)")
@click.pass_obj
def demo(app: AppContext, name, seed, dim, plot_data):
    """Run a built-in numerical demonstration."""
    if name in ("unbounded", "hellinger"):
        sys.exit(_demo_growth(app, name, plot_data))

    seed = seed if seed is not None else int(app.settings.cli_config.get('seed', 42))
    if dim is not None and dim < 1:
        raise click.UsageError("--dim must be positive")

    passed = True
    for suite in DEMO_SUITES[name]:
        kwargs = _suite_kwargs(suite, app.settings.get_demo_config(name), seed, dim)
        report = SUITES[suite](**kwargs)
        passed = passed and report.passed
        app.emit(report.to_dict(), report.summary())
    sys.exit(ExitCode.OK if passed else ExitCode.CHECK)


# --- explain ------------------------------------------------------------------

@cli.command()
@click.argument("rule")
@click.pass_obj
def explain(app: AppContext, rule):
    """Explain a checker rule (BK1, BK2, BK3, SL1, SL2, SL3, DM1, FN1)."""
    try:
        text = explain_rule(rule)
    except UnknownRuleError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ExitCode.CHECK)
    app.emit({'rule': rule.upper(), 'explanation': text}, f"{rule.upper()}: {text}")


if __name__ == "__main__":
    cli()
