import functools
import json
import os
from fractions import Fraction
from flask import Blueprint, current_app
import click
from app.numerics import (as_rational, format_decimal, format_rational,
                          parse_vector)
from app.geometry import (PolarSpec, closed_convex_hull, hyperset_classes,
                          irredundant_vertices, set_from_dict)
from app.hypermetrics import (CylinderSpec, MetricConfig, clopen_atoms,
                              clopen_eval, clopen_from_dict, clopen_to_dict,
                              cylinder_bounded, hausdorff_full,
                              immeasurable_witness, pseudometric_dH)
from app.faces import degeneracy_sweep, exposed_all, extreme_deviation
from app.poulsen import (VARIANTS, PoulsenTrace, construct, jordan_decompose,
                         verify_trace)
from app.limits import (SequencePrefix, counterexample_demo, demo_to_dict,
                        li_ls_diagnostic, monotone_limit)
from app.models import Run
from app.exceptions import DocumentError, WstarError

bp = Blueprint('cli', __name__, cli_group=None)

VERIFICATION_FAILED = 1


def read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise DocumentError(f'cannot read {path}: {exc.strerror}')
    except json.JSONDecodeError as exc:
        raise DocumentError(f'{path} is not valid JSON: {exc}')


def write_json(path, document):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(document, f, indent=2, sort_keys=True)
        f.write('\n')


def load_set(path):
    F = set_from_dict(read_json(path))
    if isinstance(F, PolarSpec):
        raise DocumentError(f'{path} describes a polar, not a set')
    return F


def default_polar():
    return PolarSpec(as_rational(current_app.config['WSTAR_POLAR_RADIUS']))


def load_metric_config(path):
    if path is None:
        return MetricConfig(default_polar())
    return MetricConfig.from_dict(read_json(path))


def resolve(run_manifest, **values):
    for key, value in values.items():
        if isinstance(value, Fraction):
            value = format_rational(value)
        elif hasattr(value, 'to_dict'):
            value = value.to_dict()
        run_manifest['effective'][key] = value


def emit(run_manifest, path, document):
    write_json(path, dict(document, manifest=run_manifest))


def wstar_command(f):
    """Print the report with the echoed manifest, store a Run and map
    library errors onto exit codes."""
    @functools.wraps(f)
    def wrapper(**kwargs):
        ctx = click.get_current_context()
        run_manifest = {'command': ctx.info_name, 'arguments': dict(kwargs),
                        'effective': {}}
        try:
            report, exit_code = f(run_manifest, **kwargs)
        except WstarError as exc:
            current_app.logger.info('%s failed: %s', ctx.info_name, exc.message)
            click.echo(f'error: {exc.message}', err=True)
            Run.record(ctx.info_name, run_manifest, {'error': exc.message},
                       exc.exit_code, run_manifest['effective'].get('seed'))
            ctx.exit(exc.exit_code)
        document = {'manifest': run_manifest, 'report': report}
        click.echo(json.dumps(document, indent=2, sort_keys=True))
        Run.record(ctx.info_name, run_manifest, report, exit_code,
                   run_manifest['effective'].get('seed'))
        if exit_code:
            ctx.exit(exit_code)
    return wrapper


@bp.cli.command()
@click.argument('left')
@click.argument('right')
@click.option('--direction', help='Test functional A (JSON pairs or e0+2*e1).')
@click.option('--metric-config', help='Metric config document.')
@click.option('--approx', is_flag=True,
              help='Add a non-authoritative decimal rendering.')
@wstar_command
def distance(run_manifest, left, right, direction, metric_config, approx):
    """Hausdorff distance between two sets, or d_H^(A) with --direction."""
    F, G = load_set(left), load_set(right)
    if direction is not None:
        value = pseudometric_dH(F, G, parse_vector(direction))
        mode = 'pseudometric'
    else:
        cfg = load_metric_config(metric_config)
        resolve(run_manifest, metric_config=cfg)
        value = hausdorff_full(F, G, cfg)
        mode = 'hausdorff'
    report = {'mode': mode, 'distance': format_rational(value)}
    if approx:
        report['approx'] = format_decimal(value)
    return report, 0


@bp.cli.command()
@click.argument('path')
@click.option('--out', help='Write the irredundant polyhedron here.')
@wstar_command
def hull(run_manifest, path, out):
    """Closed convex hull with redundant generators removed."""
    document = closed_convex_hull(load_set(path)).to_dict()
    if out:
        emit(run_manifest, out, document)
    return {'hull': document}, 0


@bp.cli.command()
@click.argument('path')
@click.option('--cylinder', help='Cylinder document to test boundedness in.')
@wstar_command
def vertices(run_manifest, path, cylinder):
    """Irredundant vertices and the hyperspaces the set belongs to."""
    F = load_set(path)
    polar = default_polar()
    resolve(run_manifest, polar=polar)
    report = {'vertices': irredundant_vertices(F).to_dict(),
              'classes': sorted(hyperset_classes(F, polar))}
    if cylinder:
        V = CylinderSpec.from_dict(read_json(cylinder))
        report['cylinder_bounded'] = cylinder_bounded(F, V)
    return report, 0


@bp.cli.command()
@click.argument('path')
@wstar_command
def expose(run_manifest, path):
    """One exposure certificate per vertex."""
    certificates = exposed_all(load_set(path))
    vertex_list = [c.vertex for c in certificates]
    failed = [c for c in certificates if not c.check(vertex_list)]
    report = {'certificates': [c.to_dict() for c in certificates],
              'all_checked': not failed}
    return report, VERIFICATION_FAILED if failed else 0


@bp.cli.command()
@click.argument('path')
@click.option('--budget', type=int, help='Number of sampled points.')
@click.option('--m', type=int, help='Report membership in F_m.')
@click.option('--seed', type=int)
@click.option('--metric-config', help='Metric config document.')
@wstar_command
def deviation(run_manifest, path, budget, m, seed, metric_config):
    """Sandwich estimate of the distance of a polytope to its vertices."""
    if budget is None:
        budget = current_app.config['WSTAR_DEVIATION_BUDGET']
    if seed is None:
        seed = current_app.config['WSTAR_SEED']
    cfg = load_metric_config(metric_config)
    resolve(run_manifest, budget=budget, seed=seed, metric_config=cfg)
    estimate = extreme_deviation(load_set(path), cfg, budget, m, seed)
    return estimate.to_dict(), 0


@bp.cli.command()
@click.argument('vector')
@click.option('--out', help='Directory for plus.json and minus.json.')
@wstar_command
def decompose(run_manifest, vector, out):
    """Split a dual vector into its positive and negative parts."""
    plus, minus = jordan_decompose(parse_vector(vector))
    report = {'plus': plus.to_json(), 'minus': minus.to_json()}
    if out:
        emit(run_manifest, os.path.join(out, 'plus.json'),
             {'kind': 'points', 'points': [plus.to_json()]})
        emit(run_manifest, os.path.join(out, 'minus.json'),
             {'kind': 'points', 'points': [minus.to_json()]})
    return report, 0


@bp.cli.command()
@click.argument('left')
@click.argument('right')
@wstar_command
def immeasurable(run_manifest, left, right):
    """A direction in which the two sets are at infinite distance."""
    F, G = load_set(left), load_set(right)
    witness = immeasurable_witness(F, G)
    report = {'witness': None if witness is None else witness.to_json()}
    if witness is not None:
        report['distance'] = format_rational(pseudometric_dH(F, G, witness))
    return report, 0


@bp.cli.command()
@click.argument('expression')
@click.argument('path')
@wstar_command
def clopen(run_manifest, expression, path):
    """Evaluate a Boolean combination of cylinder-boundedness atoms."""
    expr = clopen_from_dict(read_json(expression))
    F = load_set(path)
    atoms = [{'generators': a.cylinder.to_dict()['generators'],
              'value': cylinder_bounded(F, a.cylinder)}
             for a in clopen_atoms(expr)]
    return {'expression': clopen_to_dict(expr),
            'value': clopen_eval(expr, F), 'atoms': atoms}, 0


@bp.cli.command()
@click.argument('manifest')
@click.option('--candidates', help='Point set of candidate limit points.')
@click.option('--tolerance', default='0', help='Exact rational tolerance.')
@click.option('--stabilization', default=0, type=int,
              help='First index of the tail.')
@click.option('--monotone', is_flag=True,
              help='Also compute the monotone limit table.')
@wstar_command
def limits(run_manifest, manifest, candidates, tolerance, stabilization,
           monotone):
    """Li/Ls diagnostics for a sequence of set files."""
    listing = read_json(manifest)
    if not isinstance(listing, dict) or \
            not isinstance(listing.get('sets'), list):
        raise DocumentError('a limits manifest needs a "sets" list')
    base = os.path.dirname(manifest)
    sets = [load_set(os.path.join(base, name)) for name in listing['sets']]
    seq = SequencePrefix(sets, as_rational(tolerance), stabilization)
    cfg = MetricConfig(default_polar())
    resolve(run_manifest, metric_config=cfg)
    report = {}
    if candidates:
        ls_fraction = as_rational(current_app.config['WSTAR_LS_FRACTION'])
        resolve(run_manifest, ls_fraction=ls_fraction)
        report['diagnostic'] = li_ls_diagnostic(
            seq, load_set(candidates), cfg, ls_fraction)
    if monotone:
        K, table = monotone_limit(seq, cfg)
        report['limit'] = K.to_dict()
        report['table'] = [format_rational(d) for d in table]
    return report, 0


@bp.cli.command()
@click.option('--target', required=True, help='Target polytope document.')
@click.option('--epsilon', default='1/2', help='Exact rational epsilon.')
@click.option('--steps', default=16, type=int)
@click.option('--variant', default='plain', type=click.Choice(VARIANTS))
@click.option('--seed', type=int)
@click.option('--radius', help='Polar radius (exact rational).')
@click.option('--out', help='Directory for result, trace and report.')
@wstar_command
def poulsen(run_manifest, target, epsilon, steps, variant, seed, radius, out):
    """Add exposed points to a polytope and verify the run."""
    if seed is None:
        seed = current_app.config['WSTAR_SEED']
    polar = PolarSpec(as_rational(radius)) if radius else default_polar()
    out = out or current_app.config['WSTAR_OUTPUT_DIR']
    resolve(run_manifest, seed=seed, polar=polar,
            epsilon=as_rational(epsilon), steps=steps, variant=variant,
            metric_config=MetricConfig(polar), out=out)
    U = load_set(target)
    result, trace = construct(U, polar, as_rational(epsilon), steps,
                              variant, seed)
    report = verify_trace(U, polar, result, trace)
    emit(run_manifest, os.path.join(out, 'result.json'), result.to_dict())
    emit(run_manifest, os.path.join(out, 'trace.json'), trace.to_dict())
    emit(run_manifest, os.path.join(out, 'report.json'), report.to_dict())
    return report.to_dict(), 0 if report.passed else VERIFICATION_FAILED


@bp.cli.command()
@click.option('--target', required=True, help='Target polytope document.')
@click.option('--result', required=True, help='Result polytope document.')
@click.option('--trace', required=True, help='Trace document.')
@wstar_command
def verify(run_manifest, target, result, trace):
    """Re-verify a stored construction."""
    trace = PoulsenTrace.from_dict(read_json(trace))
    polar = PolarSpec(trace.radius)
    resolve(run_manifest, seed=trace.seed, polar=polar,
            metric_config=MetricConfig(polar))
    report = verify_trace(load_set(target), polar, load_set(result), trace)
    return report.to_dict(), 0 if report.passed else VERIFICATION_FAILED


@bp.cli.command()
@click.option('--m', 'M', default=5, type=int,
              help='Size of the counterexample family.')
@click.option('--seed', type=int)
@click.option('--out', help='Directory for the demo report.')
@wstar_command
def demo(run_manifest, M, seed, out):
    """Counterexample family and the polygon degeneracy sweep."""
    if seed is None:
        seed = current_app.config['WSTAR_SEED']
    resolve(run_manifest, seed=seed)
    rows = degeneracy_sweep(seed=seed)
    report = {'counterexample': demo_to_dict(counterexample_demo(M)),
              'degeneracy': [row.to_dict() for row in rows]}
    if out:
        emit(run_manifest, os.path.join(out, 'demo.json'), report)
    return report, 0
