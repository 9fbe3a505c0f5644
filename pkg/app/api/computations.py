from flask import request, url_for, current_app
from app.numerics import SparseVec, as_integer, as_rational, format_rational
from app.geometry import PolarSpec, closed_convex_hull, set_from_dict
from app.hypermetrics import MetricConfig, hausdorff_full, pseudometric_dH
from app.poulsen import construct, verify_trace
from app.models import Run
from app.api import bp
from app.api.errors import bad_request

# POST /api/distance - {"left": set, "right": set, "direction"?: vec, "config"?: cfg}
# POST /api/hull - {"set": set}
# POST /api/poulsen - {"target": set, "epsilon": "1/2", "steps": N, "variant": ..., "seed": S}


def _default_polar():
    return PolarSpec(as_rational(current_app.config['WSTAR_POLAR_RADIUS']))


def _read_body(*keys):
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or any(key not in data for key in keys):
        return None
    return data


def _read_set(data, key):
    F = set_from_dict(data[key])
    if isinstance(F, PolarSpec):
        return None
    return F


def _manifest(command, data, **effective):
    return {'command': command, 'request': data, 'effective': effective}


@bp.route('/distance', methods=['POST'])
def distance():
    data = _read_body('left', 'right')
    if data is None:
        return bad_request('must include left and right fields')
    F, G = _read_set(data, 'left'), _read_set(data, 'right')
    if F is None or G is None:
        return bad_request('left and right must be point sets or polyhedra')
    if data.get('direction') is not None:
        value = pseudometric_dH(F, G, SparseVec.from_json(data['direction']))
        manifest = _manifest('distance', data)
        mode = 'pseudometric'
    else:
        cfg = MetricConfig.from_dict(data['config']) if 'config' in data \
            else MetricConfig(_default_polar())
        value = hausdorff_full(F, G, cfg)
        manifest = _manifest('distance', data, metric_config=cfg.to_dict())
        mode = 'hausdorff'
    report = {'mode': mode, 'distance': format_rational(value)}
    Run.record('distance', manifest, report)
    return {'manifest': manifest, **report}


@bp.route('/hull', methods=['POST'])
def hull():
    data = _read_body('set')
    if data is None:
        return bad_request('must include a set field')
    F = _read_set(data, 'set')
    if F is None:
        return bad_request('set must be a point set or a polyhedron')
    manifest = _manifest('hull', data)
    report = {'hull': closed_convex_hull(F).to_dict()}
    Run.record('hull', manifest, report)
    return {'manifest': manifest, **report}


@bp.route('/poulsen', methods=['POST'])
def poulsen():
    data = _read_body('target')
    if data is None:
        return bad_request('must include a target field')
    U = _read_set(data, 'target')
    if U is None:
        return bad_request('target must be a point set or a polyhedron')
    polar = PolarSpec(as_rational(data['radius'])) if 'radius' in data \
        else _default_polar()
    seed = as_integer(data.get('seed', current_app.config['WSTAR_SEED']),
                      'seed')
    epsilon = as_rational(data.get('epsilon', '1/2'))
    steps = as_integer(data.get('steps', 16), 'steps')
    variant = data.get('variant', 'plain')
    manifest = _manifest('poulsen', data, seed=seed, polar=polar.to_dict(),
                         epsilon=format_rational(epsilon), steps=steps,
                         variant=variant,
                         metric_config=MetricConfig(polar).to_dict())
    result, trace = construct(U, polar, epsilon, steps, variant, seed)
    report = verify_trace(U, polar, result, trace)
    body = {'manifest': manifest, 'result': result.to_dict(),
            'trace': trace.to_dict(), 'report': report.to_dict()}
    run = Run.record('poulsen', manifest, report.to_dict(),
                     0 if report.passed else 1, seed)
    body['run'] = run.id
    return body, 201, {'Location': url_for('api.get_run', id=run.id)}
