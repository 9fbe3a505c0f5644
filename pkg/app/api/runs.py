import sqlalchemy as sa
from flask import request, current_app
from app import db
from app.models import Run
from app.api import bp

# GET /api/runs/<id> - a stored run with its manifest and report
# GET /api/runs - paginated list of stored runs, newest first


@bp.route('/runs/<int:id>', methods=['GET'])
def get_run(id):
    return db.get_or_404(Run, id).to_dict()


@bp.route('/runs', methods=['GET'])
def get_runs():
    page = request.args.get('page', 1, type=int)
    per_page = min(request.args.get(
        'per_page', current_app.config['WSTAR_RUNS_PER_PAGE'], type=int), 100)
    query = sa.select(Run).order_by(Run.created.desc(), Run.id.desc())
    return Run.to_collection_dict(query, page, per_page, 'api.get_runs')
