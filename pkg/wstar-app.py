import sqlalchemy as sa
import sqlalchemy.orm as so
from app import create_app, db
from app.models import Run
from app.numerics import SparseVec
from app.geometry import PointSet, Polyhedron, PolarSpec

app = create_app()


@app.shell_context_processor
def make_shell_context():
    return {'sa': sa, 'so': so, 'db': db, 'Run': Run, 'SparseVec': SparseVec,
            'PointSet': PointSet, 'Polyhedron': Polyhedron,
            'PolarSpec': PolarSpec}
