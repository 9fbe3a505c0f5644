from datetime import datetime, timezone
import json
from typing import Optional
import sqlalchemy as sa
import sqlalchemy.orm as so
from flask import url_for
from app import db


class PaginatedAPIMixin(object):
    @staticmethod
    def to_collection_dict(query, page, per_page, endpoint, **kwargs):
        resources = db.paginate(query, page=page, per_page=per_page,
                                error_out=False)
        data = {
            'items': [item.to_dict() for item in resources.items],
            '_meta': {
                'page': page,
                'per_page': per_page,
                'total_pages': resources.pages,
                'total_items': resources.total
            },
            '_links': {
                'self': url_for(endpoint, page=page, per_page=per_page,
                                **kwargs),
                'next': url_for(endpoint, page=page + 1, per_page=per_page,
                                **kwargs) if resources.has_next else None,
                'prev': url_for(endpoint, page=page - 1, per_page=per_page,
                                **kwargs) if resources.has_prev else None
            }
        }
        return data


class Run(PaginatedAPIMixin, db.Model):
    """One command or API computation: the echoed manifest and its report."""

    id: so.Mapped[int] = so.mapped_column(primary_key=True)
    command: so.Mapped[str] = so.mapped_column(sa.String(32), index=True)
    seed: so.Mapped[Optional[int]]
    manifest_json: so.Mapped[str] = so.mapped_column(sa.Text)
    report_json: so.Mapped[Optional[str]] = so.mapped_column(sa.Text)
    exit_code: so.Mapped[int] = so.mapped_column(default=0)
    created: so.Mapped[datetime] = so.mapped_column(
        index=True, default=lambda: datetime.now(timezone.utc))

    def __repr__(self):
        return '<Run {} {}>'.format(self.id, self.command)

    def get_manifest(self):
        return json.loads(str(self.manifest_json))

    def get_report(self):
        return json.loads(str(self.report_json)) if self.report_json else None

    def to_dict(self):
        return {
            'id': self.id,
            'command': self.command,
            'seed': self.seed,
            'manifest': self.get_manifest(),
            'report': self.get_report(),
            'exit_code': self.exit_code,
            'created': self.created.replace(
                tzinfo=timezone.utc).isoformat(),
            '_links': {
                'self': url_for('api.get_run', id=self.id)
            }
        }

    @classmethod
    def record(cls, command, manifest, report=None, exit_code=0, seed=None):
        run = cls(command=command, seed=seed,
                  manifest_json=json.dumps(manifest, sort_keys=True),
                  report_json=json.dumps(report, sort_keys=True)
                  if report is not None else None,
                  exit_code=exit_code)
        db.session.add(run)
        db.session.commit()
        return run
