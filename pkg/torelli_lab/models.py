"""
================================================================================
torelli-lab - Database Models
================================================================================
SQLAlchemy models for stored census runs.

  - CensusRun: one enumeration (genus, marking type, modulus, codimension
    reached, code version).
  - CensusCell: one orbit record of a run, with its representative graph and
    incidence lists as JSON.
================================================================================
"""

from datetime import datetime, timezone

from sqlalchemy import Boolean, Column, DateTime, ForeignKey, Index, Integer, JSON, String, UniqueConstraint
from sqlalchemy.ext.declarative import declared_attr
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class TimestampMixin:
    """Adds created_at and updated_at timestamps to models."""
    @declared_attr
    def created_at(cls):
        return Column(DateTime, default=lambda: datetime.now(timezone.utc), nullable=False)

    @declared_attr
    def updated_at(cls):
        return Column(DateTime, default=lambda: datetime.now(timezone.utc),
                      onupdate=lambda: datetime.now(timezone.utc), nullable=False)


class CensusRun(Base, TimestampMixin):
    __tablename__ = 'census_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    g = Column(Integer, nullable=False)
    marking_type = Column(String(32), nullable=False, default='unmarked')
    modulus = Column(Integer, nullable=True)
    form = Column(JSON, nullable=True)
    code_version = Column(String(64), nullable=False)
    max_codim = Column(Integer, nullable=False)
    complete = Column(Boolean, default=False, nullable=False)

    cells = relationship('CensusCell', back_populates='run', cascade='all, delete-orphan')

    def __repr__(self):
        return f"<CensusRun {self.id} g={self.g} {self.marking_type}>"


class CensusCell(Base):
    __tablename__ = 'census_cells'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('census_runs.id', ondelete='CASCADE'), nullable=False)
    key = Column(String(32), nullable=False)
    codim = Column(Integer, nullable=False)
    aut_count = Column(Integer, nullable=False)
    kind = Column(String(16), nullable=True)
    representative = Column(JSON, nullable=True)
    cofaces = Column(JSON, default=dict)
    faces = Column(JSON, default=dict)

    run = relationship('CensusRun', back_populates='cells')

    __table_args__ = (
        UniqueConstraint('run_id', 'key', name='uq_census_cell_run_key'),
        Index('ix_census_cells_run_codim', 'run_id', 'codim'),
    )

    def __repr__(self):
        return f"<CensusCell {self.key} codim={self.codim}>"
